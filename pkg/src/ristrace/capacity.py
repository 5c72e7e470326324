"""Link capacity of the composite channel under waterfilling.

The receiver sees z = F x + w with unit-variance noise, so the capacity
of one realization is the waterfilling optimum over the eigenvalues of
F^H F.  The SNR axis of the experiments is defined through the average
channel power: SNR_ch = P_ave * E[trace_gram(F)] / n_ch with
n_ch = min(n_rx, n_tx, n_ris), and the transmitter budget is n_tx * P_ave
(each antenna radiates P_ave per symbol) unless configured otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import require_finite

__all__ = [
    "NonPositivePowerError",
    "BUDGET_MODES",
    "ChannelEigenprofile",
    "WaterfillResult",
    "eigenprofile",
    "waterfill",
    "snr_to_power",
    "power_to_snr",
]

BUDGET_MODES = ("per_symbol_total", "per_antenna")


class NonPositivePowerError(ValueError):
    """A power, budget, or mean channel power is not positive and finite."""


@dataclass(frozen=True)
class ChannelEigenprofile:
    """Eigenvalues of F^H F, descending and clamped non-negative."""

    eigenvalues: np.ndarray
    n_ch_max: int

    def __post_init__(self):
        w = np.asarray(self.eigenvalues, dtype=float).reshape(-1)
        if w.size < 1:
            raise ValueError("an eigenprofile needs at least one eigenvalue")
        if not np.all(np.isfinite(w)):
            raise NonPositivePowerError("eigenprofile contains non-finite values")
        if np.any(np.diff(w) > 0) or w[-1] < 0:
            raise ValueError("eigenvalues must be descending and non-negative")
        w.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        if self.n_ch_max < 1:
            raise ValueError("n_ch_max must be >= 1")

    @property
    def total(self) -> float:
        return float(self.eigenvalues.sum())


@dataclass(frozen=True)
class WaterfillResult:
    """Optimal power split for one profile and budget."""

    powers: np.ndarray
    water_level: float
    capacity_bits: float
    all_zero: bool = False


def eigenprofile(f: np.ndarray, n_ris: int) -> ChannelEigenprofile:
    """Spectrum of F^H F for a composite channel F (n_rx x n_tx)."""
    f = require_finite(f, "f")
    if f.ndim != 2:
        raise ValueError(f"f must be 2-D, got shape {f.shape}")
    if n_ris < 1:
        raise ValueError("n_ris must be >= 1")
    gram = f.conj().T @ f
    w = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))[::-1]
    w = np.maximum(w, 0.0)
    n_ch = min(f.shape[0], f.shape[1], n_ris)
    return ChannelEigenprofile(eigenvalues=w, n_ch_max=n_ch)


def waterfill(profile: ChannelEigenprofile, total_power: float) -> WaterfillResult:
    """Exact waterfilling by the sorted active-set rule.

    Activates the k strongest eigenvalues where k is the largest count
    whose water level (total_power + sum_{i<=k} 1/lambda_i) / k clears
    1/lambda_k; powers on the active set sum to the budget exactly and the
    KKT conditions hold by construction.  An all-zero profile yields zero
    capacity with a uniform split and the ``all_zero`` flag.
    """
    if not (math.isfinite(total_power) and total_power > 0):
        raise NonPositivePowerError(f"total_power must be > 0, got {total_power!r}")
    lam = profile.eigenvalues
    n = lam.size
    pos = lam[lam > 0]
    if pos.size == 0:
        return WaterfillResult(
            powers=np.full(n, total_power / n),
            water_level=math.inf,
            capacity_bits=0.0,
            all_zero=True,
        )
    inv = 1.0 / pos  # ascending, since lam is descending
    levels = (total_power + np.cumsum(inv)) / np.arange(1, pos.size + 1)
    feasible = levels > inv
    k = int(np.max(np.flatnonzero(feasible))) + 1  # k = 1 is always feasible
    mu = float(levels[k - 1])
    powers = np.zeros(n)
    powers[:k] = mu - inv[:k]
    capacity = float(np.sum(np.log2(1.0 + powers[:k] * pos[:k])))
    return WaterfillResult(powers=powers, water_level=mu, capacity_bits=capacity)


def snr_to_power(snr_ch_db: float, mean_sigma2_f: float, n_ch: int, n_tx: int,
                 budget_mode: str = "per_symbol_total") -> float:
    """Total transmit budget realizing a channel SNR grid point.

    Inverts SNR_ch = P_ave * mean_sigma2_f / n_ch for the per-antenna
    average power P_ave; the ``per_symbol_total`` budget is n_tx * P_ave,
    ``per_antenna`` keeps P_ave as the whole budget.
    """
    if budget_mode not in BUDGET_MODES:
        raise ValueError(f"unknown budget_mode {budget_mode!r}")
    if not (math.isfinite(mean_sigma2_f) and mean_sigma2_f > 0):
        raise NonPositivePowerError(
            f"mean channel power must be > 0, got {mean_sigma2_f!r}"
        )
    if n_ch < 1 or n_tx < 1:
        raise NonPositivePowerError("n_ch and n_tx must be >= 1")
    if not math.isfinite(snr_ch_db):
        raise NonPositivePowerError(f"snr_ch_db must be finite, got {snr_ch_db!r}")
    p_ave = 10.0 ** (snr_ch_db / 10.0) * n_ch / mean_sigma2_f
    return n_tx * p_ave if budget_mode == "per_symbol_total" else p_ave


def power_to_snr(total_power: float, mean_sigma2_f: float, n_ch: int, n_tx: int,
                 budget_mode: str = "per_symbol_total") -> float:
    """Inverse of :func:`snr_to_power` (dB)."""
    if budget_mode not in BUDGET_MODES:
        raise ValueError(f"unknown budget_mode {budget_mode!r}")
    if not (math.isfinite(total_power) and total_power > 0):
        raise NonPositivePowerError(f"total_power must be > 0, got {total_power!r}")
    if not (math.isfinite(mean_sigma2_f) and mean_sigma2_f > 0):
        raise NonPositivePowerError(
            f"mean channel power must be > 0, got {mean_sigma2_f!r}"
        )
    p_ave = total_power / n_tx if budget_mode == "per_symbol_total" else total_power
    return 10.0 * math.log10(p_ave * mean_sigma2_f / n_ch)
