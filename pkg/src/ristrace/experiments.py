"""Monte Carlo experiments over channel realizations.

A scenario draws ``n_realizations`` independent channel pairs, builds every
requested design against each, and collects channel powers and eigenvalue
profiles (pass one).  The SNR sweep (pass two) converts each grid point to
a transmit budget through the mean channel power and waterfills every
stored profile.  Realizations are seeded individually from the base seed,
so they may be computed in parallel; aggregation is an ordered reduction
and results are bit-identical for any thread count.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import capacity as cap
from . import channel as chan
from . import designs as des
from .designs import DesignKind
from .linalg import trace_gram

__all__ = [
    "ScenarioConfig",
    "DesignAggregate",
    "ScenarioResult",
    "SummaryRow",
    "run_scenario",
    "capacity_curve_for_reference",
    "summarize",
    "preset_scenarios",
    "preset_by_name",
    "write_scenario_csvs",
    "DEFAULT_SNR_GRID_DB",
    "DEFAULT_BASE_SEED",
    "ALL_DESIGNS",
]

DEFAULT_BASE_SEED = 1729

# -20 to +30 dB in 2.5 dB steps
DEFAULT_SNR_GRID_DB = tuple(-20.0 + 2.5 * k for k in range(21))

ALL_DESIGNS = tuple(DesignKind)

SNR_REF_MODES = ("per_design", "shared")

# sub-stream tags for kinds that consume randomness; fixed so that adding
# or removing designs never shifts another design's draws
_RANDOM_TAGS = {DesignKind.RAND: 1, DesignKind.RAND_PH: 2}


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to reproduce one experiment."""

    name: str
    channel: chan.ChannelSpec
    designs: tuple = ALL_DESIGNS
    n_realizations: int = 100
    snr_grid_db: tuple = DEFAULT_SNR_GRID_DB
    base_seed: int = DEFAULT_BASE_SEED
    budget_mode: str = "per_symbol_total"
    snr_ref_mode: str = "per_design"

    def __post_init__(self):
        if not self.name or any(c.isspace() for c in self.name):
            raise ValueError(f"scenario name must be non-empty without spaces, "
                             f"got {self.name!r}")
        kinds = tuple(self.designs)
        if not kinds:
            raise ValueError("a scenario needs at least one design")
        if len(set(kinds)) != len(kinds):
            raise ValueError("duplicate design kinds in scenario")
        for k in kinds:
            if not isinstance(k, DesignKind):
                raise ValueError(f"not a design kind: {k!r}")
        # canonical order regardless of how the set was written
        object.__setattr__(
            self, "designs", tuple(k for k in DesignKind if k in kinds)
        )
        if self.n_realizations < 1:
            raise ValueError(f"n_realizations must be >= 1, "
                             f"got {self.n_realizations}")
        grid = tuple(float(s) for s in self.snr_grid_db)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("snr_grid_db must be non-empty and strictly increasing")
        if any(not math.isfinite(s) for s in grid):
            raise ValueError("snr_grid_db must be finite")
        object.__setattr__(self, "snr_grid_db", grid)
        if not isinstance(self.base_seed, (int, np.integer)) or self.base_seed < 0:
            raise ValueError(f"base_seed must be a non-negative integer, "
                             f"got {self.base_seed!r}")
        if self.budget_mode not in cap.BUDGET_MODES:
            raise ValueError(f"unknown budget_mode {self.budget_mode!r}")
        if self.snr_ref_mode not in SNR_REF_MODES:
            raise ValueError(f"unknown snr_ref_mode {self.snr_ref_mode!r}")

    @property
    def n_ch(self) -> int:
        c = self.channel
        return min(c.n_rx, c.n_tx, c.n_ris)


@dataclass(frozen=True)
class DesignAggregate:
    """Per-design results of one scenario."""

    kind: DesignKind
    power_samples: np.ndarray  # trace_gram(F) per realization
    mean_power: float
    snr_ref_sigma2: float  # mean power used in the SNR mapping
    capacity_curve: tuple  # ((snr_db, mean_capacity_bits), ...)
    eigen_samples: np.ndarray  # sorted eigenprofile per realization (row each)
    mean_sorted_eigenvalues: np.ndarray  # elementwise mean of sorted profiles
    max_constraint_violation: float  # max relative trace_gram(phi) deviation


@dataclass(frozen=True)
class ScenarioResult:
    config: ScenarioConfig
    per_design: dict = field(repr=False)


def _design_rng(base_seed: int, r: int, kind: DesignKind):
    tag = _RANDOM_TAGS.get(kind)
    if tag is None:
        return None
    ss = np.random.SeedSequence((base_seed, r, 1000 + tag))
    return np.random.default_rng(ss)


def _one_realization(cfg: ScenarioConfig, r: int):
    """Samples for realization r: kind -> (power, eigenvalues, deviation)."""
    real = chan.realize(cfg.channel, entropy=(cfg.base_seed, r))
    n_is = cfg.channel.n_ris
    out = {}
    for kind in cfg.designs:
        try:
            d = des.build_for_kind(kind, real.h, real.g,
                                   rng=_design_rng(cfg.base_seed, r, kind))
            f = des.compose_f(real.g, d.phi, real.h)
            s2 = trace_gram(f)
            prof = cap.eigenprofile(f, n_is)
        except Exception as exc:
            raise RuntimeError(
                f"scenario {cfg.name!r}: design {kind.value} failed on "
                f"realization {r}: {exc}"
            ) from exc
        dev = abs(trace_gram(d.phi) - n_is) / n_is
        out[kind] = (s2, prof.eigenvalues, dev)
    return out


def capacity_curve_for_reference(eigen_samples, snr_grid_db, ref_sigma2,
                                 n_ch, n_tx,
                                 budget_mode="per_symbol_total") -> tuple:
    """Mean-capacity curve for stored eigenprofiles under an explicit SNR
    reference.

    ``run_scenario`` uses this with the reference mean power of its own run.
    Calling it directly with some other scenario's reference puts two runs on
    a common transmit-power axis, which is how surfaces of different sizes
    are compared: reusing the smaller surface's reference means each grid
    point maps to the same budget for both runs, so curve differences show
    the larger surface's gain instead of being renormalized away.
    """
    eigs = np.asarray(eigen_samples, dtype=float)
    curve = []
    for snr_db in snr_grid_db:
        total = cap.snr_to_power(snr_db, ref_sigma2, n_ch, n_tx,
                                 budget_mode=budget_mode)
        bits = [
            cap.waterfill(
                cap.ChannelEigenprofile(row, n_ch_max=n_ch), total
            ).capacity_bits
            for row in eigs
        ]
        curve.append((float(snr_db), float(np.mean(bits))))
    return tuple(curve)


def run_scenario(cfg: ScenarioConfig, threads: int = 1) -> ScenarioResult:
    """Run every realization and aggregate (deterministic for any thread count)."""
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    indices = range(cfg.n_realizations)
    if threads == 1:
        samples = [_one_realization(cfg, r) for r in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = list(pool.map(lambda r: _one_realization(cfg, r), indices))

    shared_ref = None
    if cfg.snr_ref_mode == "shared":
        all_powers = [s[kind][0] for s in samples for kind in cfg.designs]
        shared_ref = float(np.mean(all_powers))

    per_design = {}
    for kind in cfg.designs:
        powers = np.array([s[kind][0] for s in samples])
        eigs = np.vstack([s[kind][1] for s in samples])
        dev = max(s[kind][2] for s in samples)
        mean_power = float(powers.mean())
        ref = shared_ref if shared_ref is not None else mean_power
        per_design[kind] = DesignAggregate(
            kind=kind,
            power_samples=powers,
            mean_power=mean_power,
            snr_ref_sigma2=ref,
            capacity_curve=capacity_curve_for_reference(
                eigs, cfg.snr_grid_db, ref, cfg.n_ch, cfg.channel.n_tx,
                budget_mode=cfg.budget_mode,
            ),
            eigen_samples=eigs,
            mean_sorted_eigenvalues=eigs.mean(axis=0),
            max_constraint_violation=dev,
        )
    return ScenarioResult(config=cfg, per_design=per_design)


# ---------------------------------------------------------------------------
# summaries and CSV output
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SummaryRow:
    design: str
    mean_sigma2_f: float
    capacity_at_minus10db: float
    capacity_at_plus30db: float
    dominant_eigenvalue_share: float


def _curve_at(curve, snr_db: float) -> float:
    snrs = np.array([s for s, _ in curve])
    k = int(np.argmin(np.abs(snrs - snr_db)))
    return curve[k][1]


def summarize(result: ScenarioResult) -> list:
    rows = []
    for kind in result.config.designs:
        agg = result.per_design[kind]
        eigs = agg.mean_sorted_eigenvalues
        share = float(eigs[0] / eigs.sum()) if eigs.sum() > 0 else 0.0
        rows.append(SummaryRow(
            design=kind.value,
            mean_sigma2_f=agg.mean_power,
            capacity_at_minus10db=_curve_at(agg.capacity_curve, -10.0),
            capacity_at_plus30db=_curve_at(agg.capacity_curve, 30.0),
            dominant_eigenvalue_share=share,
        ))
    return rows


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


def write_scenario_csvs(result: ScenarioResult, out_dir: str) -> list:
    """Write power/capacity/eigs/summary CSVs; returns the file paths.

    Floats use shortest round-trip formatting and rows follow the canonical
    design order, so equal results give byte-identical files.
    """
    os.makedirs(out_dir, exist_ok=True)
    cfg = result.config
    paths = []

    path = os.path.join(out_dir, "power.csv")
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["realization", "design", "sigma2_f"])
        for kind in cfg.designs:
            for r, s2 in enumerate(result.per_design[kind].power_samples):
                w.writerow([r, kind.value, repr(float(s2))])
    paths.append(path)

    path = os.path.join(out_dir, "capacity.csv")
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["design", "snr_db", "capacity_bits"])
        for kind in cfg.designs:
            for snr_db, bits in result.per_design[kind].capacity_curve:
                w.writerow([kind.value, repr(float(snr_db)), repr(float(bits))])
    paths.append(path)

    path = os.path.join(out_dir, "eigs.csv")
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["design", "index", "mean_eigenvalue"])
        for kind in cfg.designs:
            eigs = result.per_design[kind].mean_sorted_eigenvalues
            for i, val in enumerate(eigs, start=1):
                w.writerow([kind.value, i, repr(float(val))])
    paths.append(path)

    path = os.path.join(out_dir, "summary.csv")
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["design", "mean_sigma2_f", "capacity_at_minus10db",
                    "capacity_at_plus30db", "dominant_eigenvalue_share"])
        for row in summarize(result):
            w.writerow([row.design, repr(row.mean_sigma2_f),
                        repr(row.capacity_at_minus10db),
                        repr(row.capacity_at_plus30db),
                        repr(row.dominant_eigenvalue_share)])
    paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def _preset(name, n_ris, n_paths, los):
    spec = chan.ChannelSpec(
        n_tx=29, n_rx=29, n_ris=n_ris,
        n_paths_h=n_paths, n_paths_g=n_paths,
        los=los, los_power_ratio_db=10.0, seed=DEFAULT_BASE_SEED,
    )
    # The stock scenarios put every design on one SNR axis (pooled mean
    # power).  Normalizing each design by its own mean would divide out
    # exactly the power differences the comparisons are about: the
    # beamforming designs would lose their low-SNR advantage by
    # construction.
    return ScenarioConfig(name=name, channel=spec, snr_ref_mode="shared")


def preset_scenarios() -> tuple:
    """The six stock scenarios.

    Element counts are stored explicitly (29 per hop array; the larger
    surface uses 43) and every preset shares the base seed, so the larger
    surface sees the same multipath draws as its 29-element counterpart.
    """
    return (
        _preset("nlos_sparse", 29, 10, False),
        _preset("nlos_rich", 29, 100, False),
        _preset("los_sparse", 29, 10, True),
        _preset("los_rich", 29, 100, True),
        _preset("los_ris43_sparse", 43, 10, True),
        _preset("los_ris43_rich", 43, 100, True),
    )


def preset_by_name(name: str) -> ScenarioConfig:
    for cfg in preset_scenarios():
        if cfg.name == name:
            return cfg
    raise KeyError(f"unknown preset {name!r}")
