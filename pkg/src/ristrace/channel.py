"""Geometric multipath channel model for the RIS link.

Both hops are uniform linear arrays with half-wavelength spacing.  A path
with physical angle phi maps to the normalized spatial frequency
theta = 0.5 sin(phi), and the array response is a_n(theta)[k] = exp(j 2 pi
k theta).  A channel is a finite sum of planar paths

    H = sum_l alpha_l a_rx(theta_rx,l) a_tx(theta_tx,l)^H

with i.i.d. spatial frequencies uniform on [-0.5, 0.5] and complex gains
normalized so the per-path expected powers sum to one, which makes
E[trace_gram(H)] equal to the product of the array sizes.  An optional
line-of-sight path occupies index 0 with a fixed amplitude and a uniformly
random phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matrixio
from .linalg import require_finite

__all__ = [
    "InvalidCountError",
    "PathSet",
    "ChannelSpec",
    "ChannelRealization",
    "angle_to_spatial_freq",
    "steering_vector",
    "path_power_profile",
    "draw_path_set",
    "assemble_channel",
    "realize",
    "save_realization",
    "load_realization",
]


class InvalidCountError(ValueError):
    """A path or antenna count is out of range."""


def angle_to_spatial_freq(phi: float) -> float:
    """Map a physical angle (radians) to normalized spatial frequency."""
    return 0.5 * math.sin(phi)


def steering_vector(n: int, theta: float) -> np.ndarray:
    """Array response of an n-element half-wavelength ULA at frequency theta.

    Entry k is exp(j 2 pi k theta); the first entry is exactly 1 and the
    squared norm is exactly n.
    """
    if n < 1:
        raise InvalidCountError(f"array size must be >= 1, got {n}")
    return np.exp(2j * np.pi * theta * np.arange(n))


def path_power_profile(n_paths: int, los: bool, los_power_ratio_db: float = 10.0):
    """Expected power of each path; sums to 1 by construction.

    Without line of sight every path carries 1/n_paths.  With it, the path
    at index 0 carries r/(r + n_paths - 1) where r = 10^(ratio_db/10) and
    each remaining path carries 1/(r + n_paths - 1), i.e. the configured
    ratio holds per path.
    """
    if n_paths < 1:
        raise InvalidCountError(f"n_paths must be >= 1, got {n_paths}")
    if not los:
        return np.full(n_paths, 1.0 / n_paths)
    r = 10.0 ** (los_power_ratio_db / 10.0)
    base = 1.0 / (r + n_paths - 1)
    profile = np.full(n_paths, base)
    profile[0] = 1.0 - (n_paths - 1) * base
    return profile


@dataclass(frozen=True)
class PathSet:
    """Gains and spatial frequencies of one drawn multipath set."""

    gains: np.ndarray
    aoa_freqs: np.ndarray
    aod_freqs: np.ndarray
    los_index: int | None = None

    def __post_init__(self):
        gains = require_finite(self.gains, "gains").reshape(-1)
        aoa = np.asarray(self.aoa_freqs, dtype=float).reshape(-1)
        aod = np.asarray(self.aod_freqs, dtype=float).reshape(-1)
        n = gains.size
        if n < 1:
            raise InvalidCountError("a path set needs at least one path")
        if aoa.size != n or aod.size != n:
            raise InvalidCountError("gains and frequency arrays must match in length")
        if np.max(np.abs(aoa), initial=0.0) > 0.5 or np.max(np.abs(aod), initial=0.0) > 0.5:
            raise ValueError("spatial frequencies must lie in [-0.5, 0.5]")
        if self.los_index is not None and not 0 <= self.los_index < n:
            raise InvalidCountError(f"los_index {self.los_index} out of range")
        for name, arr in (("gains", gains), ("aoa_freqs", aoa), ("aod_freqs", aod)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_paths(self) -> int:
        return self.gains.size


@dataclass(frozen=True)
class ChannelSpec:
    """Dimensions and multipath statistics of one two-hop link."""

    n_tx: int
    n_rx: int
    n_ris: int
    n_paths_h: int
    n_paths_g: int
    los: bool = False
    los_power_ratio_db: float = 10.0
    seed: int = 0

    def __post_init__(self):
        for name in ("n_tx", "n_rx", "n_ris", "n_paths_h", "n_paths_g"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise InvalidCountError(f"{name} must be a positive integer, got {v!r}")
        if not math.isfinite(self.los_power_ratio_db):
            raise ValueError("los_power_ratio_db must be finite")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")


@dataclass(frozen=True)
class ChannelRealization:
    """One drawn (H, G) pair together with its generating paths."""

    spec: ChannelSpec
    h: np.ndarray  # n_ris x n_tx
    g: np.ndarray  # n_rx x n_ris
    paths_h: PathSet = field(repr=False, default=None)
    paths_g: PathSet = field(repr=False, default=None)

    def __post_init__(self):
        h = require_finite(self.h, "h")
        g = require_finite(self.g, "g")
        if h.shape != (self.spec.n_ris, self.spec.n_tx):
            raise InvalidCountError(f"h has shape {h.shape}, spec wants "
                                    f"({self.spec.n_ris}, {self.spec.n_tx})")
        if g.shape != (self.spec.n_rx, self.spec.n_ris):
            raise InvalidCountError(f"g has shape {g.shape}, spec wants "
                                    f"({self.spec.n_rx}, {self.spec.n_ris})")
        for name, arr in (("h", h), ("g", g)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def draw_path_set(n_paths: int, los: bool, los_power_ratio_db: float,
                  rng: np.random.Generator) -> PathSet:
    """Draw one multipath set.

    Consumption order is fixed: AoA frequencies, AoD frequencies, the LoS
    phase (when present), then the NLoS gains (real block, imaginary block),
    so equal seeds give equal draws.
    """
    profile = path_power_profile(n_paths, los, los_power_ratio_db)
    aoa = rng.uniform(-0.5, 0.5, n_paths)
    aod = rng.uniform(-0.5, 0.5, n_paths)
    gains = np.empty(n_paths, dtype=complex)
    if los:
        phase = rng.uniform(0.0, 2.0 * np.pi)
        amp = math.sqrt(profile[0])
        gains[0] = amp * complex(math.cos(phase), math.sin(phase))
        tail = profile[1:]
        gains[1:] = (rng.standard_normal(n_paths - 1)
                     + 1j * rng.standard_normal(n_paths - 1)) * np.sqrt(tail / 2.0)
        los_index = 0
    else:
        gains[:] = (rng.standard_normal(n_paths)
                    + 1j * rng.standard_normal(n_paths)) * np.sqrt(profile / 2.0)
        los_index = None
    return PathSet(gains=gains, aoa_freqs=aoa, aod_freqs=aod, los_index=los_index)


def assemble_channel(paths: PathSet, n_rx_side: int, n_tx_side: int) -> np.ndarray:
    """Sum of rank-one path contributions, shape (n_rx_side, n_tx_side)."""
    if n_rx_side < 1 or n_tx_side < 1:
        raise InvalidCountError("array sizes must be >= 1")
    a_rx = np.exp(2j * np.pi * np.outer(np.arange(n_rx_side), paths.aoa_freqs))
    a_tx = np.exp(2j * np.pi * np.outer(np.arange(n_tx_side), paths.aod_freqs))
    return (a_rx * paths.gains) @ a_tx.conj().T


def realize(spec: ChannelSpec, entropy=None) -> ChannelRealization:
    """Draw one (H, G) pair.

    ``entropy`` is an int or tuple of ints seeding the draw (defaults to
    ``spec.seed``).  H and G use independent sub-streams derived from it,
    so changing the path count of one hop never perturbs the other.
    """
    if entropy is None:
        entropy = (spec.seed,)
    elif isinstance(entropy, (int, np.integer)):
        entropy = (int(entropy),)
    else:
        entropy = tuple(int(e) for e in entropy)
    rng_h = np.random.default_rng(np.random.SeedSequence(entropy + (0,)))
    rng_g = np.random.default_rng(np.random.SeedSequence(entropy + (1,)))
    paths_h = draw_path_set(spec.n_paths_h, spec.los, spec.los_power_ratio_db, rng_h)
    paths_g = draw_path_set(spec.n_paths_g, spec.los, spec.los_power_ratio_db, rng_g)
    h = assemble_channel(paths_h, spec.n_ris, spec.n_tx)
    g = assemble_channel(paths_g, spec.n_rx, spec.n_ris)
    return ChannelRealization(spec=spec, h=h, g=g, paths_h=paths_h, paths_g=paths_g)


def save_realization(stream, real: ChannelRealization) -> None:
    """Write H then G in the plain-text matrix format."""
    matrixio.save_matrices(stream, [real.h, real.g])


def load_realization(stream, spec: ChannelSpec) -> ChannelRealization:
    """Read back an (H, G) pair written by :func:`save_realization`.

    Path sets are not serialized; the loaded realization carries only the
    matrices.
    """
    h, g = matrixio.load_matrices(stream, 2)
    return ChannelRealization(spec=spec, h=h, g=g, paths_h=None, paths_g=None)
