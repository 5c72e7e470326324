"""RIS reflection designs for the two-hop link F = G Phi H.

All designs satisfy the power constraint trace_gram(Phi) = n_ris.  The
diagonal-optimal design maximizes the channel power tr(F^H F) over diagonal
Phi via the dominant eigenpair of the coupling matrix K, the generalized
design over unconstrained Phi via the Kronecker structure of the quadratic
form (closed rank-one fast path; the dense route is kept as an oracle), and
the low-complexity design aligns per-element phases from the channel rows
and columns alone.  Unit-modulus projections and random/identity baselines
complete the set.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .linalg import (
    DimensionMismatchError,
    dominant_eigpair,
    fix_phase,
    hermitian_eig,
    kron,
    require_finite,
    trace_gram,
    unvec,
)

__all__ = [
    "DesignKind",
    "RisDesign",
    "WrongKindError",
    "build_k",
    "build_m",
    "compose_f",
    "design_opt_diag",
    "design_opt_gen",
    "design_opt_gen_dense",
    "design_lc_phase",
    "design_rand",
    "design_identity",
    "phase_only",
    "build_for_kind",
]

# relative tolerance for the built-in objective self-check
SELF_CHECK_RTOL = 1e-6

# moduli at or below this are treated as zero when projecting to pure phases
PHASE_ZERO_TOL = 1e-14


class WrongKindError(ValueError):
    """An operation was applied to a design kind it does not accept."""


class DesignKind(enum.Enum):
    """Reflection design families; values double as CSV/legend labels."""

    RAND = "RAND"
    RAND_PH = "RAND-PH"
    LC_PH = "LC-PH"
    OPT_DIAG = "OPT-DIAG"
    OPT_GEN = "OPT-GEN"
    OPT_DIAG_PH = "OPT-DIAG-PH"
    OPT_GEN_PH = "OPT-GEN-PH"
    IDENTITY = "GH"

    @classmethod
    def from_label(cls, label: str) -> "DesignKind":
        for kind in cls:
            if kind.value == label or kind.name == label:
                return kind
        raise ValueError(f"unknown design kind {label!r}")


@dataclass(frozen=True)
class RisDesign:
    """One reflection matrix with bookkeeping.

    ``achieved_trace_objective`` is tr(F^H F) for the realization the design
    was built against; NaN for channel-free designs until a channel is
    supplied.  ``degenerate_elements`` lists indices where a zero-norm input
    forced a fallback phase.
    """

    kind: DesignKind
    phi: np.ndarray
    diagonal: bool
    achieved_trace_objective: float = math.nan
    degenerate_elements: tuple = ()

    def __post_init__(self):
        phi = require_finite(self.phi, "phi")
        n = phi.shape[0]
        if phi.ndim != 2 or phi.shape[1] != n:
            raise DimensionMismatchError(f"phi must be square, got {phi.shape}")
        tg = trace_gram(phi)
        if abs(tg - n) > 1e-9 * n:
            raise ValueError(
                f"power constraint violated: trace_gram(phi) = {tg!r}, want {n}"
            )
        if self.diagonal and np.any(phi[~np.eye(n, dtype=bool)] != 0):
            raise ValueError("design marked diagonal has off-diagonal entries")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    @property
    def n_ris(self) -> int:
        return self.phi.shape[0]


def _check_channel_pair(h: np.ndarray, g: np.ndarray):
    h = require_finite(h, "h")
    g = require_finite(g, "g")
    if h.ndim != 2 or g.ndim != 2:
        raise DimensionMismatchError("h and g must be 2-D")
    if h.shape[0] != g.shape[1]:
        raise DimensionMismatchError(
            f"middle dimensions disagree: h is {h.shape}, g is {g.shape}"
        )
    return h, g


def compose_f(g: np.ndarray, phi: np.ndarray, h: np.ndarray) -> np.ndarray:
    """End-to-end matrix F = G Phi H."""
    h, g = _check_channel_pair(h, g)
    phi = require_finite(phi, "phi")
    n = h.shape[0]
    if phi.shape != (n, n):
        raise DimensionMismatchError(f"phi must be {n}x{n}, got {phi.shape}")
    return g @ phi @ h


def build_k(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Coupling matrix of the diagonal quadratic form.

    With phi the diagonal of Phi, tr(F^H F) = phi^H K phi where
    K[j, i] = (g_j^H g_i)(h_i^H h_j) for columns g_i of G and rows h_i^H
    of H; elementwise that is (G^H G) * conj(H H^H).  K is Hermitian and
    positive semidefinite (Schur product of PSD factors).
    """
    h, g = _check_channel_pair(h, g)
    return (g.conj().T @ g) * (h @ h.conj().T).conj()


def build_m(h: np.ndarray, g: np.ndarray, max_side: int = 10000) -> np.ndarray:
    """Dense coupling operator of the generalized quadratic form.

    With psi = vec(Phi), tr(F^H F) = psi^H M psi where
    M = kron(conj(H) H^T, G^H G).  Size (n_ris^2)^2; use only for small
    arrays — the optimal design never needs it (see design_opt_gen).
    """
    h, g = _check_channel_pair(h, g)
    return kron((h.conj() @ h.T), (g.conj().T @ g), max_side=max_side)


def _dominant(a: np.ndarray):
    """Dominant eigenpair via power iteration, full solver as fallback."""
    pair = dominant_eigpair(a)
    if pair.converged:
        return pair.value, pair.vector
    eig = hermitian_eig(a)
    return float(eig.eigenvalues[0]), eig.eigenvectors[:, 0]


def _finalize(kind, phi, h, g, diagonal, expected=None, degenerate=()):
    """Assemble a RisDesign and run the built-in objective self-check."""
    design = RisDesign(kind=kind, phi=phi, diagonal=diagonal,
                       degenerate_elements=tuple(degenerate))
    achieved = trace_gram(compose_f(g, design.phi, h))
    if expected is not None and abs(achieved - expected) > SELF_CHECK_RTOL * max(
        abs(expected), 1e-300
    ):
        raise RuntimeError(
            f"{kind.value}: achieved objective {achieved!r} disagrees with "
            f"eigenvalue prediction {expected!r}"
        )
    return replace(design, achieved_trace_objective=achieved)


def design_opt_diag(h: np.ndarray, g: np.ndarray) -> RisDesign:
    """Trace-optimal diagonal design: sqrt(n) times the top eigenvector of K."""
    h, g = _check_channel_pair(h, g)
    n = h.shape[0]
    lam, u = _dominant(build_k(h, g))
    phi_vec = math.sqrt(n) * fix_phase(u)
    return _finalize(DesignKind.OPT_DIAG, np.diag(phi_vec), h, g,
                     diagonal=True, expected=n * lam)


def design_opt_gen(h: np.ndarray, g: np.ndarray) -> RisDesign:
    """Trace-optimal unconstrained design, closed rank-one form.

    The quadratic form factors as kron(A, B) with A = conj(H) H^T and
    B = G^H G, so the top eigenvector of M is u_A kron u_B and
    Phi = sqrt(n) u_B u_A^T without ever forming M.  The objective is
    n * lambda_max(A) * lambda_max(B).
    """
    h, g = _check_channel_pair(h, g)
    n = h.shape[0]
    lam_a, u_a = _dominant(h.conj() @ h.T)
    lam_b, u_b = _dominant(g.conj().T @ g)
    phi = math.sqrt(n) * np.outer(u_b, u_a)
    return _finalize(DesignKind.OPT_GEN, phi, h, g,
                     diagonal=False, expected=n * lam_a * lam_b)


def design_opt_gen_dense(h: np.ndarray, g: np.ndarray,
                         max_side: int = 10000) -> RisDesign:
    """Generalized design via the explicit dense Kronecker operator.

    Oracle route for cross-checking design_opt_gen; cost grows as n^6.
    """
    h, g = _check_channel_pair(h, g)
    n = h.shape[0]
    m = build_m(h, g, max_side=max_side)
    eig = hermitian_eig(m)
    lam, v = float(eig.eigenvalues[0]), eig.eigenvectors[:, 0]
    phi = math.sqrt(n) * unvec(v, n, n)
    return _finalize(DesignKind.OPT_GEN, phi, h, g, diagonal=False,
                     expected=n * lam)


def design_lc_phase(h: np.ndarray, g: np.ndarray) -> RisDesign:
    """Low-complexity per-element phase design.

    Element i compensates the aggregate phases of row i of H and column i
    of G: phase_h = arccos(Re(htilde_i^H h_i) / (|h_i| |htilde_i|)) with
    htilde the elementwise modulus vector (similarly for G), and the
    reflection phase is -(phase_h + phase_g).  Zero-norm rows/columns fall
    back to phase 0 and are flagged.
    """
    h, g = _check_channel_pair(h, g)
    n = h.shape[0]
    phases = np.zeros(n)
    degenerate = []
    for i in range(n):
        hrow = h[i, :]
        gcol = g[:, i]
        nh = float(np.linalg.norm(hrow))
        ng = float(np.linalg.norm(gcol))
        if nh == 0.0 or ng == 0.0:
            degenerate.append(i)
            continue
        # |htilde| = |h| since the tilde vector only strips phases
        ch = float(np.sum(np.abs(hrow) * hrow.real)) / (nh * nh)
        cg = float(np.sum(np.abs(gcol) * gcol.real)) / (ng * ng)
        ph = math.acos(min(1.0, max(-1.0, ch)))
        pg = math.acos(min(1.0, max(-1.0, cg)))
        phases[i] = -(ph + pg)
    phi = np.diag(np.exp(1j * phases))
    return _finalize(DesignKind.LC_PH, phi, h, g, diagonal=True,
                     degenerate=degenerate)


def design_rand(n_ris: int, amplitude_too: bool,
                rng: np.random.Generator) -> RisDesign:
    """Random diagonal baseline.

    With ``amplitude_too`` the diagonal is i.i.d. standard complex Gaussian
    rescaled to meet the power constraint exactly; otherwise it is i.i.d.
    unit-modulus phases (the constraint then holds by construction).
    """
    if n_ris < 1:
        raise ValueError(f"n_ris must be >= 1, got {n_ris}")
    if amplitude_too:
        z = rng.standard_normal(n_ris) + 1j * rng.standard_normal(n_ris)
        z *= math.sqrt(n_ris / float(np.sum(np.abs(z) ** 2)))
        kind = DesignKind.RAND
    else:
        z = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n_ris))
        kind = DesignKind.RAND_PH
    return RisDesign(kind=kind, phi=np.diag(z), diagonal=True)


def design_identity(n_ris: int) -> RisDesign:
    """Pass-through reference Phi = I (the bare G H composite)."""
    if n_ris < 1:
        raise ValueError(f"n_ris must be >= 1, got {n_ris}")
    return RisDesign(kind=DesignKind.IDENTITY, phi=np.eye(n_ris, dtype=complex),
                     diagonal=True)


_PHASE_ONLY_MAP = {
    DesignKind.OPT_DIAG: DesignKind.OPT_DIAG_PH,
    DesignKind.OPT_GEN: DesignKind.OPT_GEN_PH,
    DesignKind.OPT_DIAG_PH: DesignKind.OPT_DIAG_PH,
    DesignKind.OPT_GEN_PH: DesignKind.OPT_GEN_PH,
}


def phase_only(design: RisDesign, h: np.ndarray | None = None,
               g: np.ndarray | None = None) -> RisDesign:
    """Project a design onto pure phases, rescaled to the power constraint.

    Diagonal designs keep unit-modulus diagonal entries (scale 1); general
    designs keep all n^2 phases scaled by 1/sqrt(n).  Entries with modulus
    at or below the zero tolerance become phase 1 and are flagged.  The
    projection is idempotent.  When the channel pair is given the achieved
    objective is recomputed for it.
    """
    try:
        out_kind = _PHASE_ONLY_MAP[design.kind]
    except KeyError:
        raise WrongKindError(
            f"phase_only does not accept kind {design.kind.value}"
        ) from None
    n = design.n_ris
    degenerate = []

    def unit(z: complex, where) -> complex:
        if abs(z) <= PHASE_ZERO_TOL:
            degenerate.append(where)
            return 1.0 + 0j
        return cmath.exp(1j * cmath.phase(z))

    if design.diagonal:
        d = np.array([unit(design.phi[i, i], i) for i in range(n)])
        phi = np.diag(d)
        diagonal = True
    else:
        phi = np.array(
            [[unit(design.phi[r, c], (r, c)) for c in range(n)] for r in range(n)]
        ) / math.sqrt(n)
        diagonal = False

    if h is not None and g is not None:
        return _finalize(out_kind, phi, h, g, diagonal=diagonal,
                         degenerate=degenerate)
    return RisDesign(kind=out_kind, phi=phi, diagonal=diagonal,
                     degenerate_elements=tuple(degenerate))


def build_for_kind(kind: DesignKind, h: np.ndarray, g: np.ndarray,
                   rng: np.random.Generator | None = None) -> RisDesign:
    """Build any design kind against a channel pair.

    Random kinds require ``rng``; phase-only kinds build their base design
    first.  The returned design always carries the achieved objective for
    (h, g).
    """
    h, g = _check_channel_pair(h, g)
    n = h.shape[0]
    if kind is DesignKind.OPT_DIAG:
        return design_opt_diag(h, g)
    if kind is DesignKind.OPT_GEN:
        return design_opt_gen(h, g)
    if kind is DesignKind.OPT_DIAG_PH:
        return phase_only(design_opt_diag(h, g), h, g)
    if kind is DesignKind.OPT_GEN_PH:
        return phase_only(design_opt_gen(h, g), h, g)
    if kind is DesignKind.LC_PH:
        return design_lc_phase(h, g)
    if kind in (DesignKind.RAND, DesignKind.RAND_PH):
        if rng is None:
            raise ValueError(f"{kind.value} needs a random generator")
        d = design_rand(n, amplitude_too=kind is DesignKind.RAND, rng=rng)
    elif kind is DesignKind.IDENTITY:
        d = design_identity(n)
    else:  # pragma: no cover - exhaustive over the enum
        raise WrongKindError(f"unhandled design kind {kind!r}")
    achieved = trace_gram(compose_f(g, d.phi, h))
    return replace(d, achieved_trace_objective=achieved)
