"""Degenerate perturbation theory on the diagonal/off-diagonal split.

H0 is the (diagonal) onsite part, V the hopping parts.  The machinery
here is deliberately small: sector projectors for the two-particle
scattering manifolds, the second-order effective matrix
-P V Q (H0 - E0)^{-1} Q V P on a degenerate manifold, explicit virtual
path amplitudes whose vertices are read from the built V matrix, and
the spectral onset threshold over a coupling grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import BasisTable, leg_counts
from .hamiltonian import HMatrix, ModelParams, build_full, make_basis
from .spectral import eig, max_im

BB_SCATTERING = "BB_scattering"
AB_SCATTERING = "AB_scattering"
AA_SCATTERING = "AA_scattering"


class SingularManifoldError(ValueError):
    """A coupled intermediate state is degenerate with the manifold energy."""


@dataclass(frozen=True)
class H0VSplit:
    """Diagonal reference H0 (onsite) and perturbation V (hoppings)."""

    H0: np.ndarray
    V: np.ndarray
    basis: BasisTable
    params: ModelParams

    @property
    def h0_diag(self) -> np.ndarray:
        return np.real(np.diag(self.H0))


@dataclass(frozen=True)
class SectorProjector:
    """Index set of a degenerate manifold."""

    kind: str
    indices: np.ndarray


def split(params: ModelParams, basis: BasisTable | None = None, H: HMatrix | None = None) -> H0VSplit:
    """H0 = onsite sub-matrix, V = intra + inter sub-matrices."""
    if H is None:
        H = build_full(params, basis)
    H0 = H.term("onsite")
    V = H.term("intra_A") + H.term("intra_B") + H.term("inter")
    return H0VSplit(H0=H0, V=V, basis=H.basis, params=H.params)


def sector_projector(basis: BasisTable, kind: str, indices: Sequence[int] | None = None) -> SectorProjector:
    """Projector onto one of the named scattering manifolds.

    Scattering means no multiply-occupied site.  BB/AA put every
    particle on one leg; AB requires at least one particle on each.
    ``kind="custom"`` takes explicit indices.
    """
    if kind == "custom":
        if indices is None:
            raise ValueError("custom projector needs explicit indices")
        idx = np.asarray(sorted(set(int(i) for i in indices)), dtype=np.int64)
        if idx.size and (idx[0] < 0 or idx[-1] >= basis.dim):
            raise ValueError("custom indices out of range")
        return SectorProjector(kind=kind, indices=idx)
    sel = []
    for i, s in enumerate(basis.states):
        if s.max() > 1:
            continue
        na, nb = leg_counts(s)
        if kind == BB_SCATTERING and na == 0:
            sel.append(i)
        elif kind == AA_SCATTERING and nb == 0:
            sel.append(i)
        elif kind == AB_SCATTERING and na >= 1 and nb >= 1:
            sel.append(i)
        elif kind not in (BB_SCATTERING, AA_SCATTERING, AB_SCATTERING):
            raise ValueError(f"unknown projector kind {kind!r}")
    return SectorProjector(kind=kind, indices=np.asarray(sel, dtype=np.int64))


def bw_second_order(
    sp: H0VSplit, P: SectorProjector, V: np.ndarray | None = None, degeneracy_tol: float = 1e-9
) -> np.ndarray:
    """Second-order effective matrix -P V Q (H0-E0)^{-1} Q V P.

    The manifold must be degenerate in H0 (common E0).  ``V`` defaults
    to the split's full perturbation; pass a restricted matrix (for
    example only the rung part) to isolate a coupling channel.  Raises
    SingularManifoldError when an intermediate state coupled by V is
    degenerate with E0.
    """
    if V is None:
        V = sp.V
    idx = P.indices
    if idx.size == 0:
        raise ValueError("empty manifold")
    e = sp.h0_diag
    E0 = e[idx[0]]
    if np.max(np.abs(e[idx] - E0)) > degeneracy_tol:
        raise SingularManifoldError(
            f"manifold not degenerate: H0 spread {np.max(np.abs(e[idx] - E0)):g}"
        )
    mask = np.ones(sp.basis.dim, dtype=bool)
    mask[idx] = False
    qidx = np.flatnonzero(mask)
    W = V[np.ix_(qidx, idx)]  # Q <- P couplings
    denom = e[qidx] - E0
    coupled = np.abs(W).max(axis=1) > 0.0
    bad = coupled & (np.abs(denom) <= degeneracy_tol)
    if np.any(bad):
        raise SingularManifoldError(
            f"{int(bad.sum())} coupled intermediate state(s) degenerate with E0={E0:g}"
        )
    safe = np.where(np.abs(denom) <= degeneracy_tol, 1.0, denom)
    return -(V[np.ix_(idx, qidx)] @ (W / safe[:, None]))


def ab_exchange_formula(Jp: float, mu: float, theta: float, sgn: int) -> complex:
    """Closed-form second-order exchange element (Jp^2/2mu)(e^{-i t s} - e^{+i t s})."""
    if mu == 0:
        raise ValueError("formula undefined at mu = 0")
    return (Jp**2 / (2 * mu)) * (np.exp(-1j * theta * sgn) - np.exp(1j * theta * sgn))


@dataclass(frozen=True)
class PathSpec:
    """Chain of basis states visited by one virtual process."""

    states: tuple[int, ...]

    def __post_init__(self):
        if len(self.states) < 2:
            raise ValueError("a path needs at least two states")


@dataclass(frozen=True)
class PathAmplitude:
    value: complex
    vertices: tuple[complex, ...]
    denominators: tuple[float, ...]


def path_amplitude(sp: H0VSplit, path: PathSpec, E0: float | None = None) -> PathAmplitude:
    """Product of V elements along a path over the intermediate denominators.

    Vertex i is <states[i+1]| V |states[i]>, read from the built matrix.
    Each intermediate state m contributes a factor 1/(E0 - H0[m]); E0
    defaults to the H0 value of the path's first state.  A vanishing
    vertex means the path does not chain (error), as does a vanishing
    denominator.
    """
    idx = path.states
    e = sp.h0_diag
    if E0 is None:
        E0 = float(e[idx[0]])
    vertices = []
    for a, b in zip(idx[:-1], idx[1:]):
        v = complex(sp.V[b, a])
        if v == 0:
            raise ValueError(f"broken chain: <{b}|V|{a}> = 0")
        vertices.append(v)
    denoms = []
    for m in idx[1:-1]:
        d = float(E0 - e[m])
        if d == 0:
            raise ZeroDivisionError(f"degenerate intermediate state {m}")
        denoms.append(d)
    value = np.prod(vertices) / np.prod(denoms) if denoms else np.prod(vertices)
    return PathAmplitude(value=complex(value), vertices=tuple(vertices), denominators=tuple(denoms))


@dataclass(frozen=True)
class OnsetResult:
    found: bool
    jp_star: float | None
    bracket: tuple[float | None, float]
    evaluations: int


def onset_threshold(
    params: ModelParams,
    jp_grid,
    *,
    im_tol: float = 1e-7,
    rel_width: float = 0.10,
    basis: BasisTable | None = None,
) -> OnsetResult:
    """Smallest coupling on the grid with Max Im E above the threshold.

    Scans the (increasing) grid, then bisects in log space between the
    last quiet point and the first loud one until the bracket's relative
    width is below ``rel_width``.  Returns found=False when the grid
    never produces a complex spectrum.
    """
    jp = np.asarray(jp_grid, dtype=float)
    if jp.size < 1 or np.any(np.diff(jp) <= 0):
        raise ValueError("jp grid must be nonempty and strictly increasing")
    if basis is None:
        basis = make_basis(params)

    evals = 0

    def loud(jp_val: float) -> bool:
        nonlocal evals
        evals += 1
        H = build_full(params.with_(Jp=float(jp_val)), basis, keep_terms=False)
        return max_im(eig(H)) > im_tol

    hit = None
    for i, v in enumerate(jp):
        if loud(v):
            hit = i
            break
    if hit is None:
        return OnsetResult(found=False, jp_star=None, bracket=(float(jp[-1]), np.inf), evaluations=evals)
    if hit == 0:
        return OnsetResult(found=True, jp_star=float(jp[0]), bracket=(None, float(jp[0])), evaluations=evals)
    lo, hi = float(jp[hit - 1]), float(jp[hit])
    while hi / lo - 1.0 > rel_width:
        mid = float(np.sqrt(lo * hi))
        if loud(mid):
            hi = mid
        else:
            lo = mid
    return OnsetResult(found=True, jp_star=hi, bracket=(lo, hi), evaluations=evals)


def sustained_plateaus(values: Sequence[int], min_run: int = 3) -> list[int]:
    """Distinct values held for at least ``min_run`` consecutive points, in order."""
    out: list[int] = []
    run_val, run_len = None, 0
    for v in values:
        if v == run_val:
            run_len += 1
        else:
            run_val, run_len = v, 1
        if run_len == min_run and (not out or out[-1] != v):
            out.append(v)
    return out
