"""Dense non-Hermitian eigendecomposition and per-eigenstate observables.

Left and right eigenvectors come from a single LAPACK call, are sorted
by (Re E, Im E), and are biorthonormalized: isolated eigenvalues by
scaling the left vector, clusters (eigenvalues within 1e-8 * spectral
radius) by a small linear solve inside the cluster.  ``condition`` is
the largest eigenvalue condition number 1/|<l_n|r_n>| over unit-norm
pairs seen before normalization; clusters whose overlap matrix is
numerically singular are flagged defective and left unnormalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from .fock import BasisTable
from .hamiltonian import HMatrix

CLUSTER_RTOL = 1e-8
DEFECT_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with biorthonormal right/left eigenvectors.

    right[:, n] is the unit-norm right eigenvector; left[:, n] is scaled
    so that left[:, m].conj() @ right[:, n] = delta_{mn} (unless
    ``defective``).
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition: float
    defective: bool


def _as_array(H) -> np.ndarray:
    if isinstance(H, HMatrix):
        return H.entries
    return np.asarray(H, dtype=complex)


def eig(H) -> Spectrum:
    """Full biorthonormal eigendecomposition of a dense matrix.

    Accepts an HMatrix or a plain array.  Eigen-pairs are ordered by
    (Re E, Im E).
    """
    A = _as_array(H)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    w, vl, vr = sla.eig(A, left=True, right=True)
    order = np.lexsort((w.imag, w.real))
    w, vl, vr = w[order], vl[:, order], vr[:, order]

    radius = float(np.max(np.abs(w))) if w.size else 0.0
    scale = max(radius, 1.0)
    condition = 0.0
    defective = False
    n = w.size
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and abs(w[stop] - w[stop - 1]) <= CLUSTER_RTOL * scale:
            stop += 1
        block = slice(start, stop)
        M = vl[:, block].conj().T @ vr[:, block]
        smallest = np.min(np.abs(np.diag(M))) if stop - start == 1 else float(
            np.min(sla.svdvals(M))
        )
        condition = max(condition, 1.0 / smallest if smallest > 0 else np.inf)
        if smallest <= DEFECT_TOL:
            defective = True
        else:
            # want L^T_block.conj() @ R_block == I  =>  L' = L inv(M^H)
            vl[:, block] = vl[:, block] @ np.linalg.inv(M.conj().T)
        start = stop
    return Spectrum(eigenvalues=w, right=vr, left=vl, condition=float(condition), defective=defective)


def count_complex(spec: Spectrum, tol: float = 1e-7) -> int:
    """Number of eigenvalues with Im E > tol (growing modes)."""
    return int(np.count_nonzero(spec.eigenvalues.imag > tol))


def max_im(spec: Spectrum) -> float:
    """Largest imaginary part over the spectrum (can be <= 0)."""
    return float(np.max(spec.eigenvalues.imag))


def argmax_im(spec: Spectrum) -> int:
    """Index of the max-Im eigenvalue; ties go to larger Re E, then lower index."""
    im = spec.eigenvalues.imag
    re = spec.eigenvalues.real
    best = np.flatnonzero(im == im.max())
    if best.size == 1:
        return int(best[0])
    top_re = re[best].max()
    return int(best[re[best] == top_re][0])


def _prob(spec: Spectrum, n: int) -> np.ndarray:
    v = spec.right[:, n]
    p = np.abs(v) ** 2
    return p / p.sum()


def polarization(spec: Spectrum, n: int, basis: BasisTable) -> float:
    """Leg imbalance (N_A - N_B)/N of eigenstate n (right-right norm)."""
    occ = basis.states
    L = basis.L
    imbalance = (occ[:, :L].sum(axis=1) - occ[:, L:].sum(axis=1)) / basis.N
    return float(_prob(spec, n) @ imbalance)


def edge_correlation(
    spec: Spectrum, n: int, basis: BasisTable, biorthogonal: bool = False
) -> float:
    """<n_(L,A) n_(1,B)> in eigenstate n.

    Default is the right-right normalized expectation.  With
    ``biorthogonal=True`` returns the real part of <L_n|..|R_n>/<L_n|R_n>
    instead; never the default.
    """
    occ = basis.states
    L = basis.L
    prod = occ[:, L - 1] * occ[:, L]
    if biorthogonal:
        ln = spec.left[:, n]
        rn = spec.right[:, n]
        return float((np.conj(ln) * prod * rn).sum().real / np.vdot(ln, rn).real)
    return float(_prob(spec, n) @ prod)


def conjugation_asymmetry(spec: Spectrum) -> float:
    """Distance between the eigenvalue multiset and its complex conjugate.

    Uses an optimal matching between {E_n} and {conj(E_n)} and returns the
    largest matched |E_i - conj(E_j)|.  Zero (to rounding) iff the spectrum
    is closed under conjugation.  A plain sorted comparison is unstable
    here: conjugate partners of a real matrix agree in Re E only to
    rounding, and that noise can swap the sort order of a pair and report
    a spurious mismatch of 2|Im E|.
    """
    w = spec.eigenvalues
    cost = np.abs(w[:, None] - np.conj(w)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def im_dos(spec: Spectrum, bins: int, range_: tuple[float, float] | None = None):
    """Histogram of Im E.

    Returns (counts, edges).  Counts always total dim: with an explicit
    range, values outside it are counted into the nearest edge bin.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    im = spec.eigenvalues.imag
    if range_ is None:
        lo, hi = float(im.min()), float(im.max())
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
    else:
        lo, hi = float(range_[0]), float(range_[1])
        if not lo < hi:
            raise ValueError(f"empty histogram range {range_}")
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(np.clip(im, lo, hi), bins=edges)
    return counts, edges


@dataclass(frozen=True)
class Crossing:
    """One argmax-identity change between adjacent grid points."""

    grid_index: int
    jp_lo: float
    jp_hi: float
    overlap: float
    eig_jump: float
    c_lo: float
    c_hi: float
    deriv_before: float
    deriv_after: float


@dataclass(frozen=True)
class CrossingReport:
    jp_grid: np.ndarray
    max_im: np.ndarray
    derivative: np.ndarray
    crossings: tuple[Crossing, ...]


def max_im_state_tracker(
    jp_grid,
    spectra: list[Spectrum],
    basis: BasisTable,
    overlap_cut: float = 0.5,
    jump_factor: float = 10.0,
    im_floor: float = 1e-8,
) -> CrossingReport:
    """Track the max-Im eigenstate across a parameter grid.

    An interval counts as an identity change when the right-vector
    overlap between consecutive argmax states drops below
    ``overlap_cut``, or when the argmax eigenvalue moves by more than
    ``jump_factor`` times the median inter-step move.  The second
    channel matters because distinct right eigenvectors need not be
    orthogonal: two crossing branches can keep an overlap above 0.5
    while the eigenvalue clearly hops to another branch.  Both channels
    require Max Im E above ``im_floor`` on the two grid points, since
    the argmax is arbitrary within a purely real spectrum.

    Each crossing carries the edge-correlation values on both sides and
    the finite-difference derivative of Max Im E on the adjacent
    intervals.
    """
    jp = np.asarray(jp_grid, dtype=float)
    if jp.size < 3:
        raise ValueError("need at least 3 grid points")
    if jp.size != len(spectra):
        raise ValueError("grid and spectra lengths differ")
    tops = [argmax_im(s) for s in spectra]
    maxim = np.array([max_im(s) for s in spectra])
    deriv = np.diff(maxim) / np.diff(jp)
    top_eigs = np.array([s.eigenvalues[n] for s, n in zip(spectra, tops)])
    moves = np.abs(np.diff(top_eigs))
    scale = max(float(np.median(moves)), 1e-12 * max(1.0, float(np.abs(top_eigs).max())))
    crossings = []
    for i in range(jp.size - 1):
        if maxim[i] <= im_floor or maxim[i + 1] <= im_floor:
            continue
        va = spectra[i].right[:, tops[i]]
        vb = spectra[i + 1].right[:, tops[i + 1]]
        ov = abs(np.vdot(va, vb)) / (np.linalg.norm(va) * np.linalg.norm(vb))
        if ov < overlap_cut or moves[i] > jump_factor * scale:
            before = deriv[i - 1] if i - 1 >= 0 else deriv[i]
            after = deriv[i + 1] if i + 1 < deriv.size else deriv[i]
            crossings.append(
                Crossing(
                    grid_index=i,
                    jp_lo=float(jp[i]),
                    jp_hi=float(jp[i + 1]),
                    overlap=float(ov),
                    eig_jump=float(moves[i]),
                    c_lo=edge_correlation(spectra[i], tops[i], basis),
                    c_hi=edge_correlation(spectra[i + 1], tops[i + 1], basis),
                    deriv_before=float(before),
                    deriv_after=float(after),
                )
            )
    return CrossingReport(jp, maxim, deriv, tuple(crossings))
