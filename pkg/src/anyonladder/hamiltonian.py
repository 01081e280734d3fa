"""Many-body Hamiltonian of the non-Hermitian anyon ladder.

Two independent constructions are provided: ``build_full`` assembles the
effective bosonic rules (non-reciprocal intra-leg hops with an
occupation-dependent phase on the slow site, rung hops with a string
phase over the A-tail and B-head occupations), and
``build_full_via_anyons`` assembles the same model from string-dressed
operator matrices.  The two must agree entrywise; tests enforce 1e-12.

Conventions: operator products act right to left.  The intra-leg phase
reads the occupation of the slower site after the source annihilation;
the rung term carrying the phase on the left reads it after both hops,
the conjugate term (phase on the right) before them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .fock import LEG_A, LEG_B, BasisTable, build_basis
from .operators import anyon_matrix

TERM_NAMES = ("intra_A", "intra_B", "inter", "onsite")


@dataclass(frozen=True)
class ModelParams:
    """All model symbols.

    L rungs, N particles; intra-leg amplitude J with non-reciprocity
    exponent alpha (leg A gets e^{+alpha} forward, leg B e^{-alpha});
    rung coupling Jp; onsite repulsion U; staggered potential mu (+mu
    on leg A, -mu on leg B); statistical angle theta (reduced to
    [0, 2*pi)); per-site occupation cap n_cap (None means N).

    Defaults follow the standard working point J = e^alpha = 1/sqrt(2),
    U = 16, mu = 4.
    """

    L: int
    N: int
    J: float = 2**-0.5
    alpha: float = math.log(2**-0.5)
    Jp: float = 0.0
    U: float = 16.0
    mu: float = 4.0
    theta: float = 0.0
    n_cap: int | None = None

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        for name in ("J", "alpha", "Jp", "U", "mu", "theta"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        th = self.theta % (2 * math.pi)
        if th >= 2 * math.pi:
            th = 0.0
        object.__setattr__(self, "theta", th)

    @property
    def cap(self) -> int:
        return self.N if self.n_cap is None else self.n_cap

    def with_(self, **kw) -> "ModelParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class HMatrix:
    """Built Hamiltonian plus its per-term sub-matrices."""

    params: ModelParams
    basis: BasisTable
    entries: np.ndarray
    term_tags: Mapping[str, np.ndarray] | None

    def term(self, name: str) -> np.ndarray:
        if self.term_tags is None:
            raise ValueError("built with keep_terms=False; rebuild to access terms")
        if name not in self.term_tags:
            raise KeyError(f"unknown term {name!r}; have {sorted(self.term_tags)}")
        return self.term_tags[name]


def make_basis(params: ModelParams) -> BasisTable:
    return build_basis(params.L, params.N, params.cap)


def _check_basis(params: ModelParams, basis: BasisTable):
    if (basis.L, basis.N, basis.n_cap) != (params.L, params.N, params.cap):
        raise ValueError(
            f"basis (L={basis.L}, N={basis.N}, n_cap={basis.n_cap}) does not match "
            f"params (L={params.L}, N={params.N}, n_cap={params.cap})"
        )


def build_intra(params: ModelParams, basis: BasisTable, leg: str) -> np.ndarray:
    """Intra-leg hopping sub-matrix for one leg.

    Per bond (j, j+1):  -J e^{+a} b+_j e^{-i theta n_j} b_{j+1}
                        -J e^{-a} b+_{j+1} e^{+i theta n_j} b_j
    with a = +alpha on leg A, -alpha on leg B, and n_j read after the
    source annihilation.
    """
    _check_basis(params, basis)
    if leg not in (LEG_A, LEG_B):
        raise ValueError(f"leg must be {LEG_A!r} or {LEG_B!r}")
    L, cap, theta = params.L, params.cap, params.theta
    a = params.alpha if leg == LEG_A else -params.alpha
    off = 0 if leg == LEG_A else L
    fwd = -params.J * math.exp(a)   # j+1 -> j
    bwd = -params.J * math.exp(-a)  # j -> j+1
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, s in enumerate(basis.states):
        for j in range(L - 1):
            lo, hi = off + j, off + j + 1
            # annihilate hi, create lo
            if s[hi] >= 1 and s[lo] + 1 <= cap:
                t = s.copy()
                t[hi] -= 1
                t[lo] += 1
                row = basis.index_bytes(t.tobytes())
                amp = math.sqrt(s[hi] * (s[lo] + 1))
                M[row, col] += fwd * amp * np.exp(-1j * theta * float(s[lo]))
            # annihilate lo, create hi
            if s[lo] >= 1 and s[hi] + 1 <= cap:
                t = s.copy()
                t[lo] -= 1
                t[hi] += 1
                row = basis.index_bytes(t.tobytes())
                amp = math.sqrt(s[lo] * (s[hi] + 1))
                M[row, col] += bwd * amp * np.exp(1j * theta * float(s[lo] - 1))
    return M


def _rung_string(occ: np.ndarray, j: int, L: int) -> float:
    """Sum over the A tail (rungs >= j) and the B head (rungs < j)."""
    return float(occ[j : L].sum() + occ[L : L + j].sum())


def build_inter(params: ModelParams, basis: BasisTable) -> np.ndarray:
    """Rung-coupling sub-matrix.

    Per rung j:  +Jp e^{+i theta Phi_j} b+_{j,B} b_{j,A}   (phase after the hop)
                 +Jp b+_{j,A} b_{j,B} e^{-i theta Phi_j}   (phase before the hop)
    where Phi_j counts leg-A occupations at rungs >= j plus leg-B
    occupations at rungs < j (never the rung-j B site).
    """
    _check_basis(params, basis)
    L, cap, theta, Jp = params.L, params.cap, params.theta, params.Jp
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    if Jp == 0.0:
        return M
    for col, s in enumerate(basis.states):
        for j in range(L):
            sa, sb = j, L + j
            # A -> B at rung j; phase on the post-hop state
            if s[sa] >= 1 and s[sb] + 1 <= cap:
                t = s.copy()
                t[sa] -= 1
                t[sb] += 1
                row = basis.index_bytes(t.tobytes())
                amp = math.sqrt(s[sa] * (s[sb] + 1))
                M[row, col] += Jp * amp * np.exp(1j * theta * _rung_string(t, j, L))
            # B -> A at rung j; phase on the pre-hop state
            if s[sb] >= 1 and s[sa] + 1 <= cap:
                t = s.copy()
                t[sb] -= 1
                t[sa] += 1
                row = basis.index_bytes(t.tobytes())
                amp = math.sqrt(s[sb] * (s[sa] + 1))
                M[row, col] += Jp * amp * np.exp(-1j * theta * _rung_string(s, j, L))
    return M


def build_onsite(params: ModelParams, basis: BasisTable) -> np.ndarray:
    """Diagonal sub-matrix (U/2) sum n(n-1) + mu (N_A - N_B)."""
    _check_basis(params, basis)
    occ = basis.states
    L = params.L
    hubbard = 0.5 * params.U * (occ * (occ - 1)).sum(axis=1)
    stagger = params.mu * (occ[:, :L].sum(axis=1) - occ[:, L:].sum(axis=1))
    return np.diag((hubbard + stagger).astype(complex))


def build_full(
    params: ModelParams, basis: BasisTable | None = None, keep_terms: bool = True
) -> HMatrix:
    """Sum of the intra-leg, rung, and onsite sub-matrices."""
    if basis is None:
        basis = make_basis(params)
    terms = {
        "intra_A": build_intra(params, basis, LEG_A),
        "intra_B": build_intra(params, basis, LEG_B),
        "inter": build_inter(params, basis),
        "onsite": build_onsite(params, basis),
    }
    entries = terms["intra_A"] + terms["intra_B"] + terms["inter"] + terms["onsite"]
    return HMatrix(params, basis, entries, terms if keep_terms else None)


def build_full_via_anyons(params: ModelParams, basis: BasisTable | None = None) -> HMatrix:
    """Independent construction from string-dressed operator products.

    Assembles -J e^{+-a} a+_i a_k along the legs, +Jp (a+_{jA} a_{jB} + h.c.)
    on the rungs, and the onsite part from number operators a+_i a_i.
    Must equal :func:`build_full` entrywise; tests enforce 1e-12.
    """
    if basis is None:
        basis = make_basis(params)
    _check_basis(params, basis)
    L = params.L
    lower = build_basis(L, params.N - 1, params.cap)
    ann = {
        site: anyon_matrix(basis, lower, site, params.theta).entries
        for site in range(1, 2 * L + 1)
    }

    def hop(dst: int, src: int) -> np.ndarray:
        return ann[dst].conj().T @ ann[src]

    dim = basis.dim
    terms: dict[str, np.ndarray] = {}
    for name, off, a in (("intra_A", 0, params.alpha), ("intra_B", L, -params.alpha)):
        M = np.zeros((dim, dim), dtype=complex)
        for j in range(1, L):
            M += -params.J * math.exp(a) * hop(off + j, off + j + 1)
            M += -params.J * math.exp(-a) * hop(off + j + 1, off + j)
        terms[name] = M
    inter = np.zeros((dim, dim), dtype=complex)
    for j in range(1, L + 1):
        inter += params.Jp * (hop(L + j, j) + hop(j, L + j))
    terms["inter"] = inter
    onsite = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim)
    for site in range(1, 2 * L + 1):
        n = hop(site, site)
        onsite += 0.5 * params.U * (n @ n - n)
        sign = 1.0 if site <= L else -1.0
        onsite += sign * params.mu * n
    terms["onsite"] = onsite
    entries = terms["intra_A"] + terms["intra_B"] + terms["inter"] + terms["onsite"]
    return HMatrix(params, basis, entries, terms)


def dump_matrix(M: np.ndarray, path: str, threshold: float = 0.0):
    """Write nonzero entries as "row col re im" lines (0-based indices)."""
    arr = np.asarray(M)
    with open(path, "w") as fh:
        for (r, c) in np.argwhere(np.abs(arr) > threshold):
            v = complex(arr[r, c])
            fh.write(f"{r} {c} {v.real!r} {v.imag!r}\n")
