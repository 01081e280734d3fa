"""Bosonic and string-dressed ladder operators between particle sectors.

Annihilation at a linear site maps the N-particle basis to the
(N-1)-particle basis.  The anyonic operator is the bosonic one composed
with a diagonal string phase exp(-i*theta * sum of occupations strictly
below the site) evaluated in the source sector.  All public ``site``
arguments are 1-based linear indices (see :mod:`anyonladder.fock`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import BasisTable, build_basis


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex matrix between two (possibly different) sectors."""

    dim_out: int
    dim_in: int
    entries: np.ndarray

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.dim_in, self.dim_out, self.entries.conj().T)


def apply_annihilation(s: np.ndarray, site: int) -> tuple[np.ndarray | None, float]:
    """Act with b_site on occupation vector s.

    Returns (s', sqrt(occ[site])); (None, 0.0) when the site is empty.
    ``site`` is 1-based; out-of-range sites are an error.
    """
    arr = np.asarray(s, dtype=np.int64)
    if not 1 <= site <= arr.shape[0]:
        raise ValueError(f"site {site} outside 1..{arr.shape[0]}")
    n = arr[site - 1]
    if n == 0:
        return None, 0.0
    out = arr.copy()
    out[site - 1] -= 1
    return out, float(np.sqrt(n))


def jw_string_phase(s: np.ndarray, site: int, theta: float) -> complex:
    """String phase exp(-i*theta * sum_{k<site} occ[k]) of state s."""
    arr = np.asarray(s)
    if not 1 <= site <= arr.shape[0]:
        raise ValueError(f"site {site} outside 1..{arr.shape[0]}")
    return complex(np.exp(-1j * theta * float(arr[: site - 1].sum())))


def boson_matrix(basis_N: BasisTable, basis_Nminus1: BasisTable, site: int) -> OperatorMatrix:
    """Matrix of the bosonic annihilation b_site from basis_N to basis_Nminus1."""
    _check_sectors(basis_N, basis_Nminus1)
    M = np.zeros((basis_Nminus1.dim, basis_N.dim), dtype=complex)
    col = site - 1
    if not 0 <= col < 2 * basis_N.L:
        raise ValueError(f"site {site} outside 1..{2 * basis_N.L}")
    for i, s in enumerate(basis_N.states):
        n = s[col]
        if n == 0:
            continue
        t = s.copy()
        t[col] -= 1
        j = basis_Nminus1.index_bytes(t.tobytes())
        if j is not None:
            M[j, i] = np.sqrt(n)
    return OperatorMatrix(basis_Nminus1.dim, basis_N.dim, M)


def anyon_matrix(
    basis_N: BasisTable, basis_Nminus1: BasisTable, site: int, theta: float
) -> OperatorMatrix:
    """Matrix of the string-dressed annihilation a_site = b_site * string.

    The string is a diagonal unitary in the source (N-particle) sector,
    so columns keep the bosonic norms.
    """
    b = boson_matrix(basis_N, basis_Nminus1, site)
    col = site - 1
    string = np.exp(-1j * theta * basis_N.states[:, :col].sum(axis=1).astype(float))
    return OperatorMatrix(b.dim_out, b.dim_in, b.entries * string[np.newaxis, :])


def _check_sectors(basis_N: BasisTable, basis_Nminus1: BasisTable):
    if basis_N.L != basis_Nminus1.L or basis_N.n_cap != basis_Nminus1.n_cap:
        raise ValueError("bases must share L and n_cap")
    if basis_N.N != basis_Nminus1.N + 1:
        raise ValueError(
            f"sector mismatch: expected N and N-1, got {basis_N.N} and {basis_Nminus1.N}"
        )


def _cap_safe_columns(basis: BasisTable) -> np.ndarray:
    """Indices of states with every occupation <= n_cap - 1."""
    return np.flatnonzero((basis.states <= basis.n_cap - 1).all(axis=1))


def check_anyon_commutators(
    L: int,
    n_cap: int,
    theta: float,
    tol: float = 1e-12,
    sectors: tuple[int, ...] = (1, 2, 3),
) -> float:
    """Max residual of the deformed commutation relations of a_site.

    For every site pair (j, k) and every listed particle sector, the
    operator-norm residuals of

        a_j a_k   - e^{+i theta sgn(j-k)} a_k a_j
        a_j a_k^+ - e^{-i theta sgn(j-k)} a_k^+ a_j - delta_{jk}

    are evaluated with inputs restricted to the cap-safe subspace
    (every occupation <= n_cap - 1), where the bosonic truncation is
    invisible to one added particle.  The sign in the exponents is the
    one realized by the left-counting string; the relations with the
    opposite labeling hold after swapping which operator is applied
    first.  Returns the maximum residual; ``tol`` is the pass threshold
    used by callers (the value itself is returned unthresholded).
    """
    if n_cap < 2:
        raise ValueError("n_cap must be >= 2 so a cap-safe subspace exists")
    n_sites = 2 * L
    bases: dict[int, BasisTable] = {}

    def basis(n: int) -> BasisTable:
        if n not in bases:
            bases[n] = build_basis(L, n, n_cap)
        return bases[n]

    def a(site: int, n: int) -> np.ndarray:
        """(n-1)-sector <- n-sector annihilation matrix."""
        return anyon_matrix(basis(n), basis(n - 1), site, theta).entries

    worst = 0.0
    for N in sectors:
        if N < 1 or (n_cap - 1) * n_sites < N:
            continue
        safe = _cap_safe_columns(basis(N))
        if safe.size == 0:
            continue
        for j in range(1, n_sites + 1):
            for k in range(1, n_sites + 1):
                sgn = np.sign(j - k)
                # a_j a_k - e^{+i theta sgn} a_k a_j : N -> N-2
                if N >= 2:
                    d1 = a(j, N - 1) @ a(k, N) - np.exp(1j * theta * sgn) * (
                        a(k, N - 1) @ a(j, N)
                    )
                    worst = max(worst, np.linalg.norm(d1[:, safe], 2))
                # a_j a_k^+ - e^{-i theta sgn} a_k^+ a_j - delta : N -> N
                up = a(j, N + 1) @ a(k, N + 1).conj().T
                down = a(k, N).conj().T @ a(j, N)
                d2 = up - np.exp(-1j * theta * sgn) * down
                if j == k:
                    d2 = d2 - np.eye(basis(N).dim)
                worst = max(worst, np.linalg.norm(d2[:, safe], 2))
    return float(worst)
