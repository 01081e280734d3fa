"""Antiunitary rung-inversion symmetry test.

The operator is the composition of complex conjugation, rung inversion
j -> L+1-j on both legs, and the diagonal phase
exp(-i theta sum_sites n(n-1)/2).  It is kept as a
(permutation, diagonal, conjugation) triple; applying it to a matrix is
O(dim^2) and exact, no dense operator product is ever formed.  The
deviation of K H K^dagger from H^dagger is the symmetry residual: zero
means the spectrum of H is constrained to be conjugation-symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import BasisTable


@dataclass(frozen=True)
class KOperator:
    """Antiunitary symmetry candidate as permutation + diagonal phases.

    ``perm[i]`` is the basis index of the rung-inverted image of state
    i; ``phases[i]`` the diagonal phase attached to state i.  Action:
    K|i> = phases[i] |perm[i]> composed with complex conjugation.
    """

    perm: np.ndarray
    phases: np.ndarray
    theta: float
    antiunitary: bool = True


def build_K(basis: BasisTable, theta: float) -> KOperator:
    """Rung inversion + conjugation + pair-counting diagonal phase.

    The phase exp(-i theta sum n(n-1)/2) is invariant under the
    inversion permutation (it only reorders site occupations), so the
    order of the diagonal and the permutation does not matter.
    """
    L = basis.L
    occ = basis.states
    inverted = np.concatenate([occ[:, :L][:, ::-1], occ[:, L:][:, ::-1]], axis=1)
    perm = np.empty(basis.dim, dtype=np.int64)
    for i in range(basis.dim):
        j = basis.index_bytes(np.ascontiguousarray(inverted[i]).tobytes())
        if j is None:
            raise ValueError("basis is not closed under rung inversion")
        perm[i] = j
    pairs = (occ * (occ - 1)).sum(axis=1) / 2.0
    phases = np.exp(-1j * theta * pairs)
    return KOperator(perm=perm, phases=phases, theta=float(theta))


def k_conjugate(K: KOperator, H: np.ndarray) -> np.ndarray:
    """K H K^dagger for antiunitary K = (permutation * diagonal) o conj.

    Entry (perm[i], perm[j]) of the result is
    phases[i] * conj(H[i, j]) * conj(phases[j]).
    """
    A = np.asarray(H, dtype=complex)
    if A.shape != (K.perm.size, K.perm.size):
        raise ValueError(f"shape mismatch: H {A.shape} vs dim {K.perm.size}")
    out = np.empty_like(A)
    transformed = K.phases[:, None] * A.conj() * K.phases.conj()[None, :]
    out[np.ix_(K.perm, K.perm)] = transformed
    return out


def residual(K: KOperator, H_part: np.ndarray, norm: str = "max") -> float:
    """Deviation of K H K^dagger from H^dagger.

    norm="max" (default) is the entrywise max-abs; norm="fro" the
    Frobenius norm.
    """
    D = k_conjugate(K, H_part) - np.asarray(H_part, dtype=complex).conj().T
    if norm == "max":
        return float(np.max(np.abs(D))) if D.size else 0.0
    if norm == "fro":
        return float(np.linalg.norm(D))
    raise ValueError(f"norm must be 'max' or 'fro', got {norm!r}")
