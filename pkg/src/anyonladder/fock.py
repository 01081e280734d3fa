"""Fixed-number bosonic Fock basis on a two-leg ladder.

Sites are addressed by a 1-based linear index with leg A occupying
1..L and leg B occupying L+1..2L, so a rung-j site is ``j`` on leg A
and ``L+j`` on leg B.  Occupation vectors are numpy integer arrays of
length 2L indexed 0-based (array slot ``site-1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

LEG_A = "A"
LEG_B = "B"


@dataclass(frozen=True)
class SiteIndex:
    """One ladder site, addressable by (rung, leg) or linear index."""

    rung: int
    leg: str

    def __post_init__(self):
        if self.leg not in (LEG_A, LEG_B):
            raise ValueError(f"leg must be {LEG_A!r} or {LEG_B!r}, got {self.leg!r}")
        if self.rung < 1:
            raise ValueError(f"rung must be >= 1, got {self.rung}")

    def linear(self, L: int) -> int:
        """1-based linear index: rung on leg A, L+rung on leg B."""
        if not 1 <= self.rung <= L:
            raise ValueError(f"rung {self.rung} outside 1..{L}")
        return self.rung if self.leg == LEG_A else L + self.rung


def linear_site(rung: int, leg: str, L: int) -> int:
    """1-based linear index of (rung, leg) on an L-rung ladder."""
    return SiteIndex(rung, leg).linear(L)


def site_of_linear(site: int, L: int) -> SiteIndex:
    """Inverse of :func:`linear_site`."""
    if not 1 <= site <= 2 * L:
        raise ValueError(f"linear site {site} outside 1..{2 * L}")
    if site <= L:
        return SiteIndex(site, LEG_A)
    return SiteIndex(site - L, LEG_B)


@dataclass(frozen=True)
class BasisTable:
    """Ordered fixed-N occupation basis with O(1) state lookup.

    Attributes
    ----------
    L, N, n_cap : int
        Rung count, total particle number, per-site occupation cap.
    states : (dim, 2L) int64 array
        Occupation vectors in strictly increasing lexicographic order.
    dim : int
        Number of basis states.

    Immutable after construction; safe to share across threads.
    """

    L: int
    N: int
    n_cap: int
    states: np.ndarray
    dim: int
    _lookup: dict = field(repr=False)

    def index_bytes(self, key: bytes):
        return self._lookup.get(key)


def _enumerate_states(n_sites: int, N: int, n_cap: int) -> np.ndarray:
    """All occupation vectors with given total, entries <= n_cap, lex order."""
    out = []
    occ = np.zeros(n_sites, dtype=np.int64)

    def fill(pos: int, remaining: int):
        if pos == n_sites - 1:
            if remaining <= n_cap:
                occ[pos] = remaining
                out.append(occ.copy())
                occ[pos] = 0
            return
        # capacity check prunes branches that cannot place the remainder
        if remaining > n_cap * (n_sites - pos):
            return
        for n in range(min(n_cap, remaining) + 1):
            occ[pos] = n
            fill(pos + 1, remaining - n)
        occ[pos] = 0

    fill(0, N)
    return np.array(out, dtype=np.int64).reshape(len(out), n_sites)


def build_basis(L: int, N: int, n_cap: int | None = None) -> BasisTable:
    """Enumerate the N-particle basis on 2L sites in lexicographic order.

    Parameters
    ----------
    L : int
        Number of rungs (>= 1).
    N : int
        Total particle number (>= 0; the N=0 sector is the vacuum).
    n_cap : int, optional
        Maximum occupation per site.  Defaults to N, which is exact for a
        fixed-N sector (no state can exceed N on one site).

    Raises
    ------
    ValueError
        If the basis would be empty (n_cap * 2L < N) or arguments are
        out of range.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    if n_cap is None:
        n_cap = max(N, 1)
    if n_cap < 1:
        raise ValueError(f"n_cap must be >= 1, got {n_cap}")
    n_sites = 2 * L
    if n_cap * n_sites < N:
        raise ValueError(
            f"empty basis: n_cap*2L = {n_cap * n_sites} cannot hold N = {N}"
        )
    states = _enumerate_states(n_sites, N, n_cap)
    lookup = {s.tobytes(): i for i, s in enumerate(states)}
    return BasisTable(L=L, N=N, n_cap=n_cap, states=states, dim=len(states), _lookup=lookup)


def basis_dim(L: int, N: int, n_cap: int | None = None) -> int:
    """Closed-form dimension; inclusion-exclusion over cap violations."""
    n_sites = 2 * L
    if n_cap is None or n_cap >= N:
        return comb(n_sites + N - 1, N)
    total = 0
    k = 0
    while k * (n_cap + 1) <= N and k <= n_sites:
        rem = N - k * (n_cap + 1)
        total += (-1) ** k * comb(n_sites, k) * comb(n_sites + rem - 1, rem)
        k += 1
    return total


def index_of(basis: BasisTable, s: np.ndarray) -> int | None:
    """Index of occupation vector ``s`` in ``basis``, or None if absent.

    A vector of the right length that violates the particle-number or
    cap constraints is *absent* (returns None); a length mismatch is an
    error.
    """
    arr = np.asarray(s, dtype=np.int64)
    if arr.shape != (2 * basis.L,):
        raise ValueError(f"state length {arr.shape} != (2L,) = ({2 * basis.L},)")
    return basis.index_bytes(arr.tobytes())


def leg_counts(s: np.ndarray) -> tuple[int, int]:
    """Particle counts (N_A, N_B) on the two legs of occupation vector s."""
    arr = np.asarray(s)
    L = arr.shape[-1] // 2
    return int(arr[:L].sum()), int(arr[L:].sum())
