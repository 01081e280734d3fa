"""Normalized quench evolution under a non-Hermitian Hamiltonian.

The default propagator expands the state in the post-quench biorthogonal
eigenbasis (exact at any time); exponential growth is tamed by pulling
the largest occupied Im E out of every mode before summing, which leaves
the normalized state untouched.  A step-wise matrix-exponential
propagator with the identical output contract serves as fallback for
defective spectra and as the independent cross-check.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .fock import BasisTable
from .hamiltonian import ModelParams, build_full, make_basis
from .spectral import Spectrum, argmax_im, eig

NEAR_DEGENERACY_GAP = 1e-9


class DegenerateSpectrumWarning(UserWarning):
    """Top two Im E nearly equal; the initial-state choice is a tie-break."""


@dataclass(frozen=True)
class QuenchConfig:
    """Pre/post parameter sets differing only in the rung coupling."""

    params_pre: ModelParams
    params_post: ModelParams
    times: np.ndarray

    def __post_init__(self):
        pre, post = self.params_pre, self.params_post
        if pre.with_(Jp=0.0) != post.with_(Jp=0.0):
            raise ValueError("pre and post params may differ only in Jp")
        t = np.asarray(self.times, dtype=float)
        if t.size == 0 or t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise ValueError("time grid must start at 0 and increase strictly")
        object.__setattr__(self, "times", t)


@dataclass(frozen=True)
class QuenchResult:
    """Time series of the observables tracked through a quench."""

    times: np.ndarray
    C_series: np.ndarray
    P_series: np.ndarray
    ipr_series: np.ndarray
    dominant_n: np.ndarray
    dominant_share: np.ndarray
    c0: np.ndarray
    eigenvalues: np.ndarray
    initial_index: int
    near_degenerate: bool
    crossover: float


def initial_state(spec_pre: Spectrum) -> tuple[np.ndarray, int, bool]:
    """Unit-norm right eigenvector with maximal Im E.

    Ties break toward larger Re E then lower index.  Returns
    (state, eigen-index, near_degenerate) and warns when the top-two
    Im E gap is below 1e-9 (the choice is then a tie-break, and
    long-time observables depend on it).
    """
    n = argmax_im(spec_pre)
    im = np.sort(spec_pre.eigenvalues.imag)
    near = bool(im.size >= 2 and im[-1] - im[-2] < NEAR_DEGENERACY_GAP)
    if near:
        warnings.warn(
            "top two Im E nearly degenerate; initial state chosen by tie-break",
            DegenerateSpectrumWarning,
        )
    v = spec_pre.right[:, n]
    return v / np.linalg.norm(v), n, near


def decompose(spec_post: Spectrum, psi: np.ndarray) -> np.ndarray:
    """Biorthogonal coefficients c_n = <L_n|psi>."""
    if spec_post.defective:
        raise ValueError("defective spectrum: biorthogonal decomposition unavailable")
    return spec_post.left.conj().T @ psi


def evolve(spec_post: Spectrum, psi0: np.ndarray, times) -> np.ndarray:
    """Normalized evolved states, one row per time.

    psi(t) ~ sum_n c_n e^{-i E_n t} R_n, computed with the growth
    factors rescaled by the largest occupied Im E so no exponential
    overflows, then normalized to unit norm.
    """
    t = np.asarray(times, dtype=float)
    c = decompose(spec_post, psi0)
    w = spec_post.eigenvalues
    occupied = np.abs(c) > 0.0
    if not occupied.any():
        raise ValueError("initial state has no weight in the eigenbasis")
    im_ref = float(w.imag[occupied].max())
    occ_idx = np.flatnonzero(occupied)
    # exponent (Im E_n - im_ref) * t <= 0 on occupied modes: no overflow
    growth = np.exp(np.outer(t, w.imag[occ_idx] - im_ref))
    phase = np.exp(-1j * np.outer(t, w.real[occ_idx]))
    weights = (growth * phase) * c[occ_idx][np.newaxis, :]
    states = weights @ spec_post.right[:, occ_idx].T
    norms = np.linalg.norm(states, axis=1)
    if np.any(norms == 0.0):
        raise FloatingPointError("state underflowed to zero norm")
    return states / norms[:, np.newaxis]


def evolve_stepping(H, psi0: np.ndarray, times, max_step_norm: float = 0.5) -> np.ndarray:
    """Step-wise matrix-exponential propagation with the same contract.

    Steps are chosen so ||H dt|| <= max_step_norm (Frobenius bound) and
    the state is renormalized after every step; renormalization is a
    positive scalar, so phases match the spectral route exactly.
    """
    A = H.entries if hasattr(H, "entries") else np.asarray(H, dtype=complex)
    t = np.asarray(times, dtype=float)
    hnorm = float(np.linalg.norm(A))
    psi = np.asarray(psi0, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    out = np.empty((t.size, psi.size), dtype=complex)
    prev = 0.0
    for k, tk in enumerate(t):
        dt = tk - prev
        if dt > 0:
            steps = max(1, int(np.ceil(hnorm * dt / max_step_norm)))
            P = sla.expm(-1j * A * (dt / steps))
            for _ in range(steps):
                psi = P @ psi
                psi = psi / np.linalg.norm(psi)
        out[k] = psi / np.linalg.norm(psi)
        prev = tk
    return out


def overlap_series(psis: np.ndarray, psi0: np.ndarray) -> np.ndarray:
    """|<psi(t)|psi0>| for unit-norm rows; equals 1 at t=0 by construction."""
    ref = np.asarray(psi0, dtype=complex)
    ref = ref / np.linalg.norm(ref)
    return np.abs(psis.conj() @ ref)


def ipr(psi: np.ndarray) -> float:
    """Inverse participation ratio sum |psi_i|^4 of a unit-norm state."""
    p = np.abs(psi) ** 2
    return float((p * p).sum())


def crossover_estimate(c0: complex, c1: complex, E0: complex, E1: complex) -> float:
    """Two-mode crossover time |ln|c0/c1|| / |Im E0 - Im E1|.

    Magnitudes throughout.  Returns inf when either coefficient
    vanishes; equal imaginary parts are a precondition violation.
    """
    gap = abs(E0.imag - E1.imag)
    if gap == 0:
        raise ValueError("Im E0 == Im E1: no crossover")
    a0, a1 = abs(c0), abs(c1)
    if a0 == 0 or a1 == 0:
        return float("inf")
    return float(abs(np.log(a0 / a1)) / gap)


def default_time_grid(t_max: float = 1e5, points: int = 200, t_min: float = 0.1) -> np.ndarray:
    """Log-spaced grid with t=0 prepended."""
    if points < 2 or t_max <= t_min or t_min <= 0:
        raise ValueError("bad time-grid parameters")
    return np.concatenate([[0.0], np.geomspace(t_min, t_max, points - 1)])


def run_quench(config: QuenchConfig, basis: BasisTable | None = None) -> QuenchResult:
    """Full pipeline: initial state, evolution, and tracked observables."""
    if basis is None:
        basis = make_basis(config.params_pre)
    H_pre = build_full(config.params_pre, basis, keep_terms=False)
    H_post = build_full(config.params_post, basis, keep_terms=False)
    spec_pre = eig(H_pre)
    spec_post = eig(H_post)
    psi0, n0, near = initial_state(spec_pre)
    if spec_post.defective:
        psis = evolve_stepping(H_post, psi0, config.times)
        c0 = np.full(basis.dim, np.nan, dtype=complex)
        cn_t = None
    else:
        psis = evolve(spec_post, psi0, config.times)
        c0 = decompose(spec_post, psi0)
        im = spec_post.eigenvalues.imag
        logmag = np.log(np.abs(c0), out=np.full(basis.dim, -np.inf), where=np.abs(c0) > 0)
        cn_t = logmag[np.newaxis, :] + np.outer(config.times, im)
    L = basis.L
    occ = basis.states
    edge = (occ[:, L - 1] * occ[:, L]).astype(float)
    prob = np.abs(psis) ** 2
    C = prob @ edge
    P = overlap_series(psis, psi0)
    ipr_s = (prob * prob).sum(axis=1)
    if cn_t is not None:
        dom = np.argmax(cn_t, axis=1)
        rel = np.exp(2 * (cn_t - cn_t.max(axis=1, keepdims=True)))
        share = 1.0 / rel.sum(axis=1)
    else:
        dom = np.full(config.times.size, -1)
        share = np.full(config.times.size, np.nan)
    # two-mode crossover: fastest-growing mode vs the initially dominant one
    crossover = float("nan")
    if cn_t is not None:
        w = spec_post.eigenvalues
        top = int(np.argmax(w.imag))
        lead = int(np.argmax(np.abs(c0)))
        if top != lead and w[top].imag != w[lead].imag:
            crossover = crossover_estimate(c0[top], c0[lead], w[top], w[lead])
    return QuenchResult(
        times=config.times,
        C_series=C,
        P_series=P,
        ipr_series=ipr_s,
        dominant_n=dom,
        dominant_share=share,
        c0=c0,
        eigenvalues=spec_post.eigenvalues,
        initial_index=n0,
        near_degenerate=near,
        crossover=crossover,
    )
