import numpy as np
import pytest

from anyonladder.fock import build_basis, index_of
from anyonladder.hamiltonian import ModelParams, build_full, make_basis
from anyonladder.spectral import conjugation_asymmetry, eig
from anyonladder.symmetry import build_K, k_conjugate, residual

THETAS = (0.0, 0.3, 0.5 * np.pi, 0.8 * np.pi, np.pi)


def test_phase_counts_onsite_pairs():
    basis = build_basis(1, 2, n_cap=2)
    K = build_K(basis, 0.5 * np.pi)
    doublon = index_of(basis, np.array([2, 0]))
    single = index_of(basis, np.array([1, 1]))
    assert K.phases[doublon] == pytest.approx(-1j)  # one pair -> exp(-i pi/2)
    assert K.phases[single] == pytest.approx(1.0)
    assert K.antiunitary


def test_permutation_reverses_rungs_per_leg():
    basis = build_basis(3, 2)
    K = build_K(basis, 0.7)
    src = index_of(basis, np.array([1, 1, 0, 0, 0, 0]))  # A1 + A2
    dst = index_of(basis, np.array([0, 1, 1, 0, 0, 0]))  # A2 + A3
    assert K.perm[src] == dst
    assert np.array_equal(K.perm[K.perm], np.arange(basis.dim))
    # the pair-counting phase only sees occupation multisets
    assert np.allclose(K.phases[K.perm], K.phases)


def test_k_conjugate_is_an_involution():
    basis = build_basis(2, 2)
    K = build_K(basis, 0.4 * np.pi)
    rng = np.random.default_rng(7)
    H = rng.normal(size=(basis.dim,) * 2) + 1j * rng.normal(size=(basis.dim,) * 2)
    assert np.allclose(k_conjugate(K, k_conjugate(K, H)), H, atol=1e-14)


def test_k_conjugate_theta_zero_is_plain_relabeling():
    basis = build_basis(2, 1)
    K = build_K(basis, 0.0)
    rng = np.random.default_rng(3)
    H = rng.normal(size=(basis.dim,) * 2)
    P = np.zeros((basis.dim,) * 2)
    P[K.perm, np.arange(basis.dim)] = 1.0
    assert np.allclose(k_conjugate(K, H), P @ H @ P.T, atol=1e-14)


def test_k_conjugate_rejects_wrong_shape():
    basis = build_basis(2, 1)
    K = build_K(basis, 0.0)
    with pytest.raises(ValueError):
        k_conjugate(K, np.eye(basis.dim + 1))


@pytest.mark.parametrize("theta", THETAS)
def test_intra_and_onsite_terms_respect_symmetry(theta):
    p = ModelParams(L=6, N=2, U=16.0, mu=4.0, theta=theta, Jp=0.1)
    basis = make_basis(p)
    H = build_full(p, basis)
    K = build_K(basis, theta)
    assert residual(K, H.term("intra_A")) <= 1e-12
    assert residual(K, H.term("intra_B")) <= 1e-12
    assert residual(K, H.term("onsite")) <= 1e-12


def test_inter_term_breaks_symmetry_except_boson_point():
    p = ModelParams(L=6, N=2, U=16.0, mu=4.0, theta=0.0, Jp=0.1)
    basis = make_basis(p)
    K = build_K(basis, 0.0)
    assert residual(K, build_full(p, basis).term("inter")) <= 1e-12

    p = p.with_(theta=0.4 * np.pi)
    K = build_K(basis, p.theta)
    assert residual(K, build_full(p, basis).term("inter")) > 1e-3


def test_broken_residual_does_not_imply_complex_spectrum():
    # At theta=pi the rung string makes the full residual O(Jp), yet H is
    # real there, so eigenvalues still come in conjugate pairs.
    p = ModelParams(L=6, N=2, U=16.0, mu=4.0, theta=np.pi, Jp=0.1)
    basis = make_basis(p)
    H = build_full(p, basis)
    assert residual(build_K(basis, np.pi), H.entries) > 0.1
    assert np.abs(H.entries.imag).max() <= 1e-12
    assert conjugation_asymmetry(eig(H.entries)) <= 1e-8


def test_residual_norms():
    p = ModelParams(L=4, N=2, U=16.0, mu=4.0, theta=0.4 * np.pi, Jp=0.1)
    basis = make_basis(p)
    H = build_full(p, basis, keep_terms=False)
    K = build_K(basis, p.theta)
    assert residual(K, H.entries, norm="fro") >= residual(K, H.entries, norm="max")
    with pytest.raises(ValueError):
        residual(K, H.entries, norm="nuc")
