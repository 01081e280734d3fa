import numpy as np
import pytest

from anyonladder.fock import build_basis, index_of
from anyonladder.hamiltonian import (
    ModelParams,
    build_full,
    build_full_via_anyons,
    build_inter,
    build_intra,
    build_onsite,
    dump_matrix,
    make_basis,
)

J = 2**-0.5
ALPHA = np.log(2**-0.5)


def occ_index(basis, **sites):
    occ = np.zeros(2 * basis.L, dtype=np.int64)
    for name, n in sites.items():
        leg, rung = name[0], int(name[1:])
        lin = rung if leg == "A" else basis.L + rung
        occ[lin - 1] = n
    return index_of(basis, occ)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(L=0, N=1)
    with pytest.raises(ValueError):
        ModelParams(L=2, N=0)
    with pytest.raises(ValueError):
        ModelParams(L=2, N=1, U=float("inf"))
    p = ModelParams(L=2, N=1, theta=2 * np.pi + 0.3)
    assert p.theta == pytest.approx(0.3)


def test_single_particle_leg_a_is_hatano_nelson():
    p = ModelParams(L=2, N=1, mu=0.0)
    basis = make_basis(p)
    M = build_intra(p, basis, "A")
    a1, a2 = occ_index(basis, A1=1), occ_index(basis, A2=1)
    assert M[a1, a2] == pytest.approx(-J * np.exp(ALPHA))
    assert M[a2, a1] == pytest.approx(-J * np.exp(-ALPHA))
    block = M[np.ix_([a1, a2], [a1, a2])]
    w = np.sort(np.linalg.eigvals(block).real)
    assert w == pytest.approx([-0.70711, 0.70711], abs=1e-5)


def test_leg_b_pumps_the_other_way():
    p = ModelParams(L=2, N=1)
    basis = make_basis(p)
    M = build_intra(p, basis, "B")
    b1, b2 = occ_index(basis, B1=1), occ_index(basis, B2=1)
    assert M[b1, b2] == pytest.approx(-J * np.exp(-ALPHA))
    assert M[b2, b1] == pytest.approx(-J * np.exp(ALPHA))


def test_intra_theta_zero_has_no_phases():
    p = ModelParams(L=3, N=2, theta=0.0)
    basis = make_basis(p)
    M = build_intra(p, basis, "A")
    assert np.allclose(M.imag, 0.0)


def test_occupied_target_picks_up_phase_and_bose_factor():
    # hop j+1 -> j onto an occupied site: -J e^alpha * sqrt(2) * e^{-i theta}
    theta = 0.7
    p = ModelParams(L=2, N=2, theta=theta)
    basis = make_basis(p)
    M = build_intra(p, basis, "A")
    src = occ_index(basis, A1=1, A2=1)
    dst = occ_index(basis, A1=2)
    assert M[dst, src] == pytest.approx(
        -np.sqrt(2) * J * np.exp(ALPHA) * np.exp(-1j * theta)
    )


def test_single_particle_rung_coupling_is_plain():
    p = ModelParams(L=2, N=1, Jp=0.3, theta=0.9)
    basis = make_basis(p)
    M = build_inter(p, basis)
    for rung in (1, 2):
        a = occ_index(basis, **{f"A{rung}": 1})
        b = occ_index(basis, **{f"B{rung}": 1})
        assert M[b, a] == pytest.approx(0.3)
        assert M[a, b] == pytest.approx(0.3)


def test_rung_hop_reads_post_hop_string():
    # two particles on leg A; dropping the rung-1 particle to B passes the
    # string over the remaining A particle: element Jp e^{i theta}
    theta = 0.4 * np.pi
    p = ModelParams(L=2, N=2, Jp=0.05, theta=theta)
    basis = make_basis(p)
    M = build_inter(p, basis)
    src = occ_index(basis, A1=1, A2=1)
    dst = occ_index(basis, B1=1, A2=1)
    assert M[dst, src] == pytest.approx(0.05 * np.exp(1j * theta))
    # the conjugate hop undoes the phase
    assert M[src, dst] == pytest.approx(0.05 * np.exp(-1j * theta))


def test_inter_theta_zero_is_real_symmetric():
    p = ModelParams(L=3, N=2, Jp=0.2, theta=0.0)
    basis = make_basis(p)
    M = build_inter(p, basis)
    assert np.allclose(M.imag, 0.0)
    assert np.allclose(M, M.T)


def test_onsite_diagonal_values():
    p = ModelParams(L=2, N=2, U=16.0, mu=4.0)
    basis = make_basis(p)
    M = build_onsite(p, basis)
    assert np.allclose(M, np.diag(np.diag(M)))
    assert np.allclose(np.diag(M).imag, 0.0)
    assert M[occ_index(basis, A1=2), occ_index(basis, A1=2)].real == pytest.approx(24.0)
    assert M[occ_index(basis, A1=1, B1=1), occ_index(basis, A1=1, B1=1)].real == pytest.approx(0.0)
    assert M[occ_index(basis, B1=1, B2=1), occ_index(basis, B1=1, B2=1)].real == pytest.approx(-8.0)


def test_full_matrix_is_sum_of_terms():
    p = ModelParams(L=3, N=2, Jp=0.1, theta=0.3)
    basis = make_basis(p)
    H = build_full(p, basis)
    total = (
        H.term("intra_A") + H.term("intra_B") + H.term("inter") + H.term("onsite")
    )
    assert np.allclose(H.entries, total, atol=0.0)
    with pytest.raises(KeyError):
        H.term("nope")
    H_bare = build_full(p, basis, keep_terms=False)
    assert np.allclose(H_bare.entries, H.entries)
    with pytest.raises(ValueError):
        H_bare.term("onsite")


def test_hermitian_limit():
    p = ModelParams(L=3, N=2, alpha=0.0, theta=0.0, Jp=0.2)
    H = build_full(p).entries
    assert np.allclose(H, H.conj().T, atol=1e-14)


def test_no_rung_coupling_block():
    p = ModelParams(L=3, N=2, Jp=0.0, theta=0.4 * np.pi)
    H = build_full(p)
    assert np.abs(H.term("inter")).max() == 0.0


def test_trace_is_onsite_only():
    basis = build_basis(3, 2)
    base = ModelParams(L=3, N=2, Jp=0.1, theta=0.3)
    tr0 = np.trace(build_full(base, basis).entries)
    assert tr0.imag == pytest.approx(0.0, abs=1e-12)
    for variant in (
        base.with_(J=1.7),
        base.with_(alpha=0.2),
        base.with_(Jp=0.9),
        base.with_(theta=2.2),
    ):
        tr = np.trace(build_full(variant, basis).entries)
        assert tr == pytest.approx(tr0)
    onsite = build_full(base, basis).term("onsite")
    assert np.trace(onsite) == pytest.approx(tr0)


def test_open_boundaries_have_no_wraparound():
    p = ModelParams(L=4, N=1)
    basis = make_basis(p)
    H = build_full(p, basis).entries
    a1, a4 = occ_index(basis, A1=1), occ_index(basis, A4=1)
    assert H[a1, a4] == 0.0
    assert H[a4, a1] == 0.0


@pytest.mark.parametrize(
    "L, N, theta",
    [
        (2, 2, np.pi),
        (3, 2, 0.4 * np.pi),
        (3, 3, 0.8 * np.pi),
        (4, 2, 0.3),
    ],
)
def test_via_anyons_matches_direct_build(L, N, theta):
    p = ModelParams(L=L, N=N, Jp=0.1, theta=theta)
    basis = make_basis(p)
    d = build_full_via_anyons(p, basis).entries - build_full(p, basis).entries
    assert np.abs(d).max() <= 1e-12


def test_via_anyons_boson_limit_identical():
    p = ModelParams(L=3, N=2, Jp=0.1, theta=0.0)
    basis = make_basis(p)
    d = build_full_via_anyons(p, basis).entries - build_full(p, basis).entries
    assert np.abs(d).max() <= 1e-12


def test_gauge_invariance_without_rung_coupling():
    # with Jp=0 the non-reciprocity is a diagonal similarity on each leg
    base = ModelParams(L=3, N=2, Jp=0.0, theta=0.4 * np.pi)
    basis = make_basis(base)
    w1 = np.linalg.eigvals(build_full(base, basis).entries)
    w2 = np.linalg.eigvals(build_full(base.with_(alpha=0.0), basis).entries)
    w1 = w1[np.lexsort((w1.imag, w1.real))]
    w2 = w2[np.lexsort((w2.imag, w2.real))]
    assert np.abs(w1 - w2).max() <= 1e-9


def test_matrix_dump_roundtrip(tmp_path):
    p = ModelParams(L=2, N=1, Jp=0.1, theta=0.3)
    H = build_full(p).entries
    path = tmp_path / "h.txt"
    dump_matrix(H, str(path))
    M = np.zeros_like(H)
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            continue
        r, c, re, im = line.split()
        M[int(r), int(c)] = float(re) + 1j * float(im)
    assert np.allclose(M, H)
