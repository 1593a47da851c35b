import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import totient

from lascar_lab import expanded as ex
from lascar_lab import linalg as la
from lascar_lab import reconstruction as rc
from lascar_lab.errors import NotAnIsomorphism, PreconditionError, WindowOverflow
from lascar_lab.structures import PureSetBackend, SupportPerm, VectorSpaceBackend

import oracles

E0, E1 = la.basis_vector(0), la.basis_vector(1)


def gf4_pool_window():
    b = VectorSpaceBackend(4)
    return b, ex.build_window(b, 1, pool=[E0, E1, la.add(b.F, E0, E1)])


@settings(max_examples=20)
@given(st.sampled_from([2, 3, 4]), st.integers(0, 10 ** 6))
def test_roundtrip_inner_and_semilinear(q, seed):
    b = VectorSpaceBackend(q)
    W = ex.build_window(b, 1, 2)
    rng = random.Random(seed)
    alpha = rc.Conjugation(b, rc.random_semilinear(b, 2, rng))
    g = b.random_automorphism(2, rng)
    assert rc.check_roundtrip(alpha, g, W)
    beta = rc.Conjugation(b, rc.random_semilinear(b, 2, rng))
    assert rc.check_functoriality(alpha, beta, W)


def test_roundtrip_pure_sets():
    b = PureSetBackend()
    W = ex.build_window(b, 1, 4)
    rng = random.Random(2)
    for _ in range(10):
        alpha = rc.Conjugation(b, b.random_automorphism(4, rng))
        beta = rc.Conjugation(b, b.random_automorphism(4, rng))
        g = b.random_automorphism(4, rng)
        assert rc.check_roundtrip(alpha, g, W)
        assert rc.check_functoriality(alpha, beta, W)


def test_f_alpha_is_a_window_automorphism():
    b = VectorSpaceBackend(3)
    W = ex.build_window(b, 1, 2)
    alpha = rc.Conjugation(b, b.random_automorphism(2, random.Random(7)))
    assert ex.iso_check(W, W, rc.f_from_alpha(alpha, W))
    assert rc.f_from_alpha(rc.Conjugation.identity(b), W).is_identity()


def test_f_alpha_reports_window_overflow():
    b = PureSetBackend()
    W = ex.build_window(b, 1, 2)
    with pytest.raises(WindowOverflow) as exc:
        rc.f_from_alpha(rc.Conjugation(b, SupportPerm({0: 5, 5: 0})), W)
    assert exc.value.required == 6


def test_alpha_from_scrambled_map_is_rejected():
    b = VectorSpaceBackend(3)
    W = ex.build_window(b, 1, 2)
    m = dict(ex.WindowMap.identity(W).mapping)
    C = W.closed_sets[0]
    # send the scalar-2 self-map of one line to the identity: the glued map is not linear
    t = W.self_maps(C)[1]
    m[t], m[ex.Triple.identity(C)] = ex.Triple.identity(C), t
    g = la.SemilinearMap(3, ((2, 0), (0, 2)))
    assert t.map[E0] == la.scale(b.F, 2, E0) or t.map[la.scale(b.F, 2, E0)] == E0
    with pytest.raises(NotAnIsomorphism):
        rc.alpha_from_f(ex.WindowMap(m, W), g, W)


def test_frobenius_kernel_element_is_squaring():
    b, W = gf4_pool_window()
    f = rc.f_from_alpha(rc.Conjugation(b, rc.frobenius_map(4, 1)), W)
    assert ex.iso_check(W, W, f)
    ke = rc.kernel_extract(f, 4, W)
    squaring = tuple(oracles.gf_mul(4, x, x) for x in range(1, 4))
    assert squaring == (1, 3, 2)
    assert ke.common() == squaring
    assert len(ke.per_line) == 3


def test_scalar_conjugation_gives_trivial_kernel_element():
    b, W = gf4_pool_window()
    h = la.SemilinearMap(4, ((2, 0), (0, 2)))
    ke = rc.kernel_extract(rc.f_from_alpha(rc.Conjugation(b, h), W), 4, W)
    assert ke.common() == (1, 2, 3)


def test_kernel_extract_rejects_line_moving_maps():
    b, W = gf4_pool_window()
    h = la.SemilinearMap(4, ((0, 1), (1, 0)))
    with pytest.raises(PreconditionError):
        rc.kernel_extract(rc.f_from_alpha(rc.Conjugation(b, h), W), 4, W)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_realizable_kernel_values_are_unit_automorphisms(q):
    b = VectorSpaceBackend(q)
    W = ex.build_window(b, 1, pool=[E0, E1, la.add(b.F, E0, E1)])
    vals = rc.realizable_kernel_values(W)
    assert (tuple(range(1, q))) in vals
    assert len(vals) <= totient(q - 1) == rc.aut_of_cyclic_order(q - 1)
    F = b.F
    for v in vals:
        f = dict(zip(range(1, q), v))
        assert all(f[F.mul(x, y)] == F.mul(f[x], f[y]) for x in f for y in f)


def test_realizable_values_for_gf4():
    _, W = gf4_pool_window()
    assert rc.realizable_kernel_values(W) == [(1, 2, 3), (1, 3, 2)]


def test_aut_of_cyclic_order_matches_totient():
    for n in range(1, 30):
        assert rc.aut_of_cyclic_order(n) == totient(n)


def test_scalar_matrices_are_the_line_fixers():
    b = VectorSpaceBackend(3)
    assert rc.phi_trivial_forces_scalar(b, la.SemilinearMap(3, ((2, 0), (0, 2))), 2) == (True, True)
    assert rc.phi_trivial_forces_scalar(b, la.SemilinearMap(3, ((1, 0), (0, 2))), 2) == (False, False)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_diagram_and_section(q):
    b = VectorSpaceBackend(q)
    W = ex.build_window(b, 1, 3)
    G = rc.geometry_of_window(W)
    rng = random.Random(q)
    actions = [rc.Conjugation(b, rc.random_semilinear(b, 3, rng)) for _ in range(4)]
    samples = [rc.phi_map(rc.random_semilinear(b, 3, rng), G, b) for _ in range(3)]
    rep = rc.diagram_check(actions, W, G, samples)
    assert rep.ok and all(rep.commutes) and len(rep.section) == 3


def test_semilinear_search_recovers_maps_up_to_scalars():
    b = VectorSpaceBackend(4)
    W = ex.build_window(b, 1, 3)
    G = rc.geometry_of_window(W)
    rng = random.Random(11)
    for _ in range(5):
        h = rc.random_semilinear(b, 3, rng)
        g = rc.phi_map(h, G, b)
        assert g.certified
        found = rc.semilinear_search(g, 4, 3, G, b)
        assert found.frobenius == h.frobenius
        assert rc.phi_map(found, G, b) == g
        assert rc.pi_map(rc.Conjugation(b, found), W, G) == g


def test_semilinear_search_needs_dimension_three():
    b = VectorSpaceBackend(2)
    W = ex.build_window(b, 1, 2)
    G = rc.geometry_of_window(W)
    with pytest.raises(PreconditionError):
        rc.semilinear_search(rc.phi_map(b.identity_aut(), G, b), 2, 2, G, b)


def test_point_maps_compose():
    b = VectorSpaceBackend(2)
    W = ex.build_window(b, 1, 3)
    G = rc.geometry_of_window(W)
    rng = random.Random(5)
    h1, h2 = b.random_automorphism(3, rng), b.random_automorphism(3, rng)
    assert rc.phi_map(h1 @ h2, G, b) == rc.phi_map(h1, G, b) @ rc.phi_map(h2, G, b)
