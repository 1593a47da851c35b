import random

import pytest

from lascar_lab import expanded as ex
from lascar_lab import linalg as la
from lascar_lab.errors import BoundExceeded, Inapplicable
from lascar_lab.structures import PureSetBackend, VectorSpaceBackend, make_backend

import oracles


def gl1(q):
    return q - 1


@pytest.mark.parametrize("q,size", [(2, 2), (2, 3), (3, 2), (4, 2), (5, 2)])
def test_line_window_counts(q, size):
    W = ex.build_window(VectorSpaceBackend(q), 1, size)
    lines = oracles.projective_points(q, size)
    assert len(W.closed_sets) == lines
    assert len(W.triples) == lines * lines * gl1(q)
    for C in W.closed_sets:
        assert len(W.self_maps(C)) == gl1(q)


def test_gf3_size2_window_values():
    # frozen: (3^2 - 1)/(3 - 1) = 4 lines and |GL(1, 3)| = 2
    W = ex.build_window(VectorSpaceBackend(3), 1, 2)
    assert len(W.closed_sets) == 4
    assert [len(W.self_maps(C)) for C in W.closed_sets] == [2, 2, 2, 2]
    assert len(W.triples) == 32


def test_depth_two_window_counts():
    q, n = 2, 3
    W = ex.build_window(VectorSpaceBackend(q), 2, n)
    lines, planes = oracles.projective_points(q, n), oracles.projective_points(q, n)
    assert len(W.closed_sets) == lines + planes
    expected = lines ** 2 * oracles.gl_order_formula(q, 1) + planes ** 2 * oracles.gl_order_formula(q, 2)
    assert len(W.triples) == expected


def test_pure_window_counts():
    W = ex.build_window(PureSetBackend(), 1, 3)
    assert len(W.closed_sets) == 3 and len(W.triples) == 9
    W2 = ex.build_window(PureSetBackend(), 2, 3)
    # singletons: 3 x 3 x 1; pairs: 3 x 3 x 2
    assert len(W2.triples) == 9 + 18


def test_finite_window_uses_structure_automorphisms():
    b = make_backend({"kind": "finite", "structure": {"size": 3, "relations": [
        {"arity": 2, "tuples": [[0, 1], [1, 2], [2, 0]]}]}})
    W = ex.build_window(b, 1)
    # acl of any point is everything; Aut_M(M) is the rotation group
    assert len(W.closed_sets) == 1 and len(W.triples) == 3


@pytest.mark.parametrize("q,size", [(2, 3), (3, 2), (4, 2)])
def test_window_is_a_groupoid(q, size):
    W = ex.build_window(VectorSpaceBackend(q), 1, size)
    assert ex.groupoid_check(W) == []
    assert ex.well_formed(W) == []


def test_predicates():
    b = VectorSpaceBackend(3)
    W = ex.build_window(b, 1, 2)
    C = W.closed_sets[0]
    t = W.self_maps(C)[1]
    assert ex.eval_identity(W, ex.Triple.identity(C)) and not ex.eval_identity(W, t)
    assert ex.eval_Dom(W, t, C) and ex.eval_Cod(W, t, C)
    assert ex.eval_compose(W, t, t, ex.Triple.identity(C))  # x -> 2x has order 2
    assert ex.eval_inverse(W, t, t)
    # two maps on different lines extend jointly; two maps on the same line with different scalars do not
    D = W.closed_sets[1]
    assert ex.eval_En(W, [t, W.self_maps(D)[0]])
    assert not ex.eval_En(W, [t, ex.Triple.identity(C)])
    assert ex.eval_Pn(W, W.closed_sets[2], [C, D])


def test_identity_is_an_isomorphism_and_scrambling_is_not():
    W = ex.build_window(VectorSpaceBackend(3), 1, 2)
    assert ex.iso_check(W, W, ex.WindowMap.identity(W))
    rng = random.Random(1)
    m = dict(ex.WindowMap.identity(W).mapping)
    a, b = rng.sample([t for t in W.triples if not t.is_identity], 2)
    m[a], m[b] = b, a
    res = ex.iso_check(W, W, ex.WindowMap(m, W))
    assert not res and res.violation


def test_conjugation_by_automorphism_is_an_isomorphism():
    b = VectorSpaceBackend(3)
    W = ex.build_window(b, 1, 2)
    h = b.random_automorphism(2, random.Random(4))
    m = {}
    for t in W.triples:
        K, Kp = b.image_closed(h, t.K), b.image_closed(h, t.Kp)
        m[t] = W.require(K, b.conjugate_map(h, t.map), Kp)
    assert ex.iso_check(W, W, ex.WindowMap(m, W))


def test_window_cap():
    with pytest.raises(BoundExceeded):
        ex.build_window(VectorSpaceBackend(3), 1, 3, cap=50)


def test_pool_window():
    b = VectorSpaceBackend(4)
    e0, e1 = la.basis_vector(0), la.basis_vector(1)
    W = ex.build_window(b, 1, pool=[e0, e1, la.add(b.F, e0, e1)])
    assert len(W.closed_sets) == 3 and len(W.triples) == 27


def test_orbital_structure_on_pure_sets():
    O = ex.orbital_structure(PureSetBackend(), 4, 3)
    # equality types of n-tuples: Bell numbers restricted to 4 points
    assert [len(O.classes(n)) for n in (1, 2, 3)] == [1, 2, 5]
    assert O.related((0, 1), (2, 3)) and not O.related((0, 0), (0, 1))


def test_orbital_structure_needs_closed_points():
    with pytest.raises(Inapplicable):
        ex.orbital_structure(VectorSpaceBackend(2), 2, 2)


def test_window_json():
    W = ex.build_window(VectorSpaceBackend(2), 1, 2)
    data = W.to_json()
    assert len(data["closed_sets"]) == 3 and len(data["triples"]) == 9
