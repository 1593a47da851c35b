from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from lascar_lab import groups as gr
from lascar_lab.errors import BoundExceeded

import oracles


def perms(n):
    return st.permutations(list(range(n))).map(tuple)


@given(perms(5), perms(5), perms(5))
def test_composition_is_associative_with_inverses(p, q, r):
    assert gr.compose(p, gr.compose(q, r)) == gr.compose(gr.compose(p, q), r)
    assert gr.compose(p, gr.inverse(p)) == gr.identity(5)
    assert gr.compose(p, q)[0] == p[q[0]]


@given(st.lists(perms(5), max_size=3))
def test_closure_order_matches_sympy(gens):
    G = gr.PermGroup(5, gens)
    assert len(G) == oracles.sympy_group(gens, 5).order()


def test_closure_cap():
    with pytest.raises(BoundExceeded):
        gr.PermGroup(6, [(1, 0, 2, 3, 4, 5), (1, 2, 3, 4, 5, 0)], cap=100)


def _two_generated_subgroups(G, n):
    # every subgroup of S_4 and smaller is generated by two elements
    return {gr.closure([a, b], n) for a in G for b in G}


def _closed_subsets(G, n):
    elems = sorted(G)
    out = set()
    for k in range(1, len(elems) + 1):
        for S in combinations(elems, k):
            S = frozenset(S)
            if all(gr.compose(a, b) in S for a in S for b in S):
                out.add(S)
    return out


def test_subgroups_of_s3_against_subset_search():
    G = gr.PermGroup.symmetric(3)
    subs = gr.subgroups(G)
    assert set(subs) == _closed_subsets(G.elements, 3)
    assert len(subs) == 6


def test_subgroups_of_s4_against_two_generated():
    G = gr.PermGroup.symmetric(4)
    subs = gr.subgroups(G)
    assert set(subs) == _two_generated_subgroups(G.elements, 4)
    assert len(subs) == 30
    assert [len(s) for s in subs] == sorted(len(s) for s in subs)


def test_normality_against_sympy():
    S4 = gr.PermGroup.symmetric(4)
    big = oracles.sympy_group(S4.generators(), 4)
    for H in gr.subgroups(S4):
        mine = gr.PermGroup(4, elements=H).is_normal_in(S4)
        theirs = oracles.sympy_group(gr.PermGroup(4, elements=H).generators(), 4).is_normal(big)
        assert mine == theirs
    # S4 has exactly 4 normal subgroups: 1, V4, A4, S4
    assert sum(gr.PermGroup(4, elements=H).is_normal_in(S4) for H in gr.subgroups(S4)) == 4


def test_stabilizers_and_orbits():
    G = gr.PermGroup.symmetric(4)
    assert G.orbit(0) == {0, 1, 2, 3}
    assert len(G.pointwise_stabilizer([0, 1])) == 2
    assert len(G.setwise_stabilizer([0, 1])) == 4


def test_quotient_of_s4_by_v4_is_s3():
    S4 = gr.PermGroup.symmetric(4)
    V4 = next(H for H in gr.subgroups(S4) if len(H) == 4 and gr.PermGroup(4, elements=H).is_normal_in(S4))
    reps, table = gr.quotient_table(S4.elements, V4, 4)
    assert len(reps) == 6
    S3 = gr.PermGroup.symmetric(3)
    _, t3 = gr.cayley_table(sorted(S3.elements), gr.compose)
    assert gr.tables_isomorphic(table, t3) is not None


def test_quotient_rejects_non_normal():
    S3 = gr.PermGroup.symmetric(3)
    C2 = gr.closure([(1, 0, 2)], 3)
    with pytest.raises(ValueError):
        gr.quotient_table(S3.elements, C2, 3)


def test_table_isomorphism_distinguishes_z4_and_v4():
    z4 = [[(a + b) % 4 for b in range(4)] for a in range(4)]
    v4 = [[a ^ b for b in range(4)] for a in range(4)]
    assert gr.tables_isomorphic(z4, z4) is not None
    assert gr.tables_isomorphic(z4, v4) is None


@given(st.permutations(list(range(6))))
def test_table_isomorphism_finds_relabellings(relabel):
    S3 = sorted(gr.PermGroup.symmetric(3).elements)
    _, t = gr.cayley_table(S3, gr.compose)
    inv = {v: i for i, v in enumerate(relabel)}
    t2 = [[relabel[t[inv[a]][inv[b]]] for b in range(6)] for a in range(6)]
    f = gr.tables_isomorphic(t, t2)
    assert f is not None
    assert all(f[t[a][b]] == t2[f[a]][f[b]] for a in range(6) for b in range(6))


def test_symmetric_group_elements():
    assert gr.PermGroup.symmetric(4).elements == frozenset(permutations(range(4)))
