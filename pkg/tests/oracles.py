"""Brute-force reference implementations used to freeze expected values.

Everything here avoids the package's own algorithms: field arithmetic goes
through sympy polynomials, groups are enumerated from all permutations, and
closures are read off from full element lists.
"""

from itertools import permutations, product

import networkx as nx
from sympy import GF as SymGF, Poly, symbols
from sympy.combinatorics import Permutation, PermutationGroup

X = symbols("x")

MODULI = {4: [1, 1, 1], 8: [1, 0, 1, 1], 9: [1, 2, 2], 16: [1, 0, 0, 1, 1]}  # high degree first


def _factor(q):
    for p in (2, 3, 5, 7, 11, 13):
        r, m = 0, q
        while m % p == 0:
            m, r = m // p, r + 1
        if m == 1:
            return p, r


def _to_poly(a, p, r):
    coeffs = []
    for _ in range(r):
        coeffs.append(a % p)
        a //= p
    return Poly(list(reversed(coeffs)), X, domain=SymGF(p))


def _from_poly(P, p):
    a = 0
    for c in P.all_coeffs():
        a = a * p + int(c) % p
    return a


def gf_mul(q, a, b):
    p, r = _factor(q)
    if r == 1:
        return a * b % p
    mod = Poly(MODULI[q], X, domain=SymGF(p))
    return _from_poly((_to_poly(a, p, r) * _to_poly(b, p, r)).rem(mod), p)


def gf_add(q, a, b):
    p, r = _factor(q)
    out, place = 0, 1
    for _ in range(r):
        out += ((a % p + b % p) % p) * place
        a, b, place = a // p, b // p, place * p
    return out


# vector spaces over a prime field, dense tuples

def span_dense(p, vectors, n):
    """All F_p-combinations of dense vectors of length n."""
    out = set()
    for coeffs in product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vectors)) % p for i in range(n)))
    return out or {tuple([0] * n)}


def rank_dense(p, vectors, n):
    size = len(span_dense(p, vectors, n))
    r = 0
    while p ** r < size:
        r += 1
    return r


def matrices(p, n):
    return [tuple(tuple(m[i * n:(i + 1) * n]) for i in range(n)) for m in product(range(p), repeat=n * n)]


def mat_vec(p, M, v):
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) % p for i in range(len(M)))


def invertible(p, M):
    n = len(M)
    images = {mat_vec(p, M, v) for v in product(range(p), repeat=n)}
    return len(images) == p ** n


def gl(p, n):
    return [M for M in matrices(p, n) if invertible(p, M)]


def gl_order_formula(q, n):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def subspaces_dense(p, n):
    """Every subspace of F_p^n as a frozenset of dense vectors."""
    seen = set()
    vs = list(product(range(p), repeat=n))
    for k in range(n + 1):
        for gens in product(vs, repeat=k):
            seen.add(frozenset(span_dense(p, list(gens), n)))
    return seen


def projective_points(q, n):
    return (q ** n - 1) // (q - 1)


# finite relational structures

def automorphisms(size, relations):
    """All permutations (as tuples) preserving every relation."""
    rels = [(ar, frozenset(map(tuple, tuples))) for ar, tuples in relations]
    out = []
    for perm in permutations(range(size)):
        if all(frozenset(tuple(perm[x] for x in t) for t in ts) == ts for _, ts in rels):
            out.append(perm)
    return out


def automorphisms_networkx(size, relations):
    """Automorphisms of a structure with binary relations only, via digraph matching."""
    G = nx.DiGraph()
    G.add_nodes_from(range(size))
    for idx, (ar, tuples) in enumerate(relations):
        assert ar == 2
        for a, b in tuples:
            if a == b:
                G.nodes[a].setdefault("loops", set()).add(idx)
            elif G.has_edge(a, b):
                G[a][b]["rels"].add(idx)
            else:
                G.add_edge(a, b, rels={idx})
    for v in G.nodes:
        G.nodes[v]["loops"] = frozenset(G.nodes[v].get("loops", ()))
    gm = nx.algorithms.isomorphism.DiGraphMatcher(
        G, G, node_match=lambda a, b: a["loops"] == b["loops"],
        edge_match=lambda a, b: a["rels"] == b["rels"])
    return sorted(tuple(m[i] for i in range(size)) for m in gm.isomorphisms_iter())


def fixed_point_closure(group, A, size):
    """Points fixed by every automorphism fixing A pointwise."""
    stab = [g for g in group if all(g[a] == a for a in A)]
    return frozenset(x for x in range(size) if all(g[x] == x for g in stab))


def all_closed_sets(group, size):
    from itertools import combinations
    return {fixed_point_closure(group, A, size) for k in range(size + 1)
            for A in combinations(range(size), k)}


def sympy_group(perms, size):
    gens = [Permutation(list(p)) for p in perms] or [Permutation(list(range(size)))]
    return PermutationGroup(gens)


def random_structure(rng, max_points=6, max_relations=2):
    size = rng.randint(1, max_points)
    rels = []
    for _ in range(rng.randint(0, max_relations)):
        pairs = [(a, b) for a in range(size) for b in range(size)]
        rels.append((2, sorted(rng.sample(pairs, rng.randint(0, len(pairs) // 2)))))
    return size, rels


def structure_json(size, rels):
    return {"size": size, "relations": [{"arity": ar, "tuples": [list(t) for t in ts]} for ar, ts in rels]}
