"""Dimension functions, rank independence and pregeometries.

The rank of a finite set is the dimension of its span (vector backend) or
its cardinality (pure sets). Independence is

    A independent from C over B   iff   rk(A / B u C) == rk(A / B)

with rk(A / B) = rk(A u B) - rk(B). Axiom checkers sample instances, return
one ``AxiomResult`` per axiom and never raise on a failed axiom.
"""

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from . import linalg as la
from .errors import BoundExceeded, Inapplicable, InsufficientWindow, NonUniqueness
from .groups import generate


@dataclass
class AxiomResult:
    axiom: str
    status: str  # "pass" or "fail"
    counterexample: dict = None
    samples: int = 0
    exercised: int = 0  # instances where the axiom's hypothesis actually held
    note: str = None

    @property
    def passed(self):
        return self.status == "pass"

    def to_json(self):
        out = {"axiom": self.axiom, "status": self.status,
               "counterexample": self.counterexample, "samples": self.samples}
        if self.note:
            out["note"] = self.note
        return out


def _result(axiom, cex, samples, exercised=0):
    note = "insufficient samples" if samples == 0 else None
    return AxiomResult(axiom, "fail" if cex is not None else "pass", cex, samples, exercised, note)


class RankFunction:
    """rk on finite element sets of a backend, optionally with a planted fault."""

    def __init__(self, backend, evaluator=None, name="rank"):
        self.backend = backend
        self.evaluator = evaluator or backend.rank
        self.name = name

    def __call__(self, xs):
        return self.evaluator(list(xs))

    def rel(self, A, B):
        A, B = list(A), list(B)
        return self(A + B) - self(B)


def corrupt_rank(backend, target=None):
    """Rank that is one too large on a single closed set (span(e0) by default)."""
    if target is None:
        target = backend.acl([la.basis_vector(0)] if backend.kind == "vector" else [0])

    def bad(xs):
        r = backend.rank(xs)
        if backend.acl(xs) == target:
            r += 1
        return r

    return RankFunction(backend, bad, name="corrupted-rank")


def gens(X):
    """A finite generating list for a closed set or an element collection."""
    if hasattr(X, "generators") and hasattr(X, "elements"):
        return list(X.generators)
    return list(X)


def rk_rel(backend, A, B, rank=None):
    rank = rank or RankFunction(backend)
    return rank.rel(gens(A), gens(B))


@dataclass
class IndependenceWitness:
    A: object
    B: object
    C: object
    verdict: bool
    lhs: int  # rk(A / B u C)
    rhs: int  # rk(A / B)


def indep(backend, A, B, C, rank=None):
    rank = rank or RankFunction(backend)
    a, b, c = gens(A), gens(B), gens(C)
    lhs = rank.rel(a, b + c)
    rhs = rank.rel(a, b)
    return IndependenceWitness(A, B, C, lhs == rhs, lhs, rhs)


def _ind(backend, rank, A, B, C):
    return indep(backend, A, B, C, rank).verdict


# random instances

def random_vectors(backend, rng, n, count):
    if backend.kind == "vector":
        out = []
        for _ in range(count):
            coords = {i: rng.randrange(backend.q) for i in rng.sample(range(n), rng.randint(1, min(2, n)))}
            v = la.vec(coords)
            out.append(v if v else la.basis_vector(rng.randrange(n)))
        return out
    return [rng.randrange(n) for _ in range(count)]


def random_closed(backend, rng, n, max_gens=2):
    return backend.acl(random_vectors(backend, rng, n, rng.randint(0, max_gens)))


def _jsonable(backend, X):
    if hasattr(X, "generators") and hasattr(X, "elements"):
        return [backend.element_to_json(x) for x in X.generators]
    return [backend.element_to_json(x) for x in X]


# dimension-function axioms

def check_rank_axioms(backend, samples=500, rank=None, seed=0, window=4):
    rank = rank or RankFunction(backend)
    rng = random.Random(seed)
    results = []
    pool = backend.closed_sets_in_window(min(window, 3))
    pairs = [(A, B) for A in pool for B in pool]
    if len(pairs) > samples:
        pairs = [(rng.choice(pool), rng.choice(pool)) for _ in range(samples)]
    pairs = pairs[:samples]

    # invariance
    cex = None
    for i in range(samples):
        A = random_closed(backend, rng, window, 3)
        g = backend.random_automorphism(window, rng)
        img = [backend.apply(g, x) for x in gens(A)]
        if rank(gens(A)) != rank(img):
            cex = {"A": _jsonable(backend, A), "image": _jsonable(backend, img)}
            break
    results.append(_result("invariance", cex, samples, samples))

    # submodular bound rk(A) <= rk(AB) <= rk(A) + rk(B) - rk(A n B)
    cex = None
    for A, B in pairs:
        AB = gens(A) + gens(B)
        inter = backend.acl(sorted(A.elements & B.elements, key=backend.sort_key))
        ra, rb, rab, ri = rank(gens(A)), rank(gens(B)), rank(AB), rank(gens(inter))
        if not (ra <= rab <= ra + rb - ri):
            cex = {"A": _jsonable(backend, A), "B": _jsonable(backend, B),
                   "ranks": {"A": ra, "B": rb, "AB": rab, "AnB": ri}}
            break
    results.append(_result("submodularity", cex, len(pairs), len(pairs)))

    # strict monotonicity
    cex, exercised = None, 0
    for A, B in pairs:
        if A <= B:
            exercised += 1
            if rank(gens(A)) == rank(gens(B)) and A != B:
                cex = {"A": _jsonable(backend, A), "B": _jsonable(backend, B),
                       "rank": rank(gens(A))}
                break
    results.append(_result("strict-monotonicity", cex, len(pairs), exercised))

    # finiteness
    cex = None
    for A, _ in pairs:
        r = rank(gens(A))
        if not (isinstance(r, int) and r >= 0):
            cex = {"A": _jsonable(backend, A), "rank": r}
            break
    results.append(_result("finiteness", cex, len(pairs), len(pairs)))
    return results


# stationary independence axioms

def _fresh_start(backend, *sets):
    xs = [x for S in sets for x in gens(S)]
    return backend.window_of(xs)


def move_independent(backend, A, B, C):
    """g in G_(B) with g(A) independent from C over B (fresh-vector construction)."""
    F = getattr(backend, "F", None)
    if backend.kind == "vector":
        bb = list(backend.basis(B))
        rel = []
        for a in backend.basis(A):
            if la.rank(F, bb + rel + [a]) > len(bb) + len(rel):
                rel.append(a)
        n = _fresh_start(backend, A, B, C)
        fresh = [la.basis_vector(n + j) for j in range(len(rel))]
        return backend.extend_to_automorphism({**{x: x for x in bb}, **dict(zip(rel, fresh))})
    if backend.kind == "pure":
        rel = sorted(A.elements - B.elements)
        n = _fresh_start(backend, A, B, C)
        return backend.extend_to_automorphism(dict(zip(rel, range(n, n + len(rel)))))
    raise Inapplicable("fresh-element construction needs an infinite backend")


def random_in_stabilizer(backend, B, A, rng, window):
    """A random g in G_(B), defined by sending a basis of A over B to random independent images."""
    if backend.kind == "vector":
        F = backend.F
        bb = list(backend.basis(B))
        rel = []
        for a in backend.basis(A):
            if la.rank(F, bb + rel + [a]) > len(bb) + len(rel):
                rel.append(a)
        for _ in range(200):
            imgs = random_vectors(backend, rng, window, len(rel))
            if la.rank(F, bb + imgs) == len(bb) + len(rel):
                return backend.extend_to_automorphism({**{x: x for x in bb}, **dict(zip(rel, imgs))})
        raise InsufficientWindow(f"window {window} too small to move A over B")
    rel = sorted(A.elements - B.elements)
    free = [x for x in range(window) if x not in B.elements]
    if len(free) < len(rel):
        raise InsufficientWindow(f"window {window} too small to move A over B")
    imgs = rng.sample(free, len(rel))
    return backend.extend_to_automorphism(dict(zip(rel, imgs)))


def check_stationary_axioms(backend, samples=500, rank=None, seed=0, window=5):
    """Sample each stationary-independence axiom ``samples`` times."""
    if backend.kind not in ("vector", "pure"):
        raise Inapplicable("stationary independence is checked on rank backends only")
    rank = rank or RankFunction(backend)
    rng = random.Random(seed)
    ind = lambda A, B, C: _ind(backend, rank, A, B, C)
    acl = backend.acl
    out = []

    def rc():
        return random_closed(backend, rng, window, 2)

    def union(*Xs):
        return acl([x for X in Xs for x in gens(X)])

    def j(X):
        return _jsonable(backend, X)

    # compatibility: tuples vs their closures, and a vs every e in acl(aB) vs acl(aB)
    cex = None
    for _ in range(samples):
        a = random_vectors(backend, rng, window, rng.randint(1, 2))
        b = random_vectors(backend, rng, window, rng.randint(0, 2))
        B, C = rc(), rc()
        first = ind(a, b, C) == ind(a, acl(b), C)
        aB = union(a, B)
        whole = ind(aB, B, C)
        each = all(ind([e], B, C) for e in aB.elements)
        if not (first and ind(a, B, C) == each == whole):
            cex = {"a": j(a), "b": j(b), "B": j(B), "C": j(C)}
            break
    out.append(_result("compatibility", cex, samples, samples))

    # invariance
    cex, ex = None, 0
    for _ in range(samples):
        A, B, C = rc(), rc(), rc()
        g = backend.random_automorphism(window, rng)
        img = lambda X: acl([backend.apply(g, x) for x in gens(X)])
        if ind(A, B, C):
            ex += 1
            if not ind(img(A), img(B), img(C)):
                cex = {"A": j(A), "B": j(B), "C": j(C)}
                break
    out.append(_result("invariance", cex, samples, ex))

    # monotonicity
    cex, ex = None, 0
    for _ in range(samples):
        A, B, C, D = rc(), rc(), rc(), rc()
        if ind(A, B, union(C, D)):
            ex += 1
            if not (ind(A, B, C) and ind(A, union(B, C), D)):
                cex = {"A": j(A), "B": j(B), "C": j(C), "D": j(D)}
                break
    out.append(_result("monotonicity", cex, samples, ex))

    # transitivity
    cex, ex = None, 0
    for _ in range(samples):
        A, B, C, D = rc(), rc(), rc(), rc()
        if ind(A, B, C) and ind(A, union(B, C), D):
            ex += 1
            if not ind(A, B, union(C, D)):
                cex = {"A": j(A), "B": j(B), "C": j(C), "D": j(D)}
                break
    out.append(_result("transitivity", cex, samples, ex))

    # symmetry
    cex, ex = None, 0
    for _ in range(samples):
        A, B, C = rc(), rc(), rc()
        if ind(A, B, C):
            ex += 1
            if not ind(C, B, A):
                cex = {"A": j(A), "B": j(B), "C": j(C)}
                break
    out.append(_result("symmetry", cex, samples, ex))

    # existence, by construction
    cex = None
    for _ in range(samples):
        A, B, C = rc(), rc(), rc()
        g = move_independent(backend, A, B, C)
        fixes_b = all(backend.apply(g, x) == x for x in B.elements)
        gA = acl([backend.apply(g, x) for x in gens(A)])
        if not (fixes_b and ind(gA, B, C)):
            cex = {"A": j(A), "B": j(B), "C": j(C)}
            break
    out.append(_result("existence", cex, samples, samples))

    # stationarity: amalgamate h and id_C
    cex, ex = None, 0
    for _ in range(samples):
        B = rc()
        A = union(B, rc())
        C = rc()
        h = random_in_stabilizer(backend, B, A, rng, window)
        D = acl([backend.apply(h, x) for x in gens(A)])
        if not (ind(A, B, C) and ind(D, B, C)):
            continue
        ex += 1
        hmap = {x: backend.apply(h, x) for x in gens(A)}
        union_map = dict(hmap)
        clash = any(union_map.get(c, c) != c for c in gens(C))
        union_map.update({c: c for c in gens(C)})
        if clash or not backend.extendable(union_map):
            cex = {"A": j(A), "B": j(B), "C": j(C), "D": j(D)}
            break
        k = backend.extend_to_automorphism(union_map)
        if any(backend.apply(k, x) != hmap[x] for x in hmap) or \
                any(backend.apply(k, c) != c for c in C.elements):
            cex = {"A": j(A), "B": j(B), "C": j(C), "D": j(D), "reason": "amalgam check"}
            break
    out.append(_result("stationarity", cex, samples, ex))
    return out


# weak canonical bases

def closed_subsets(backend, B):
    """All closed subsets of a closed set B, by rank then canonical order."""
    if backend.kind == "vector":
        basis = list(backend.basis(B))
        out = []
        for sub in la.subspaces(backend.q, len(basis)):
            vs = [la.combine(backend.F, la.to_dense(s, len(basis)), basis) for s in sub]
            out.append(backend.acl(vs))
        return sorted(out, key=lambda K: (K.rank, K.sort_key()))
    if backend.kind == "pure":
        pts = B.ordered
        return [backend.acl(c) for d in range(len(pts) + 1) for c in combinations(pts, d)]
    raise Inapplicable("not attempted: no rank function on this backend")


def canonical_base(backend, A, B, rank=None, exhaustive_limit=4, seed=0):
    """The smallest closed C inside B with A independent from B over C."""
    if backend.kind not in ("vector", "pure"):
        raise Inapplicable("not attempted: no rank function on this backend")
    rank = rank or RankFunction(backend)
    cand_ok = lambda C: _ind(backend, rank, A, C, B)
    if B.rank <= exhaustive_limit:
        subs = closed_subsets(backend, B)
        good = [C for C in subs if cand_ok(C)]
        first = good[0]
        minimal = [C for C in good if not any(D < C for D in good)]
        if len(minimal) != 1 or any(not first <= C for C in good):
            raise NonUniqueness("no least independent base", candidates=minimal)
        return first
    # above the limit: the intersection, with minimality sampled
    C = backend.acl(sorted(A.elements & B.elements, key=backend.sort_key))
    rng = random.Random(seed)
    basis = gens(B)
    for _ in range(200):
        sub = backend.acl(rng.sample(basis, rng.randint(0, len(basis))))
        if cand_ok(sub) and not C <= sub:
            raise NonUniqueness("sampled independent base misses the intersection",
                                candidates=[C, sub])
    return C


# G_(A n B) against the group generated by G_(A) and G_(B), inside GL(n, q)

def _fixes(F, M, vectors, n):
    return all(la.mat_vec(F, M, la.to_dense(v, n)) == la.to_dense(v, n) for v in vectors)


@dataclass
class GenerationCertificate:
    order_GA: int
    order_GB: int
    order_generated: int
    order_G_intersection: int
    contained: bool
    equal: bool
    extra: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.equal


def generation_check(backend, A, B, n, bound=10 ** 7):
    """Compare <G_(A) u G_(B)> with G_(A n B) inside GL(n, q)."""
    if backend.kind != "vector":
        raise Inapplicable("generation check runs in GL(n, q)")
    F = backend.F
    if backend.q ** (n * n) > bound:
        raise BoundExceeded(f"q^(n^2) = {backend.q ** (n * n)} exceeds bound {bound}")
    for X in (A, B):
        if any(la.top_index(v) >= n for v in X.generators):
            raise InsufficientWindow(f"closed set not inside GF({backend.q})^{n}")
    GL = la.all_invertible(F, n)
    GA = [M for M in GL if _fixes(F, M, gens(A), n)]
    GB = [M for M in GL if _fixes(F, M, gens(B), n)]
    inter = sorted(A.elements & B.elements, key=la.vector_key)
    GI = frozenset(M for M in GL if _fixes(F, M, inter, n))
    mul = lambda X, Y: la.mat_mul(F, X, Y)
    gen_set = _small_generating_set(GA + GB, mul, la.identity_matrix(n), bound)
    H = generate(gen_set, mul, la.identity_matrix(n), cap=bound)
    return GenerationCertificate(len(GA), len(GB), len(H), len(GI),
                                 H <= GI, H == GI)


def _small_generating_set(elements, mul, one, cap):
    gens_, span = [], {one}
    for x in elements:
        if x not in span:
            gens_.append(x)
            span = generate(gens_, mul, one, cap)
    return gens_


# Noetherian condition

@dataclass
class ChainReport:
    max_chain: int
    bound: int
    closed_sets: int

    @property
    def ok(self):
        return self.max_chain <= self.bound


def longest_chain(closed):
    closed = sorted(closed, key=len)
    best = {}
    for C in closed:
        best[C.elements] = 1 + max((best[D.elements] for D in closed if D.elements < C.elements),
                                   default=0)
    return max(best.values(), default=0)


def noetherian_check(backend, window):
    closed = backend.closed_sets_in_window(window)
    if backend.kind == "finite":
        bound = backend.n + 1
    else:
        bound = window + 1
    return ChainReport(longest_chain(closed), bound, len(closed))


# pregeometries

class ClosureSystem:
    """A finite ground set with a closure operator on frozensets."""

    def __init__(self, ground, cl, name="closure"):
        self.ground = list(ground)
        self._cl = cl
        self.name = name
        self._memo = {}

    def cl(self, A):
        A = frozenset(A)
        if A not in self._memo:
            self._memo[A] = frozenset(self._cl(A))
        return self._memo[A]


def backend_closure_system(backend, window):
    ground = backend.window_elements(window)
    gset = set(ground)
    return ClosureSystem(ground, lambda A: backend.acl(sorted(A, key=backend.sort_key)).elements & gset,
                         name=f"{backend.kind}-window-{window}")


def path_convexity(n):
    """Convex hulls on the path 0 - 1 - ... - n-1: a closure without exchange."""
    def hull(A):
        return set(range(min(A), max(A) + 1)) if A else set()
    return ClosureSystem(range(n), hull, name=f"path-convexity-{n}")


def _subsets_for(system, rng, samples, max_size=2):
    ground = system.ground
    small = [frozenset(c) for d in range(max_size + 1) for c in combinations(ground, d)]
    if len(small) * len(ground) ** 2 <= samples:
        return small, True
    return [frozenset(rng.sample(ground, rng.randint(0, min(max_size, len(ground)))))
            for _ in range(samples)], False


def pregeometry_check(system, samples=500, seed=0):
    """Reflexivity, monotonicity, finite character, idempotency, exchange (and geometry)."""
    rng = random.Random(seed)
    subsets, exhaustive = _subsets_for(system, rng, samples)
    cl = system.cl
    results = []
    fmt = lambda A: sorted(A, key=repr)

    cex = next(({"A": fmt(A)} for A in subsets if not A <= cl(A)), None)
    results.append(_result("reflexivity", cex, len(subsets), len(subsets)))

    cex = None
    for A in subsets:
        for B in (subsets if exhaustive else [A | frozenset(rng.sample(system.ground, 1))]):
            if A <= B and not cl(A) <= cl(B):
                cex = {"A": fmt(A), "B": fmt(B)}
                break
        if cex:
            break
    results.append(_result("monotonicity", cex, len(subsets), len(subsets)))

    # ground sets are finite, so every set is its own finite witness
    cex = None
    for A in subsets:
        for a in cl(A):
            if not any(a in cl(frozenset(c)) for d in range(len(A) + 1) for c in combinations(sorted(A, key=repr), d)):
                cex = {"A": fmt(A), "a": a}
                break
        if cex:
            break
    results.append(_result("finite-character", cex, len(subsets), len(subsets)))

    cex = next(({"A": fmt(A)} for A in subsets if cl(cl(A)) != cl(A)), None)
    results.append(_result("idempotency", cex, len(subsets), len(subsets)))

    cex, ex, n = None, 0, 0
    triples = ((A, a, b) for A in subsets for a in system.ground for b in system.ground) if exhaustive \
        else ((A, rng.choice(system.ground), rng.choice(system.ground)) for A in subsets)
    for A, a, b in triples:
        n += 1
        if a in cl(A | {b}) and a not in cl(A):
            ex += 1
            if b not in cl(A | {a}):
                cex = {"A": fmt(A), "a": a, "b": b}
                break
    results.append(_result("exchange", cex, n, ex))

    cex = next(({"a": a} for a in system.ground if cl({a}) != {a}), None)
    geo = _result("geometry", cex, len(system.ground), len(system.ground))
    geo.note = "singletons closed" if cex is None else "not a geometry (expected for pregeometries)"
    results.append(geo)
    return results


def pregeometry_passed(results):
    return all(r.passed for r in results if r.axiom != "geometry")


@dataclass
class Geometry:
    points: list  # ClosedSets
    union_closure: object  # maps a list of points to the closed set they generate

    def cl(self, X):
        span = self.union_closure(list(X))
        return frozenset(P for P in self.points if P <= span)

    def as_closure_system(self):
        return ClosureSystem(self.points, self.cl, name="canonical-geometry")


def canonical_geometry(backend, window):
    """Points acl(a) for a outside acl(0), with cl(X) = points inside acl(union X)."""
    bottom = backend.bottom()
    points = {}
    for a in backend.window_elements(window):
        if a not in bottom:
            P = backend.acl([a])
            points.setdefault(P.elements, P)
    pts = sorted(points.values(), key=lambda P: P.sort_key())

    def union_closure(X):
        return backend.acl([x for P in X for x in P.generators])

    return Geometry(pts, union_closure)
