"""Finite windows of the expanded structure on triples (K, p, K').

A triple pairs two closed sets of depth at most k with a bijection p: K -> K'
that extends to an automorphism of M. Closed sets themselves are identified
with their identity triples. Predicates:

* identity (unary): p is the identity of K
* E_n: one automorphism extends all the p_i at once
* Dom / Cod: the domain / codomain of a triple is a given closed set
* P_n: A is inside the closure of B_1 u ... u B_n
* compose / inverse: the groupoid structure
"""

import random
from dataclasses import dataclass
from itertools import combinations, product

from .errors import BoundExceeded, Inapplicable, WindowOverflow
from .structures import BOTTOM, ClosedSet, compose_maps, invert_map, perm_to_map

DEFAULT_TRIPLE_CAP = 10 ** 5


@dataclass(frozen=True, eq=False)
class Triple:
    K: ClosedSet
    p: tuple  # ((x, p(x)), ...) in K's canonical order
    Kp: ClosedSet

    @classmethod
    def make(cls, K, p, Kp):
        return cls(K, tuple((x, p[x]) for x in K.ordered), Kp)

    @classmethod
    def identity(cls, K):
        return cls.make(K, {x: x for x in K.elements}, K)

    @property
    def map(self):
        return dict(self.p)

    @property
    def is_identity(self):
        return self.K == self.Kp and all(x == y for x, y in self.p)

    def _key(self):
        return (self.K.elements, self.p, self.Kp.elements)

    def __eq__(self, other):
        return isinstance(other, Triple) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def sort_key(self):
        b = self.K.backend
        return (self.K.sort_key(), self.Kp.sort_key(), [b.sort_key(y) for _, y in self.p])

    def __repr__(self):
        return f"Triple(|K|={len(self.K)}, {'id' if self.is_identity else 'map'}, |K'|={len(self.Kp)})"

    def to_json(self):
        b = self.K.backend
        return {"dom": self.K.to_json(), "cod": self.Kp.to_json(),
                "map": [[b.element_to_json(x), b.element_to_json(y)] for x, y in self.p]}


class ExpandedWindow:
    """Closed sets of depth 1..k from a generator pool, and all triples between them."""

    def __init__(self, backend, k, size, closed_sets, triples, bottom):
        self.backend = backend
        self.k = k
        self.size = size
        self.closed_sets = list(closed_sets)
        self.triples = list(triples)
        self.bottom = bottom  # the extra lattice element, kept out of the triples
        self._index = {t: i for i, t in enumerate(self.triples)}
        self._by_pair = {}
        for t in self.triples:
            self._by_pair.setdefault((t.K.elements, t.Kp.elements), []).append(t)
        self._closed_index = {C.elements: C for C in self.closed_sets}
        self._points = set()
        for C in self.closed_sets:
            self._points |= C.elements

    def __len__(self):
        return len(self.triples)

    def __contains__(self, t):
        return t in self._index

    def __repr__(self):
        return (f"ExpandedWindow({self.backend!r}, k={self.k}, size={self.size}, "
                f"closed={len(self.closed_sets)}, triples={len(self.triples)})")

    def identity_triples(self):
        return [Triple.identity(C) for C in self.closed_sets]

    def closed(self, elements):
        return self._closed_index.get(frozenset(elements))

    def triples_between(self, K, Kp):
        return list(self._by_pair.get((K.elements, Kp.elements), []))

    def self_maps(self, K):
        return self.triples_between(K, K)

    def lookup(self, K, p, Kp):
        t = Triple.make(K, p, Kp)
        return t if t in self._index else None

    def require(self, K, p, Kp):
        t = Triple.make(K, p, Kp)
        if t not in self._index:
            raise WindowOverflow("triple escapes the window", required=self.size + 1)
        return t

    @property
    def points(self):
        return frozenset(self._points)

    def to_json(self):
        return {"k": self.k, "size": self.size,
                "closed_sets": [C.to_json() for C in self.closed_sets],
                "triples": [t.to_json() for t in self.triples]}


def _bijections(backend, K, Kp, aut_cache):
    """All extendable bijections K -> Kp, as p0 composed with Aut_M(K)."""
    if len(K) != len(Kp) or K.rank != Kp.rank:
        return []
    p0 = _one_extendable_bijection(backend, K, Kp)
    if p0 is None:
        return []
    if K.elements not in aut_cache:
        aut_cache[K.elements] = backend.aut_M_group(K)
    order = K.ordered
    out = []
    for a in sorted(aut_cache[K.elements].elements):
        amap = perm_to_map(order, a)
        out.append({x: p0[amap[x]] for x in order})
    return out


def _one_extendable_bijection(backend, K, Kp):
    if backend.kind == "vector":
        src, dst = list(backend.basis(K)), list(backend.basis(Kp))
        if len(src) != len(dst):
            return None
        return backend.linear_extension(K, dict(zip(src, dst)))
    if backend.kind == "pure":
        return dict(zip(K.ordered, Kp.ordered))
    for g in sorted(backend.group().elements):
        if frozenset(g[x] for x in K.elements) == Kp.elements:
            return {x: g[x] for x in K.ordered}
    return None


def build_window(backend, k, size=None, cap=DEFAULT_TRIPLE_CAP, pool=None):
    """All closed sets of depth 1..k generated inside the pool, and all triples.

    The pool defaults to the first ``size`` canonical generators (basis vectors
    or atoms). An explicit ``pool`` lists the generators instead; closed sets
    are then the closures of subsets of the pool with at most k elements.
    """
    bottom = backend.bottom()
    if pool is None:
        candidates = backend.closed_sets_in_window(size)
    else:
        pool = list(pool)
        size = backend.window_of(pool)
        seen = {}
        for d in range(1, k + 1):
            for sub in combinations(pool, d):
                C = backend.acl(sub)
                seen.setdefault(C.elements, C)
        candidates = list(seen.values())
    closed = []
    for C in candidates:
        d = C.depth
        if d != BOTTOM and d <= k:
            closed.append(C)
    closed.sort(key=ClosedSet.sort_key)
    triples, cache = [], {}
    for K in closed:
        for Kp in closed:
            for p in _bijections(backend, K, Kp, cache):
                triples.append(Triple.make(K, p, Kp))
                if len(triples) > cap:
                    raise BoundExceeded(f"window has more than {cap} triples")
    triples.sort(key=Triple.sort_key)
    return ExpandedWindow(backend, k, size, closed, triples, bottom)


# predicates

def union_map(triples):
    """Union of the maps of the triples, or None if they disagree or collide."""
    u = {}
    for t in triples:
        for x, y in t.p:
            if u.get(x, y) != y:
                return None
            u[x] = y
    if len(set(u.values())) != len(u):
        return None
    return u


def eval_En(window, triples):
    u = union_map(triples)
    return u is not None and window.backend.extendable(u)


def eval_Dom(window, t, C):
    return t.K == C


def eval_Cod(window, t, C):
    return t.Kp == C


def eval_Pn(window, A, Bs):
    b = window.backend
    span = b.acl([x for B in Bs for x in B.generators])
    return A <= span


def eval_identity(window, t):
    return t.is_identity


def eval_compose(window, t1, t2, t3):
    if not (t1.Kp == t2.K and t1.K == t3.K and t2.Kp == t3.Kp):
        return False
    return compose_maps(t2.map, t1.map) == t3.map


def eval_inverse(window, t1, t2):
    if not (t1.K == t2.Kp and t1.Kp == t2.K):
        return False
    if t2.map != invert_map(t1.map):
        return False
    return eval_compose(window, t1, t2, Triple.identity(t1.K))


def compose_triples(t1, t2):
    """t2 after t1 (requires cod t1 = dom t2)."""
    if t1.Kp != t2.K:
        raise ValueError("triples are not chainable")
    return Triple.make(t1.K, compose_maps(t2.map, t1.map), t2.Kp)


def inverse_triple(t):
    return Triple.make(t.Kp, invert_map(t.map), t.K)


# orbital structure

@dataclass
class OrbitalStructure:
    domain: list
    relations: dict  # arity -> list of classes (lists of tuples)

    def classes(self, n):
        return self.relations[n]

    def related(self, s, t):
        for cls in self.relations[len(s)]:
            if s in cls:
                return t in cls
        raise KeyError(s)


def orbital_structure(backend, window, max_arity):
    """Orbit classes of Aut(M) on n-tuples from the window, n <= max_arity."""
    domain = backend.window_elements(window)
    for a in domain:
        if backend.acl([a]).elements != frozenset([a]):
            raise Inapplicable(f"closure of a single point is not the point itself ({a!r})")
    relations = {}
    for n in range(1, max_arity + 1):
        reps, classes = [], []
        for tup in product(domain, repeat=n):
            for i, r in enumerate(reps):
                if backend.same_type(r, tup):
                    classes[i].append(tup)
                    break
            else:
                reps.append(tup)
                classes.append([tup])
        relations[n] = classes
    return OrbitalStructure(list(domain), relations)


# window maps and isomorphism checks

class WindowMap:
    """A bijection between the triples of two windows (usually the same one)."""

    def __init__(self, mapping, source=None, target=None):
        self.mapping = dict(mapping)
        self.source = source
        self.target = target if target is not None else source

    def __call__(self, t):
        return self.mapping[t]

    def __eq__(self, other):
        return isinstance(other, WindowMap) and self.mapping == other.mapping

    def __hash__(self):
        return hash(frozenset(self.mapping.items()))

    def __matmul__(self, other):
        """(self @ other)(t) == self(other(t))."""
        return WindowMap({t: self.mapping[u] for t, u in other.mapping.items()},
                         other.source, self.target)

    def inverse(self):
        return WindowMap({u: t for t, u in self.mapping.items()}, self.target, self.source)

    @classmethod
    def identity(cls, W):
        return cls({t: t for t in W.triples}, W)

    def closed_image(self, C):
        return self.mapping[Triple.identity(C)].K

    def is_identity(self):
        return all(t == u for t, u in self.mapping.items())


@dataclass
class IsoResult:
    ok: bool
    violation: str = None
    instance: tuple = None

    def __bool__(self):
        return self.ok


def iso_check(W1, W2, f, samples=200, seed=0, en_max=3):
    """Does f preserve every predicate of the expanded structure, both ways?

    Identity, Dom, Cod, compose and inverse are checked exhaustively; E_1, E_2
    and P_1, P_2 exhaustively for small windows; E_n for 3 <= n <= en_max
    exhaustively when there are at most 150000 tuples, else on random samples.
    """
    if not isinstance(f, WindowMap):
        f = WindowMap(f, W1, W2)
    m = f.mapping
    rng = random.Random(seed)
    T1 = W1.triples
    if set(m) != set(T1):
        return IsoResult(False, "totality", None)
    if len(set(m.values())) != len(m) or set(m.values()) != set(W2.triples):
        return IsoResult(False, "bijection", None)
    for t in T1:
        if eval_identity(W1, t) != eval_identity(W2, m[t]):
            return IsoResult(False, "identity", (t,))
    # closed sets correspond to identity triples
    cmap = {}
    for C in W1.closed_sets:
        img = m[Triple.identity(C)]
        cmap[C.elements] = img.K
    for t in T1:
        for C in W1.closed_sets:
            fc = cmap[C.elements]
            if eval_Dom(W1, t, C) != eval_Dom(W2, m[t], fc):
                return IsoResult(False, "Dom", (t, C))
            if eval_Cod(W1, t, C) != eval_Cod(W2, m[t], fc):
                return IsoResult(False, "Cod", (t, C))
    for t in T1:
        if not eval_En(W1, [t]) or not eval_En(W2, [m[t]]):
            return IsoResult(False, "E_1", (t,))
    if len(T1) ** 2 <= 40000:
        pairs = [(a, b) for a in T1 for b in T1]
    else:
        pairs = [(rng.choice(T1), rng.choice(T1)) for _ in range(samples * 20)]
    for a, b in pairs:
        if eval_En(W1, [a, b]) != eval_En(W2, [m[a], m[b]]):
            return IsoResult(False, "E_2", (a, b))
    for n in range(3, en_max + 1):
        if len(T1) ** n <= 150000:
            tuples = product(T1, repeat=n)
        else:
            tuples = ([rng.choice(T1) for _ in range(n)] for _ in range(samples))
        for ts in tuples:
            if eval_En(W1, ts) != eval_En(W2, [m[t] for t in ts]):
                return IsoResult(False, f"E_{n}", tuple(ts))
    CS = W1.closed_sets
    for A in CS:
        for B in CS:
            if eval_Pn(W1, A, [B]) != eval_Pn(W2, cmap[A.elements], [cmap[B.elements]]):
                return IsoResult(False, "P_1", (A, B))
    if len(CS) ** 3 <= 20000:
        p2 = [(A, B, C) for A in CS for B in CS for C in CS]
    else:
        p2 = [(rng.choice(CS), rng.choice(CS), rng.choice(CS)) for _ in range(samples * 5)]
    for A, B, C in p2:
        if eval_Pn(W1, A, [B, C]) != eval_Pn(W2, cmap[A.elements], [cmap[B.elements], cmap[C.elements]]):
            return IsoResult(False, "P_2", (A, B, C))
    finv = f.inverse().mapping
    for Wa, Wb, g in ((W1, W2, m), (W2, W1, finv)):
        for t1 in Wa.triples:
            for t2 in _starting_at(Wa, t1.Kp):
                t3 = compose_triples(t1, t2)
                if t3 not in Wa:
                    continue
                if not eval_compose(Wb, g[t1], g[t2], g[t3]):
                    return IsoResult(False, "compose", (t1, t2, t3))
            ti = inverse_triple(t1)
            if ti in Wa and not eval_inverse(Wb, g[t1], g[ti]):
                return IsoResult(False, "inverse", (t1, ti))
    return IsoResult(True)


def _starting_at(W, K):
    return [t for t in W.triples if t.K == K]


def groupoid_check(W, budget=100000, seed=0):
    """Closure, associativity and two-sided inverses on chainable triples.

    Associativity is checked on every chain t1, t2, t3 when there are at most
    ``budget`` of them, otherwise on ``budget`` random chains.
    """
    starting = {}
    for t in W.triples:
        starting.setdefault(t.K.elements, []).append(t)
    out_deg = {t: len(starting.get(t.Kp.elements, [])) for t in W.triples}
    chains = sum(out_deg[t1] * out_deg[t2] for t1 in W.triples
                 for t2 in starting.get(t1.Kp.elements, []))
    exhaustive = chains <= budget
    problems = []
    for t1 in W.triples:
        for t2 in starting.get(t1.Kp.elements, []):
            t12 = compose_triples(t1, t2)
            if t12 not in W:
                problems.append(("closure", t1, t2))
                continue
            if exhaustive:
                for t3 in starting.get(t2.Kp.elements, []):
                    if compose_triples(t12, t3) != compose_triples(t1, compose_triples(t2, t3)):
                        problems.append(("associativity", t1, t2, t3))
        ti = inverse_triple(t1)
        if ti not in W or not eval_inverse(W, t1, ti):
            problems.append(("inverse", t1))
        if compose_triples(t1, ti) != Triple.identity(t1.K):
            problems.append(("inverse-identity", t1))
    if not exhaustive:
        rng = random.Random(seed)
        for _ in range(budget):
            t1 = rng.choice(W.triples)
            t2 = rng.choice(starting[t1.Kp.elements])
            t3 = rng.choice(starting[t2.Kp.elements])
            if compose_triples(compose_triples(t1, t2), t3) != compose_triples(t1, compose_triples(t2, t3)):
                problems.append(("associativity", t1, t2, t3))
    return problems


def well_formed(W):
    """Identity triples present, inverse-closed, every triple realized (E_1)."""
    issues = []
    for C in W.closed_sets:
        if Triple.identity(C) not in W:
            issues.append(("missing-identity", C))
    for t in W.triples:
        if inverse_triple(t) not in W:
            issues.append(("missing-inverse", t))
        if not eval_En(W, [t]):
            issues.append(("unrealized", t))
    return issues
