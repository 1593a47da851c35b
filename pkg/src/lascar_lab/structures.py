"""Concrete countable structures with computable closure and extendability.

Three backends share one interface:

* ``VectorSpaceBackend(q)``: the countable-dimensional vector space over GF(q),
  handled lazily. Closure is linear span; a partial map extends to an
  automorphism iff it induces an injective linear map on the span of its domain.
* ``PureSetBackend()``: the natural numbers with no structure. Closure is
  trivial and every injective partial map extends.
* ``FiniteStructureBackend(S)``: an explicit relational structure on at most
  ten points. Closure is the fixed-point set of the pointwise stabilizer, and
  extendability is decided by backtracking search for an automorphism.

Partial maps are plain dicts. Automorphisms of M are ``SemilinearMap`` objects
(vector), ``SupportPerm`` objects (pure set) or permutation tuples (finite).
"""

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations

from . import linalg as la
from .errors import (ArityError, BackendMismatch, BoundExceeded, InsufficientWindow,
                     PreconditionError)
from .gf import field
from .groups import PermGroup, compose, identity, inverse

UNBOUNDED = "unbounded"
BOTTOM = "bottom"

DEFAULT_FINITE_BOUND = 10


@dataclass(frozen=True)
class BackendCapabilities:
    has_infinite_domain: bool
    closure_kind: str  # "span", "trivial" or "fixed-point"
    supports_rank: bool
    q: int = None

    def __post_init__(self):
        if self.closure_kind not in ("span", "trivial", "fixed-point"):
            raise ValueError(f"unknown closure kind {self.closure_kind!r}")
        if self.closure_kind == "span" and self.q is None:
            raise ValueError("span closure needs a field order")
        if self.closure_kind == "fixed-point" and self.has_infinite_domain:
            raise ValueError("fixed-point closure needs a finite domain")


@dataclass(frozen=True)
class ClosedSet:
    """A finitely generated closed set; equality is equality of element sets."""

    elements: frozenset
    generators: tuple = dc_field(compare=False)
    rank: int = dc_field(compare=False)
    backend: object = dc_field(compare=False, repr=False)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def __iter__(self):
        return iter(self.ordered)

    def __le__(self, other):
        return self.elements <= other.elements

    def __lt__(self, other):
        return self.elements < other.elements

    @cached_property
    def ordered(self):
        """Elements in the backend's canonical order."""
        return tuple(sorted(self.elements, key=self.backend.sort_key))

    @property
    def depth(self):
        return self.backend.depth(self)

    def sort_key(self):
        return (len(self.elements), [self.backend.sort_key(x) for x in self.ordered])

    def to_json(self):
        return {"generators": [self.backend.element_to_json(x) for x in self.generators]}


# helpers for partial maps

def as_map(p):
    if p is None:
        return {}
    if isinstance(p, dict):
        return dict(p)
    return dict(p)


def is_injective(p):
    return len(set(p.values())) == len(p)


def compose_maps(p2, p1):
    """p2 after p1, on the part of dom(p1) that p1 sends into dom(p2)."""
    return {x: p2[y] for x, y in p1.items() if y in p2}


def invert_map(p):
    return {y: x for x, y in p.items()}


def map_to_perm(order, p):
    """A bijection of a finite set as a permutation of positions in ``order``."""
    index = {x: i for i, x in enumerate(order)}
    return tuple(index[p[x]] for x in order)


def perm_to_map(order, perm):
    return {order[i]: order[j] for i, j in enumerate(perm)}


class Backend:
    """Shared behaviour; subclasses fill in the structure-specific parts."""

    kind = None
    capabilities = None

    # subclasses implement: validate, sort_key, acl, extendable, element_to_json,
    # element_from_json, apply, compose_aut, inverse_aut, identity_aut,
    # aut_M_of, window_elements, closed_sets_in_window, depth

    def check_elements(self, xs):
        for x in xs:
            self.validate(x)

    def bottom(self):
        return self.acl(())

    def same_type(self, s, t, base=None):
        s, t = tuple(s), tuple(t)
        if len(s) != len(t):
            raise ArityError(f"tuples of length {len(s)} and {len(t)}")
        self.check_elements(s + t)
        p = {}
        if base is not None:
            p.update({x: x for x in self.base_generators(base)})
        for x, y in zip(s, t):
            if p.get(x, y) != y:
                return False
            p[x] = y
        if not is_injective(p):
            return False
        return self.extendable(p)

    def base_generators(self, base):
        return base.elements

    def extend_step(self, p, a):
        """Extend p to a, choosing the first legal image (a itself first)."""
        p = as_map(p)
        self.validate(a)
        if not self.extendable(p):
            raise PreconditionError("extend_step needs an extendable partial map")
        if a in p:
            return p
        for b in self._candidate_images(a):
            trial = dict(p)
            trial[a] = b
            if self.extendable(trial):
                return trial
        raise PreconditionError(f"no legal image for {a!r}")  # unreachable for sound backends

    def moved_witness(self, a, base, window=None):
        """Some w != a in the window with tp(w/base) = tp(a/base), or None."""
        for w in self.window_elements(window):
            if w != a and self.same_type((a,), (w,), base):
                return w
        return None

    def aut_M_group(self, K):
        """Aut_M(K) as a permutation group on the positions of ``K.ordered``."""
        order = K.ordered
        gens = [map_to_perm(order, g) for g in self.aut_M_of(K)]
        return PermGroup(len(order), gens)

    def restrict(self, g, K):
        return {x: self.apply(g, x) for x in K.ordered}

    def image_set(self, g, xs):
        return frozenset(self.apply(g, x) for x in xs)

    def image_closed(self, g, K):
        return self.acl([self.apply(g, x) for x in K.generators])

    def conjugate_map(self, h, p):
        """h p h^-1 as a partial map from h(dom p) to h(cod p)."""
        return {self.apply(h, x): self.apply(h, y) for x, y in p.items()}

    def rank(self, xs):
        raise NotImplementedError(f"{self.kind} backend has no rank function")


class VectorSpaceBackend(Backend):
    """Countable-dimensional vector space over GF(q), computed lazily."""

    kind = "vector"

    def __init__(self, q):
        self.q = q
        self.F = field(q)
        self.capabilities = BackendCapabilities(True, "span", True, q)

    def __repr__(self):
        return f"VectorSpaceBackend(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, VectorSpaceBackend) and other.q == self.q

    def __hash__(self):
        return hash(("vector", self.q))

    def validate(self, x):
        if not la.is_vector(x, self.q):
            raise BackendMismatch(f"{x!r} is not a canonical GF({self.q}) vector")

    def sort_key(self, x):
        return la.vector_key(x)

    def element_to_json(self, x):
        return {"q": self.q, "coords": {str(i): c for i, c in x}}

    def element_from_json(self, data):
        if data.get("q") != self.q:
            raise BackendMismatch(f"vector over GF({data.get('q')}) given to GF({self.q}) backend")
        v = la.vec({int(i): c for i, c in data["coords"].items()})
        self.validate(v)
        return v

    def basis(self, K):
        return la.echelon_basis(self.F, K.generators)

    def acl(self, A):
        A = tuple(A)
        self.check_elements(A)
        basis = la.echelon_basis(self.F, A)
        elements = frozenset(la.span_elements(self.F, basis))
        return ClosedSet(elements, basis, len(basis), self)

    def span(self, *vectors):
        return self.acl(vectors)

    def rank(self, xs):
        xs = list(xs)
        self.check_elements(xs)
        return la.rank(self.F, xs)

    def depth(self, K):
        return BOTTOM if K.rank == 0 else K.rank

    def base_generators(self, base):
        return self.basis(base)

    def extendable(self, p):
        p = as_map(p)
        self.check_elements(list(p) + list(p.values()))
        return la.linear_map_fingerprint_ok(self.F, list(p.items()))

    def _candidate_images(self, a):
        yield a
        yield from la.iter_vectors(self.q)

    def orbit(self, a, base, window):
        self.validate(a)
        if window < base.rank + 2:
            raise InsufficientWindow(f"window {window} < dim(base) + 2 = {base.rank + 2}")
        if la.top_index(a) >= window or any(la.top_index(v) >= window for v in base.generators):
            raise InsufficientWindow(f"support exceeds window {window}")
        if a in base:
            return frozenset([a])
        small = self._window_orbit(a, base, window)
        large = self._window_orbit(a, base, window + 1)
        if len(large) > len(small):
            return UNBOUNDED
        return small

    def _window_orbit(self, a, base, n):
        return frozenset(v for v in la.vectors_in_window(self.q, n)
                         if self.same_type((a,), (v,), base))

    def aut_M_of(self, K):
        """Generators of GL(K): diagonal unit, a transposition, a cycle and a transvection."""
        basis = list(self.basis(K))
        d = len(basis)
        F = self.F
        if d == 0:
            return []
        mats = []
        if self.q > 2:
            D = [list(r) for r in la.identity_matrix(d)]
            D[0][0] = F.primitive
            mats.append(D)
        if d >= 2:
            swap = [list(r) for r in la.identity_matrix(d)]
            swap[0][0] = swap[1][1] = 0
            swap[0][1] = swap[1][0] = 1
            mats.append(swap)
            cyc = [[1 if i == (j + 1) % d else 0 for j in range(d)] for i in range(d)]
            mats.append(cyc)
            tv = [list(r) for r in la.identity_matrix(d)]
            tv[1][0] = 1
            mats.append(tv)
        gens = []
        for M in mats:
            # column j of M gives the coordinates of the image of basis[j]
            images = [la.combine(F, [M[i][j] for i in range(d)], basis) for j in range(d)]
            gens.append(self.linear_extension(K, dict(zip(basis, images))))
        return gens

    def linear_extension(self, K, on_basis):
        """The map on K determined by images of a basis of K."""
        basis = list(on_basis)
        out = {}
        for x in K.elements:
            cs = la.coordinates(self.F, x, basis)
            out[x] = la.combine(self.F, cs, [on_basis[b] for b in basis])
        return out

    # automorphisms of M

    def apply(self, g, x):
        return g(x)

    def compose_aut(self, g, h):
        return g @ h

    def inverse_aut(self, g):
        return g.inverse()

    def identity_aut(self):
        return la.SemilinearMap.identity(self.q)

    def extend_to_automorphism(self, p):
        """A linear automorphism of M (finite matrix) agreeing with p."""
        p = as_map(p)
        if not self.extendable(p):
            raise PreconditionError("partial map does not extend")
        F = self.F
        xs = la.independent_subset(F, list(p))
        ys = [p[x] for x in xs]
        n = la.dim_needed(list(p) + list(p.values()))
        dom, cod = list(xs), list(ys)
        for i in range(n):
            e = la.basis_vector(i)
            if la.rank(F, dom + [e]) > len(dom):
                dom.append(e)
        for i in range(n):
            e = la.basis_vector(i)
            if la.rank(F, cod + [e]) > len(cod):
                cod.append(e)
        X = tuple(zip(*[la.to_dense(v, n) for v in dom])) if n else ()
        Y = tuple(zip(*[la.to_dense(v, n) for v in cod])) if n else ()
        if n == 0:
            return self.identity_aut()
        A = la.mat_mul(F, Y, la.mat_inv(F, X))
        return la.SemilinearMap(self.q, A)

    def random_automorphism(self, n, rng):
        return la.SemilinearMap(self.q, la.random_invertible(self.F, n, rng))

    # windows

    def window_elements(self, n):
        return la.vectors_in_window(self.q, n)

    def closed_sets_in_window(self, n, dims=None):
        return [self.acl(b) for b in la.subspaces(self.q, n, dims)]

    def window_of(self, xs):
        return la.dim_needed(list(xs))


class SupportPerm:
    """A finitely supported permutation of the natural numbers."""

    __slots__ = ("mapping",)

    def __init__(self, mapping=None):
        m = {int(a): int(b) for a, b in dict(mapping or {}).items() if a != b}
        if sorted(m) != sorted(m.values()):
            raise ValueError("not a permutation of its support")
        self.mapping = m

    def __call__(self, x):
        return self.mapping.get(x, x)

    def __matmul__(self, other):
        pts = set(self.mapping) | set(other.mapping)
        return SupportPerm({x: self(other(x)) for x in pts})

    def inverse(self):
        return SupportPerm({b: a for a, b in self.mapping.items()})

    def __eq__(self, other):
        return isinstance(other, SupportPerm) and self.mapping == other.mapping

    def __hash__(self):
        return hash(tuple(sorted(self.mapping.items())))

    def __repr__(self):
        return f"SupportPerm({dict(sorted(self.mapping.items()))})"


class PureSetBackend(Backend):
    """The natural numbers with no relations."""

    kind = "pure"

    def __init__(self):
        self.capabilities = BackendCapabilities(True, "trivial", True, None)

    def __repr__(self):
        return "PureSetBackend()"

    def __eq__(self, other):
        return isinstance(other, PureSetBackend)

    def __hash__(self):
        return hash("pure")

    def validate(self, x):
        if not (isinstance(x, int) and not isinstance(x, bool) and x >= 0):
            raise BackendMismatch(f"{x!r} is not a natural-number atom")

    def sort_key(self, x):
        return x

    def element_to_json(self, x):
        return x

    def element_from_json(self, data):
        self.validate(data)
        return data

    def acl(self, A):
        A = tuple(A)
        self.check_elements(A)
        s = frozenset(A)
        return ClosedSet(s, tuple(sorted(s)), len(s), self)

    def rank(self, xs):
        xs = list(xs)
        self.check_elements(xs)
        return len(set(xs))

    def depth(self, K):
        return BOTTOM if not K.elements else len(K.elements)

    def extendable(self, p):
        p = as_map(p)
        self.check_elements(list(p) + list(p.values()))
        return is_injective(p)

    def _candidate_images(self, a):
        yield a
        b = 0
        while True:
            yield b
            b += 1

    def orbit(self, a, base, window):
        self.validate(a)
        if a >= window or any(x >= window for x in base.elements):
            raise InsufficientWindow(f"support exceeds window {window}")
        if a in base:
            return frozenset([a])
        small = frozenset(x for x in range(window) if x not in base)
        large = frozenset(x for x in range(window + 1) if x not in base)
        return UNBOUNDED if len(large) > len(small) else small

    def aut_M_of(self, K):
        pts = K.ordered
        if len(pts) < 2:
            return []
        gens = [{**{x: x for x in pts}, pts[0]: pts[1], pts[1]: pts[0]}]
        if len(pts) > 2:
            gens.append({x: pts[(i + 1) % len(pts)] for i, x in enumerate(pts)})
        return gens

    def apply(self, g, x):
        return g(x)

    def compose_aut(self, g, h):
        return g @ h

    def inverse_aut(self, g):
        return g.inverse()

    def identity_aut(self):
        return SupportPerm()

    def extend_to_automorphism(self, p):
        p = as_map(p)
        if not self.extendable(p):
            raise PreconditionError("partial map does not extend")
        m = {a: b for a, b in p.items() if a != b}
        # close each path into a cycle: send unused images back to unused domain points
        free_dom = sorted(set(m.values()) - set(m))
        free_cod = sorted(set(m) - set(m.values()))
        m.update(zip(free_dom, free_cod))
        return SupportPerm(m)

    def random_automorphism(self, n, rng):
        pts = list(range(n))
        rng.shuffle(pts)
        return SupportPerm(dict(zip(range(n), pts)))

    def window_elements(self, n):
        return list(range(n))

    def closed_sets_in_window(self, n, dims=None):
        dims = range(n + 1) if dims is None else dims
        return [self.acl(c) for d in dims for c in combinations(range(n), d)]

    def window_of(self, xs):
        return 1 + max(xs, default=-1)


# finite structures

@dataclass(frozen=True)
class FiniteStructure:
    size: int
    relations: tuple = ()  # of (arity, frozenset of tuples)

    def __post_init__(self):
        if not (isinstance(self.size, int) and self.size >= 1):
            raise ValueError("domain size must be a positive integer")
        rels = []
        for arity, tuples in self.relations:
            ts = frozenset(tuple(int(x) for x in t) for t in tuples)
            for t in ts:
                if len(t) != arity:
                    raise ValueError(f"tuple {t} does not have arity {arity}")
                if any(not 0 <= x < self.size for x in t):
                    raise ValueError(f"tuple {t} has an entry outside the domain")
            rels.append((int(arity), ts))
        object.__setattr__(self, "relations", tuple(rels))

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["size"], tuple((r["arity"], r["tuples"]) for r in data.get("relations", [])))

    def to_json(self):
        return {"size": self.size,
                "relations": [{"arity": a, "tuples": sorted(list(t) for t in ts)}
                              for a, ts in self.relations]}

    def with_relations(self, extra):
        return FiniteStructure(self.size, self.relations + tuple(extra))

    def is_automorphism(self, perm):
        return all(tuple(perm[x] for x in t) in ts for _, ts in self.relations for t in ts)


def _signatures(S):
    sig = [[0] * sum(a for a, _ in S.relations) for _ in range(S.size)]
    off = 0
    for arity, ts in S.relations:
        for t in ts:
            for pos, x in enumerate(t):
                sig[x][off + pos] += 1
        off += arity
    return [tuple(s) for s in sig]


def find_automorphism(S, partial=None):
    """An automorphism of S extending ``partial`` (a dict), or None.

    Backtracking over points in increasing order, pruning by per-point
    relation signatures and by every relation tuple whose entries are all
    assigned.
    """
    n = S.size
    partial = as_map(partial)
    if not is_injective(partial):
        return None
    if any(not (0 <= a < n and 0 <= b < n) for a, b in partial.items()):
        return None
    sig = _signatures(S)
    if any(sig[a] != sig[b] for a, b in partial.items()):
        return None
    touching = [[] for _ in range(n)]
    for _, ts in S.relations:
        for t in ts:
            for x in set(t):
                touching[x].append((t, ts))

    mapping = dict(partial)

    def consistent(x):
        for t, ts in touching[x]:
            if all(y in mapping for y in t) and tuple(mapping[y] for y in t) not in ts:
                return False
        return True

    if not all(consistent(x) for x in partial):
        return None
    used = set(mapping.values())
    todo = [x for x in range(n) if x not in mapping]

    def go(i):
        if i == len(todo):
            return True
        x = todo[i]
        for y in range(n):
            if y in used or sig[y] != sig[x]:
                continue
            mapping[x] = y
            used.add(y)
            if consistent(x) and go(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    if go(0):
        return tuple(mapping[x] for x in range(n))
    return None


def stabilizer_chain(S):
    """(transversal generators, group order) for Aut(S) along the base 0..n-1."""
    n = S.size
    gens, order = [], 1
    for i in range(n):
        fixed = {j: j for j in range(i)}
        size = 0
        for j in range(n):
            if j in fixed:
                continue
            g = find_automorphism(S, {**fixed, i: j})
            if g is not None:
                size += 1
                if j != i:
                    gens.append(g)
        order *= max(size, 1)
    return gens, order


def aut_group_finite(S, bound=DEFAULT_FINITE_BOUND):
    """Generators of Aut(S), found by backtracking search."""
    if S.size > bound:
        raise BoundExceeded(f"domain size {S.size} exceeds bound {bound}")
    return stabilizer_chain(S)[0]


def orbits_of(gens, n):
    """Orbit partition of range(n) under the group generated by ``gens``."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for x in range(n):
        groups.setdefault(find(x), set()).add(x)
    return [frozenset(s) for s in groups.values()]


class FiniteStructureBackend(Backend):
    """An explicit finite relational structure (domain size at most ten)."""

    kind = "finite"

    def __init__(self, S, bound=DEFAULT_FINITE_BOUND, group_cap=5040):
        if not isinstance(S, FiniteStructure):
            S = FiniteStructure.from_json(S)
        if S.size > bound:
            raise BoundExceeded(f"domain size {S.size} exceeds bound {bound}")
        self.S = S
        self.n = S.size
        self.group_cap = group_cap
        self.capabilities = BackendCapabilities(False, "fixed-point", False, None)
        self._gens, self._order = stabilizer_chain(S)
        self._acl_memo = {}
        self._group = None
        self._closed = None

    @classmethod
    def pure(cls, n):
        return cls(FiniteStructure(n))

    def __repr__(self):
        return f"FiniteStructureBackend(size={self.n}, |Aut|={self._order})"

    def __eq__(self, other):
        return isinstance(other, FiniteStructureBackend) and other.S == self.S

    def __hash__(self):
        return hash(("finite", self.S))

    def validate(self, x):
        if not (isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.n):
            raise BackendMismatch(f"{x!r} is not a point of a {self.n}-element structure")

    def sort_key(self, x):
        return x

    def element_to_json(self, x):
        return x

    def element_from_json(self, data):
        self.validate(data)
        return data

    @property
    def generators(self):
        return list(self._gens)

    @property
    def order(self):
        return self._order

    def group(self):
        """Aut(S) with all elements enumerated (bounded by group_cap)."""
        if self._group is None:
            if self._order > self.group_cap:
                raise BoundExceeded(f"|Aut| = {self._order} exceeds cap {self.group_cap}")
            self._group = PermGroup(self.n, self._gens, cap=self.group_cap)
        return self._group

    def _pointwise_structure(self, A):
        return self.S.with_relations((1, [(a,)]) for a in sorted(set(A)))

    def pointwise_generators(self, A):
        """Generators of G_(A), by search on S expanded with a constant for each a in A."""
        return stabilizer_chain(self._pointwise_structure(A))[0]

    def setwise_generators(self, K):
        return stabilizer_chain(self.S.with_relations([(1, [(x,) for x in K])]))[0]

    def acl(self, A):
        A = tuple(A)
        self.check_elements(A)
        key = frozenset(A)
        if key not in self._acl_memo:
            gens = self.pointwise_generators(key)
            fixed = frozenset(o for orb in orbits_of(gens, self.n) if len(orb) == 1 for o in orb)
            self._acl_memo[key] = fixed
        fixed = self._acl_memo[key]
        return ClosedSet(fixed, tuple(sorted(key)), len(fixed - self._bottom_set()), self)

    def _bottom_set(self):
        if frozenset() not in self._acl_memo:
            self._acl_memo[frozenset()] = frozenset(
                o for orb in orbits_of(self._gens, self.n) if len(orb) == 1 for o in orb)
        return self._acl_memo[frozenset()]

    def extendable(self, p):
        p = as_map(p)
        self.check_elements(list(p) + list(p.values()))
        return find_automorphism(self.S, p) is not None

    def _candidate_images(self, a):
        yield a
        yield from range(self.n)

    def orbit(self, a, base, window=None):
        self.validate(a)
        gens = self.pointwise_generators(base.elements)
        for orb in orbits_of(gens, self.n):
            if a in orb:
                return orb

    def aut_M_of(self, K):
        order = K.ordered
        out = []
        for g in self.setwise_generators(K.elements):
            m = {x: g[x] for x in order}
            if any(a != b for a, b in m.items()) and m not in out:
                out.append(m)
        return out

    def apply(self, g, x):
        return g[x]

    def compose_aut(self, g, h):
        return compose(g, h)

    def inverse_aut(self, g):
        return inverse(g)

    def identity_aut(self):
        return identity(self.n)

    def extend_to_automorphism(self, p):
        g = find_automorphism(self.S, as_map(p))
        if g is None:
            raise PreconditionError("partial map does not extend")
        return g

    def random_automorphism(self, n, rng):
        return rng.choice(sorted(self.group().elements))

    def window_elements(self, n=None):
        return list(range(self.n))

    def closed_sets(self):
        """Every fixed-point-closed set, sorted by size then elements."""
        if self._closed is None:
            seen = {}
            for d in range(self.n + 1):
                for A in combinations(range(self.n), d):
                    K = self.acl(A)
                    seen.setdefault(K.elements, K)
            self._closed = sorted(seen.values(), key=ClosedSet.sort_key)
        return list(self._closed)

    def closed_sets_in_window(self, n=None, dims=None):
        return self.closed_sets()

    def depth(self, K):
        """Longest chain bottom < K1 < ... < Km = K of closed sets; m."""
        bottom = self._bottom_set()
        if K.elements == bottom:
            return BOTTOM
        below = [C for C in self.closed_sets() if bottom < C.elements <= K.elements]
        best = {}
        for C in below:  # sorted by size, so proper subsets come first
            best[C.elements] = 1 + max((best[D.elements] for D in below
                                        if D.elements < C.elements), default=0)
        return best[K.elements]

    def window_of(self, xs):
        return self.n


def make_backend(spec):
    """Backend from a config fragment such as {"kind": "vector", "q": 3}."""
    kind = spec.get("kind")
    if kind == "vector":
        return VectorSpaceBackend(int(spec.get("q", 2)))
    if kind == "pure":
        return PureSetBackend()
    if kind == "finite":
        bound = spec.get("bound", DEFAULT_FINITE_BOUND)
        if "structure" in spec:
            S = FiniteStructure.from_json(spec["structure"])
        else:
            S = FiniteStructure(int(spec.get("size", 3)))
        return FiniteStructureBackend(S, bound=bound, group_cap=spec.get("group_cap", 5040))
    raise ValueError(f"unknown backend kind {kind!r}")
