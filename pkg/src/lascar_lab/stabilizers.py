"""Generalized stabilizers G_(K,L) and the closed-set / subgroup dictionary.

A descriptor ``GSDescriptor(K, L)`` stands for the group of automorphisms g
of M with g(K) = K and g restricted to K lying in the group generated by L.
``L`` is a tuple of bijections of K (dicts), each extendable to Aut(M).

Most relations between descriptors are decided from (K, L) alone. On finite
backends the same questions can also be answered literally, by listing the
elements of each group; the ``literal_*`` functions do that and serve as the
independent check.
"""

from dataclasses import dataclass, field as dc_field

from .errors import BackendMismatch, BoundExceeded, NoSupport, PreconditionError
from .groups import (PermGroup, compose, identity, inverse, quotient_table,
                     subgroups, tables_isomorphic, cayley_table)
from .structures import (BOTTOM, ClosedSet, is_injective, map_to_perm, perm_to_map)
from . import linalg as la


@dataclass(frozen=True, eq=False)
class GSDescriptor:
    K: ClosedSet
    L: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "L", tuple(dict(g) for g in self.L))

    @property
    def backend(self):
        return self.K.backend

    def group(self):
        """<L> as a permutation group on the positions of K.ordered."""
        if "_group" not in self.__dict__:
            order = self.K.ordered
            object.__setattr__(self, "_group", PermGroup(len(order), [map_to_perm(order, g) for g in self.L]))
        return self._group

    def __eq__(self, other):
        return (isinstance(other, GSDescriptor) and self.K == other.K
                and self.group() == other.group())

    def __hash__(self):
        return hash((self.K.elements, self.group().elements))

    def __repr__(self):
        return f"GSDescriptor(|K|={len(self.K)}, |L|={len(self.group())})"

    @property
    def is_pointwise(self):
        return len(self.group()) == 1

    def contains(self, g):
        """Membership of an automorphism of M."""
        b = self.backend
        image = {x: b.apply(g, x) for x in self.K.ordered}
        if set(image.values()) != self.K.elements:
            return False
        return map_to_perm(self.K.ordered, image) in self.group()

    def to_json(self):
        b = self.backend
        return {"K": self.K.to_json(),
                "L": [[[b.element_to_json(x), b.element_to_json(y)]
                       for x, y in sorted(g.items(), key=lambda kv: b.sort_key(kv[0]))]
                      for g in self.L]}

    @classmethod
    def from_json(cls, backend, data):
        K = backend.acl([backend.element_from_json(x) for x in data["K"]["generators"]])
        L = [{backend.element_from_json(x): backend.element_from_json(y) for x, y in g}
             for g in data.get("L", [])]
        for g in L:
            check_generator(K, g)
        return cls(K, tuple(L))


@dataclass(frozen=True)
class ExplicitSubgroup:
    """A subgroup of a finite Aut(M), listed element by element."""

    backend: object = dc_field(compare=False, repr=False)
    elements: frozenset = frozenset()

    def __post_init__(self):
        els = frozenset(self.elements)
        object.__setattr__(self, "elements", els)
        for a in els:
            if inverse(a) not in els:
                raise ValueError("explicit subgroup is not closed under inverse")
            for b in els:
                if compose(a, b) not in els:
                    raise ValueError("explicit subgroup is not closed under composition")

    def __len__(self):
        return len(self.elements)


def check_generator(K, g):
    b = K.backend
    if set(g) != K.elements or set(g.values()) != K.elements or not is_injective(g):
        raise PreconditionError("L generator is not a bijection of K")
    if not b.extendable(g):
        raise PreconditionError("L generator does not extend to an automorphism of M")


def _same_backend(*Ks):
    b = Ks[0].backend
    for K in Ks[1:]:
        if K.backend != b:
            raise BackendMismatch("descriptors live over different backends")
    return b


def pointwise(K):
    return GSDescriptor(K, ())


def setwise(K):
    return GSDescriptor(K, tuple(K.backend.aut_M_of(K)))


def restrict_perm(K, g_map, K2):
    """Restriction of a bijection of K (dict) to K2, or None if K2 is not preserved."""
    image = {x: g_map[x] for x in K2.ordered}
    if set(image.values()) != K2.elements:
        return None
    return image


def is_subgroup(H1, H2):
    """G_(K1,L1) <= G_(K2,L2), decided from the descriptors alone."""
    _same_backend(H1.K, H2.K)
    if not H2.K <= H1.K:
        return False
    L2 = H2.group()
    order2 = H2.K.ordered
    for f in H1.L:
        r = restrict_perm(H1.K, f, H2.K)
        if r is None or map_to_perm(order2, r) not in L2:
            return False
    return True


def is_normal_in(H1, H2):
    """G_(K1,L1) normal in G_(K2,L2), decided from the descriptors alone."""
    _same_backend(H1.K, H2.K)
    if H1.K != H2.K:
        return False
    return H1.group().is_normal_in(H2.group())


def descriptors_equal(H1, H2):
    return H1 == H2


# literal (element-level) side, finite backends only

def _require_finite(backend):
    if backend.kind != "finite":
        raise PreconditionError("element-level computation needs a finite backend")


def elements_of(H):
    """All g in Aut(M) belonging to G_(K,L) (finite backends)."""
    if isinstance(H, ExplicitSubgroup):
        return H.elements
    if "_elements" not in H.__dict__:
        b = H.backend
        _require_finite(b)
        object.__setattr__(H, "_elements", frozenset(g for g in b.group().elements if H.contains(g)))
    return H._elements


def literal_subgroup(H1, H2):
    return elements_of(H1) <= elements_of(H2)


def literal_normal(H1, H2):
    A, B = elements_of(H1), elements_of(H2)
    if not A <= B:
        return False
    # conjugating by a generating set of B suffices
    gens = PermGroup(len(next(iter(B))), elements=B).generators()
    return all(compose(inverse(g), compose(h, g)) in A for g in gens for h in A)


def pointwise_elements(backend, K):
    return frozenset(g for g in backend.group().elements if all(g[x] == x for x in K.elements))


def setwise_elements(backend, K):
    return frozenset(g for g in backend.group().elements
                     if frozenset(g[x] for x in K.elements) == K.elements)


def sandwiches(backend, K, elements):
    return pointwise_elements(backend, K) <= elements <= setwise_elements(backend, K)


def support(H, backend=None):
    """The least closed K with G_(K) <= H <= G_{K}.

    Descriptors carry their K. For explicit subgroups of a finite Aut(M) every
    closed set is scanned; if the sandwiching sets have no least element the
    subgroup has no well-defined support and NoSupport is raised with the
    minimal candidates attached.
    """
    if isinstance(H, GSDescriptor):
        return H.K
    backend = backend or H.backend
    _require_finite(backend)
    els = H.elements
    found = [K for K in backend.closed_sets() if sandwiches(backend, K, els)]
    if not found:
        raise NoSupport("no closed set sandwiches the subgroup", subgroup=H)
    minimal = [K for K in found if not any(C < K for C in found)]
    if len(minimal) > 1:
        raise NoSupport(f"{len(minimal)} incomparable minimal sandwiching sets",
                        subgroup=H, candidates=minimal)
    return minimal[0]


def sandwiching_sets(H, backend=None):
    backend = backend or H.backend
    return [K for K in backend.closed_sets() if sandwiches(backend, K, H.elements)]


def sandwich_decompose(H, backend=None):
    """(K, L) with L the restrictions of H to its support K; checked against H."""
    if isinstance(H, GSDescriptor):
        return H
    backend = backend or H.backend
    K = support(H, backend)
    order = K.ordered
    restricted = PermGroup(len(order),
                           elements={map_to_perm(order, {x: g[x] for x in order}) for g in H.elements})
    gens = [perm_to_map(order, p) for p in restricted.generators()]
    D = GSDescriptor(K, tuple(gens))
    if elements_of(D) != H.elements:
        raise NoSupport("restriction descriptor does not reproduce the subgroup", subgroup=H)
    if len(H) != len(pointwise_elements(backend, K)) * len(restricted):
        raise NoSupport("order identity |H| = |G_(K)| |L| failed", subgroup=H)
    return D


def all_explicit_subgroups(backend, cap=5040):
    _require_finite(backend)
    G = backend.group()
    if len(G) > cap:
        raise BoundExceeded(f"|Aut| = {len(G)} exceeds subgroup-enumeration cap {cap}")
    return [ExplicitSubgroup(backend, s) for s in subgroups(G, cap)]


@dataclass
class SupportEntry:
    order: int
    support: object  # ClosedSet or None
    candidates: list


@dataclass
class SupportReport:
    entries: list
    verdict: bool

    @property
    def failures(self):
        return [e for e in self.entries if e.support is None]


def lascar_condition2(backend, cap=5040):
    """Scan every subgroup of a finite Aut(M) for a least sandwiching closed set."""
    entries = []
    for H in all_explicit_subgroups(backend, cap):
        try:
            K = support(H, backend)
            entries.append(SupportEntry(len(H), K, [K]))
        except NoSupport as exc:
            entries.append(SupportEntry(len(H), None, list(exc.candidates)))
    return SupportReport(entries, all(e.support is not None for e in entries))


# condition (1): moving S off itself

@dataclass
class LascarWitness:
    g: object
    h: object
    moved: object  # an element s of S with g^-1 h g (s) outside S

    def verify(self, K, S):
        return verify_lascar_witness(K, S, self.g, self.h)


@dataclass
class LascarFailure:
    K: ClosedSet
    S: ClosedSet
    reason: str

    def __bool__(self):
        return False


def verify_lascar_witness(K, S, g, h):
    """g fixes K pointwise, h fixes S pointwise and g^-1 h g (S) != S."""
    b = K.backend
    if any(b.apply(g, x) != x for x in K.elements):
        return False
    if any(b.apply(h, x) != x for x in S.elements):
        return False
    gi = b.inverse_aut(g)
    image = frozenset(b.apply(gi, b.apply(h, b.apply(g, s))) for s in S.elements)
    return image != S.elements


def lascar_condition1(K, S):
    """Witnesses g in G_(K), h in G_(S) with g^-1 h g (S) != S."""
    b = _same_backend(K, S)
    if S <= K:
        raise PreconditionError("condition (1) needs S not contained in K")
    if b.kind == "vector":
        return _lascar1_vector(K, S)
    if b.kind == "pure":
        return _lascar1_pure(K, S)
    return _lascar1_finite(K, S)


def _lascar1_vector(K, S):
    b = K.backend
    F = b.F
    kb = list(b.basis(K))
    sb = list(b.basis(S))
    rel = []  # basis of S over K
    for s in sb:
        if la.rank(F, kb + rel + [s]) > len(kb) + len(rel):
            rel.append(s)
    n = la.dim_needed(kb + sb)
    m = len(rel)
    fresh = [la.basis_vector(n + j) for j in range(m)]
    fresher = [la.basis_vector(n + m + j) for j in range(m)]
    # g fixes K and sends S's basis over K to fresh vectors, so g(S) is independent from S over K
    g = b.extend_to_automorphism({**{x: x for x in kb}, **dict(zip(rel, fresh))})
    # h fixes K + S and pushes the fresh vectors further out
    sk = la.independent_subset(F, kb + sb)
    h = b.extend_to_automorphism({**{x: x for x in sk}, **dict(zip(fresh, fresher))})
    w = LascarWitness(g, h, rel[0])
    if not w.verify(K, S):
        return LascarFailure(K, S, "constructed pair did not move S")
    return w


def _lascar1_pure(K, S):
    b = K.backend
    outside = sorted(S.elements - K.elements)
    top = 1 + max(K.elements | S.elements)
    m = len(outside)
    fresh = list(range(top, top + m))
    fresher = list(range(top + m, top + 2 * m))
    g = b.extend_to_automorphism(dict(zip(outside, fresh)))
    h = b.extend_to_automorphism(dict(zip(fresh, fresher)))
    w = LascarWitness(g, h, outside[0])
    if not w.verify(K, S):
        return LascarFailure(K, S, "constructed pair did not move S")
    return w


def _lascar1_finite(K, S):
    b = K.backend
    GK = sorted(pointwise_elements(b, K))
    GS = sorted(pointwise_elements(b, S))
    for g in GK:
        for h in GS:
            if verify_lascar_witness(K, S, g, h):
                gi = inverse(g)
                moved = next(s for s in S.ordered if gi[h[g[s]]] not in S.elements)
                return LascarWitness(g, h, moved)
    return LascarFailure(K, S, f"no pair among {len(GK)} x {len(GS)} elements moves S")


# PS = G2 and the quotient Aut_M(K)

def descriptor_universe(backend, closed_sets, cap=5040):
    """All descriptors (K, L) with K in ``closed_sets`` and L <= Aut_M(K)."""
    out = []
    for K in closed_sets:
        A = backend.aut_M_group(K)
        if len(A) > cap:
            raise BoundExceeded(f"|Aut_M(K)| = {len(A)} exceeds cap {cap}")
        order = K.ordered
        for sub in subgroups(A, cap):
            gens = PermGroup(len(order), elements=sub).generators()
            out.append(GSDescriptor(K, tuple(perm_to_map(order, p) for p in gens)))
    return out


def is_pointwise_stabilizer(H, universe):
    """No H' in the universe is a proper normal subgroup of H."""
    for H2 in universe:
        if is_subgroup(H2, H) and is_normal_in(H2, H) and not is_subgroup(H, H2):
            return False
    return True


def aut_M_K_iso_detect(H, universe):
    """The quotient H'/H for the largest H' in the universe normalizing H.

    Returns (H', coset representatives, multiplication table). Requires H to be
    a pointwise stabilizer in the universe.
    """
    if not is_pointwise_stabilizer(H, universe):
        raise PreconditionError("H is not a pointwise stabilizer in this universe")
    above = [H2 for H2 in universe if is_normal_in(H, H2) and is_subgroup(H, H2)]
    top = [H2 for H2 in above
           if not any(is_subgroup(H2, H3) and not is_subgroup(H3, H2) for H3 in above)]
    if len(top) != 1:
        raise PreconditionError(f"expected one maximal normalizing descriptor, got {len(top)}")
    Hmax = top[0]
    big = Hmax.group()
    small = H.group()
    reps, table = quotient_table(big.elements, small.elements, big.n)
    return Hmax, reps, table


def aut_M_table(K):
    A = K.backend.aut_M_group(K)
    return cayley_table(sorted(A.elements), compose)[1]


def literal_quotient_table(backend, K):
    """G_{K}/G_(K) computed from the element lists of a finite Aut(M)."""
    GK = setwise_elements(backend, K)
    PK = pointwise_elements(backend, K)
    return quotient_table(GK, PK, backend.n)[1]


# Galois connection

def fix_G(H, window=None):
    """Elements fixed by every member of the group H.

    Finite backends and explicit subgroups: by listing elements. Infinite
    backends: an element outside K is fixed iff no other window element has
    the same type over K; elements of K are fixed iff every
    generator of L fixes them.
    """
    if isinstance(H, ExplicitSubgroup):
        return frozenset(x for x in range(H.backend.n) if all(g[x] == x for g in H.elements))
    b = H.backend
    if b.kind == "finite":
        els = elements_of(H)
        return frozenset(x for x in range(b.n) if all(g[x] == x for g in els))
    if window is None:
        raise PreconditionError("infinite backends need a window")
    out = set()
    for x in b.window_elements(window):
        if x in H.K:
            if all(g[x] == x for g in H.L):
                out.add(x)
        else:
            if b.moved_witness(x, H.K, window) is None:
                out.add(x)
    return frozenset(out)


def fix_M(K):
    return pointwise(K)


def galois_roundtrip(K, window=None):
    """(Fix_G(Fix_M(K)) == K, Fix_M(Fix_G(G_(K))) == G_(K))."""
    b = K.backend
    H = fix_M(K)
    fixed = fix_G(H, window)
    first = fixed == K.elements
    K2 = b.acl(sorted(fixed, key=b.sort_key))
    if b.kind == "finite":
        second = pointwise_elements(b, K2) == pointwise_elements(b, K)
    else:
        second = fix_M(K2) == H and K2.elements == fixed
    return first, second


# depth and k_M

def depth_k(K):
    return K.depth


def k_M(backend, window=None):
    """Longest strict chain acl(a1) < ... < acl(ak) with every a_i outside acl(0)."""
    bottom = backend.bottom()
    singles = {}
    for a in backend.window_elements(window):
        C = backend.acl([a])
        if C != bottom:
            singles.setdefault(C.elements, C)
    ordered = sorted(singles.values(), key=len)
    best = {}
    for C in ordered:
        best[C.elements] = 1 + max((best[D.elements] for D in ordered if D.elements < C.elements),
                                   default=0)
    return max(best.values(), default=0)


def open_limit_chain(backend, A, points, window):
    """Increasing sets A_0 = A, A_{i+1} = A_i plus the orbit of b_i over acl(A)."""
    base = backend.acl(A)
    current = set(base.elements)
    yield frozenset(current)
    for b in points:
        orb = backend.orbit(b, base, window)
        if orb == "unbounded":
            raise PreconditionError(f"{b!r} has an infinite orbit over acl(A)")
        current |= orb
        yield frozenset(current)


def is_bottom(K):
    return K.depth == BOTTOM


__all__ = [
    "ExplicitSubgroup", "GSDescriptor", "LascarFailure", "LascarWitness",
    "aut_M_K_iso_detect", "depth_k", "descriptor_universe", "elements_of", "fix_G", "fix_M",
    "galois_roundtrip", "is_normal_in", "is_pointwise_stabilizer", "is_subgroup", "k_M",
    "lascar_condition1", "lascar_condition2", "literal_normal", "literal_subgroup",
    "pointwise", "sandwich_decompose", "setwise", "support", "tables_isomorphic",
]
