"""Small exact permutation-group toolkit.

Permutations of ``range(n)`` are tuples ``p`` with ``p[i]`` the image of ``i``.
Products follow function composition: ``compose(p, q)(i) == p[q[i]]``.
Everything here enumerates elements, so it is meant for groups of at most a
few thousand elements.
"""

from collections import deque
from itertools import product

from .errors import BoundExceeded


def identity(n):
    return tuple(range(n))


def compose(p, q):
    return tuple(p[i] for i in q)


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def conjugate(g, h):
    """g^-1 h g."""
    return compose(inverse(g), compose(h, g))


def is_permutation(p, n=None):
    n = len(p) if n is None else n
    return len(p) == n and sorted(p) == list(range(n))


def perm_order(p):
    e = identity(len(p))
    k, x = 1, p
    while x != e:
        x = compose(p, x)
        k += 1
    return k


def generate(gens, mul, one, cap=None):
    """Closure of ``gens`` under ``mul`` starting from ``one`` (breadth first).

    Elements must be hashable. Raises BoundExceeded past ``cap`` elements.
    """
    seen = {one}
    frontier = deque([one])
    gens = list(gens)
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                if cap is not None and len(seen) > cap:
                    raise BoundExceeded(f"group closure exceeded {cap} elements")
                frontier.append(y)
    return seen


def closure(gens, n, cap=None):
    """All elements of the permutation group on range(n) generated by ``gens``."""
    return frozenset(generate(gens, compose, identity(n), cap))


class PermGroup:
    """A finite permutation group held as its full element set."""

    def __init__(self, n, gens=(), elements=None, cap=None):
        self.n = n
        self.gens = tuple(g for g in gens if g != identity(n))
        if elements is None:
            elements = closure(self.gens, n, cap)
        self.elements = frozenset(elements)

    @classmethod
    def trivial(cls, n):
        return cls(n, (), {identity(n)})

    @classmethod
    def symmetric(cls, n):
        if n < 2:
            return cls.trivial(n)
        gens = [tuple([1, 0] + list(range(2, n)))]
        if n > 2:
            gens.append(tuple(list(range(1, n)) + [0]))
        return cls(n, gens)

    def __len__(self):
        return len(self.elements)

    order = property(__len__)

    def __contains__(self, p):
        return p in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.n == other.n and self.elements == other.elements

    def __hash__(self):
        return hash((self.n, self.elements))

    def __repr__(self):
        return f"PermGroup(n={self.n}, order={len(self)})"

    def generators(self):
        """A small generating set (the stored one, or a greedy one)."""
        if self.gens or len(self) == 1:
            return list(self.gens)
        return greedy_generators(self.elements, self.n)

    def is_subgroup_of(self, other):
        return self.elements <= other.elements

    def is_normal_in(self, other):
        if not self.is_subgroup_of(other):
            return False
        for g in other.generators():
            gi = inverse(g)
            for h in self.generators() or [identity(self.n)]:
                if compose(gi, compose(h, g)) not in self.elements:
                    return False
        return True

    def orbit(self, x):
        return frozenset(g[x] for g in self.elements)

    def fixed_points(self):
        return frozenset(i for i in range(self.n) if all(g[i] == i for g in self.elements))

    def pointwise_stabilizer(self, points):
        pts = list(points)
        return PermGroup(self.n, elements={g for g in self.elements if all(g[i] == i for i in pts)})

    def setwise_stabilizer(self, points):
        s = frozenset(points)
        return PermGroup(self.n, elements={g for g in self.elements
                                             if frozenset(g[i] for i in s) == s})


def greedy_generators(elements, n):
    """Add elements (in sorted order) until they generate the whole set."""
    elements = frozenset(elements)
    gens = []
    current = {identity(n)}
    for g in sorted(elements):
        if g not in current:
            gens.append(g)
            current = closure(gens, n)
            if len(current) == len(elements):
                break
    return gens


def join(H, extra, n):
    """Elements of <H, extra> where H is a subgroup given by its element set."""
    H = set(H)
    if extra in H:
        return frozenset(H)
    gens = greedy_generators(H, n) + [extra]
    return closure(gens, n)


def subgroups(group, cap=5040):
    """All subgroups of a permutation group, by the cyclic-extension method.

    Returns a list of frozensets of elements, sorted by order and then by
    sorted element list, so the output is deterministic.
    """
    G = group.elements
    n = group.n
    if len(G) > cap:
        raise BoundExceeded(f"subgroup enumeration needs |G| <= {cap}, got {len(G)}")
    cyclic = {}
    for g in sorted(G):
        c = closure([g], n)
        cyclic.setdefault(c, g)
    gens_of_cyclic = list(cyclic.values())
    found = {frozenset([identity(n)])}
    layer = list(found)
    while layer:
        nxt = []
        for H in layer:
            for g in gens_of_cyclic:
                if g in H:
                    continue
                J = join(H, g, n)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        layer = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


# abstract finite groups as multiplication tables

def cayley_table(elements, mul):
    """(ordered element list, table) with table[i][j] = index of e_i * e_j."""
    elems = list(elements)
    index = {e: i for i, e in enumerate(elems)}
    return elems, [[index[mul(a, b)] for b in elems] for a in elems]


def table_identity(table):
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x for x in range(n)):
            return e
    raise ValueError("table has no identity")


def table_element_order(table, x):
    e = table_identity(table)
    k, y = 1, x
    while y != e:
        y = table[y][x]
        k += 1
    return k


def table_generators(table):
    """Greedy generating set of a table group."""
    n = len(table)
    e = table_identity(table)
    gens, span = [], {e}
    for x in range(n):
        if x in span:
            continue
        gens.append(x)
        span = _table_closure(table, gens, e)
        if len(span) == n:
            break
    return gens


def _table_closure(table, gens, e):
    seen = {e}
    frontier = [e]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = table[x][g]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def tables_isomorphic(t1, t2):
    """Brute-force isomorphism test between two group multiplication tables.

    Maps a generating set of t1 to every tuple of same-order elements of t2 and
    checks that the induced map is a well-defined bijective homomorphism.
    Returns the isomorphism as a list, or None.
    """
    n = len(t1)
    if n != len(t2):
        return None
    orders1 = sorted(table_element_order(t1, x) for x in range(n))
    orders2 = sorted(table_element_order(t2, x) for x in range(n))
    if orders1 != orders2:
        return None
    e1, e2 = table_identity(t1), table_identity(t2)
    gens = table_generators(t1)
    candidates = [[y for y in range(n) if table_element_order(t2, y) == table_element_order(t1, g)]
                  for g in gens]
    for images in product(*candidates):
        f = {e1: e2}
        frontier = [e1]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for g, gy in zip(gens, images):
                xy = t1[x][g]
                val = t2[f[x]][gy]
                if xy in f:
                    if f[xy] != val:
                        ok = False
                        break
                else:
                    f[xy] = val
                    frontier.append(xy)
        if not ok or len(f) != n or len(set(f.values())) != n:
            continue
        if all(f[t1[a][b]] == t2[f[a]][f[b]] for a in range(n) for b in range(n)):
            return [f[x] for x in range(n)]
    return None


def quotient_table(G, N, n):
    """Multiplication table of G/N for permutation groups given as element sets.

    Returns (coset representatives, table). N must be normal in G.
    """
    G = sorted(G)
    N = frozenset(N)
    reps, coset_of = [], {}
    for g in G:
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for h in N:
            coset_of[compose(g, h)] = idx
    if len(coset_of) != len(G):
        raise ValueError("N is not a subgroup of G")
    table = [[coset_of[compose(a, b)] for b in reps] for a in reps]
    # well-definedness on a second representative of each coset
    for a in G:
        for b in reps:
            if coset_of[compose(a, b)] != table[coset_of[a]][coset_of[b]]:
                raise ValueError("N is not normal in G")
    return reps, table
