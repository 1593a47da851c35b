"""From automorphisms of Aut(M) to maps of expanded windows, and back.

Topological automorphisms of Aut(M) enter only in realizable form: conjugation
by an automorphism of M (inner) or by a semilinear map of the vector space.
``f_from_alpha`` turns such an action into a window map, ``alpha_from_f``
recovers the action on the window from a window map, and the geometry maps
(``pi_map``, ``phi_map``, ``semilinear_search``) connect everything to the
projective geometry of lines.
"""

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations, permutations

from . import linalg as la
from .errors import (Inapplicable, NotAnIsomorphism, PreconditionError, WindowOverflow)
from .expanded import Triple, WindowMap, iso_check
from .rank import Geometry, canonical_geometry


class Conjugation:
    """The automorphism g -> h g h^-1 of Aut(M), for h in Aut(M) or a semilinear overgroup."""

    def __init__(self, backend, h):
        self.backend = backend
        self.h = h

    @property
    def kind(self):
        if self.backend.kind == "vector" and not self.h.is_linear:
            return "semilinear"
        return "inner"

    def point(self, x):
        return self.backend.apply(self.h, x)

    def __call__(self, g):
        b = self.backend
        return b.compose_aut(self.h, b.compose_aut(g, b.inverse_aut(self.h)))

    def __matmul__(self, other):
        """(self @ other)(g) == self(other(g)); conjugation by h_self h_other."""
        return Conjugation(self.backend, self.backend.compose_aut(self.h, other.h))

    def inverse(self):
        return Conjugation(self.backend, self.backend.inverse_aut(self.h))

    @classmethod
    def identity(cls, backend):
        return cls(backend, backend.identity_aut())

    def __repr__(self):
        return f"Conjugation({self.kind}, {self.h!r})"

    def to_json(self):
        h = self.h
        if hasattr(h, "to_json"):
            return {"kind": self.kind, "map": h.to_json()}
        if hasattr(h, "mapping"):
            return {"kind": self.kind, "map": sorted(h.mapping.items())}
        return {"kind": self.kind, "map": list(h)}


def _image_closed(backend, h, K):
    return backend.acl([backend.apply(h, x) for x in K.generators])


def f_from_alpha(alpha, W):
    """(K, p, K') -> (hK, h p h^-1, hK') on every triple of the window."""
    b = W.backend
    h = alpha.h
    out = {}
    for t in W.triples:
        hK = _image_closed(b, h, t.K)
        hKp = _image_closed(b, h, t.Kp)
        hp = {b.apply(h, x): b.apply(h, y) for x, y in t.p}
        u = Triple.make(hK, hp, hKp)
        if u not in W:
            need = b.window_of(list(hK.generators) + list(hKp.generators))
            raise WindowOverflow("conjugate triple leaves the window", required=need)
        out[t] = u
    return WindowMap(out, W)


def alpha_from_f(f, g, W):
    """Recover alpha(g) on the window: glue the second components of f(K, g|K, gK)."""
    b = W.backend
    glued = {}
    for K in W.closed_sets:
        gK = _image_closed(b, g, K)
        t = Triple.make(K, {x: b.apply(g, x) for x in K.elements}, gK)
        if t not in W:
            raise WindowOverflow("g moves a closed set out of the window",
                                 required=b.window_of(list(gK.generators)) )
        u = f(t)
        for x, y in u.p:
            if glued.get(x, y) != y:
                raise NotAnIsomorphism("pieces of alpha(g) disagree", predicate="E_2",
                                       instance=(K, x))
            glued[x] = y
    if len(set(glued.values())) != len(glued) or not b.extendable(glued):
        raise NotAnIsomorphism("glued map does not extend", predicate="E_n")
    return glued


def action_on_window(alpha, g, W):
    """alpha(g) restricted to the window's points, computed directly."""
    ag = alpha(g)
    return {x: W.backend.apply(ag, x) for x in W.points}


def check_roundtrip(alpha, g, W):
    return alpha_from_f(f_from_alpha(alpha, W), g, W) == action_on_window(alpha, g, W)


def check_functoriality(alpha, beta, W):
    """f_{beta alpha} == f_beta f_alpha, triple by triple."""
    lhs = f_from_alpha(beta @ alpha, W)
    rhs = f_from_alpha(beta, W) @ f_from_alpha(alpha, W)
    return lhs == rhs


# geometry side

@dataclass
class GeometryAutomorphism:
    point_map: dict  # ClosedSet -> ClosedSet
    certified: bool = False

    def __call__(self, P):
        return self.point_map[P]

    def __eq__(self, other):
        return isinstance(other, GeometryAutomorphism) and self.point_map == other.point_map

    def __matmul__(self, other):
        return GeometryAutomorphism({P: self.point_map[Q] for P, Q in other.point_map.items()})

    def is_identity(self):
        return all(P == Q for P, Q in self.point_map.items())


def certify(gmap, G, samples=200, seed=0):
    """Check g(cl X) == cl(g X) on all pairs of points (or a sample)."""
    rng = random.Random(seed)
    pts = G.points
    if len(pts) ** 2 <= samples * 10:
        sets = [[P] for P in pts] + [list(c) for c in combinations(pts, 2)]
    else:
        sets = [rng.sample(pts, rng.randint(1, min(3, len(pts)))) for _ in range(samples)]
    for X in sets:
        left = frozenset(gmap[P] for P in G.cl(X))
        right = G.cl([gmap[P] for P in X])
        if left != right:
            return False
    return True


def _require_pregeometric(W):
    if W.k != 1:
        raise Inapplicable("the canonical map needs a k = 1 window")
    if W.backend.kind not in ("vector", "pure"):
        raise Inapplicable("the canonical map needs a pregeometric backend")


def geometry_of_window(W):
    """The canonical geometry whose points are the window's closed sets."""
    b = W.backend
    return Geometry(list(W.closed_sets), lambda X: b.acl([x for P in X for x in P.generators]))


def xi(f, W, G=None):
    """Point map K -> K' read off from f(K, id, K) = (K', id, K')."""
    _require_pregeometric(W)
    G = G or geometry_of_window(W)
    pm = {}
    for P in G.points:
        u = f(Triple.identity(P))
        if not u.is_identity:
            raise NotAnIsomorphism("identity triple not sent to an identity triple",
                                   predicate="identity", instance=(P,))
        pm[P] = u.K
    return GeometryAutomorphism(pm, certify(pm, G))


def pi_map(alpha, W, G=None):
    return xi(f_from_alpha(alpha, W), W, G)


def phi_map(h, G, backend):
    """The point map K -> h(K)."""
    pm = {}
    index = {P.elements: P for P in G.points}
    for P in G.points:
        img = _image_closed(backend, h, P)
        if img.elements not in index:
            raise WindowOverflow("h moves a point out of the geometry window")
        pm[P] = index[img.elements]
    return GeometryAutomorphism(pm, certify(pm, G))


def phi_trivial_forces_scalar(backend, h, n):
    """If h fixes every line of GF(q)^n, is its matrix a scalar?

    Returns (fixes_all_lines, is_scalar) for a linear h.
    """
    G = canonical_geometry(backend, n)
    fixes = all(_image_closed(backend, h, P) == P for P in G.points)
    M = la.pad_matrix(h.matrix, n)
    c = M[0][0]
    scalar = all(M[i][j] == (c if i == j else 0) for i in range(n) for j in range(n))
    return fixes, scalar


# kernel of the geometry action

def line_rep(K):
    """The vector of a line whose top coefficient is 1."""
    for v in K.ordered:
        if v and v[-1][1] == 1:
            return v
    raise ValueError("not a line")


def line_coefficient(backend, t):
    """mu with p(rep K) = mu * rep K'."""
    v, w = line_rep(t.K), line_rep(t.Kp)
    img = t.map[v]
    for mu in range(1, backend.q):
        if la.scale(backend.F, mu, w) == img:
            return mu
    raise ValueError("map is not a scalar multiple between the line reps")


@dataclass
class KernelElement:
    f: object
    per_line: dict  # line (ClosedSet) -> tuple (f_i(1), ..., f_i(q-1))
    multiplicative: bool = True
    uniform: bool = True

    def common(self):
        vals = set(self.per_line.values())
        return next(iter(vals)) if len(vals) == 1 else None


def kernel_extract(f, q, W):
    """Per-line maps f_i on the nonzero scalars for a window map fixing every line."""
    b = W.backend
    if b.kind != "vector" or b.q != q:
        raise Inapplicable("kernel extraction runs on a GF(q) vector window")
    lines = [K for K in W.closed_sets if K.rank == 1]
    for K in lines:
        u = f(Triple.identity(K))
        if u.K != K:
            raise PreconditionError("window map moves a line, so it is outside the kernel")
    F = b.F
    per_line = {}
    for K in lines:
        v = line_rep(K)
        vals = [0] * q
        for lam in range(1, q):
            t = Triple.make(K, {x: la.scale(F, lam, x) for x in K.elements}, K)
            u = f(t)
            if u.K != K or u.Kp != K:
                raise NotAnIsomorphism("self-map of a line sent off the line", predicate="Dom",
                                       instance=(t,))
            vals[lam] = line_coefficient(b, u)
        per_line[K] = tuple(vals[1:])
    for K, vals in per_line.items():
        fi = dict(zip(range(1, q), vals))
        if fi[1] != 1:
            raise NotAnIsomorphism("f_i(1) != 1", predicate="identity", instance=(K,))
        if sorted(vals) != list(range(1, q)):
            raise NotAnIsomorphism("f_i is not a bijection", predicate="compose", instance=(K,))
        for lam in range(1, q):
            for mu in range(1, q):
                if fi[F.mul(lam, mu)] != F.mul(fi[lam], fi[mu]):
                    raise NotAnIsomorphism("f_i is not multiplicative", predicate="compose",
                                           instance=(K, lam, mu))
            if fi[F.inv(lam)] != F.inv(fi[lam]):
                raise NotAnIsomorphism("f_i does not respect inverses", predicate="inverse",
                                       instance=(K, lam))
    if len(set(per_line.values())) > 1:
        raise NotAnIsomorphism("f_i differs between lines", predicate="E_n")
    return KernelElement(f, per_line)


def scalar_twist(W, sigma):
    """Window map replacing the coefficient mu of every line map by sigma(mu).

    ``sigma`` is a dict on the nonzero scalars. Only meaningful for k = 1
    windows, where every triple is a scalar multiple between line reps.
    """
    b = W.backend
    F = b.F
    out = {}
    for t in W.triples:
        mu = line_coefficient(b, t)
        w = line_rep(t.Kp)
        v = line_rep(t.K)
        nu = sigma[mu]
        p = {}
        for x in t.K.elements:
            if not x:
                p[x] = x
                continue
            c = next(c for c in range(1, b.q) if la.scale(F, c, v) == x)
            p[x] = la.scale(F, F.mul(c, nu), w)
        out[t] = Triple.make(t.K, p, t.Kp)
    return WindowMap(out, W)


def realizable_kernel_values(W, en_max=3, samples=200):
    """Every bijection of the nonzero scalars fixing 1 whose twist is a window automorphism."""
    b = W.backend
    units = list(range(2, b.q))
    found = []
    for perm in permutations(units):
        sigma = {1: 1, **dict(zip(units, perm))}
        f = scalar_twist(W, sigma)
        if set(f.mapping.values()) != set(W.triples):
            continue
        if iso_check(W, W, f, samples=samples, en_max=en_max):
            found.append(tuple(sigma[m] for m in range(1, b.q)))
    return found


def aut_of_cyclic_order(n):
    """|Aut(Z/n)| = Euler's phi of n."""
    from math import gcd
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


# semilinear maps realizing geometry automorphisms

def semilinear_search(g, q, n, G, backend):
    """A semilinear map inducing the point map g on the lines of GF(q)^n, or None.

    Tries Frobenius exponents in increasing order. The images of the basis
    lines fix each column up to a scalar; the image of the all-ones line fixes
    those scalars. The candidate is then checked on every line.
    """
    if n < 3:
        raise PreconditionError("semilinear search needs a window of dimension at least 3")
    F = backend.F
    by_elements = {P.elements: P for P in G.points}
    basis_lines = [by_elements[backend.acl([la.basis_vector(i)]).elements] for i in range(n)]
    ones = by_elements[backend.acl([la.vec({i: 1 for i in range(n)})]).elements]
    ws = [line_rep(g(P)) for P in basis_lines]
    u = line_rep(g(ones))
    cs = la.coordinates(F, u, ws)
    if cs is None or any(c == 0 for c in cs):
        return None
    cols = [la.to_dense(la.scale(F, c, w), n) for c, w in zip(cs, ws)]
    A = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    if not la.is_invertible(F, A):
        return None
    for e in range(F.degree):
        cand = la.SemilinearMap(q, A, e)
        if all(_image_closed(backend, cand, P) == g(P) for P in G.points):
            return cand
    return None


# diagram check

@dataclass
class HomomorphismRecord:
    name: str
    evaluations: list = dc_field(default_factory=list)


@dataclass
class DiagramReport:
    commutes: list
    section: list
    records: list
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return all(self.commutes) and all(self.section) and not self.failures


def _pm_json(gm):
    return sorted([[list(P.generators), list(Q.generators)] for P, Q in gm.point_map.items()])


def diagram_check(actions, W, G=None, geometry_samples=()):
    """phi_H(h) == pi(conjugation by h) for each action; pi(conj by g-hat) == g for each g."""
    b = W.backend
    G = G or geometry_of_window(W)
    phi_rec, pi_rec, sec_rec = (HomomorphismRecord("phi_H"), HomomorphismRecord("pi.gamma"),
                                HomomorphismRecord("section"))
    commutes, section, failures = [], [], []
    for alpha in actions:
        direct = phi_map(alpha.h, G, b)
        via = pi_map(alpha, W, G)
        commutes.append(direct == via)
        phi_rec.evaluations.append((alpha.to_json(), _pm_json(direct)))
        pi_rec.evaluations.append((alpha.to_json(), _pm_json(via)))
    for g in geometry_samples:
        ghat = semilinear_search(g, b.q, W.size, G, b)
        if ghat is None:
            section.append(False)
            failures.append("semilinear search found no realization")
            continue
        back = pi_map(Conjugation(b, ghat), W, G)
        section.append(back == g)
        sec_rec.evaluations.append((ghat.to_json(), back == g))
    return DiagramReport(commutes, section, [phi_rec, pi_rec, sec_rec], failures)


def random_semilinear(backend, n, rng, frobenius=None):
    A = la.random_invertible(backend.F, n, rng)
    e = rng.randrange(backend.F.degree) if frobenius is None else frobenius
    return la.SemilinearMap(backend.q, A, e)


def frobenius_map(q, e=1):
    return la.SemilinearMap(q, (), e)
