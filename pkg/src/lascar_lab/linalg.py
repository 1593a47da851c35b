"""Sparse vectors and exact linear algebra over GF(q).

A vector of the countable-dimensional space over GF(q) is a tuple of
``(index, coefficient)`` pairs sorted by index with no zero coefficients, so
equal vectors have identical representations. The zero vector is ``()``.
Dense work (elimination, matrices) uses plain lists of field codes.
"""

from itertools import combinations, product

from .gf import field


def vec(coords):
    """Canonical sparse vector from a mapping ``index -> coefficient``."""
    return tuple(sorted((int(i), int(c)) for i, c in dict(coords).items() if c))


def basis_vector(i, c=1):
    return ((i, c),)


def is_vector(x, q):
    if not isinstance(x, tuple):
        return False
    last = -1
    for pair in x:
        if not (isinstance(pair, tuple) and len(pair) == 2):
            return False
        i, c = pair
        if not (isinstance(i, int) and isinstance(c, int)):
            return False
        if i <= last or not 0 < c < q:
            return False
        last = i
    return True


def top_index(v):
    """Largest index in the support, -1 for the zero vector."""
    return v[-1][0] if v else -1


def dim_needed(vectors):
    return 1 + max((top_index(v) for v in vectors), default=-1)


def to_dense(v, n):
    out = [0] * n
    for i, c in v:
        out[i] = c
    return out


def from_dense(xs):
    return tuple((i, c) for i, c in enumerate(xs) if c)


def vector_key(v):
    """Canonical enumeration order: max support index, then coefficients low to high."""
    m = top_index(v)
    return (m, tuple(to_dense(v, m + 1)))


def vectors_in_window(q, n):
    """All vectors supported on indices < n, in canonical order."""
    out = [()]
    for m in range(n):
        for low in product(range(q), repeat=m):
            for top in range(1, q):
                out.append(from_dense(list(low) + [top]))
    return out


def iter_vectors(q):
    """The whole countable space in canonical order (infinite)."""
    yield ()
    m = 0
    while True:
        for low in product(range(q), repeat=m):
            for top in range(1, q):
                yield from_dense(list(low) + [top])
        m += 1


def add(F, u, v):
    d = dict(u)
    at = F.add_table
    for i, c in v:
        d[i] = at[d.get(i, 0)][c]
    return tuple(sorted((i, c) for i, c in d.items() if c))


def scale(F, c, v):
    if c == 0:
        return ()
    mt = F.mul_table[c]
    return tuple((i, mt[x]) for i, x in v)


def combine(F, coeffs, vectors):
    d = {}
    at, mt = F.add_table, F.mul_table
    for a, v in zip(coeffs, vectors):
        if a:
            row = mt[a]
            for i, c in v:
                d[i] = at[d.get(i, 0)][row[c]]
    return tuple(sorted((i, c) for i, c in d.items() if c))


def frobenius_vector(F, v, e):
    if e % F.degree == 0:
        return v
    return tuple((i, F.frobenius(c, e)) for i, c in v)


# dense elimination

def row_reduce(F, rows):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    at, mt, neg, inv = F.add_table, F.mul_table, F.neg_table, F.inv_table
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = inv[rows[r][c]]
        if s != 1:
            ms = mt[s]
            rows[r] = [ms[x] for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    mf = mt[neg[f]]
                    rows[i] = [at[x][mf[y]] for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_dense(F, rows):
    return len(row_reduce(F, rows)[0])


def rank(F, vectors):
    vectors = [v for v in vectors if v]
    if not vectors:
        return 0
    n = dim_needed(vectors)
    return rank_dense(F, [to_dense(v, n) for v in vectors])


def echelon_basis(F, vectors):
    """Canonical basis (reduced echelon, sparse) of the span of ``vectors``."""
    vectors = [v for v in vectors if v]
    if not vectors:
        return ()
    n = dim_needed(vectors)
    # reverse columns so the pivot is the top index; reduced form is then canonical
    rows = [list(reversed(to_dense(v, n))) for v in vectors]
    red, _ = row_reduce(F, rows)
    return tuple(sorted((from_dense(list(reversed(r))) for r in red), key=vector_key))


def independent_subset(F, vectors):
    """Greedy maximal independent subsequence, preserving order."""
    chosen = []
    r = 0
    for v in vectors:
        if v and rank(F, chosen + [v]) > r:
            chosen.append(v)
            r += 1
    return chosen


def in_span(F, v, vectors):
    return rank(F, list(vectors) + [v]) == rank(F, vectors)


def span_elements(F, basis):
    """All q^d elements of the span of an independent list."""
    basis = list(basis)
    return [combine(F, cs, basis) for cs in product(range(F.q), repeat=len(basis))]


def coordinates(F, v, basis):
    """Coefficients c with v = sum c_i basis_i; None if v is outside the span."""
    basis = list(basis)
    n = dim_needed(basis + [v])
    d = len(basis)
    # columns are basis vectors, augmented with v
    rows = [[to_dense(b, n)[j] for b in basis] + [to_dense(v, n)[j]] for j in range(n)]
    red, piv = row_reduce(F, rows)
    if d in piv:
        return None
    coeffs = [0] * d
    for row, c in zip(red, piv):
        coeffs[c] = row[d]
    return coeffs


def linear_map_fingerprint_ok(F, pairs):
    """True iff x_i -> y_i induces a well-defined injective linear map on span(x)."""
    if not pairs:
        return True
    xs = [x for x, _ in pairs]
    ys = [y for _, y in pairs]
    n = dim_needed(xs + ys)
    X = [to_dense(x, n) for x in xs]
    Y = [to_dense(y, n) for y in ys]
    rx = rank_dense(F, X) if any(xs) else 0
    ry = rank_dense(F, Y) if any(ys) else 0
    if rx != ry:
        return False
    rxy = rank_dense(F, [a + b for a, b in zip(X, Y)])
    return rxy == rx


# subspaces

def subspaces(q, n, dims=None):
    """All subspaces of GF(q)^n as canonical echelon bases, ordered by dimension."""
    F = field(q)
    dims = range(n + 1) if dims is None else dims
    out = []
    for d in dims:
        found = []
        for pivots in combinations(range(n), d):
            free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n)
                    if c not in pivots]
            for vals in product(range(q), repeat=len(free)):
                rows = [[0] * n for _ in range(d)]
                for r, p in enumerate(pivots):
                    rows[r][p] = 1
                for (r, c), x in zip(free, vals):
                    rows[r][c] = x
                found.append(echelon_basis(F, [from_dense(r) for r in rows]))
        out.extend(sorted(set(found), key=lambda b: [vector_key(v) for v in b]))
    return out


def count_subspaces(q, n, d):
    """Gaussian binomial coefficient [n choose d]_q."""
    num, den = 1, 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# matrices (tuples of rows)

def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(F, A, B):
    at, mt = F.add_table, F.mul_table
    n, m = len(A), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            s = 0
            for k, a in enumerate(Ai):
                if a:
                    b = B[k][j]
                    if b:
                        s = at[s][mt[a][b]]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(F, A, x):
    at, mt = F.add_table, F.mul_table
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, x):
            if a and b:
                s = at[s][mt[a][b]]
        out.append(s)
    return out


def mat_inv(F, A):
    n = len(A)
    aug = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    red, piv = row_reduce(F, aug)
    if len(red) < n or piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red)


def is_invertible(F, A):
    return rank_dense(F, [list(r) for r in A]) == len(A)


def mat_frobenius(F, A, e):
    if e % F.degree == 0:
        return A
    return tuple(tuple(F.frobenius(x, e) for x in row) for row in A)


def pad_matrix(A, n):
    m = len(A)
    if m >= n:
        return A
    return tuple(tuple(A[i][j] if i < m and j < m else (1 if i == j else 0)
                       for j in range(n)) for i in range(n))


def random_invertible(F, n, rng):
    while True:
        A = tuple(tuple(rng.randrange(F.q) for _ in range(n)) for _ in range(n))
        if is_invertible(F, A):
            return A


def all_invertible(F, n):
    """Every element of GL(n, q) (only for small n, q)."""
    out = []
    for entries in product(range(F.q), repeat=n * n):
        A = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if is_invertible(F, A):
            out.append(A)
    return out


def gl_order(q, n):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


class SemilinearMap:
    """v -> A . tau(v), tau = coordinatewise x -> x^(p^frobenius).

    ``matrix`` acts on coordinates below its size; coordinates at or beyond it
    are only twisted by tau. With ``frobenius == 0`` this is a finitely
    supported linear automorphism of the countable-dimensional space.
    """

    __slots__ = ("q", "frobenius", "matrix", "_F")

    def __init__(self, q, matrix, frobenius=0):
        F = field(q)
        self.q = q
        self._F = F
        self.frobenius = frobenius % F.degree
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        if self.matrix and not is_invertible(F, self.matrix):
            raise ValueError("semilinear map needs an invertible matrix")

    @classmethod
    def identity(cls, q, n=0):
        return cls(q, identity_matrix(n))

    @property
    def size(self):
        return len(self.matrix)

    @property
    def is_linear(self):
        return self.frobenius == 0

    def __call__(self, v):
        F = self._F
        v = frobenius_vector(F, v, self.frobenius)
        n = self.size
        if n == 0:
            return v
        head = to_dense([(i, c) for i, c in v if i < n], n)
        img = mat_vec(F, self.matrix, head)
        return from_dense(img) + tuple((i, c) for i, c in v if i >= n)

    def _padded(self, n):
        return pad_matrix(self.matrix, n)

    def __matmul__(self, other):
        """Composition: (self @ other)(v) == self(other(v))."""
        F = self._F
        n = max(self.size, other.size)
        A, B = self._padded(n), other._padded(n)
        M = mat_mul(F, A, mat_frobenius(F, B, self.frobenius))
        return SemilinearMap(self.q, M, self.frobenius + other.frobenius)

    def inverse(self):
        F = self._F
        e = (-self.frobenius) % F.degree
        Ainv = mat_inv(F, self.matrix) if self.matrix else ()
        return SemilinearMap(self.q, mat_frobenius(F, Ainv, e), e)

    def normalized(self):
        """Drop trailing identity rows/columns so equal maps compare equal."""
        A = self.matrix
        n = len(A)
        while n > 0 and all(A[n - 1][j] == (1 if j == n - 1 else 0) for j in range(n)) \
                and all(A[i][n - 1] == 0 for i in range(n - 1)):
            n -= 1
        return tuple(tuple(row[:n]) for row in A[:n])

    def __eq__(self, other):
        return (isinstance(other, SemilinearMap) and self.q == other.q
                and self.frobenius == other.frobenius
                and self.normalized() == other.normalized())

    def __hash__(self):
        return hash((self.q, self.frobenius, self.normalized()))

    def __repr__(self):
        return f"SemilinearMap(q={self.q}, frobenius={self.frobenius}, matrix={self.normalized()})"

    def to_json(self):
        return {"frobenius": self.frobenius, "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json(cls, q, data):
        return cls(q, data["matrix"], data.get("frobenius", 0))
