"""Finite fields GF(q) for prime powers q <= 16.

Elements are coded as integers 0..q-1: the base-p digits of the code are the
coefficients (low degree first) of a polynomial over GF(p), reduced modulo a
fixed Conway polynomial. All arithmetic goes through precomputed tables.
"""

from functools import lru_cache

# Conway polynomials, coefficients low degree first, monic.
CONWAY = {
    4: (1, 1, 1),        # x^2 + x + 1
    8: (1, 1, 0, 1),     # x^3 + x + 1
    9: (2, 2, 1),        # x^2 + 2x + 2
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
}

PRIMES = (2, 3, 5, 7, 11, 13)
SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)


def _prime_power(q):
    for p in PRIMES:
        r, m = 0, q
        while m % p == 0:
            m //= p
            r += 1
        if m == 1 and r > 0:
            return p, r
    raise ValueError(f"unsupported field order {q}; expected one of {SUPPORTED_ORDERS}")


def _digits(a, p, r):
    out = []
    for _ in range(r):
        out.append(a % p)
        a //= p
    return out


def _undigits(ds, p):
    a = 0
    for d in reversed(ds):
        a = a * p + d
    return a


class GF:
    """The field with q elements, q a prime power at most 16."""

    def __init__(self, q):
        if q not in SUPPORTED_ORDERS:
            raise ValueError(f"unsupported field order {q}; expected one of {SUPPORTED_ORDERS}")
        p, r = _prime_power(q)
        self.q, self.p, self.degree = q, p, r
        self.modulus = CONWAY.get(q, (0, 1))
        digits = [_digits(a, p, r) for a in range(q)]
        self.add_table = [[_undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p)
                           for b in range(q)] for a in range(q)]
        self.neg_table = [_undigits([(-x) % p for x in digits[a]], p) for a in range(q)]
        if r == 1:
            self.mul_table = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            self.mul_table = [[self._polymul(digits[a], digits[b]) for b in range(q)]
                              for a in range(q)]
        self.inv_table = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_table[a][b] == 1:
                    self.inv_table[a] = b
                    break
        self.primitive = self._find_primitive()

    def _polymul(self, da, db):
        p, r = self.p, self.degree
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for k in range(len(prod) - 1, r - 1, -1):
            c = prod[k]
            if c:
                for i in range(r + 1):
                    prod[k - r + i] = (prod[k - r + i] - c * mod[i]) % p
        return _undigits(prod[:r], p)

    def _find_primitive(self):
        for g in range(2, self.q) if self.q > 2 else [1]:
            if self.mult_order(g) == self.q - 1:
                return g
        return 1

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    # scalar arithmetic

    def add(self, a, b):
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a):
        return self.neg_table[a]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul_table[a][self.inv(b)]

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        out = 1
        while n:
            if n & 1:
                out = self.mul_table[out][a]
            a = self.mul_table[a][a]
            n >>= 1
        return out

    def mult_order(self, a):
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self.mul_table[x][a]
            k += 1
        return k

    def frobenius(self, a, e=1):
        """Apply x -> x^(p^e)."""
        return self.pow(a, self.p ** (e % self.degree))

    @property
    def units(self):
        return list(range(1, self.q))

    @property
    def additive_basis(self):
        """A basis of GF(q) over its prime field: 1, g, ..., g^(r-1) for g primitive."""
        return [self.pow(self.primitive, i) for i in range(self.degree)]


@lru_cache(maxsize=None)
def field(q):
    """Shared instance of GF(q)."""
    return GF(q)
