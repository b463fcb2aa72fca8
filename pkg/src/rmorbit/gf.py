"""Arithmetic in GF(p^s).

Elements are plain ints in [0, q).  The base-p digits of an element
(little-endian) are its coefficients in the polynomial basis of the
field modulus, so 0 and 1 are the additive and multiplicative identities
and the prime subfield is {0, ..., p-1}.

Scalar operations go through log/antilog tables.  The ``v*`` methods
accept numpy arrays and are what the heavier modules use.
"""

import functools
import itertools
import math

import numpy as np

from .errors import (
    DivisionByZero,
    NotPrime,
    NotPrimePower,
    OutOfRange,
    ReducibleModulus,
    UnsupportedSize,
)

MAX_ORDER = 4096


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


def prime_power(q):
    """Return (p, s) with q == p**s, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            s = 0
            m = q
            while m % p == 0:
                m //= p
                s += 1
            if m != 1 or not is_prime(p):
                raise NotPrimePower(f"{q} is not a prime power")
            return p, s
    raise NotPrimePower(f"{q} is not a prime power")


# -- polynomials over F_p as little-endian digit lists ----------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, m, p):
    a = _trim(list(a))
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _polymul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _is_irreducible(modulus, p):
    s = len(modulus) - 1
    for deg in range(1, s // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _polymod(modulus, list(low) + [1], p):
                return False
    return True


def default_modulus(p, s):
    """Smallest monic irreducible of degree s over F_p, by integer code."""
    for low in range(p ** s):
        digits = [(low // p ** i) % p for i in range(s)] + [1]
        if _is_irreducible(digits, p):
            return tuple(digits)
    raise ReducibleModulus(f"no irreducible polynomial of degree {s} over F_{p}")


class Field:
    """The finite field GF(p^s) with a fixed modulus polynomial."""

    def __init__(self, p, s=1, modulus=None, max_order=MAX_ORDER):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if s < 1:
            raise UnsupportedSize("extension degree must be >= 1")
        q = p ** s
        if q > max_order:
            raise UnsupportedSize(f"q = {q} exceeds the supported bound {max_order}")
        if modulus is None:
            modulus = default_modulus(p, s)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != s + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
            raise ReducibleModulus(f"modulus must be monic of degree {s} with digits in [0, {p})")
        if not _is_irreducible(list(modulus), p):
            raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.s = s
        self.q = q
        self.modulus = modulus
        self._build_tables()

    # -- construction -----------------------------------------------------

    def _code(self, digits):
        return sum(int(c) * self.p ** i for i, c in enumerate(digits))

    def _digits(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.s)]

    def _slow_mul(self, a, b):
        if self.s == 1:
            return (a * b) % self.p
        prod = _polymul(_trim(self._digits(a)), _trim(self._digits(b)), self.p)
        return self._code(_polymod(prod, list(self.modulus), self.p))

    def _build_tables(self):
        p, s, q = self.p, self.s, self.q
        codes = np.arange(q, dtype=np.int64)
        self.weights = p ** np.arange(s, dtype=np.int64)
        self.digit_table = (codes[:, None] // self.weights[None, :]) % p

        order = q - 1
        exp = None
        for g in range(1, q):
            powers = [1]
            for _ in range(order - 1):
                powers.append(self._slow_mul(powers[-1], g))
            if len(set(powers)) == order:
                exp = powers
                break
        self.generator = exp[1] if order > 1 else 1
        self.exp_table = np.array(exp + exp, dtype=np.int64)
        self.log_table = np.zeros(q, dtype=np.int64)
        for i, v in enumerate(exp):
            self.log_table[v] = i
        self._exp = exp
        self._log = self.log_table.tolist()

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return (self.p, self.s, self.modulus)

    def __repr__(self):
        return f"Field(q={self.q}, p={self.p}, s={self.s}, modulus={list(self.modulus)})"

    def to_dict(self):
        return {"p": self.p, "s": self.s, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data):
        return field_create(data["p"], data["s"], data.get("modulus"))

    # -- scalar arithmetic --------------------------------------------------

    def add(self, a, b):
        if self.s == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return int(((self.digit_table[a] + self.digit_table[b]) % self.p) @ self.weights)

    def neg(self, a):
        if self.s == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return int(((-self.digit_table[a]) % self.p) @ self.weights)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.s == 1:
            return (a * b) % self.p
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        # 0^0 = 1 so that x^0 evaluates to 1 everywhere
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def power_sum(self, i):
        """Sum of beta**i over all beta in the field."""
        if not 0 <= i <= self.q - 1:
            raise OutOfRange(f"exponent {i} outside [0, {self.q - 1}]")
        total = 0
        for beta in self.elements():
            total = self.add(total, self.pow(beta, i))
        return total

    def elements(self):
        return range(self.q)

    def from_int(self, n):
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def digits(self, a):
        return self._digits(a)

    def mul_matrix(self, c):
        """s x s matrix over F_p of x -> c*x in the polynomial basis (column j = c * x^j)."""
        cols = [self.digit_table[self.mul(c, self.p ** j)] for j in range(self.s)]
        return np.stack(cols, axis=1)

    # -- vectorised arithmetic on numpy arrays ------------------------------

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.s == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return ((self.digit_table[a] + self.digit_table[b]) % self.p) @ self.weights

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.s == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return ((-self.digit_table[a]) % self.p) @ self.weights

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.s == 1:
            return (a * b) % self.p
        out = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self.exp_table[(-self.log_table[a]) % (self.q - 1)]

    def vpow(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        e = np.asarray(e, dtype=np.int64)
        out = self.exp_table[(self.log_table[a] * e) % (self.q - 1)]
        return np.where(a == 0, np.where(e == 0, 1, 0), out)

    def vsum(self, a, axis=-1):
        a = np.asarray(a, dtype=np.int64)
        if self.s == 1:
            return a.sum(axis=axis) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if axis < 0:
            axis += a.ndim
        return (self.digit_table[a].sum(axis=axis) % self.p) @ self.weights

    def vdigits(self, a):
        return self.digit_table[np.asarray(a, dtype=np.int64)]

    def vfrom_digits(self, d):
        return (np.asarray(d, dtype=np.int64) % self.p) @ self.weights

    @functools.cached_property
    def pow_table(self):
        """pow_table[a, e] = a**e for a, e in [0, q)."""
        a = np.arange(self.q)[:, None]
        e = np.arange(self.q)[None, :]
        return self.vpow(a, e)


@functools.lru_cache(maxsize=None)
def _cached_field(p, s, modulus):
    return Field(p, s, modulus)


def field_create(p, s=1, modulus=None):
    """Build (or fetch from cache) GF(p^s); the modulus defaults to the smallest irreducible."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if s < 1 or p ** s > MAX_ORDER:
        raise UnsupportedSize(f"GF({p}^{s}) is outside the supported range q <= {MAX_ORDER}")
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    else:
        modulus = default_modulus(p, s)
    return _cached_field(p, s, modulus)


def field_from_order(q):
    p, s = prime_power(q)
    return field_create(p, s)


def arith(field, op, a, b):
    if op == "add":
        return field.add(a, b)
    if op == "sub":
        return field.sub(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "neg":
        return field.neg(a)
    raise ValueError(f"unknown operation {op!r}")


# -- linear algebra over F_q ----------------------------------------------

class EchelonBasis:
    """Incrementally maintained reduced row echelon basis of a subspace of F_q^m."""

    def __init__(self, field, length):
        self.field = field
        self.length = length
        self.rows = np.zeros((0, length), dtype=np.int64)
        self.pivots = []

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, vectors):
        f = self.field
        v = np.array(vectors, dtype=np.int64, ndmin=2)
        for row, col in zip(self.rows, self.pivots):
            c = v[:, col]
            if np.any(c):
                v = f.vsub(v, f.vmul(c[:, None], row[None, :]))
        return v

    def add(self, vectors):
        """Insert vectors; return how many new pivots were found."""
        f = self.field
        v = self.reduce(vectors)
        v = v[np.any(v != 0, axis=1)]
        if len(v):
            v = np.unique(v, axis=0)
        found = 0
        while len(v):
            row = v[0]
            col = int(np.flatnonzero(row)[0])
            row = f.vmul(row, f.inv(int(row[col])))
            if len(self.rows):
                c = self.rows[:, col]
                self.rows = f.vsub(self.rows, f.vmul(c[:, None], row[None, :]))
            rest = v[1:]
            c = rest[:, col]
            rest = f.vsub(rest, f.vmul(c[:, None], row[None, :]))
            v = rest[np.any(rest != 0, axis=1)]
            self.rows = np.vstack([self.rows, row[None, :]])
            self.pivots.append(col)
            found += 1
        return found


def rank(field, matrix):
    m = np.array(matrix, dtype=np.int64, ndmin=2)
    basis = EchelonBasis(field, m.shape[1])
    basis.add(m)
    return basis.rank


def null_space(field, matrix):
    """Basis (list of vectors) of {x : matrix @ x = 0} over the field."""
    rows = [list(map(int, r)) for r in np.array(matrix, dtype=np.int64, ndmin=2)]
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = field.neg(rows[i][fc])
        basis.append(vec)
    return basis
