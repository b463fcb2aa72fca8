"""Sparse multivariate polynomials over F_q and degree-vector combinatorics.

Degree vectors are tuples of ints in [0, q-1].  Dense tables over F_q^n
(function values, or one entry per degree vector) are flat arrays indexed
little-endian: index = sum(c_t * q**t).
"""

import itertools
import math

import numpy as np

from .errors import ArityMismatch, BadPartition, DegreeOverflow, NotDivisible, OutOfRange
from .gf import EchelonBasis


# -- base-p digit combinatorics ---------------------------------------------

def base_digits(a, p):
    out = []
    while a:
        out.append(a % p)
        a //= p
    return out


def shadow_leq(b, a, p):
    """True iff b <=_p a, i.e. every base-p digit of b is at most that of a."""
    while b:
        if b % p > a % p:
            return False
        b //= p
        a //= p
    return True


def vector_shadow_leq(e, d, p):
    return all(shadow_leq(x, y, p) for x, y in zip(e, d))


def multinomial_nonzero(n, parts, p):
    """Whether n!/(prod parts!) is nonzero mod p: the parts must add up without carries."""
    parts = list(parts)
    if any(x < 0 for x in parts) or sum(parts) != n:
        raise BadPartition(f"parts {parts} do not sum to {n}")
    while n:
        if sum(x % p for x in parts) != n % p:
            return False
        parts = [x // p for x in parts]
        n //= p
    return True


def b_values(d, p, s):
    """[b_0(d), ..., b_s(d)] with b_i(d) = p^i + (d with its i lowest base-p digits cleared)."""
    return [p ** i + (d // p ** i) * p ** i for i in range(s + 1)]


def canonical_monomial(d, q, p):
    """Canonical degree vector of total degree d: (r, B, ..., B) with B = q - q/p, r in [q/p, q-1].

    For d < q/p no such split exists and the single-variable vector (d,) is returned.
    """
    if d < 1:
        raise OutOfRange("canonical monomial needs d >= 1")
    low = q // p
    block = q - low
    if d < low:
        return (d,)
    r = low + (d - low) % block
    return (r,) + (block,) * ((d - r) // block)


def degree_set(n, d, q):
    """All vectors in {0..q-1}^n with entry sum <= d, in lexicographic order."""
    return [e for e in itertools.product(range(q), repeat=n) if sum(e) <= d]


def proper_shadows(e, p):
    """All e' <=_p e with e' != e."""
    per_coord = []
    for x in e:
        digits = base_digits(x, p)
        per_coord.append([
            sum(c * p ** i for i, c in enumerate(choice))
            for choice in itertools.product(*(range(dg + 1) for dg in digits))
        ])
    e = tuple(e)
    return [v for v in itertools.product(*per_coord) if v != e]


def border_set(n, d, q, p, s):
    """Minimal vectors (under <=_p) outside the degree set of RM[n, d, q]."""
    targets = set(b_values(d, p, s))
    out = []
    for e in itertools.product(range(q), repeat=n):
        total = sum(e)
        if total not in targets:
            continue
        if all(sum(v) <= d for v in proper_shadows(e, p)):
            out.append(e)
    return out


# -- sparse polynomials ------------------------------------------------------

class MultiPoly:
    """Polynomial in n variables over a field, stored as {degree vector: coefficient}."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field, n, terms=None):
        self.field = field
        self.n = n
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(x) for x in exps)
            if len(exps) != n:
                raise ArityMismatch(f"degree vector {exps} has length != {n}")
            if any(x < 0 or x > field.q - 1 for x in exps):
                raise DegreeOverflow(f"exponent outside [0, {field.q - 1}] in {exps}")
            c = int(c)
            if c:
                clean[exps] = c
        self.terms = clean

    @classmethod
    def zero(cls, field, n):
        return cls(field, n)

    @classmethod
    def monomial(cls, field, exps, coeff=1):
        return cls(field, len(exps), {tuple(exps): coeff})

    @classmethod
    def linear_form(cls, field, coeffs):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls(field, n, terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.n == other.n
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms):
            mono = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(exps) if e)
            c = self.terms[exps]
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)

    def _combine(self, other, negate):
        f = self.field
        out = dict(self.terms)
        for exps, c in other.terms.items():
            if negate:
                c = f.neg(c)
            v = f.add(out.get(exps, 0), c)
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return MultiPoly(self.field, self.n, out)

    def __add__(self, other):
        return self._combine(other, False)

    def __sub__(self, other):
        return self._combine(other, True)

    def __neg__(self):
        return MultiPoly(self.field, self.n, {e: self.field.neg(c) for e, c in self.terms.items()})

    def scale(self, c):
        return MultiPoly(self.field, self.n, {e: self.field.mul(c, v) for e, v in self.terms.items()})

    def __mul__(self, other):
        f = self.field
        top = f.q - 1
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if max(e, default=0) > top:
                    raise DegreeOverflow(f"product exponent {e} exceeds q-1")
                v = f.add(out.get(e, 0), f.mul(c1, c2))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MultiPoly(f, self.n, out)

    def total_degrees(self):
        return {sum(e) for e in self.terms}

    def to_dict(self):
        return {"n": self.n, "terms": [[list(e), c] for e, c in sorted(self.terms.items())]}

    @classmethod
    def from_dict(cls, field, data):
        return cls(field, data["n"], {tuple(e): c for e, c in data["terms"]})


def expand_power(field, coeffs, e):
    """(sum_i coeffs[i] * x_i) ** e by repeated multiplication."""
    if not 0 <= e <= field.q - 1:
        raise DegreeOverflow(f"exponent {e} outside [0, {field.q - 1}]")
    n = len(coeffs)
    form = MultiPoly.linear_form(field, coeffs)
    out = MultiPoly(field, n, {(0,) * n: 1})
    for _ in range(e):
        out = out * form
    return out


def divide_exact(numerator, variables):
    """Divide by the product of the given (distinct) variable indices."""
    variables = sorted(set(variables))
    out = {}
    for exps, c in numerator.terms.items():
        if any(exps[v] == 0 for v in variables):
            raise NotDivisible(f"term {exps} is not divisible by variables {variables}")
        e = list(exps)
        for v in variables:
            e[v] -= 1
        out[tuple(e)] = c
    return MultiPoly(numerator.field, numerator.n, out)


def evaluate(poly, point):
    if len(point) != poly.n:
        raise ArityMismatch(f"point of length {len(point)} for a {poly.n}-variate polynomial")
    f = poly.field
    total = 0
    for exps, c in poly.terms.items():
        v = c
        for x, e in zip(point, exps):
            v = f.mul(v, f.pow(x, e))
        total = f.add(total, v)
    return total


def substitute_shift(poly, target, source):
    """Substitute x_target -> x_target + x_source."""
    f = poly.field
    p = f.p
    acc = {}
    for exps, c in poly.terms.items():
        a = exps[target]
        for i in range(a + 1):
            binom = math.comb(a, i) % p
            if not binom:
                continue
            e = list(exps)
            e[target] = a - i
            e[source] += i
            if e[source] > f.q - 1:
                raise DegreeOverflow(f"substitution pushes exponent past q-1 in {exps}")
            e = tuple(e)
            v = f.add(acc.get(e, 0), f.mul(c, f.from_int(binom)))
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
    return MultiPoly(f, poly.n, acc)


def compose_affine_support(m, p, q):
    """Support of x1^d1 * (x1 + x2)^d2, i.e. {(d1 + i, d2 - i) : i <=_p d2}."""
    d1, d2 = m
    if d1 + d2 > q - 1:
        raise DegreeOverflow(f"{d1} + {d2} exceeds q - 1 = {q - 1}")
    return {(d1 + i, d2 - i) for i in range(d2 + 1) if shadow_leq(i, d2, p)}


# -- dense tables and separable transforms -----------------------------------

def table_shape(field, n):
    return (field.q,) * n


def index_to_vector(index, q, n):
    return tuple((index // q ** t) % q for t in range(n))


def vectors_to_index(vectors, q):
    v = np.asarray(vectors, dtype=np.int64)
    n = v.shape[-1]
    return v @ (q ** np.arange(n, dtype=np.int64))


def _kernel_matrix(field, kernel, dtype):
    """Lift a q_in x q_out kernel of field elements to an F_p matrix acting on digit rows."""
    s = field.s
    basis = field.p ** np.arange(s, dtype=np.int64)
    prod = field.vmul(kernel[:, :, None], basis[None, None, :])   # (in, out, j)
    dig = field.vdigits(prod)                                       # (in, out, j, l)
    big = dig.transpose(0, 2, 1, 3).reshape(kernel.shape[0] * s, kernel.shape[1] * s)
    return big.astype(dtype)


def separable_transform(field, table, n, kernel):
    """out[o_1..o_n] = sum_{i_1..i_n} table[i] * prod_t kernel[i_t, o_t], as flat little-endian arrays.

    Each axis is a single matrix product over F_p on digit vectors.
    """
    q, s, p = field.q, field.s, field.p
    if n == 0:
        return np.asarray(table, dtype=np.int64).copy()
    bound = q * s * (p - 1) ** 2
    dtype = np.float32 if bound < 2 ** 24 else np.float64
    big = _kernel_matrix(field, np.asarray(kernel, dtype=np.int64), dtype)
    t = field.vdigits(np.asarray(table).reshape((q,) * n, order="F")).astype(dtype)
    for axis in range(n):
        t = np.moveaxis(t, axis, n - 1)
        shape = t.shape
        t = np.fmod(t.reshape(-1, q * s) @ big, p).reshape(shape)
        t = np.moveaxis(t, n - 1, axis)
    codes = field.vfrom_digits(t.astype(np.int64))
    return codes.reshape(-1, order="F")


def coefficient_table(poly):
    q = poly.field.q
    table = np.zeros(q ** poly.n, dtype=np.int64)
    if poly.terms:
        exps = np.array(list(poly.terms.keys()), dtype=np.int64)
        table[vectors_to_index(exps, q)] = list(poly.terms.values())
    return table


def evaluate_grid(poly):
    """Values of poly at every point of F_q^n, as a flat little-endian table."""
    f = poly.field
    return separable_transform(f, coefficient_table(poly), poly.n, f.pow_table.T)


def monomial_sums(field, n, values):
    """For a table g over F_q^n, the table of sum_beta g(beta) * beta^e over every degree vector e."""
    return separable_transform(field, values, n, field.pow_table)


def _inverse_vandermonde(field):
    """Inverse of V[a, e] = a^e over the field, by row reduction of [V | I]."""
    q = field.q
    aug = np.concatenate([field.pow_table, np.eye(q, dtype=np.int64)], axis=1)
    basis = EchelonBasis(field, 2 * q)
    basis.add(aug)
    order = np.argsort(basis.pivots)
    return basis.rows[order][:, q:]


def interpolate_grid(field, n, values):
    """Coefficient table (indexed by degree vector) of the unique reduced polynomial with these values."""
    return separable_transform(field, values, n, _inverse_vandermonde(field).T)


def table_degree(field, n, values):
    """Total degree of the reduced polynomial behind a value table; -1 for the zero function."""
    coeffs = interpolate_grid(field, n, values)
    nz = np.flatnonzero(coeffs)
    if not len(nz):
        return -1
    q = field.q
    return int(max(sum((nz // q ** t) % q for t in range(n))))
