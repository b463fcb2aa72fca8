"""k-constraints on functions F_q^n -> F_q and the operations that combine them.

A constraint is a list of k query points plus r coefficient rows; it accepts
f when every row's weighted sum of f-values vanishes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegreeOverflow,
    DomainMismatch,
    EnumerationBudget,
    FieldMismatch,
    OutOfRange,
    ShrinkNotAllowed,
    ZeroFunction,
)
from .gf import Field, null_space
from .poly import evaluate_grid, monomial_sums, vectors_to_index

DENSE_BUDGET = 10 ** 8


@dataclass(frozen=True, eq=False)
class Constraint:
    field: Field
    n: int
    points: np.ndarray   # (k, n) element codes
    rows: np.ndarray     # (r, k) element codes

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64)
        pts = np.array(self.points, dtype=np.int64)
        if pts.ndim != 2:
            pts = pts.reshape(-1, self.n) if self.n else np.zeros((rows.shape[-1], 0), dtype=np.int64)
        if pts.shape[1] != self.n:
            raise DomainMismatch(f"points of shape {pts.shape} for arity {self.n}")
        if rows.ndim != 2 or rows.shape[1] != pts.shape[0]:
            raise DomainMismatch(f"rows of shape {rows.shape} do not match {pts.shape[0]} points")
        q = self.field.q
        if pts.size and (pts.min() < 0 or pts.max() >= q):
            raise OutOfRange("point coordinate outside the field")
        if rows.size and (rows.min() < 0 or rows.max() >= q):
            raise OutOfRange("coefficient outside the field")
        if rows.shape[0] == 0 or not np.all(np.any(rows != 0, axis=1)):
            raise ValueError("every constraint row must be nonzero")
        pts.setflags(write=False)
        rows.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "rows", rows)

    @property
    def k(self):
        return self.points.shape[0]

    @property
    def r(self):
        return self.rows.shape[0]

    def point_indices(self):
        return vectors_to_index(self.points, self.field.q) if self.n else np.zeros(self.k, dtype=np.int64)

    def to_dict(self):
        return {
            "field": self.field.to_dict(),
            "n": self.n,
            "points": self.points.tolist(),
            "rows": self.rows.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        field = Field.from_dict(data["field"])
        n = data["n"]
        rows = np.array(data["rows"], dtype=np.int64)
        pts = np.array(data["points"], dtype=np.int64).reshape(rows.shape[1], n)
        return cls(field, n, pts, rows)

    def same_as(self, other):
        return (
            self.field == other.field
            and self.n == other.n
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.rows, other.rows)
        )


@dataclass(frozen=True, eq=False)
class AffineTransform:
    """x -> A x + shift; A may be singular."""

    matrix: np.ndarray
    shift: np.ndarray

    @property
    def n(self):
        return len(self.shift)

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=np.int64), np.zeros(n, dtype=np.int64))

    def apply(self, field, points):
        pts = np.asarray(points, dtype=np.int64)
        prod = field.vmul(np.asarray(self.matrix)[None, :, :], pts[:, None, :])
        return field.vadd(field.vsum(prod, axis=-1), np.asarray(self.shift)[None, :])

    def then(self, field, other):
        """The transform x -> other(self(x))."""
        a1, b1 = np.asarray(self.matrix), np.asarray(self.shift)
        a2, b2 = np.asarray(other.matrix), np.asarray(other.shift)
        a = field.vsum(field.vmul(a2[:, :, None], a1[None, :, :]), axis=1)
        b = field.vadd(field.vsum(field.vmul(a2, b1[None, :]), axis=1), b2)
        return AffineTransform(a, b)


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """Values of f: F_q^n -> F_q at every point, little-endian mixed-radix order."""

    field: Field
    n: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.int64).reshape(-1)
        if len(vals) != self.field.q ** self.n:
            raise DomainMismatch(f"table of length {len(vals)} for F_{self.field.q}^{self.n}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_poly(cls, poly):
        return cls(poly.field, poly.n, evaluate_grid(poly))

    @classmethod
    def from_callable(cls, field, n, fn):
        q = field.q
        vals = [fn(tuple((i // q ** t) % q for t in range(n))) for i in range(q ** n)]
        return cls(field, n, vals)

    def __call__(self, point):
        return int(self.values[int(vectors_to_index(point, self.field.q))])

    def to_dict(self):
        return {"field": self.field.to_dict(), "n": self.n, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(Field.from_dict(data["field"]), data["n"], data["values"])


def _check_domain(C, field, n):
    if C.field != field or C.n != n:
        raise DomainMismatch(
            f"constraint over F_{C.field.q}^{C.n} used on F_{field.q}^{n}"
        )


def row_sums(C, values_at_points):
    """Row sums sum_j lambda_ij * v_j for a length-k value vector (or a (..., k) batch)."""
    f = C.field
    v = np.asarray(values_at_points, dtype=np.int64)
    return f.vsum(f.vmul(C.rows, v[..., None, :]), axis=-1)


def accepts_function(C, fn):
    _check_domain(C, fn.field, fn.n)
    return not np.any(row_sums(C, fn.values[C.point_indices()]))


def monomial_values(C, exps):
    """x^exps evaluated at each constraint point."""
    f = C.field
    exps = tuple(exps)
    if len(exps) != C.n:
        raise DomainMismatch(f"degree vector of length {len(exps)} for arity {C.n}")
    if any(e < 0 or e > f.q - 1 for e in exps):
        raise DegreeOverflow(f"exponent outside [0, {f.q - 1}] in {exps}")
    vals = np.ones(C.k, dtype=np.int64)
    for t, e in enumerate(exps):
        vals = f.vmul(vals, f.pow_table[C.points[:, t], e])
    return vals


def monomial_row_sums(C, exps):
    return row_sums(C, monomial_values(C, exps))


def accepts_monomial(C, exps):
    return not np.any(monomial_row_sums(C, exps))


def apply_transform(T, C):
    if T.n != C.n:
        raise DomainMismatch(f"transform on F^{T.n} applied to a constraint on F^{C.n}")
    return Constraint(C.field, C.n, T.apply(C.field, C.points), C.rows)


def convolution(C1, C2):
    """Tensor combination: points are concatenations, coefficients are products (row-major)."""
    if C1.field != C2.field:
        raise FieldMismatch("convolution of constraints over different fields")
    f = C1.field
    k1, k2 = C1.k, C2.k
    pts = np.concatenate(
        [np.repeat(C1.points, k2, axis=0), np.tile(C2.points, (k1, 1))], axis=1
    )
    rows = f.vmul(C1.rows[:, None, :, None], C2.rows[None, :, None, :])
    rows = rows.reshape(C1.r * C2.r, k1 * k2)
    rows = rows[np.any(rows != 0, axis=1)]
    return Constraint(f, C1.n + C2.n, pts, rows)


def unit_constraint(field):
    """The 1-point constraint on F_q^0, neutral for convolution."""
    return Constraint(field, 0, np.zeros((1, 0), dtype=np.int64), np.ones((1, 1), dtype=np.int64))


def union(C1, C2):
    """Concatenate points (duplicates kept) and zero-extend each side's rows."""
    if C1.field != C2.field or C1.n != C2.n:
        raise DomainMismatch("union of constraints over different domains")
    pts = np.concatenate([C1.points, C2.points], axis=0)
    top = np.concatenate([C1.rows, np.zeros((C1.r, C2.k), dtype=np.int64)], axis=1)
    bottom = np.concatenate([np.zeros((C2.r, C1.k), dtype=np.int64), C2.rows], axis=1)
    return Constraint(C1.field, C1.n, pts, np.concatenate([top, bottom], axis=0))


def pad_arity(C, n):
    """Extend every point with coordinates equal to 1 up to arity n."""
    if n < C.n:
        raise ShrinkNotAllowed(f"cannot pad arity {C.n} down to {n}")
    ones = np.ones((C.k, n - C.n), dtype=np.int64)
    return Constraint(C.field, n, np.concatenate([C.points, ones], axis=1), C.rows)


def truncate_arity(C, n):
    """Keep the first n coordinates of every point (a coordinate projection).

    Acceptance of degree <= d codewords survives the projection; rejection of
    the border generally does not and must be certified separately.
    """
    if n > C.n:
        raise ShrinkNotAllowed(f"cannot truncate arity {C.n} up to {n}")
    return Constraint(C.field, n, C.points[:, :n], C.rows)


def vandermonde_constraint(field, d):
    """(d+2)-point constraint on F_q accepting x^e for e <= d and rejecting x^(d+1)."""
    q = field.q
    if not 0 <= d <= q - 2:
        raise OutOfRange(f"degree {d} outside [0, {q - 2}]")
    pts = list(range(d + 2))
    system = [[field.pow(a, l) for a in pts] for l in range(d + 1)]
    (lam,) = null_space(field, system)
    lead = next(c for c in lam if c)
    lam = [field.div(c, lead) for c in lam]
    return Constraint(field, 1, np.array(pts, dtype=np.int64)[:, None], np.array([lam]))


def from_table(field, n, values):
    """Single-row constraint over the nonzero entries of a dense table, in index order."""
    values = np.asarray(values, dtype=np.int64)
    idx = np.flatnonzero(values)
    if len(idx) == 0:
        raise ZeroFunction("the table is identically zero")
    q = field.q
    pts = (idx[:, None] // (q ** np.arange(n, dtype=np.int64))[None, :]) % q
    return Constraint(field, n, pts, values[idx][None, :])


def from_polynomial(P, budget=DENSE_BUDGET):
    size = P.field.q ** P.n
    if size > budget:
        raise EnumerationBudget("polynomial evaluation over F_q^n", size, budget)
    return from_table(P.field, P.n, evaluate_grid(P))


def dual_vectors(C, budget=DENSE_BUDGET):
    """Each row as a functional on F_q^n: length q^n, coefficients summed at repeated points."""
    f = C.field
    size = f.q ** C.n
    if size > budget:
        raise EnumerationBudget("dense table over F_q^n", size, budget)
    idx = C.point_indices()
    acc = np.zeros((C.r, size, f.s), dtype=np.int64)
    digits = f.vdigits(C.rows)                      # (r, k, s)
    for i in range(C.r):
        np.add.at(acc[i], idx, digits[i])
    return f.vfrom_digits(acc)


def monomial_response(C, budget=DENSE_BUDGET):
    """(r, q^n) table: entry [i, e] = sum_j lambda_ij * alpha_j^e for every degree vector e."""
    f = C.field
    dual = dual_vectors(C, budget)
    return np.stack([monomial_sums(f, C.n, row) for row in dual])


def accepted_degrees(C, budget=DENSE_BUDGET):
    """Boolean table over degree vectors (little-endian index): True where C accepts x^e."""
    return ~np.any(monomial_response(C, budget) != 0, axis=0)
