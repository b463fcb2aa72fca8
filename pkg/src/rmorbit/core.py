"""The sparse p-variate constraint built from an iterated directional derivative.

With f(x) = x_p^(q-1), the (p-1)-fold derivative of f in directions
x_1, ..., x_{p-1} is divisible by x_1 ... x_{p-1}.  The quotient P is
homogeneous of degree q - p and vanishes on most of F_q^p; weighting f-values
by P on its nonzero points gives a constraint that accepts every p-variate
monomial of total degree < p(q - q/p) and rejects (q - q/p, ..., q - q/p).
"""

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .constraint import accepts_monomial, from_table, monomial_response
from .errors import EnumerationBudget, InvariantViolation
from .poly import MultiPoly, divide_exact, evaluate_grid, expand_power, substitute_shift

EVAL_BUDGET = 10 ** 8


def nonzero_upper_bound(q, p):
    return (2 ** (p - 1) + p - 1) * q ** (p - 1)


def nonzero_lower_bound(q, p):
    return (2 ** (p - 1) - p - 1) * q ** (p - 1) - 2 ** (p - 1) * (2 ** (p - 1) - 1) * q ** (p - 2)


def derivative_numerator(field):
    """sum over I in [p-1] of (-1)^(p-1-|I|) * (x_p + sum_{i in I} x_i)^(q-1)."""
    p, q = field.p, field.q
    expansions = {}
    total = MultiPoly.zero(field, p)
    for size in range(p):
        if size not in expansions:
            expansions[size] = expand_power(field, [1] * (size + 1), q - 1)
        generic = expansions[size]
        for subset in itertools.combinations(range(p - 1), size):
            slots = list(subset) + [p - 1]
            terms = {}
            for exps, c in generic.terms.items():
                e = [0] * p
                for slot, x in zip(slots, exps):
                    e[slot] = x
                terms[tuple(e)] = c
            term = MultiPoly(field, p, terms)
            total = total - term if (p - 1 - size) % 2 else total + term
    return total


def iterated_derivative(field):
    """The same numerator computed as repeated differences g(x + x_i e_p) - g(x)."""
    p, q = field.p, field.q
    g = MultiPoly.monomial(field, (0,) * (p - 1) + (q - 1,))
    for i in range(p - 1):
        g = substitute_shift(g, p - 1, i) - g
    return g


@dataclass(frozen=True, eq=False)
class CorePolynomial:
    field: object
    poly: MultiPoly
    values: np.ndarray       # dense table over F_q^p
    nonzero_count: int

    @property
    def upper_bound(self):
        return nonzero_upper_bound(self.field.q, self.field.p)

    @property
    def lower_bound(self):
        return nonzero_lower_bound(self.field.q, self.field.p)


@functools.lru_cache(maxsize=None)
def core_polynomial(field, budget=EVAL_BUDGET):
    p, q = field.p, field.q
    if q ** p > budget:
        raise EnumerationBudget(f"evaluating P over F_{q}^{p}", q ** p, budget)
    numerator = derivative_numerator(field)
    poly = divide_exact(numerator, range(p - 1))
    if poly.total_degrees() - {q - p}:
        raise InvariantViolation(f"P is not homogeneous of degree {q - p}")
    values = evaluate_grid(poly)
    values.setflags(write=False)
    count = int(np.count_nonzero(values))
    cp = CorePolynomial(field, poly, values, count)
    if count > cp.upper_bound:
        raise InvariantViolation(f"P has {count} nonzero points, above {cp.upper_bound}")
    if count < cp.lower_bound:
        raise InvariantViolation(f"P has {count} nonzero points, below {cp.lower_bound}")
    return cp


@functools.lru_cache(maxsize=None)
def core_constraint(field, budget=EVAL_BUDGET):
    cp = core_polynomial(field, budget)
    return from_table(field, field.p, cp.values)


def verify_core(field, budget=EVAL_BUDGET):
    """Exhaustively check the count bounds, acceptance below p(q - q/p), and the canonical rejection."""
    p, q, s = field.p, field.q, field.s
    cp = core_polynomial(field, budget)
    C = core_constraint(field, budget)
    block = q - q // p
    limit = p * block

    response = monomial_response(C, budget)
    idx = np.arange(q ** p, dtype=np.int64)
    totals = sum((idx // q ** t) % q for t in range(p))
    below = totals < limit
    failing = np.flatnonzero(below & np.any(response != 0, axis=0))

    canonical = (block,) * p
    rejected = not accepts_monomial(C, canonical)
    witness = None
    if len(failing):
        witness = [int((failing[0] // q ** t) % q) for t in range(p)]
    elif not rejected:
        witness = list(canonical)

    upper_ok = cp.nonzero_count <= cp.upper_bound
    lower_ok = cp.nonzero_count >= cp.lower_bound
    return {
        "q": q,
        "p": p,
        "s": s,
        "k": C.k,
        "upper_bound": cp.upper_bound,
        "lower_bound": cp.lower_bound,
        "upper_ok": upper_ok,
        "lower_ok": lower_ok,
        "accept_checks": int(below.sum()),
        "accept_failures": int(len(failing)),
        "reject_check": rejected,
        "witness": witness,
        "pass": bool(upper_ok and lower_ok and not len(failing) and rejected),
    }
