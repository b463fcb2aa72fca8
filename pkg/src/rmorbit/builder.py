"""Single-orbit constraints for RM[n, d, q].

For each border total degree b = b_i(d) we build a constraint rejecting the
canonical monomial of degree b while accepting everything of degree < b, by
convolving Vandermonde constraints with copies of the core constraint; the
constraints for the distinct b_i(d) are then unioned.
"""

from dataclasses import asdict, dataclass

from .constraint import convolution, pad_arity, truncate_arity, union, vandermonde_constraint
from .core import core_constraint
from .errors import ArityTooSmall, OutOfRange
from .poly import b_values


@dataclass(frozen=True)
class Decomposition:
    target: int
    r: int
    l: int
    l_prime: int
    r_prime: int
    variables_needed: int
    extension: bool     # target < q/p: no window split exists


def decompose(target, q, p):
    """Write target = r + l*(q - q/p) with r in [q/p, q-1]; small targets use r = target, l = 0."""
    if target < 1:
        raise OutOfRange("target degree must be >= 1")
    low = q // p
    block = q - low
    if target < low:
        r, l, ext = target, 0, True
    else:
        r = low + (target - low) % block
        l = (target - r) // block
        ext = False
    l_prime, r_prime = divmod(l, p)
    return Decomposition(target, r, l, l_prime, r_prime, 1 + r_prime + p * l_prime, ext)


def arity_required(d, q, p, s):
    return max(decompose(b, q, p).variables_needed for b in set(b_values(d, p, s)))


def constraint_for_degree(target, field, n):
    """Vandermonde(r-1) (x) Vandermonde(q-q/p-1)^r' (x) core^l', padded with 1s to arity n."""
    q, p = field.q, field.p
    dec = decompose(target, q, p)
    if n < dec.variables_needed:
        raise ArityTooSmall(n, dec.variables_needed)
    C = vandermonde_constraint(field, dec.r - 1)
    if dec.r_prime:
        block = vandermonde_constraint(field, q - q // p - 1)
        for _ in range(dec.r_prime):
            C = convolution(C, block)
    if dec.l_prime:
        core = core_constraint(field)
        for _ in range(dec.l_prime):
            C = convolution(C, core)
    return pad_arity(C, n)


def degree_arity(dec, field):
    """Number of points of constraint_for_degree, from its tensor shape."""
    q, p = field.q, field.p
    k = (dec.r + 1) * (q - q // p + 1) ** dec.r_prime
    if dec.l_prime:
        k *= core_constraint(field).k ** dec.l_prime
    return k


def rm_constraint(n, d, field, project=False):
    """Union of constraint_for_degree over the distinct b_i(d).

    With project=True an n below arity_required is allowed: the constraint is
    built at the required arity and its points are projected onto the first n
    coordinates.  Completeness survives; the orbit must then be certified.
    """
    if d < 0:
        raise OutOfRange("degree must be >= 0")
    need = arity_required(d, field.q, field.p, field.s)
    if n < need and not project:
        raise ArityTooSmall(n, need)
    width = max(n, need)
    C = None
    for b in sorted(set(b_values(d, field.p, field.s))):
        part = constraint_for_degree(b, field, width)
        C = part if C is None else union(C, part)
    return truncate_arity(C, n) if width > n else C


# -- arity bounds as exact integer inequalities -----------------------------

def _a(p):
    return 2 ** (p - 1) + p - 1


def degree_bound(target, q, p):
    """q^2 * (2^(p-1)+p-1)^(target/(q(p-1))) * q^(target/q), as a float for display."""
    return q ** 2 * _a(p) ** (target / (q * (p - 1))) * q ** (target / q)


def degree_bound_ok(k, target, q, p):
    D = q * (p - 1)
    return k ** D <= q ** (2 * D) * _a(p) ** target * q ** (target * (p - 1))


def rm_bound(d, q, p):
    return 3 * q ** 4 * _a(p) ** ((d + 1) / (q * (p - 1))) * q ** ((d + 1) / q)


def rm_bound_ok(k, d, q, p):
    D = q * (p - 1)
    return k ** D <= (3 * q ** 4) ** D * _a(p) ** (d + 1) * q ** ((d + 1) * (p - 1))


def simple_bound(d, q):
    return 3 * q ** 4 * (3 * q) ** ((d + 1) / q)


def simple_bound_ok(k, d, q):
    return k ** q <= (3 * q ** 4) ** q * (3 * q) ** (d + 1)


def provenance(n, d, field, C):
    q, p, s = field.q, field.p, field.s
    targets = sorted(set(b_values(d, p, s)))
    per_degree = []
    for b in targets:
        dec = decompose(b, q, p)
        kb = degree_arity(dec, field)
        per_degree.append({
            **asdict(dec),
            "k": kb,
            "bound": degree_bound(b, q, p),
            "bound_satisfied": degree_bound_ok(kb, b, q, p),
        })
    ok_rm = rm_bound_ok(C.k, d, q, p)
    ok_simple = simple_bound_ok(C.k, d, q)
    return {
        "n": n,
        "d": d,
        "q": q,
        "p": p,
        "s": s,
        "b_values": b_values(d, p, s),
        "decompositions": per_degree,
        "arity_required": arity_required(d, q, p, s),
        "k": C.k,
        "bound": rm_bound(d, q, p),
        "bound_simple": simple_bound(d, q),
        "bound_satisfied": bool(ok_rm and ok_simple and all(x["bound_satisfied"] for x in per_degree)),
    }
