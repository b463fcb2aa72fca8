"""Brute-force ground truth for small instances.

The decisive check is orbit_span_rank: the dual vectors of every row of T(C),
over all affine maps T, must span the whole dual of RM[n, d, q].
"""

import itertools
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .constraint import FunctionTable, accepted_degrees, dual_vectors
from .errors import DomainMismatch, EnumerationBudget
from .gf import EchelonBasis
from .poly import MultiPoly, border_set, degree_set, evaluate_grid, table_degree, vectors_to_index
from .tester import transform_count, transformed_indices, transforms_from_index

RANK_BUDGET = 4096              # largest q^n for dense elimination
TRANSFORM_BUDGET = 10 ** 5      # exhaustive transform enumeration up to this many maps
CODEWORD_BUDGET = 10 ** 6
BATCH = 1024
PATIENCE = 8


def rm_dimension(n, d, q):
    """Number of vectors in {0..q-1}^n with entry sum <= d."""
    if d < 0:
        return 0
    counts = [1] + [0] * d      # counts[t] = number of vectors with sum t so far
    for _ in range(n):
        nxt = [0] * (d + 1)
        for t, c in enumerate(counts):
            if c:
                for x in range(min(q - 1, d - t) + 1):
                    nxt[t + x] += c
        counts = nxt
    return sum(counts)


def constraint_row_as_dual_vector(C, row):
    if not 0 <= row < C.r:
        raise IndexError(f"row {row} outside [0, {C.r})")
    return dual_vectors(C)[row]


def _orbit_duals(C, mats, shifts):
    """Dual vectors of every row of T(C) for a batch of transforms: shape (m * r, q^n)."""
    f = C.field
    size = f.q ** C.n
    idx = transformed_indices(f, C.points, mats, shifts)              # (m, k)
    m = idx.shape[0]
    slot = (np.arange(m * C.r).reshape(m, C.r, 1) * size + idx[:, None, :]).reshape(-1)
    digits = f.vdigits(C.rows)                                         # (r, k, s)
    digits = np.broadcast_to(digits[None], (m,) + digits.shape).reshape(-1, f.s)
    acc = np.stack(
        [np.bincount(slot, weights=digits[:, l], minlength=m * C.r * size) for l in range(f.s)],
        axis=-1,
    ).astype(np.int64)
    return f.vfrom_digits(acc).reshape(m * C.r, size)


def structured_transforms(n, q):
    """Diagonal, permutation and single-entry shear matrices, each with every shift."""
    mats = [np.diag(diag) for diag in itertools.product(range(q), repeat=n)]
    for perm in itertools.permutations(range(n)):
        mats.append(np.eye(n, dtype=np.int64)[list(perm)])
    for i, j in itertools.permutations(range(n), 2):
        for c in range(1, q):
            a = np.eye(n, dtype=np.int64)
            a[i, j] = c
            mats.append(a)
    mats = np.array(mats, dtype=np.int64).reshape(-1, n, n)
    shifts = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64).reshape(-1, n)
    A = np.repeat(mats, len(shifts), axis=0)
    B = np.tile(shifts, (len(mats), 1))
    return A, B


def _transform_batches(n, q, budget, seed):
    """Yield (mats, shifts, kind) batches: exhaustive if affordable, else structured then random."""
    total = transform_count(n, q)
    if total <= budget:
        for lo in range(0, total, BATCH * 4):
            mats, shifts = transforms_from_index(np.arange(lo, min(total, lo + BATCH * 4)), n, q)
            yield mats, shifts, "exact"
        return
    A, B = structured_transforms(n, q)
    for lo in range(0, len(A), BATCH):
        yield A[lo:lo + BATCH], B[lo:lo + BATCH], "structured"
    rng = np.random.default_rng(seed)
    while True:
        yield rng.integers(0, q, (BATCH, n, n)), rng.integers(0, q, (BATCH, n)), "random"


@dataclass
class RankCertificate:
    q: int
    n: int
    d: int
    dual_dim: int
    achieved_rank: int
    max_row_weight: int
    mode: str               # exact | sampled
    transforms_used: int
    status: str             # pass | fail | inconclusive

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        out = asdict(self)
        out["pass"] = self.passed
        return out


def _check_params(C, n, q):
    if C.n != n or C.field.q != q:
        raise DomainMismatch(f"constraint over F_{C.field.q}^{C.n}, asked about F_{q}^{n}")


def orbit_span_rank(C, n, d, q, transform_budget=TRANSFORM_BUDGET, rank_budget=RANK_BUDGET, seed=0):
    _check_params(C, n, q)
    size = q ** n
    if size > rank_budget:
        raise EnumerationBudget("dense dual vectors", size, rank_budget)
    dual_dim = size - rm_dimension(n, d, q)
    exact = transform_count(n, q) <= transform_budget
    basis = EchelonBasis(C.field, size)
    weight = 0
    used = 0
    stale = 0
    for mats, shifts, kind in _transform_batches(n, q, transform_budget, seed):
        if basis.rank >= dual_dim:
            break
        vecs = _orbit_duals(C, mats, shifts)
        used += len(shifts)
        weight = max(weight, int(np.count_nonzero(vecs, axis=1).max()))
        gained = basis.add(vecs)
        if kind == "random":
            stale = 0 if gained else stale + 1
            if stale >= PATIENCE:
                break
    if basis.rank == dual_dim:
        status = "pass"
    else:
        status = "fail" if exact else "inconclusive"
    return RankCertificate(q, n, d, dual_dim, basis.rank, weight,
                           "exact" if exact else "sampled", used, status)


def verify_deg_border(C, n, d, q, transform_budget=TRANSFORM_BUDGET, seed=0, max_random_batches=64):
    """Every degree vector accepted; every border vector rejected by some transform of C."""
    _check_params(C, n, q)
    f = C.field
    degs = degree_set(n, d, q)
    if q ** n <= RANK_BUDGET:
        table = accepted_degrees(C)
        deg_fail = [e for e in degs if not table[int(vectors_to_index(e, q))]]
    else:
        deg_fail = [e for e in degs if np.any(_monomial_row_sums_batch(C, C.points[None], [e]))]

    border = border_set(n, d, q, f.p, f.s)
    uncovered = list(border)
    used = 0
    random_batches = 0
    if uncovered:
        for mats, shifts, kind in _transform_batches(n, q, transform_budget, seed):
            pts = _transformed_points(C, mats, shifts)
            sums = _monomial_row_sums_batch(C, pts, uncovered)           # (b, m, r)
            hit = np.any(sums != 0, axis=(1, 2))
            uncovered = [b for b, h in zip(uncovered, hit) if not h]
            used += len(shifts)
            if kind == "random":
                random_batches += 1
            if not uncovered or random_batches >= max_random_batches:
                break
    exact = transform_count(n, q) <= transform_budget
    return {
        "q": q,
        "n": n,
        "d": d,
        "deg_checked": len(degs),
        "deg_failures": [list(e) for e in deg_fail],
        "border_total": len(border),
        "border_uncovered": [list(b) for b in uncovered],
        "transforms_used": used,
        "mode": "exact" if exact else "sampled",
        "pass": not deg_fail and not uncovered,
    }


def _transformed_points(C, mats, shifts):
    """(m, k, n) coordinates of A_m alpha_j + beta_m."""
    f = C.field
    q = f.q
    idx = transformed_indices(f, C.points, mats, shifts)
    return (idx[..., None] // q ** np.arange(C.n, dtype=np.int64)) % q


def _monomial_row_sums_batch(C, pts, exps_list):
    """(b, m, r) row sums of x^e over transformed point sets pts of shape (m, k, n)."""
    f = C.field
    out = []
    for e in exps_list:
        vals = np.ones(pts.shape[:2], dtype=np.int64)
        for t, x in enumerate(e):
            if x:
                vals = f.vmul(vals, f.pow_table[pts[..., t], x])
        out.append(f.vsum(f.vmul(C.rows[None], vals[:, None, :]), axis=-1))
    return np.array(out).reshape(len(exps_list), pts.shape[0], C.r)


# -- codewords and distance ---------------------------------------------------

def rm_generator(field, n, d):
    """Degree vectors of the monomial basis and their value tables (one row each)."""
    degs = degree_set(n, d, field.q)
    rows = [evaluate_grid(MultiPoly.monomial(field, e)) for e in degs]
    return degs, np.array(rows, dtype=np.int64).reshape(len(degs), field.q ** n)


def random_codeword(field, n, d, rng):
    degs, G = rm_generator(field, n, d)
    coeffs = rng.integers(0, field.q, size=len(degs))
    vals = np.zeros(field.q ** n, dtype=np.int64)
    for c, row in zip(coeffs, G):
        vals = field.vadd(vals, field.vmul(int(c), row))
    return FunctionTable(field, n, vals)


def is_codeword(f, d):
    return table_degree(f.field, f.n, f.values) <= d


def distance_to_rm(f, n, d, q, budget=CODEWORD_BUDGET):
    """Minimum normalized Hamming distance to RM[n, d, q], by enumerating every codeword."""
    field = f.field
    if f.n != n or field.q != q:
        raise DomainMismatch("function table does not live on F_q^n")
    dim = rm_dimension(n, d, q)
    if q ** dim > budget:
        raise EnumerationBudget("RM codewords", q ** dim, budget)
    _, G = rm_generator(field, n, d)
    best = q ** n
    total = q ** dim
    step = max(1, (1 << 20) // q ** n)
    for lo in range(0, total, step):
        idx = np.arange(lo, min(total, lo + step), dtype=np.int64)
        coeffs = (idx[:, None] // q ** np.arange(dim, dtype=np.int64)[None, :]) % q
        words = np.zeros((len(idx), q ** n), dtype=np.int64)
        for t in range(dim):
            words = field.vadd(words, field.vmul(coeffs[:, t, None], G[t][None, :]))
        best = min(best, int(np.count_nonzero(words != f.values[None, :], axis=1).min()))
        if best == 0:
            break
    return Fraction(best, q ** n)


def orbit_accepts_all(C, values_batch):
    """For each table in a (m, q^n) batch: accepted by every transform of C (exhaustive)."""
    f = C.field
    n, q = C.n, f.q
    total = transform_count(n, q)
    mats, shifts = transforms_from_index(np.arange(total), n, q)
    duals = _orbit_duals(C, mats, shifts)                       # (T*r, q^n)
    duals = np.unique(duals, axis=0)
    values_batch = np.asarray(values_batch, dtype=np.int64)
    ok = np.ones(len(values_batch), dtype=bool)
    for row in duals:
        ok &= f.vsum(f.vmul(row[None, :], values_batch), axis=-1) == 0
    return ok

