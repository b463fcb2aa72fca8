"""The randomized local tester: pick a random affine map T, read f at T(alpha_j), check every row.

Monte-Carlo runs draw transforms in fixed-size blocks; block b always comes
from its own Philox stream keyed by (seed, b), so raising the trial count
never changes the outcomes already drawn.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .constraint import AffineTransform, _check_domain, row_sums
from .errors import EnumerationBudget

EXACT_BUDGET = 10 ** 7
BLOCK = 1024
_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True)
class TestReport:
    __test__ = False     # keep pytest from collecting this class

    trials: int
    rejections: int
    mode: str            # "exact" or "sampled"
    seed: object = None

    @property
    def estimate(self):
        return self.rejections / self.trials

    @property
    def probability(self):
        return Fraction(self.rejections, self.trials)

    def stddev(self):
        pr = self.estimate
        return (pr * (1 - pr) / self.trials) ** 0.5

    def to_dict(self):
        out = asdict(self)
        out["estimate"] = self.estimate
        out["probability"] = str(self.probability)
        return out


def block_rng(seed, block):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(block)])))


def sample_transform(rng, n, field):
    """A uniform over all n x n matrices (singular ones included), shift uniform over F_q^n."""
    q = field.q
    return AffineTransform(rng.integers(0, q, size=(n, n)), rng.integers(0, q, size=n))


def _sample_block(rng, n, q, size):
    return rng.integers(0, q, size=(size, n, n)), rng.integers(0, q, size=(size, n))


def transformed_indices(field, points, mats, shifts):
    """Flat table indices of A_m alpha_j + beta_m for a batch of transforms: shape (m, k)."""
    f = field
    q = f.q
    m, n = shifts.shape
    k = points.shape[0]
    idx = np.zeros((m, k), dtype=np.int64)
    for i in range(n):
        coord = np.broadcast_to(shifts[:, i][:, None], (m, k)).copy()
        for j in range(n):
            coord = f.vadd(coord, f.vmul(mats[:, i, j][:, None], points[None, :, j]))
        idx += coord * q ** i
    return idx


def batch_rejects(C, values, mats, shifts):
    """Boolean (m,) array: True where the transformed constraint rejects the table."""
    f = C.field
    m = shifts.shape[0]
    step = max(1, _CHUNK_CELLS // max(1, C.k * C.r))
    out = np.empty(m, dtype=bool)
    for lo in range(0, m, step):
        hi = min(m, lo + step)
        idx = transformed_indices(f, C.points, mats[lo:hi], shifts[lo:hi])
        sums = row_sums(C, values[idx])
        out[lo:hi] = np.any(sums != 0, axis=-1)
    return out


def test_once(C, f, T):
    """True (accept) iff every row sum vanishes on f at the transformed points."""
    _check_domain(C, f.field, f.n)
    mats = np.asarray(T.matrix, dtype=np.int64)[None]
    shifts = np.asarray(T.shift, dtype=np.int64)[None]
    return not batch_rejects(C, f.values, mats, shifts)[0]


def estimate_rejection(C, f, trials, seed=0, block=BLOCK):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _check_domain(C, f.field, f.n)
    n, q = C.n, C.field.q
    rejections = 0
    done = 0
    b = 0
    while done < trials:
        mats, shifts = _sample_block(block_rng(seed, b), n, q, block)
        use = min(block, trials - done)
        rejections += int(batch_rejects(C, f.values, mats[:use], shifts[:use]).sum())
        done += use
        b += 1
    return TestReport(trials, rejections, "sampled", seed)


def transform_count(n, q):
    return q ** (n * n + n)


def transforms_from_index(index, n, q):
    """Decode flat indices in base q, little-endian: A row-major, then the shift."""
    index = np.asarray(index, dtype=np.int64)
    digits = (index[:, None] // q ** np.arange(n * n + n, dtype=np.int64)[None, :]) % q
    return digits[:, : n * n].reshape(-1, n, n), digits[:, n * n:]


def exact_rejection(C, f, budget=EXACT_BUDGET):
    _check_domain(C, f.field, f.n)
    n, q = C.n, C.field.q
    total = transform_count(n, q)
    if total > budget:
        raise EnumerationBudget("affine transforms", total, budget)
    rejections = 0
    step = 1 << 16
    for lo in range(0, total, step):
        mats, shifts = transforms_from_index(np.arange(lo, min(total, lo + step)), n, q)
        rejections += int(batch_rejects(C, f.values, mats, shifts).sum())
    return TestReport(total, rejections, "exact")
