"""Expected number of valid M-tuples in a pool of L uniform points.

Both estimators work in log space. With ``x = pi * d_min**2 / A``:

* exact:  ``C(L, M) * (1 - x) ** C(M, 2)``
* approx: ``L**M / M! * exp(-x * C(M, 2))``

The approximation converges to the exact form as L grows with x small.
"""

import math
from itertools import combinations

import attr
import numpy as np
from scipy.special import gammaln

from ecmod.errors import ConstraintInfeasible
from ecmod.tuplegen.stream import derive_stream

MONTE_CARLO_TAG = "montecarlo"
_LN10 = math.log(10.0)
_POOLS_PER_CHUNK = 1000


@attr.s(frozen=True)
class TupleCountEstimate:
    """Natural log of an expected count plus a decimal rendering."""

    ln_value: float = attr.ib()

    @property
    def log10(self) -> float:
        return self.ln_value / _LN10

    @property
    def exponent(self) -> int:
        return math.floor(self.log10)

    @property
    def mantissa(self) -> float:
        return 10.0 ** (self.log10 - self.exponent)

    def scientific(self) -> str:
        return f"{self.mantissa:.4f}e{self.exponent:+d}"


def exclusion_fraction(d_min: float, area: float) -> float:
    """``pi * d_min**2 / A``; at least 1 means no pair can be valid."""
    if area <= 0:
        raise ValueError(f"area must be positive, got {area}")
    if d_min < 0:
        raise ValueError(f"d_min must be non-negative, got {d_min}")
    x = math.pi * d_min * d_min / area
    if x >= 1.0:
        raise ConstraintInfeasible(
            f"pi * d_min^2 = {math.pi * d_min * d_min:.6g} is not below "
            f"the area {area:.6g}"
        )
    return x


def _check_sizes(pool_size: int, m: int) -> None:
    if m < 2:
        raise ValueError(f"M must be >= 2, got {m}")
    if m > pool_size:
        raise ValueError(f"M={m} exceeds the pool size L={pool_size}")


def ln_binomial(n: int, k: int) -> float:
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def expected_tuples_exact(
    pool_size: int, m: int, d_min: float, area: float
) -> TupleCountEstimate:
    _check_sizes(pool_size, m)
    x = exclusion_fraction(d_min, area)
    pairs = m * (m - 1) / 2
    return TupleCountEstimate(
        ln_binomial(pool_size, m) + pairs * math.log1p(-x)
    )


def expected_tuples_approx(
    pool_size: int, m: int, d_min: float, area: float
) -> TupleCountEstimate:
    _check_sizes(pool_size, m)
    x = exclusion_fraction(d_min, area)
    pairs = m * (m - 1) / 2
    return TupleCountEstimate(
        m * math.log(pool_size) - float(gammaln(m + 1)) - x * pairs
    )


def key_space_log10(bits: int = 256) -> float:
    """log10 of the number of keys a brute-force search must cover."""
    return bits * math.log10(2.0)


@attr.s(frozen=True)
class MonteCarloCount:
    mean: float = attr.ib()
    stderr: float = attr.ib()
    pools: int = attr.ib()


def _pair_distances(points: np.ndarray, side: float, torus: bool):
    diff = np.abs(points[:, :, None, :] - points[:, None, :, :])
    if torus:
        diff = np.minimum(diff, side - diff)
    return np.sqrt((diff * diff).sum(axis=-1))


def monte_carlo_tuple_count(
    pool_size: int,
    m: int,
    d_min: float,
    area: float,
    pools: int,
    seed: bytes,
    torus: bool = True,
) -> MonteCarloCount:
    """Count valid M-tuples exhaustively over random uniform pools.

    Pools are ``pool_size`` points uniform on a square of the given area.
    With ``torus`` distances wrap around the square edges.
    """
    _check_sizes(pool_size, m)
    if pools < 2:
        raise ValueError(f"need at least 2 pools, got {pools}")
    side = math.sqrt(area)
    stream = derive_stream(seed, MONTE_CARLO_TAG)
    combos = np.array(list(combinations(range(pool_size), m)))
    pair_slots = list(combinations(range(m), 2))
    counts = np.empty(pools, dtype=np.float64)
    per_pool = 2 * pool_size
    for first in range(0, pools, _POOLS_PER_CHUNK):
        chunk = min(_POOLS_PER_CHUNK, pools - first)
        uniforms = stream.uniforms_at(first * per_pool, chunk * per_pool)
        points = uniforms.reshape(chunk, pool_size, 2) * side
        apart = _pair_distances(points, side, torus) >= d_min
        valid = np.ones((chunk, len(combos)), dtype=bool)
        for i, j in pair_slots:
            valid &= apart[:, combos[:, i], combos[:, j]]
        counts[first : first + chunk] = valid.sum(axis=1)
    return MonteCarloCount(
        mean=float(counts.mean()),
        stderr=float(counts.std(ddof=1) / math.sqrt(pools)),
        pools=pools,
    )
