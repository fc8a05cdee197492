"""Seed-driven synthesis of valid M-tuples.

One attempt picks a random start point from the pool, then repeatedly picks
a random pool point that keeps at least the exclusion radius from every
point chosen so far, until M points are chosen or nothing admissible is
left. A full tuple is re-centred, re-scaled to unit energy and kept only if
all its pairwise distances still reach ``d_min`` and its scalar set is new.
"""

from timeit import default_timer

import numpy as np
from tqdm import tqdm

from ecmod.constellation.geometry import (
    center,
    min_pairwise_distance,
    normalize_energy,
)
from ecmod.curves.curve import CurveParams
from ecmod.errors import ExhaustedAttempts, PoolTooSmall
from ecmod.tuplegen.bank import EcmTuple, TupleBank
from ecmod.tuplegen.kdtree import KdTree2D, build_tree
from ecmod.tuplegen.pool import CandidatePool, gen_candidate_pool
from ecmod.tuplegen.stream import KeyStream, derive_stream, seed_fingerprint

TUPLEGEN_TAG = "tuplegen"
ATTEMPTS_PER_TUPLE = 100


def check_order(m: int) -> int:
    if m < 4 or m & (m - 1):
        raise ValueError(f"M must be a power of two >= 4, got {m}")
    return m


def default_max_attempts(n_tuples: int) -> int:
    return ATTEMPTS_PER_TUPLE * n_tuples


def _exclude(
    available: np.ndarray, tree: KdTree2D, point, radius: float
) -> None:
    if radius > 0:
        available[tree.query_radius(point, radius)] = False


def draw_tuple(
    stream: KeyStream,
    pool: CandidatePool,
    tree: KdTree2D,
    m: int,
    radius: float,
) -> list[int] | None:
    """One attempt; pool indices in pick order, or None on a dead end."""
    available = np.ones(pool.size, dtype=bool)
    start = stream.randbelow(pool.size)
    chosen = [start]
    available[start] = False
    _exclude(available, tree, pool.points[start], radius)
    while len(chosen) < m:
        candidates = np.flatnonzero(available)
        if len(candidates) == 0:
            return None
        pick = int(candidates[stream.randbelow(len(candidates))])
        chosen.append(pick)
        available[pick] = False
        _exclude(available, tree, pool.points[pick], radius)
    return chosen


def renormalize_tuple(points) -> np.ndarray:
    """Tuple-level centring and unit-energy scaling."""
    return normalize_energy(center(points))


def generate_from_pool(
    seed: bytes,
    pool: CandidatePool,
    curve_name: str,
    m: int,
    d_min: float,
    n_tuples: int,
    max_attempts: int | None = None,
    prefilter_slack: float = 1.0,
    leaf_size: int = 1,
    progress: bool = False,
    strict: bool = True,
    tree: KdTree2D | None = None,
) -> TupleBank:
    """Run the tuple search over an existing pool.

    A prebuilt ``tree`` over ``pool.points`` is used as is; ``leaf_size``
    only applies when the tree is built here.

    Raises:
        ExhaustedAttempts: Fewer than ``n_tuples`` tuples were found and
            ``strict`` is set; the exception carries the partial bank.
    """
    check_order(m)
    if d_min <= 0:
        raise ValueError(f"d_min must be positive, got {d_min}")
    if n_tuples < 1:
        raise ValueError(f"N' must be >= 1, got {n_tuples}")
    if prefilter_slack <= 0:
        raise ValueError(
            f"prefilter_slack must be positive, got {prefilter_slack}"
        )
    if pool.size < m:
        raise PoolTooSmall(f"pool of {pool.size} cannot hold M={m} points")
    if max_attempts is None:
        max_attempts = default_max_attempts(n_tuples)

    if tree is None:
        tree = build_tree(pool, leaf_size=leaf_size)
    elif len(tree) != pool.size:
        raise ValueError(
            f"tree covers {len(tree)} points, pool has {pool.size}"
        )
    stream = derive_stream(seed, TUPLEGEN_TAG)
    radius = d_min * prefilter_slack
    bank = TupleBank(
        curve=curve_name,
        m=m,
        d_min=d_min,
        n_tuples=n_tuples,
        pool_size=pool.size,
        max_attempts=max_attempts,
        seed_fingerprint=seed_fingerprint(seed),
        prefilter_slack=prefilter_slack,
    )
    seen: set[frozenset[int]] = set()
    attempts = 0
    with tqdm(
        total=n_tuples, desc="Generating tuples", disable=not progress
    ) as pbar:
        while len(bank.tuples) < n_tuples and attempts < max_attempts:
            attempts += 1
            chosen = draw_tuple(stream, pool, tree, m, radius)
            if chosen is None:
                continue
            scalars = [pool.scalars[i] for i in chosen]
            key = frozenset(scalars)
            if key in seen:
                continue
            points = renormalize_tuple(pool.points[chosen])
            if min_pairwise_distance(points) < d_min:
                continue
            seen.add(key)
            bank.tuples.append(EcmTuple(scalars=scalars, points=points))
            pbar.update(1)
    bank.attempts = attempts
    if len(bank.tuples) < n_tuples:
        bank.partial = True
        if strict:
            raise ExhaustedAttempts(bank, attempts)
    return bank


def generate_tuples(
    seed: bytes,
    curve: CurveParams,
    m: int,
    d_min: float,
    n_tuples: int,
    pool_size: int,
    max_attempts: int | None = None,
    prefilter_slack: float = 1.0,
    leaf_size: int = 1,
    workers: int = 1,
    progress: bool = False,
    strict: bool = True,
) -> TupleBank:
    """Build a bank of ``n_tuples`` valid M-tuples from ``seed``.

    The bank is a pure function of the arguments other than ``workers``,
    ``progress`` and ``leaf_size``.

    Args:
        bytes seed: 32-byte shared secret.
        CurveParams curve: Curve whose points form the candidate pool.
        int m: Constellation order, a power of two >= 4.
        float d_min: Minimum pairwise distance after tuple normalization.
        int n_tuples: Requested tuple count N'.
        int pool_size: Candidate pool size L.
        int max_attempts: Attempt cap, ``100 * n_tuples`` when None.
        float prefilter_slack: Multiplier on the per-step exclusion radius.
        int leaf_size: kd-tree leaf size.
        int workers: Processes used to map the pool scalars.
        bool progress: Show tqdm bars.
        bool strict: Raise ``ExhaustedAttempts`` on a short bank instead of
            returning it flagged ``partial``.

    Returns:
        TupleBank: The generated bank.
    """
    check_order(m)
    if pool_size < m:
        raise PoolTooSmall(f"pool of {pool_size} cannot hold M={m} points")
    started = default_timer()
    pool = gen_candidate_pool(
        seed, pool_size, curve, workers=workers, progress=progress
    )
    bank = generate_from_pool(
        seed,
        pool,
        curve.name,
        m,
        d_min,
        n_tuples,
        max_attempts=max_attempts,
        prefilter_slack=prefilter_slack,
        leaf_size=leaf_size,
        progress=progress,
        strict=strict,
    )
    if progress:
        tqdm.write(
            f"Generated {len(bank)} tuples in "
            f"{default_timer() - started:.2f}s"
        )
    return bank
