"""Timing harness for tree construction and tuple generation."""

import csv
import io
from timeit import default_timer as timer

import attr
import numpy as np
from tqdm import tqdm

from ecmod.constellation.geometry import center, normalize_energy
from ecmod.curves.curve import CurveParams
from ecmod.tuplegen.generator import generate_from_pool
from ecmod.tuplegen.kdtree import KdTree2D, build_tree
from ecmod.tuplegen.pool import (
    CandidatePool,
    bounding_area,
    gen_candidate_pool,
)
from ecmod.tuplegen.stream import derive_stream

BENCH_TAG = "bench"
BENCH_FIELDS = ("pool_size", "build_seconds", "per_tuple_seconds", "attempts")


@attr.s(frozen=True)
class BenchRow:
    pool_size: int = attr.ib()
    build_seconds: float = attr.ib()
    per_tuple_seconds: float = attr.ib()
    attempts: int = attr.ib()


def uniform_pool(seed: bytes, size: int) -> CandidatePool:
    """Stand-in pool of uniform points, normalized like a curve pool."""
    stream = derive_stream(seed, BENCH_TAG)
    raw = stream.uniforms_at(0, 2 * size).reshape(size, 2)
    points = normalize_energy(center(raw))
    return CandidatePool(
        scalars=list(range(1, size + 1)),
        points=points,
        area=bounding_area(points),
    )


def time_build(
    pool: CandidatePool, leaf_size: int, repeat: int
) -> tuple[float, KdTree2D]:
    """Median build time over ``repeat`` builds, and the last tree built."""
    times = []
    for _ in range(max(repeat, 1)):
        start = timer()
        tree = build_tree(pool, leaf_size=leaf_size)
        times.append(timer() - start)
    return float(np.median(times)), tree


def run_benchmark(
    seed: bytes,
    pool_sizes,
    m: int,
    d_min: float,
    n_tuples: int,
    curve: CurveParams | None = None,
    leaf_size: int = 8,
    repeat: int = 3,
    workers: int = 1,
    progress: bool = False,
) -> list[BenchRow]:
    """Median build time and mean search time per generated tuple.

    Pools come from ``curve`` when given, otherwise from uniform points.
    The search reuses the timed tree, so per-tuple times exclude the build.
    """
    rows = []
    for size in tqdm(pool_sizes, desc="Benchmarking", disable=not progress):
        if curve is None:
            pool = uniform_pool(seed, size)
            name = "uniform"
        else:
            pool = gen_candidate_pool(seed, size, curve, workers=workers)
            name = curve.name
        build_seconds, tree = time_build(pool, leaf_size, repeat)
        start = timer()
        bank = generate_from_pool(
            seed,
            pool,
            name,
            m,
            d_min,
            n_tuples,
            leaf_size=leaf_size,
            strict=False,
            tree=tree,
        )
        elapsed = timer() - start
        rows.append(
            BenchRow(
                pool_size=size,
                build_seconds=build_seconds,
                per_tuple_seconds=elapsed / max(len(bank), 1),
                attempts=bank.attempts,
            )
        )
    return rows


def growth_ratios(rows: list[BenchRow]) -> np.ndarray:
    """Build-time ratio between consecutive pool sizes."""
    times = np.array([row.build_seconds for row in rows])
    return times[1:] / times[:-1]


def tuple_scaling(rows: list[BenchRow]) -> np.ndarray:
    """Per-tuple time growth divided by pool-size growth, per step.

    Values below 1 mean the search cost grows sublinearly in L.
    """
    times = np.array([row.per_tuple_seconds for row in rows])
    sizes = np.array([row.pool_size for row in rows], dtype=np.float64)
    return (times[1:] / times[:-1]) / (sizes[1:] / sizes[:-1])


def bench_csv(rows: list[BenchRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(BENCH_FIELDS)
    for row in rows:
        writer.writerow(
            (
                row.pool_size,
                format(row.build_seconds, ".6g"),
                format(row.per_tuple_seconds, ".6g"),
                row.attempts,
            )
        )
    return buffer.getvalue()
