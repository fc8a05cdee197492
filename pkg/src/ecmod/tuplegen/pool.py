from concurrent.futures import ProcessPoolExecutor

import attr
import numpy as np
from tqdm import tqdm

from ecmod.constellation.geometry import (
    center,
    lift_to_plane,
    normalize_energy,
)
from ecmod.curves.arith import CurvePoint, multiply_base_many
from ecmod.curves.curve import CurveParams
from ecmod.curves.named import checked_curve
from ecmod.errors import PoolTooSmall
from ecmod.tuplegen.stream import derive_stream

POOL_TAG = "pool"
_CHUNK = 2048


@attr.s(frozen=True, eq=False)
class CandidatePool:
    """L distinct scalars and their centred, unit-energy plane points.

    Args:
        list scalars: Distinct scalars in [1, n), in draw order.
        np.ndarray points: ``(L, 2)`` normalized points aligned with
            ``scalars``.
        float area: Area of the axis-aligned bounding box of ``points``.
    """

    scalars: list[int] = attr.ib()
    points: np.ndarray = attr.ib()
    area: float = attr.ib()

    @property
    def size(self) -> int:
        return len(self.scalars)


def draw_scalars(seed: bytes, size: int, n: int) -> list[int]:
    """``size`` distinct scalars uniform on [1, n); repeats are redrawn.

    Raises:
        PoolTooSmall: the group has fewer than ``size`` nonzero scalars.
    """
    if size > n - 1:
        raise PoolTooSmall(
            f"cannot draw {size} distinct scalars below n={n}"
        )
    stream = derive_stream(seed, POOL_TAG)
    seen: set[int] = set()
    scalars: list[int] = []
    while len(scalars) < size:
        k = 1 + stream.randbelow(n - 1)
        if k not in seen:
            seen.add(k)
            scalars.append(k)
    return scalars


def _map_chunk(args) -> list[CurvePoint]:
    scalars, curve = args
    return multiply_base_many(scalars, curve)


def map_scalars(
    scalars: list[int],
    curve: CurveParams,
    workers: int = 1,
    progress: bool = False,
) -> np.ndarray:
    """Lift ``k * G`` for every scalar to the plane (coordinates / p).

    With ``workers > 1`` chunks are mapped in worker processes; results keep
    the scalar order.
    """
    chunks = [
        (scalars[i : i + _CHUNK], curve)
        for i in range(0, len(scalars), _CHUNK)
    ]
    with tqdm(
        total=len(scalars),
        desc="Mapping scalars",
        unit="pt",
        disable=not progress,
    ) as pbar:
        mapped: list[CurvePoint] = []
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                for part in executor.map(_map_chunk, chunks):
                    mapped.extend(part)
                    pbar.update(len(part))
        else:
            for chunk in chunks:
                part = _map_chunk(chunk)
                mapped.extend(part)
                pbar.update(len(part))
    return lift_to_plane(mapped, curve.p)


def bounding_area(points) -> float:
    points = np.asarray(points, dtype=np.float64)
    extent = points.max(axis=0) - points.min(axis=0)
    return float(extent[0] * extent[1])


def gen_candidate_pool(
    seed: bytes,
    size: int,
    curve: CurveParams,
    workers: int = 1,
    progress: bool = False,
) -> CandidatePool:
    """Draw, map, centre and normalize a pool of ``size`` curve points.

    Raises:
        CurveInvalid: ``curve`` fails validation.
    """
    curve = checked_curve(curve)
    scalars = draw_scalars(seed, size, curve.n)
    lifted = map_scalars(scalars, curve, workers=workers, progress=progress)
    points = normalize_energy(center(lifted))
    return CandidatePool(
        scalars=scalars, points=points, area=bounding_area(points)
    )

