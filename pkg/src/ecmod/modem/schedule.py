import math

import attr
import numpy as np

from ecmod.tuplegen.stream import derive_stream, indices_at

SCHEDULE_TAG = "schedule"
ROTATION_TAG = "rotation"


@attr.s(frozen=True, eq=False)
class TransmissionSchedule:
    """Per-symbol tuple choice and rotation angle.

    Args:
        np.ndarray tuple_index: Bank row for each symbol, in [0, N').
        np.ndarray angle: Rotation in [0, 2 pi) for each symbol.
        int start: Absolute stream position of the first record.
    """

    tuple_index: np.ndarray = attr.ib()
    angle: np.ndarray = attr.ib()
    start: int = attr.ib(default=0)

    def __len__(self) -> int:
        return len(self.tuple_index)

    def slice(self, offset: int, count: int) -> "TransmissionSchedule":
        """Records ``offset .. offset + count - 1`` of this schedule."""
        end = offset + count
        return TransmissionSchedule(
            tuple_index=self.tuple_index[offset:end],
            angle=self.angle[offset:end],
            start=self.start + offset,
        )


def make_schedule(
    seed: bytes,
    n_tuples: int,
    count: int,
    dr: bool,
    start: int = 0,
    round_robin: bool = False,
    block_length: int = 1,
) -> TransmissionSchedule:
    """Schedule for symbol positions ``start .. start + count - 1``.

    Every record depends only on the seed and its absolute position, so any
    range can be produced independently of the others.
    """
    if n_tuples < 1:
        raise ValueError(f"N' must be >= 1, got {n_tuples}")
    if count < 0 or start < 0:
        raise ValueError("start and count must be non-negative")
    if block_length < 1:
        raise ValueError(f"block_length must be >= 1, got {block_length}")

    positions = np.arange(start, start + count, dtype=np.int64)
    if round_robin:
        tuple_index = positions % n_tuples
    else:
        stream = derive_stream(seed, SCHEDULE_TAG)
        tuple_index = indices_at(stream, start, count, n_tuples)

    if dr and count:
        blocks = positions // block_length
        first = int(blocks[0])
        stream = derive_stream(seed, ROTATION_TAG)
        u = stream.uniforms_at(first, int(blocks[-1]) - first + 1)
        angle = 2.0 * math.pi * u[blocks - first]
    else:
        angle = np.zeros(count, dtype=np.float64)
    return TransmissionSchedule(
        tuple_index=tuple_index, angle=angle, start=start
    )
