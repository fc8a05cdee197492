import math

import numpy as np

from ecmod.constellation.geometry import Constellation
from ecmod.errors import UnsupportedOrder

SUPPORTED_ORDERS = (4, 16, 64)


def gray_code(value: int) -> int:
    return value ^ (value >> 1)


def gray_decode(code: int) -> int:
    value = 0
    while code:
        value ^= code
        code >>= 1
    return value


def qam_d_min(m: int) -> float:
    """Minimum distance of unit-energy square M-QAM, 2 / sqrt(2(M-1)/3)."""
    return 2.0 / math.sqrt(2.0 * (m - 1) / 3.0)


def qam_reference(m: int) -> Constellation:
    """Gray-mapped square M-QAM, centred, unit average energy.

    Symbol ``s`` splits into an in-phase half (high bits) and a quadrature
    half (low bits); each half is a Gray code over the amplitude levels.

    Raises:
        UnsupportedOrder: ``m`` is not 4, 16 or 64.
    """
    if m not in SUPPORTED_ORDERS:
        raise UnsupportedOrder(
            f"Unsupported QAM order {m}.\nSelect one of the following: "
            f"{', '.join(map(str, SUPPORTED_ORDERS))}"
        )
    side = math.isqrt(m)
    half_bits = side.bit_length() - 1
    levels = 2 * np.arange(side) - (side - 1)
    points = np.empty((m, 2), dtype=np.float64)
    for symbol in range(m):
        i_code, q_code = symbol >> half_bits, symbol & (side - 1)
        points[symbol] = (
            levels[gray_decode(i_code)],
            levels[gray_decode(q_code)],
        )
    points /= math.sqrt(2.0 * (m - 1) / 3.0)
    return Constellation(points=points, d_min=qam_d_min(m))
