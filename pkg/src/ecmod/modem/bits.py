from pathlib import Path

import numpy as np

from ecmod.errors import IoFailure, LengthNotDivisible
from ecmod.utils.utils import atomic_write_bytes


def bits_per_symbol(m: int) -> int:
    k = m.bit_length() - 1
    if m < 2 or 1 << k != m:
        raise ValueError(f"M must be a power of two >= 2, got {m}")
    return k


def as_bits(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if (bits > 1).any():
        raise ValueError("bits must be 0 or 1")
    return bits


def pad_bits(bits, m: int) -> np.ndarray:
    """Zero-pad to a whole number of log2(M)-bit groups."""
    bits = as_bits(bits)
    k = bits_per_symbol(m)
    short = -len(bits) % k
    if short:
        bits = np.concatenate([bits, np.zeros(short, dtype=np.uint8)])
    return bits


def bits_to_indices(bits, m: int, pad: bool = False) -> np.ndarray:
    """Big-endian log2(M)-bit groups to symbol indices.

    Raises:
        LengthNotDivisible: The length is not a multiple of log2(M) and
            ``pad`` is off.
    """
    bits = as_bits(bits)
    k = bits_per_symbol(m)
    if len(bits) % k:
        if not pad:
            raise LengthNotDivisible(
                f"{len(bits)} bits do not split into {k}-bit groups"
            )
        bits = pad_bits(bits, m)
    groups = bits.reshape(-1, k).astype(np.int64)
    weights = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)
    return groups @ weights


def indices_to_bits(indices, m: int) -> np.ndarray:
    k = bits_per_symbol(m)
    indices = np.asarray(indices, dtype=np.int64).reshape(-1)
    if ((indices < 0) | (indices >= m)).any():
        raise ValueError(f"symbol indices must lie in [0, {m})")
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((indices[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)


def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_bytes(bits) -> bytes:
    """Most-significant bit first; a trailing partial byte is zero-filled."""
    return np.packbits(as_bits(bits)).tobytes()


def read_bit_file(path: str | Path) -> np.ndarray:
    try:
        data = Path(path).read_bytes()
    except OSError as err:
        raise IoFailure(f"cannot read bit file {path}: {err}") from err
    return bytes_to_bits(data)


def write_bit_file(path: str | Path, bits) -> None:
    atomic_write_bytes(path, bits_to_bytes(bits))


def bit_agreement(a, b) -> float:
    """Fraction of positions where two bit streams agree."""
    a, b = as_bits(a), as_bits(b)
    n = min(len(a), len(b))
    if n == 0:
        raise ValueError("cannot compare empty bit streams")
    return float(np.count_nonzero(a[:n] == b[:n]) / n)
