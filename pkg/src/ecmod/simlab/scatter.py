import math
from pathlib import Path

import numpy as np

from ecmod.constellation.geometry import format_float
from ecmod.errors import IoFailure
from ecmod.simlab.channel import ChannelConfig, awgn
from ecmod.simlab.scheme import Scheme
from ecmod.tuplegen.stream import derive_stream
from ecmod.utils.utils import atomic_write_text

SCATTER_TAG = "scatter"


def scatter_samples(
    scheme: Scheme,
    count: int,
    seed: bytes | None,
    noise_seed: bytes,
    es_n0_db: float = math.inf,
) -> np.ndarray:
    """``count`` transmitted (or received, at finite Es/N0) symbols for a
    random payload drawn from the noise seed."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    payload = derive_stream(noise_seed, f"{SCATTER_TAG}:payload")
    m = scheme.order
    indices = (payload.words_at(0, count) % np.uint64(m)).astype(np.int64)
    schedule = scheme.schedule(seed, count)
    symbols = scheme.modulate_indices(indices, schedule)
    channel = ChannelConfig(es_n0_db, noise_seed, tag=f"{SCATTER_TAG}:noise")
    return awgn(symbols, channel)


def render_scatter(samples) -> str:
    samples = np.asarray(samples, dtype=np.complex128).reshape(-1)
    return "".join(
        f"{format_float(s.real)} {format_float(s.imag)}\n" for s in samples
    )


def scatter_export(samples, path: str | Path) -> None:
    """Write two-column ``I Q`` text, one sample per line."""
    atomic_write_text(path, render_scatter(samples))


def read_scatter(path: str | Path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise IoFailure(f"cannot read scatter file {path}: {err}") from err
    values = np.array(
        [
            [float(part) for part in line.split()]
            for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        ],
        dtype=np.float64,
    ).reshape(-1, 2)
    return values[:, 0] + 1j * values[:, 1]
