import math

import attr
import numpy as np

from ecmod.errors import NoSamples

MIN_Q = 1
MAX_Q = 16
ENTROPY_FIELDS = (
    "label",
    "q",
    "region",
    "count",
    "clamp_fraction",
    "entropy",
    "miller_madow",
)


@attr.s(frozen=True)
class EntropyReport:
    """Histogram entropy of IQ samples on a ``2^q x 2^q`` grid.

    Args:
        int q: Quantization bits per axis.
        float region: Half-width R of the square ``[-R, R)^2``.
        int count: Number of samples.
        float clamp_fraction: Share of samples outside the region, binned
            into the nearest edge cell.
        float entropy: Plug-in entropy in bits.
        float miller_madow: Entropy with the ``(K - 1) / (2 N ln 2)``
            bias correction, K the occupied cell count.
        str label: Free-form tag carried into CSV rows.
    """

    q: int = attr.ib()
    region: float = attr.ib()
    count: int = attr.ib()
    clamp_fraction: float = attr.ib()
    entropy: float = attr.ib()
    miller_madow: float = attr.ib()
    occupied: int = attr.ib()
    label: str = attr.ib(default="")

    def csv_row(self) -> tuple:
        return (
            self.label,
            self.q,
            format(self.region, ".17g"),
            self.count,
            format(self.clamp_fraction, ".17g"),
            format(self.entropy, ".17g"),
            format(self.miller_madow, ".17g"),
        )


def as_samples(samples) -> np.ndarray:
    """Complex samples from complex input or ``(n, 2)`` coordinates."""
    array = np.asarray(samples)
    if np.iscomplexobj(array):
        return array.reshape(-1).astype(np.complex128)
    array = array.astype(np.float64)
    if array.ndim == 2 and array.shape[1] == 2:
        return array[:, 0] + 1j * array[:, 1]
    return array.reshape(-1).astype(np.complex128)


def cell_indices(samples, q: int, region: float):
    """Grid cell of every sample plus the mask of clamped samples."""
    side = 1 << q
    delta = 2.0 * region / side
    coords = np.column_stack((samples.real, samples.imag))
    outside = ((coords < -region) | (coords >= region)).any(axis=1)
    cells = np.floor((coords + region) / delta).astype(np.int64)
    np.clip(cells, 0, side - 1, out=cells)
    return cells[:, 0] * side + cells[:, 1], outside


def quantized_entropy(
    samples, q: int, region: float = 2.0, label: str = ""
) -> EntropyReport:
    """Entropy of the cell-occupancy distribution of ``samples``.

    Raises:
        NoSamples: ``samples`` is empty.
    """
    if not MIN_Q <= q <= MAX_Q:
        raise ValueError(f"q must lie in [{MIN_Q}, {MAX_Q}], got {q}")
    if region <= 0:
        raise ValueError(f"region half-width must be positive, got {region}")
    samples = as_samples(samples)
    if len(samples) == 0:
        raise NoSamples("cannot estimate entropy from no samples")
    flat, outside = cell_indices(samples, q, region)
    _, counts = np.unique(flat, return_counts=True)
    probabilities = counts / len(samples)
    entropy = float(-(probabilities * np.log2(probabilities)).sum())
    entropy = min(max(entropy, 0.0), 2.0 * q)
    occupied = len(counts)
    correction = (occupied - 1) / (2.0 * len(samples) * math.log(2.0))
    return EntropyReport(
        q=q,
        region=float(region),
        count=len(samples),
        clamp_fraction=float(np.count_nonzero(outside) / len(samples)),
        entropy=entropy,
        miller_madow=entropy + correction,
        occupied=occupied,
        label=label,
    )
