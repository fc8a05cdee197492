"""Additive white Gaussian noise from a seeded stream.

Noise samples come from Box-Muller over the noise seed's keystream: symbol
``t`` consumes uniforms ``2t`` and ``2t + 1`` of the stream, giving
``sigma * sqrt(-2 ln(1 - u1)) * exp(2j pi u2)``.
"""

import math
import warnings

import attr
import numpy as np

from ecmod.tuplegen.stream import check_seed, derive_stream

NOISE_TAG = "noise"
ENERGY_WARN_TOL = 0.1


@attr.s(frozen=True)
class ChannelConfig:
    """Es/N0 in dB (``math.inf`` for a noiseless channel) and noise seed."""

    es_n0_db: float = attr.ib(converter=float)
    noise_seed: bytes = attr.ib(converter=check_seed)
    tag: str = attr.ib(default=NOISE_TAG)

    @es_n0_db.validator
    def check_es_n0_db(self, attribute, value):
        if math.isnan(value) or value == -math.inf:
            raise ValueError(f"es_n0_db must be a number, got {value}")

    @property
    def noiseless(self) -> bool:
        return self.es_n0_db == math.inf

    @property
    def noise_variance(self) -> float:
        """Per real dimension, for unit symbol energy."""
        if self.noiseless:
            return 0.0
        return 10.0 ** (-self.es_n0_db / 10.0) / 2.0


def gaussian_pairs(stream, start: int, count: int) -> np.ndarray:
    """``count`` standard complex normals with unit variance per axis."""
    u = stream.uniforms_at(2 * start, 2 * count).reshape(-1, 2)
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    return radius * np.exp(2j * math.pi * u[:, 1])


def awgn(symbols, config: ChannelConfig, start: int = 0) -> np.ndarray:
    """Add noise to ``symbols``; ``start`` is the stream position of the
    first symbol."""
    symbols = np.asarray(symbols, dtype=np.complex128).reshape(-1)
    if len(symbols):
        energy = float(np.mean(np.abs(symbols) ** 2))
        if abs(energy - 1.0) > ENERGY_WARN_TOL:
            warnings.warn(
                f"channel input has average energy {energy:.4f}, "
                "noise variance assumes 1",
                stacklevel=2,
            )
    if config.noiseless:
        return symbols.copy()
    stream = derive_stream(config.noise_seed, config.tag)
    noise = gaussian_pairs(stream, start, len(symbols))
    return symbols + math.sqrt(config.noise_variance) * noise
