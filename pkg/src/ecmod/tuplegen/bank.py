"""Tuple banks and their JSON file format.

A bank file is the transmitter/receiver shared state besides the seed::

    {
      "format": "ecmod-tuple-bank",
      "version": 1,
      "curve": "secp256k1",
      "m": 16,
      "d_min": "0.63000000000000000",
      "n_tuples": 300,
      "pool_size": 100000,
      "max_attempts": 30000,
      "prefilter_slack": "1",
      "attempts": 1234,
      "partial": false,
      "seed_fingerprint": "<hex sha-256 of the seed>",
      "tuples": [{"scalars": ["123", ...], "points": [["x", "y"], ...]}]
    }

Scalars are decimal strings, coordinates 17-significant-digit strings, so
the rendering is identical on every platform.
"""

import json
from pathlib import Path

import attr
import numpy as np

from ecmod.constellation.geometry import (
    DISTANCE_SLACK,
    UNIT_ENERGY_TOL,
    ZERO_MEAN_TOL,
    as_points,
    average_energy,
    centroid,
    format_float,
    min_pairwise_distance,
    to_complex,
)
from ecmod.errors import IoFailure
from ecmod.utils.utils import atomic_write_text

BANK_FORMAT = "ecmod-tuple-bank"
BANK_VERSION = 1


@attr.s(frozen=True, eq=False)
class EcmTuple:
    """M scalars and their tuple-normalized constellation points.

    Args:
        tuple scalars: The scalars, in symbol-index order.
        np.ndarray points: ``(M, 2)`` centred, unit-energy points.
    """

    scalars: tuple[int, ...] = attr.ib(converter=tuple)
    points: np.ndarray = attr.ib(converter=as_points)

    def is_valid(self, d_min: float) -> bool:
        """Independent O(M^2) check of the tuple invariants."""
        if len(self.scalars) != len(self.points):
            return False
        if np.abs(centroid(self.points)).max() > ZERO_MEAN_TOL:
            return False
        if abs(average_energy(self.points) - 1.0) > UNIT_ENERGY_TOL:
            return False
        return min_pairwise_distance(self.points) >= d_min - DISTANCE_SLACK


@attr.s(eq=False)
class TupleBank:
    """Validated M-tuples plus the parameters that produced them."""

    curve: str = attr.ib()
    m: int = attr.ib()
    d_min: float = attr.ib()
    n_tuples: int = attr.ib()
    pool_size: int = attr.ib()
    max_attempts: int = attr.ib()
    seed_fingerprint: str = attr.ib()
    tuples: list[EcmTuple] = attr.ib(factory=list)
    prefilter_slack: float = attr.ib(default=1.0)
    attempts: int = attr.ib(default=0)
    partial: bool = attr.ib(default=False)

    def __len__(self) -> int:
        return len(self.tuples)

    @property
    def symbols(self) -> np.ndarray:
        """``(N', M)`` complex table, row per tuple."""
        if not self.tuples:
            return np.empty((0, self.m), dtype=np.complex128)
        return np.stack([to_complex(t.points) for t in self.tuples])

    def support_size(self) -> int:
        """Distinct constellation points across all tuples."""
        if not self.tuples:
            return 0
        points = np.concatenate([t.points for t in self.tuples])
        return len(np.unique(points, axis=0))

    def invalid_tuples(self) -> list[int]:
        seen: set[frozenset[int]] = set()
        bad = []
        for i, t in enumerate(self.tuples):
            key = frozenset(t.scalars)
            if len(t.scalars) != self.m or not t.is_valid(self.d_min):
                bad.append(i)
            elif key in seen:
                bad.append(i)
            seen.add(key)
        return bad

    def to_dict(self) -> dict:
        return {
            "format": BANK_FORMAT,
            "version": BANK_VERSION,
            "curve": self.curve,
            "m": self.m,
            "d_min": format_float(self.d_min),
            "n_tuples": self.n_tuples,
            "pool_size": self.pool_size,
            "max_attempts": self.max_attempts,
            "prefilter_slack": format_float(self.prefilter_slack),
            "attempts": self.attempts,
            "partial": self.partial,
            "seed_fingerprint": self.seed_fingerprint,
            "tuples": [
                {
                    "scalars": [str(k) for k in t.scalars],
                    "points": [
                        [format_float(x), format_float(y)]
                        for x, y in t.points
                    ],
                }
                for t in self.tuples
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "TupleBank":
        if data.get("format") != BANK_FORMAT:
            raise ValueError("not an ecmod tuple bank")
        if data.get("version") != BANK_VERSION:
            raise ValueError(
                f"unsupported bank version {data.get('version')!r}"
            )
        tuples = [
            EcmTuple(
                scalars=[int(k) for k in item["scalars"]],
                points=[[float(x), float(y)] for x, y in item["points"]],
            )
            for item in data["tuples"]
        ]
        return cls(
            curve=data["curve"],
            m=int(data["m"]),
            d_min=float(data["d_min"]),
            n_tuples=int(data["n_tuples"]),
            pool_size=int(data["pool_size"]),
            max_attempts=int(data["max_attempts"]),
            seed_fingerprint=data["seed_fingerprint"],
            tuples=tuples,
            prefilter_slack=float(data["prefilter_slack"]),
            attempts=int(data["attempts"]),
            partial=bool(data["partial"]),
        )


def save_bank(bank: TupleBank, path: str | Path) -> None:
    atomic_write_text(path, bank.dumps())


def load_bank(path: str | Path) -> TupleBank:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise IoFailure(f"cannot read bank {path}: {err}") from err
    try:
        return TupleBank.from_dict(json.loads(text))
    except (KeyError, TypeError, json.JSONDecodeError) as err:
        raise ValueError(f"malformed bank file {path}: {err}") from err
