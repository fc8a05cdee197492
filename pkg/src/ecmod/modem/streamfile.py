"""Symbol stream files.

Text layout (any suffix but ``.bin``)::

    # {"bit_length": 8, "count": 4, ...}
    0 0.70710678118654746 -0.70710678118654746
    1 ...

Binary layout (``.bin``): the magic ``ECMS``, a little-endian u32 header
length, the UTF-8 JSON header, then one record per symbol of a
little-endian u64 position followed by the I and Q values as f64.
"""

import json
import struct
from pathlib import Path

import attr
import numpy as np

from ecmod.constellation.geometry import format_float
from ecmod.errors import IoFailure
from ecmod.utils.utils import atomic_write_bytes, atomic_write_text

MAGIC = b"ECMS"
STREAM_VERSION = 1
RECORD_DTYPE = np.dtype([("t", "<u8"), ("i", "<f8"), ("q", "<f8")])
_LENGTH = struct.Struct("<I")


@attr.s(frozen=True)
class StreamHeader:
    """What a receiver needs to interpret a symbol stream."""

    scheme: str = attr.ib()
    m: int = attr.ib()
    count: int = attr.ib()
    bit_length: int = attr.ib()
    dr: bool = attr.ib(default=False)
    d_min: float | None = attr.ib(default=None)
    n_tuples: int | None = attr.ib(default=None)
    curve: str | None = attr.ib(default=None)
    seed_fingerprint: str | None = attr.ib(default=None)
    round_robin: bool = attr.ib(default=False)
    block_length: int = attr.ib(default=1)
    start: int = attr.ib(default=0)
    version: int = attr.ib(default=STREAM_VERSION)

    def to_json(self) -> str:
        data = attr.asdict(self)
        if self.d_min is not None:
            data["d_min"] = format_float(self.d_min)
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "StreamHeader":
        data = json.loads(text)
        if data.get("version") != STREAM_VERSION:
            raise ValueError(
                f"unsupported stream version {data.get('version')!r}"
            )
        if data.get("d_min") is not None:
            data["d_min"] = float(data["d_min"])
        return cls(**data)


def is_binary(path: str | Path) -> bool:
    return Path(path).suffix.lower() == ".bin"


def render_text(header: StreamHeader, symbols) -> str:
    symbols = np.asarray(symbols, dtype=np.complex128)
    lines = [f"# {header.to_json()}"]
    for t, value in enumerate(symbols, start=header.start):
        lines.append(
            f"{t} {format_float(value.real)} {format_float(value.imag)}"
        )
    return "\n".join(lines) + "\n"


def render_binary(header: StreamHeader, symbols) -> bytes:
    symbols = np.asarray(symbols, dtype=np.complex128)
    encoded = header.to_json().encode("utf-8")
    records = np.empty(len(symbols), dtype=RECORD_DTYPE)
    records["t"] = np.arange(header.start, header.start + len(symbols))
    records["i"] = symbols.real
    records["q"] = symbols.imag
    return MAGIC + _LENGTH.pack(len(encoded)) + encoded + records.tobytes()


def write_stream(path: str | Path, header: StreamHeader, symbols) -> None:
    if is_binary(path):
        atomic_write_bytes(path, render_binary(header, symbols))
    else:
        atomic_write_text(path, render_text(header, symbols))


def _parse_text(text: str) -> tuple[StreamHeader, np.ndarray]:
    first, _, body = text.partition("\n")
    if not first.startswith("#"):
        raise ValueError("stream file lacks its header line")
    header = StreamHeader.from_json(first[1:].strip())
    rows = [line.split() for line in body.splitlines() if line.strip()]
    values = np.array(
        [(float(i), float(q)) for _, i, q in rows], dtype=np.float64
    ).reshape(-1, 2)
    return header, values[:, 0] + 1j * values[:, 1]


def _parse_binary(data: bytes) -> tuple[StreamHeader, np.ndarray]:
    if data[:4] != MAGIC:
        raise ValueError("not a binary symbol stream")
    (length,) = _LENGTH.unpack_from(data, 4)
    end = 4 + _LENGTH.size + length
    header = StreamHeader.from_json(data[4 + _LENGTH.size : end].decode())
    records = np.frombuffer(data[end:], dtype=RECORD_DTYPE)
    return header, records["i"] + 1j * records["q"]


def read_stream(path: str | Path) -> tuple[StreamHeader, np.ndarray]:
    """Header and complex symbols of a stream file, either layout."""
    try:
        data = Path(path).read_bytes()
    except OSError as err:
        raise IoFailure(f"cannot read stream {path}: {err}") from err
    if data[:4] == MAGIC:
        header, symbols = _parse_binary(data)
    else:
        header, symbols = _parse_text(data.decode("utf-8"))
    if len(symbols) != header.count:
        raise ValueError(
            f"stream header announces {header.count} symbols, "
            f"found {len(symbols)}"
        )
    return header, symbols
