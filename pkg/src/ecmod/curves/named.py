"""Named curves and the ``key = value`` curve file format.

A curve file lists ``name``, ``p``, ``a``, ``b``, ``gx``, ``gy`` and ``n``,
one per line, integers in hexadecimal (``0x`` prefix) or decimal. Lines
starting with ``#`` are comments.
"""

import os
from functools import cache
from pathlib import Path

from dotenv import load_dotenv

from ecmod.curves.curve import CurveParams, find_test_curve, validate_curve
from ecmod.errors import CurveFileError, CurveInvalid, IoFailure, UnknownCurve

load_dotenv()

CURVE_PATH_ENV = "ECM_CURVE_PATH"
CURVE_SUFFIX = ".curve"
REQUIRED_KEYS = ("name", "p", "a", "b", "gx", "gy", "n")

SECP256K1 = CurveParams(
    name="secp256k1",
    p=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F,
    a=0,
    b=7,
    gx=0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798,
    gy=0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8,
    n=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141,
)

TOY17 = CurveParams(name="toy17", p=17, a=2, b=2, gx=5, gy=1, n=19)


@cache
def _test10007() -> CurveParams:
    return find_test_curve(10007, name="test10007")


_BUILTIN = {
    "secp256k1": lambda: SECP256K1,
    "toy17": lambda: TOY17,
    "test10007": _test10007,
}


def builtin_names() -> tuple[str, ...]:
    return tuple(_BUILTIN)


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise CurveFileError(f"{key}: '{text}' is not an integer") from None


def parse_curve_text(text: str) -> CurveParams:
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CurveFileError(f"line {number}: expected 'key = value'")
        values[key.strip().lower()] = value.strip()
    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise CurveFileError(f"missing keys: {', '.join(missing)}")
    ints = {k: _parse_int(k, values[k]) for k in REQUIRED_KEYS if k != "name"}
    return CurveParams(name=values["name"], **ints)


def render_curve_text(curve: CurveParams) -> str:
    lines = [f"name = {curve.name}"]
    for key in REQUIRED_KEYS[1:]:
        lines.append(f"{key} = {hex(getattr(curve, key))}")
    return "\n".join(lines) + "\n"


def load_curve_file(path: str | Path) -> CurveParams:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise IoFailure(f"cannot read curve file {path}: {err}") from err
    return parse_curve_text(text)


def write_curve_file(curve: CurveParams, path: str | Path) -> None:
    try:
        Path(path).write_text(render_curve_text(curve))
    except OSError as err:
        raise IoFailure(f"cannot write curve file {path}: {err}") from err


def curve_search_path() -> list[Path]:
    value = os.getenv(CURVE_PATH_ENV, "")
    return [Path(entry) for entry in value.split(os.pathsep) if entry]


def resolve_curve(identifier: str) -> CurveParams:
    """Look up a curve by builtin name, file path or ``ECM_CURVE_PATH`` id.

    Builtin curves are trusted; curves read from files go through
    ``validate_curve`` with primality checks.

    Raises:
        UnknownCurve: Nothing matches ``identifier``.
    """
    if identifier in _BUILTIN:
        return _BUILTIN[identifier]()
    candidate = Path(identifier)
    if candidate.is_file():
        return validate_curve(load_curve_file(candidate))
    for directory in curve_search_path():
        path = directory / f"{identifier}{CURVE_SUFFIX}"
        if path.is_file():
            return validate_curve(load_curve_file(path))
    raise UnknownCurve(
        f"Unknown curve '{identifier}'.\nSelect one of the following: "
        f"{', '.join(builtin_names())}, a curve file, or an id found in "
        f"${CURVE_PATH_ENV}."
    )


def checked_curve(curve: CurveParams) -> CurveParams:
    """Validate a curve, mapping any curve failure to ``CurveInvalid``."""
    try:
        return validate_curve(curve, check_prime=curve.name not in _BUILTIN)
    except CurveInvalid:
        raise
    except ValueError as err:
        raise CurveInvalid(f"{curve.name}: {err}") from err
