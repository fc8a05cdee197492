import os
import tempfile
import tomllib
from pathlib import Path
from typing import Sequence

import click
from click import Context, Parameter

from ecmod.config.config import parse_pyproject_toml
from ecmod.errors import IoFailure
from ecmod.tuplegen.stream import SEED_BYTES


def find_project_root(srcs: Sequence[str]) -> Path:
    if not srcs:
        return Path("/").resolve()
    common_base = min(Path(src).resolve() for src in srcs)
    if common_base.is_dir():
        common_base /= "_"

    for directory in common_base.parents:
        if (directory / ".git").exists():
            return directory
        if (directory / "pyproject.toml").is_file():
            return directory

    return directory


def find_project_config(path_search_start: Sequence[str]) -> str | None:
    """Find the absolute filepath to a pyproject.toml if it exists."""
    project_root = find_project_root(path_search_start)
    pyproject_toml = project_root / "pyproject.toml"
    if pyproject_toml.is_file():
        return str(pyproject_toml)
    return None


def read_config_file(
    ctx: Context, _param: Parameter, value: str | None
) -> str | None:
    """Click callback feeding ``[tool.ecmod]`` into the context default map.

    Flags given on the command line still win over file values.
    """
    if not value:
        value = find_project_config((os.path.abspath(os.getcwd()),))
        if value is None:
            return None

    try:
        config = parse_pyproject_toml(value)
    except (tomllib.TOMLDecodeError, OSError) as err:
        raise click.BadParameter(
            f"Error reading configuration file {value}: {err}.",
            ctx=ctx,
            param=_param,
        )

    if ctx.default_map is None:
        ctx.default_map = {}

    ctx.default_map.update(config)
    return value


def parse_seed(text: str) -> bytes:
    """Decode a 64-hex-character seed."""
    text = text.strip().lower().removeprefix("0x")
    if len(text) != 2 * SEED_BYTES:
        raise ValueError(
            f"seed must be {2 * SEED_BYTES} hex characters, got {len(text)}"
        )
    try:
        return bytes.fromhex(text)
    except ValueError:
        raise ValueError("seed is not valid hexadecimal") from None


def parse_number_list(text: str, cast=float) -> list:
    """Parse ``"6,8,10"`` or a range ``"0:25:1"`` (stop inclusive)."""
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(part) for part in text.split(":"))
        if step <= 0:
            raise ValueError("range step must be positive")
        values = []
        current = start
        while current <= stop + 1e-9:
            values.append(cast(round(current, 9)))
            current += step
        return values
    return [cast(part) for part in text.split(",") if part.strip()]


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(
            dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "wb") as file:
                file.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as err:
        raise IoFailure(f"cannot write {path}: {err}") from err


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))
