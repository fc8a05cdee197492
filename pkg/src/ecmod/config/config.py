import math
import tomllib
from typing import Any

import attr

TOOL_SECTION = "ecmod"


def _positive(_instance, attribute, value) -> None:
    if value <= 0:
        raise ValueError(f"{attribute.name} must be positive, got {value}")


def _at_least_one(_instance, attribute, value) -> None:
    if value < 1:
        raise ValueError(f"{attribute.name} must be >= 1, got {value}")


@attr.s
class GenerationConfig:
    VALID_ORDERS = (4, 8, 16, 32, 64, 128, 256)

    m: int = attr.ib(default=16)
    d_min: float = attr.ib(default=0.4, validator=_positive)
    n_tuples: int = attr.ib(default=300, validator=_at_least_one)
    pool_size: int = attr.ib(default=100_000, validator=_at_least_one)
    max_attempts: int | None = attr.ib(default=None)
    prefilter_slack: float = attr.ib(default=1.0, validator=_positive)
    leaf_size: int = attr.ib(default=8, validator=_at_least_one)
    workers: int = attr.ib(default=1, validator=_at_least_one)
    progress: bool = attr.ib(default=True)

    @m.validator
    def _validate_m(self, _attribute, value) -> None:
        if value not in self.VALID_ORDERS:
            raise ValueError(
                f"Invalid M '{value}'.\nSelect one of the following: "
                f"{', '.join(map(str, self.VALID_ORDERS))}"
            )

    @pool_size.validator
    def _validate_pool_size(self, _attribute, value) -> None:
        if value < self.m:
            raise ValueError(
                f"pool_size {value} cannot hold M={self.m} distinct points"
            )

    @max_attempts.validator
    def _validate_max_attempts(self, _attribute, value) -> None:
        if value is not None and value < 1:
            raise ValueError(f"max_attempts must be >= 1, got {value}")

    @property
    def attempts(self) -> int:
        if self.max_attempts is None:
            return 100 * self.n_tuples
        return self.max_attempts


@attr.s
class ModemConfig:
    dr: bool = attr.ib(default=False)
    round_robin: bool = attr.ib(default=False)
    block_length: int = attr.ib(default=1, validator=_at_least_one)
    pad: bool = attr.ib(default=True)


@attr.s
class SimulationConfig:
    MIN_TRIALS = 1000

    snrs: list[float] = attr.ib(factory=lambda: [float(s) for s in range(26)])
    trials: int = attr.ib(default=1_000_000)
    chunk_size: int = attr.ib(default=100_000, validator=_at_least_one)
    workers: int = attr.ib(default=1, validator=_at_least_one)
    progress: bool = attr.ib(default=True)

    @snrs.validator
    def _validate_snrs(self, _attribute, value) -> None:
        if not value:
            raise ValueError("at least one Es/N0 value is required")
        if any(math.isnan(snr) for snr in value):
            raise ValueError("Es/N0 values must be numbers")

    @trials.validator
    def _validate_trials(self, _attribute, value) -> None:
        if value < self.MIN_TRIALS:
            raise ValueError(
                f"trials must be >= {self.MIN_TRIALS}, got {value}"
            )


@attr.s
class EntropyConfig:
    VALID_Q = range(1, 17)

    q_values: list[int] = attr.ib(factory=lambda: [6, 7, 8, 9])
    region: float = attr.ib(default=2.0, validator=_positive)
    count: int = attr.ib(default=100_000, validator=_at_least_one)

    @q_values.validator
    def _validate_q_values(self, _attribute, value) -> None:
        bad = [q for q in value if q not in self.VALID_Q]
        if not value or bad:
            raise ValueError(
                f"Invalid quantization length {bad or value}.\nSelect one "
                "of the following: 1 to 16"
            )


def _dashes_to_underscores(table: dict[str, Any]) -> dict[str, Any]:
    converted: dict[str, Any] = {}
    for key, value in table.items():
        if isinstance(value, dict):
            # subcommand tables keep their dashed names, as click does
            converted[key] = _dashes_to_underscores(value)
        else:
            converted[key.replace("-", "_")] = value
    return converted


def parse_pyproject_toml(path_config: str) -> dict[str, Any]:
    with open(path_config, "rb") as file:
        toml = tomllib.load(file)
    config = toml.get("tool", {}).get(TOOL_SECTION, {})
    return _dashes_to_underscores(config)
