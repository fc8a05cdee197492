import functools
import math

import click

from ecmod.config.config import (
    EntropyConfig,
    GenerationConfig,
    ModemConfig,
    SimulationConfig,
)
from ecmod.errors import (
    ConstraintInfeasible,
    EcmError,
    ExhaustedAttempts,
    IoFailure,
    PoolTooSmall,
)
from ecmod.runner import Runner
from ecmod.utils.utils import parse_number_list, parse_seed, read_config_file

EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


class ConfigError(click.ClickException):
    exit_code = EXIT_CONFIG


class InfeasibleError(click.ClickException):
    exit_code = EXIT_INFEASIBLE


class IoError(click.ClickException):
    exit_code = EXIT_IO


def handle_errors(command):
    """Turn library errors into click exceptions with fixed exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (ExhaustedAttempts, ConstraintInfeasible, PoolTooSmall) as err:
            raise InfeasibleError(str(err)) from err
        except (IoFailure, OSError) as err:
            raise IoError(str(err)) from err
        except (EcmError, ValueError) as err:
            raise ConfigError(str(err)) from err

    return wrapper


def _seed_callback(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_seed(value)
    except ValueError as err:
        raise click.BadParameter(str(err), ctx=ctx, param=param)


def _list_callback(cast):
    def callback(ctx, param, value):
        if value is None or isinstance(value, list):
            return value
        try:
            return parse_number_list(str(value), cast=cast)
        except ValueError as err:
            raise click.BadParameter(str(err), ctx=ctx, param=param)

    return callback


def _config(cls, **kwargs):
    try:
        return cls(**kwargs)
    except ValueError as err:
        raise ConfigError(str(err)) from err


def modem_options(command):
    for option in reversed(
        (
            click.option(
                "--dr/--no-dr",
                default=False,
                show_default=True,
                help="Rotate every symbol by a key-derived angle.",
            ),
            click.option(
                "--round-robin",
                is_flag=True,
                default=False,
                help="Cycle through the bank instead of drawing tuples.",
            ),
            click.option(
                "--block-length",
                type=int,
                default=1,
                show_default=True,
                help="Symbols sharing one rotation angle.",
            ),
        )
    ):
        command = option(command)
    return command


@click.group()
@click.option(
    "--curve",
    default="secp256k1",
    show_default=True,
    help=(
        "Built-in curve name, path to a .curve file, or a name found in "
        "ECM_CURVE_PATH."
    ),
)
@click.option(
    "--seed",
    callback=_seed_callback,
    help="Shared secret seed, 64 hex characters.",
)
@click.option(
    "--noise-seed",
    callback=_seed_callback,
    help="Seed for payloads and channel noise, 64 hex characters.",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    help="Output file of the command.",
)
@click.option(
    "--progress/--no-progress",
    default=True,
    show_default=True,
    help="Show progress bars.",
)
@click.option(
    "-c",
    "--config",
    type=click.Path(
        exists=False, file_okay=True, dir_okay=False, readable=True
    ),
    is_eager=True,
    callback=read_config_file,
    help="Read configuration from `pyproject.toml`.",
)
@click.help_option("-h", "--help")
@click.pass_context
def main(ctx, curve, seed, noise_seed, out, progress, config):
    """Elliptic curve modulation toolkit."""
    ctx.obj = Runner(
        curve_id=curve, seed=seed, noise_seed=noise_seed, progress=progress
    )
    ctx.meta["out"] = out


def _out(ctx, default: str) -> str:
    return ctx.meta.get("out") or default


@main.command("gen-tuples")
@click.option("--m", "m", type=int, default=16, show_default=True)
@click.option("--dmin", "d_min", type=float, default=0.4, show_default=True)
@click.option("--n", "n_tuples", type=int, default=300, show_default=True)
@click.option(
    "--l", "pool_size", type=int, default=100_000, show_default=True
)
@click.option(
    "--max-attempts", type=int, default=None, help="Default: 100 * N'."
)
@click.option("--prefilter-slack", type=float, default=1.0, show_default=True)
@click.option("--leaf-size", type=int, default=8, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.pass_context
@handle_errors
def gen_tuples(
    ctx,
    m,
    d_min,
    n_tuples,
    pool_size,
    max_attempts,
    prefilter_slack,
    leaf_size,
    workers,
):
    """Generate a tuple bank."""
    config = _config(
        GenerationConfig,
        m=m,
        d_min=d_min,
        n_tuples=n_tuples,
        pool_size=pool_size,
        max_attempts=max_attempts,
        prefilter_slack=prefilter_slack,
        leaf_size=leaf_size,
        workers=workers,
    )
    ctx.obj.gen_tuples(config, _out(ctx, "bank.json"))


@main.command()
@click.option("--scheme", default="ecm", show_default=True)
@click.option("--bank", "bank_path", type=click.Path(dir_okay=False))
@click.option(
    "--bits", "bits_path", type=click.Path(dir_okay=False), required=True
)
@click.option(
    "--pad/--no-pad",
    default=True,
    show_default=True,
    help="Zero-pad the bits to a whole number of symbols.",
)
@modem_options
@click.pass_context
@handle_errors
def modulate(
    ctx, scheme, bank_path, bits_path, pad, dr, round_robin, block_length
):
    """Map a bit file onto symbols."""
    modem = _config(
        ModemConfig,
        dr=dr,
        round_robin=round_robin,
        block_length=block_length,
        pad=pad,
    )
    ctx.obj.modulate(
        scheme, bank_path, bits_path, modem, _out(ctx, "symbols.txt")
    )


@main.command()
@click.option("--bank", "bank_path", type=click.Path(dir_okay=False))
@click.option(
    "--stream", "stream_path", type=click.Path(dir_okay=False), required=True
)
@click.option(
    "--reference",
    type=click.Path(dir_okay=False),
    help="Bit file to compare the decoded bits against.",
)
@click.pass_context
@handle_errors
def demodulate(ctx, bank_path, stream_path, reference):
    """Detect a symbol stream back into bits."""
    ctx.obj.demodulate(
        bank_path, stream_path, _out(ctx, "decoded.bin"), reference
    )


@main.command()
@click.option(
    "--scheme",
    "schemes",
    multiple=True,
    default=("qpsk",),
    show_default=True,
    help="Scheme to sweep, repeatable: qpsk, 16qam-dr, ecm, ecm-dr, ...",
)
@click.option("--bank", "bank_path", type=click.Path(dir_okay=False))
@click.option(
    "--snr",
    "snrs",
    default="0:25:1",
    show_default=True,
    callback=_list_callback(float),
    help="Es/N0 values in dB, a comma list or start:stop:step.",
)
@click.option("--trials", type=int, default=1_000_000, show_default=True)
@click.option("--chunk-size", type=int, default=100_000, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@modem_options
@click.pass_context
@handle_errors
def simulate(
    ctx,
    schemes,
    bank_path,
    snrs,
    trials,
    chunk_size,
    workers,
    dr,
    round_robin,
    block_length,
):
    """Monte-Carlo SEP over AWGN."""
    config = _config(
        SimulationConfig,
        snrs=snrs,
        trials=trials,
        chunk_size=chunk_size,
        workers=workers,
    )
    modem = _config(
        ModemConfig, dr=dr, round_robin=round_robin, block_length=block_length
    )
    ctx.obj.simulate(
        list(schemes), bank_path, config, modem, _out(ctx, "sep.csv")
    )


@main.command()
@click.option(
    "--q",
    "q_values",
    default="6,7,8,9",
    show_default=True,
    callback=_list_callback(int),
    help="Quantization lengths in bits per axis.",
)
@click.option("--region", type=float, default=2.0, show_default=True)
@click.option(
    "--input",
    "input_path",
    type=click.Path(dir_okay=False),
    help="Scatter file to analyse instead of generating samples.",
)
@click.option("--scheme", default=None)
@click.option("--bank", "bank_path", type=click.Path(dir_okay=False))
@click.option("--count", type=int, default=100_000, show_default=True)
@modem_options
@click.pass_context
@handle_errors
def entropy(
    ctx,
    q_values,
    region,
    input_path,
    scheme,
    bank_path,
    count,
    dr,
    round_robin,
    block_length,
):
    """Quantized entropy of IQ samples."""
    config = _config(
        EntropyConfig, q_values=q_values, region=region, count=count
    )
    modem = _config(
        ModemConfig, dr=dr, round_robin=round_robin, block_length=block_length
    )
    ctx.obj.entropy(
        config,
        _out(ctx, "entropy.csv"),
        input_path=input_path,
        scheme_name=scheme,
        bank_path=bank_path,
        modem=modem,
    )


@main.command()
@click.option("--scheme", default="qpsk", show_default=True)
@click.option("--bank", "bank_path", type=click.Path(dir_okay=False))
@click.option("--count", type=int, default=1000, show_default=True)
@click.option(
    "--snr",
    type=float,
    default=math.inf,
    help="Es/N0 in dB; noiseless when omitted.",
)
@modem_options
@click.pass_context
@handle_errors
def scatter(
    ctx, scheme, bank_path, count, snr, dr, round_robin, block_length
):
    """Export IQ samples for plotting."""
    modem = _config(
        ModemConfig, dr=dr, round_robin=round_robin, block_length=block_length
    )
    ctx.obj.scatter(
        scheme, bank_path, count, modem, snr, _out(ctx, "scatter.txt")
    )


@main.command()
@click.option(
    "--l", "pool_size", type=int, default=100_000, show_default=True
)
@click.option("--m", "m", type=int, default=16, show_default=True)
@click.option("--dmin", "d_min", type=float, default=0.63, show_default=True)
@click.option(
    "--a",
    "area",
    type=float,
    default=None,
    help="Planar area; default is the bounding box of the seeded pool.",
)
@click.option(
    "--monte-carlo",
    type=int,
    default=None,
    help="Also count tuples exhaustively over this many uniform pools.",
)
@click.option("--key-bits", type=int, default=256, show_default=True)
@click.pass_context
@handle_errors
def estimate(ctx, pool_size, m, d_min, area, monte_carlo, key_bits):
    """Expected number of valid M-tuples."""
    ctx.obj.estimate(pool_size, m, d_min, area, monte_carlo, key_bits)


@main.command()
@click.option(
    "--l",
    "pool_sizes",
    default="25000,50000,100000",
    show_default=True,
    callback=_list_callback(int),
)
@click.option("--m", "m", type=int, default=16, show_default=True)
@click.option("--dmin", "d_min", type=float, default=0.4, show_default=True)
@click.option("--n", "n_tuples", type=int, default=20, show_default=True)
@click.option("--leaf-size", type=int, default=8, show_default=True)
@click.option("--repeat", type=int, default=3, show_default=True)
@click.option(
    "--uniform",
    is_flag=True,
    default=False,
    help="Benchmark on uniform points instead of curve pools.",
)
@click.pass_context
@handle_errors
def bench(ctx, pool_sizes, m, d_min, n_tuples, leaf_size, repeat, uniform):
    """Time tree construction and tuple generation."""
    config = _config(
        GenerationConfig,
        m=m,
        d_min=d_min,
        n_tuples=n_tuples,
        pool_size=max(pool_sizes),
        leaf_size=leaf_size,
    )
    ctx.obj.bench(
        pool_sizes, config, repeat, uniform, _out(ctx, "bench.csv")
    )


if __name__ == "__main__":
    main()
