"""Command orchestration behind the CLI.

A ``Runner`` holds the options shared by every command (curve, seeds,
progress) and turns one command's configuration into files plus a short
summary on stdout.
"""

import math
import warnings
from pathlib import Path
from timeit import default_timer as timer

import click

from ecmod.bench import (
    bench_csv,
    growth_ratios,
    run_benchmark,
    tuple_scaling,
)
from ecmod.config.config import (
    EntropyConfig,
    GenerationConfig,
    ModemConfig,
    SimulationConfig,
)
from ecmod.curves.curve import CurveParams
from ecmod.curves.named import resolve_curve
from ecmod.errors import BankMismatch, ExhaustedAttempts
from ecmod.modem.bits import (
    bit_agreement,
    bits_to_indices,
    indices_to_bits,
    pad_bits,
    read_bit_file,
    write_bit_file,
)
from ecmod.modem.streamfile import StreamHeader, read_stream, write_stream
from ecmod.simlab.entropy import ENTROPY_FIELDS, quantized_entropy
from ecmod.simlab.scatter import read_scatter, scatter_export, scatter_samples
from ecmod.simlab.scheme import Scheme
from ecmod.simlab.sep import SepReport, sep_sweep, snr_at_sep
from ecmod.tuplegen.bank import TupleBank, load_bank, save_bank
from ecmod.tuplegen.estimate import (
    expected_tuples_approx,
    expected_tuples_exact,
    key_space_log10,
    monte_carlo_tuple_count,
)
from ecmod.tuplegen.generator import generate_tuples
from ecmod.tuplegen.pool import gen_candidate_pool
from ecmod.tuplegen.stream import seed_fingerprint
from ecmod.utils.utils import atomic_write_text

TARGET_SEP = 1e-3


class Runner:
    def __init__(
        self,
        curve_id: str = "secp256k1",
        seed: bytes | None = None,
        noise_seed: bytes | None = None,
        progress: bool = True,
    ):
        self.curve_id = curve_id
        self.seed = seed
        self.noise_seed = noise_seed
        self.progress = progress
        self._curve: CurveParams | None = None

    @property
    def curve(self) -> CurveParams:
        if self._curve is None:
            self._curve = resolve_curve(self.curve_id)
        return self._curve

    def require_seed(self) -> bytes:
        if self.seed is None:
            raise click.UsageError("this command needs --seed")
        return self.seed

    def require_noise_seed(self) -> bytes:
        if self.noise_seed is None:
            raise click.UsageError("this command needs --noise-seed")
        return self.noise_seed

    def seed_for(self, scheme: Scheme) -> bytes | None:
        """The secret seed, mandatory once the scheme draws from it."""
        if scheme.kind == "ecm" or scheme.dr:
            return self.require_seed()
        return self.seed

    def load_bank(self, path: str | Path) -> TupleBank:
        bank = load_bank(path)
        if self.seed is not None:
            if bank.seed_fingerprint != seed_fingerprint(self.seed):
                warnings.warn(
                    f"bank {path} was generated from a different seed",
                    stacklevel=2,
                )
        return bank

    def scheme(
        self,
        name: str,
        bank_path: str | None,
        modem: ModemConfig | None = None,
    ) -> Scheme:
        modem = modem or ModemConfig()
        bank = None
        if "ecm" in name.lower():
            if bank_path is None:
                raise click.UsageError(f"scheme {name!r} needs --bank")
            bank = self.load_bank(bank_path)
        scheme = Scheme.parse(
            name,
            bank=bank,
            round_robin=modem.round_robin,
            block_length=modem.block_length,
        )
        if modem.dr and not scheme.dr:
            scheme = Scheme(
                kind=scheme.kind,
                m=scheme.m,
                dr=True,
                bank=scheme.bank,
                round_robin=scheme.round_robin,
                block_length=scheme.block_length,
            )
        return scheme

    def gen_tuples(self, config: GenerationConfig, out: str) -> TupleBank:
        seed = self.require_seed()
        start = timer()
        try:
            bank = generate_tuples(
                seed,
                self.curve,
                config.m,
                config.d_min,
                config.n_tuples,
                config.pool_size,
                max_attempts=config.attempts,
                prefilter_slack=config.prefilter_slack,
                leaf_size=config.leaf_size,
                workers=config.workers,
                progress=config.progress and self.progress,
            )
        except ExhaustedAttempts as err:
            save_bank(err.bank, out)
            click.echo(f"Partial bank written to {out}.", err=True)
            raise
        elapsed = timer() - start
        save_bank(bank, out)
        click.echo(
            f"{len(bank)} of {bank.n_tuples} tuples after {bank.attempts} "
            f"attempts in {elapsed:.2f}s -> {out}"
        )
        return bank

    def modulate(
        self,
        scheme_name: str,
        bank_path: str | None,
        bits_path: str,
        modem: ModemConfig,
        out: str,
    ) -> StreamHeader:
        scheme = self.scheme(scheme_name, bank_path, modem)
        seed = self.seed_for(scheme)
        bits = read_bit_file(bits_path)
        bit_length = len(bits)
        if modem.pad:
            bits = pad_bits(bits, scheme.order)
        indices = bits_to_indices(bits, scheme.order)
        schedule = scheme.schedule(seed, len(indices))
        symbols = scheme.modulate_indices(indices, schedule)
        bank = scheme.bank
        header = StreamHeader(
            scheme=scheme.kind,
            m=scheme.order,
            count=len(symbols),
            bit_length=bit_length,
            dr=scheme.dr,
            d_min=bank.d_min if bank else None,
            n_tuples=len(bank) if bank else None,
            curve=bank.curve if bank else None,
            seed_fingerprint=seed_fingerprint(seed) if seed else None,
            round_robin=scheme.round_robin,
            block_length=scheme.block_length,
        )
        write_stream(out, header, symbols)
        click.echo(
            f"{len(symbols)} {scheme.name} symbols from {bit_length} bits "
            f"-> {out}"
        )
        return header

    def demodulate(
        self,
        bank_path: str | None,
        stream_path: str,
        out: str,
        reference: str | None = None,
    ) -> float | None:
        header, received = read_stream(stream_path)
        modem = ModemConfig(
            dr=header.dr,
            round_robin=header.round_robin,
            block_length=header.block_length,
        )
        if header.scheme == "ecm":
            scheme = self.scheme("ecm", bank_path, modem)
            if scheme.order != header.m or len(scheme.bank) != (
                header.n_tuples
            ):
                raise BankMismatch(
                    f"stream expects M={header.m} with {header.n_tuples} "
                    f"tuples, bank {bank_path} holds M={scheme.order} with "
                    f"{len(scheme.bank)}"
                )
        else:
            scheme = self.scheme(f"{header.m}qam", None, modem)
        seed = self.seed
        if scheme.kind == "ecm" or scheme.dr:
            seed = self.require_seed()
            if (
                header.seed_fingerprint
                and seed_fingerprint(seed) != header.seed_fingerprint
            ):
                warnings.warn(
                    "stream was modulated under a different seed",
                    stacklevel=2,
                )
        schedule = scheme.schedule(seed, len(received), start=header.start)
        indices = scheme.detect(received, schedule)
        bits = indices_to_bits(indices, header.m)[: header.bit_length]
        write_bit_file(out, bits)
        click.echo(f"{len(bits)} bits from {len(received)} symbols -> {out}")
        if reference is None:
            return None
        agreement = bit_agreement(read_bit_file(reference)[: len(bits)], bits)
        click.echo(f"Bit agreement with {reference}: {agreement:.4%}")
        return agreement

    def simulate(
        self,
        scheme_names: list[str],
        bank_path: str | None,
        config: SimulationConfig,
        modem: ModemConfig,
        out: str,
    ) -> SepReport:
        noise_seed = self.require_noise_seed()
        report = SepReport()
        for name in scheme_names:
            scheme = self.scheme(name, bank_path, modem)
            seed = self.seed_for(scheme)
            start = timer()
            part = sep_sweep(
                scheme,
                config.snrs,
                config.trials,
                seed,
                noise_seed,
                chunk_size=config.chunk_size,
                workers=config.workers,
                progress=config.progress and self.progress,
            )
            report.extend(part)
            crossing = snr_at_sep(part.rows, TARGET_SEP)
            where = "not reached" if crossing is None else f"{crossing:.2f} dB"
            click.echo(
                f"{scheme.name}: Es/N0 at SEP={TARGET_SEP:g} {where} "
                f"({timer() - start:.2f}s)"
            )
        atomic_write_text(out, report.to_csv())
        click.echo(f"SEP report -> {out}")
        return report

    def samples(
        self,
        scheme_name: str,
        bank_path: str | None,
        count: int,
        modem: ModemConfig,
        es_n0_db: float = math.inf,
    ):
        scheme = self.scheme(scheme_name, bank_path, modem)
        seed = self.seed_for(scheme)
        samples = scatter_samples(
            scheme, count, seed, self.require_noise_seed(), es_n0_db
        )
        return scheme, samples

    def scatter(
        self,
        scheme_name: str,
        bank_path: str | None,
        count: int,
        modem: ModemConfig,
        es_n0_db: float,
        out: str,
    ):
        scheme, samples = self.samples(
            scheme_name, bank_path, count, modem, es_n0_db
        )
        scatter_export(samples, out)
        click.echo(f"{count} {scheme.name} samples -> {out}")
        return samples

    def entropy(
        self,
        config: EntropyConfig,
        out: str,
        input_path: str | None = None,
        scheme_name: str | None = None,
        bank_path: str | None = None,
        modem: ModemConfig | None = None,
    ):
        if input_path is not None:
            samples = read_scatter(input_path)
            label = Path(input_path).stem
        elif scheme_name is not None:
            scheme, samples = self.samples(
                scheme_name, bank_path, config.count, modem or ModemConfig()
            )
            label = scheme.name
        else:
            raise click.UsageError("entropy needs --input or --scheme")
        reports = [
            quantized_entropy(samples, q, config.region, label=label)
            for q in config.q_values
        ]
        lines = [",".join(ENTROPY_FIELDS)]
        for report in reports:
            lines.append(",".join(str(v) for v in report.csv_row()))
            click.echo(
                f"q={report.q}: H={report.entropy:.4f} bits "
                f"(Miller-Madow {report.miller_madow:.4f}, clamped "
                f"{report.clamp_fraction:.2%})"
            )
        atomic_write_text(out, "\n".join(lines) + "\n")
        click.echo(f"Entropy report -> {out}")
        return reports

    def estimate(
        self,
        pool_size: int,
        m: int,
        d_min: float,
        area: float | None,
        monte_carlo: int | None,
        key_bits: int,
    ):
        if area is None:
            pool = gen_candidate_pool(
                self.require_seed(),
                pool_size,
                self.curve,
                progress=self.progress,
            )
            area = pool.area
            click.echo(f"Pool bounding-box area A = {area:.6f}")
        exact = expected_tuples_exact(pool_size, m, d_min, area)
        approx = expected_tuples_approx(pool_size, m, d_min, area)
        click.echo(
            f"exact:  log10 E[T] = {exact.log10:.4f}  ({exact.scientific()})"
        )
        click.echo(
            f"approx: log10 E[T] = {approx.log10:.4f}  "
            f"({approx.scientific()})"
        )
        if monte_carlo is not None:
            counted = monte_carlo_tuple_count(
                pool_size,
                m,
                d_min,
                area,
                monte_carlo,
                self.require_seed(),
            )
            click.echo(
                f"monte carlo: {counted.mean:.4f} +/- {counted.stderr:.4f} "
                f"over {counted.pools} pools "
                f"(exact {math.exp(exact.ln_value):.4f})"
            )
        click.echo(f"key space: log10 = {key_space_log10(key_bits):.4f}")
        return exact, approx

    def bench(
        self,
        pool_sizes: list[int],
        config: GenerationConfig,
        repeat: int,
        uniform: bool,
        out: str,
    ):
        rows = run_benchmark(
            self.require_seed(),
            pool_sizes,
            config.m,
            config.d_min,
            config.n_tuples,
            curve=None if uniform else self.curve,
            leaf_size=config.leaf_size,
            repeat=repeat,
            workers=config.workers,
            progress=self.progress,
        )
        for row in rows:
            click.echo(
                f"L={row.pool_size}: build {row.build_seconds:.4f}s, "
                f"{row.per_tuple_seconds * 1e3:.3f} ms/tuple"
            )
        ratios = growth_ratios(rows)
        if len(ratios):
            click.echo(
                "build growth per step: "
                + ", ".join(f"{r:.2f}x" for r in ratios)
            )
            click.echo(
                "per-tuple growth relative to L: "
                + ", ".join(f"{r:.2f}" for r in tuple_scaling(rows))
            )
        atomic_write_text(out, bench_csv(rows))
        return rows
