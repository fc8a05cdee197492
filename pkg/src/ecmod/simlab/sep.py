"""Monte-Carlo symbol error probability sweeps.

Trials at each Es/N0 point are cut into fixed-size chunks. Chunk ``c`` of
point ``s`` draws its payload from the noise seed's ``payload:s:c`` stream,
its noise from ``noise:s:c`` and its schedule from the secret seed at
positions ``c * chunk_size ...``. Error counts merge by summation, so a
sweep gives the same numbers for any worker count.
"""

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor

import attr
import numpy as np
from scipy.special import erfc
from tqdm import tqdm

from ecmod.simlab.channel import ChannelConfig, awgn
from ecmod.simlab.scheme import Scheme
from ecmod.tuplegen.stream import derive_stream

MIN_TRIALS = 1000
CONFIDENCE_Z = 1.96
PAYLOAD_TAG = "payload"
CSV_FIELDS = (
    "scheme",
    "es_n0_db",
    "trials",
    "errors",
    "sep",
    "ci95",
    "theory",
)


@attr.s(frozen=True)
class SepRow:
    scheme: str = attr.ib()
    es_n0_db: float = attr.ib()
    trials: int = attr.ib()
    errors: int = attr.ib()
    theory: float | None = attr.ib(default=None)

    @property
    def sep(self) -> float:
        return self.errors / self.trials

    @property
    def half_width(self) -> float:
        """95% normal-approximation confidence half-width."""
        p = self.sep
        return CONFIDENCE_Z * math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def stderr(self) -> float:
        p = self.sep
        return math.sqrt(p * (1.0 - p) / self.trials)


@attr.s
class SepReport:
    rows: list[SepRow] = attr.ib(factory=list)

    def for_scheme(self, name: str) -> list[SepRow]:
        return sorted(
            (row for row in self.rows if row.scheme == name),
            key=lambda row: row.es_n0_db,
        )

    @property
    def schemes(self) -> list[str]:
        return list(dict.fromkeys(row.scheme for row in self.rows))

    def extend(self, other: "SepReport") -> None:
        self.rows.extend(other.rows)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in self.rows:
            writer.writerow(
                (
                    row.scheme,
                    repr(row.es_n0_db),
                    row.trials,
                    row.errors,
                    format(row.sep, ".17g"),
                    format(row.half_width, ".17g"),
                    "" if row.theory is None else format(row.theory, ".17g"),
                )
            )
        return buffer.getvalue()


def q_function(x):
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / math.sqrt(2.0))


def theoretical_sep(m: int, es_n0_db: float) -> float:
    """Closed-form SEP of Gray square M-QAM over AWGN."""
    es_n0 = 10.0 ** (es_n0_db / 10.0)
    side_error = (
        2.0
        * (1.0 - 1.0 / math.sqrt(m))
        * float(q_function(math.sqrt(3.0 * es_n0 / (m - 1))))
    )
    return 1.0 - (1.0 - side_error) ** 2


def run_chunk(
    scheme: Scheme,
    seed: bytes | None,
    noise_seed: bytes,
    snr_index: int,
    es_n0_db: float,
    chunk_index: int,
    chunk_size: int,
    count: int,
) -> int:
    """Symbol errors in one chunk of ``count`` trials."""
    suffix = f"{snr_index}:{chunk_index}"
    payload = derive_stream(noise_seed, f"{PAYLOAD_TAG}:{suffix}")
    m = scheme.order
    indices = (payload.words_at(0, count) % np.uint64(m)).astype(np.int64)
    schedule = scheme.schedule(seed, count, start=chunk_index * chunk_size)
    symbols = scheme.modulate_indices(indices, schedule)
    channel = ChannelConfig(es_n0_db, noise_seed, tag=f"noise:{suffix}")
    received = awgn(symbols, channel)
    detected = scheme.detect(received, schedule)
    return int(np.count_nonzero(detected != indices))


def _run_job(job) -> int:
    return run_chunk(*job)


def sep_sweep(
    scheme: Scheme,
    snrs,
    trials: int,
    seed: bytes | None,
    noise_seed: bytes,
    chunk_size: int = 100_000,
    workers: int = 1,
    progress: bool = False,
) -> SepReport:
    """SEP of ``scheme`` at every Es/N0 in ``snrs``.

    QAM rows carry the closed-form value in ``theory``.
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be >= {MIN_TRIALS}, got {trials}")
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    snrs = [float(snr) for snr in snrs]
    jobs = []
    for s, snr in enumerate(snrs):
        for c, first in enumerate(range(0, trials, chunk_size)):
            count = min(chunk_size, trials - first)
            jobs.append(
                (scheme, seed, noise_seed, s, snr, c, chunk_size, count)
            )
    errors = [0] * len(snrs)
    with tqdm(
        total=len(jobs), desc=f"Simulating {scheme.name}", disable=not progress
    ) as pbar:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                for job, found in zip(jobs, executor.map(_run_job, jobs)):
                    errors[job[3]] += found
                    pbar.update(1)
        else:
            for job in jobs:
                errors[job[3]] += _run_job(job)
                pbar.update(1)
    report = SepReport()
    for s, snr in enumerate(snrs):
        theory = None
        if scheme.kind == "qam":
            theory = theoretical_sep(scheme.order, snr)
        report.rows.append(
            SepRow(
                scheme=scheme.name,
                es_n0_db=snr,
                trials=trials,
                errors=errors[s],
                theory=theory,
            )
        )
    return report


def snr_at_sep(rows: list[SepRow], target: float) -> float | None:
    """Es/N0 where the SEP curve crosses ``target``.

    Interpolates linearly in log10(SEP) between the two bracketing rows;
    None when the sweep never crosses the target.
    """
    rows = sorted(rows, key=lambda row: row.es_n0_db)
    for lower, upper in zip(rows, rows[1:]):
        if lower.sep >= target > upper.sep:
            if upper.sep == 0.0:
                return upper.es_n0_db
            a, b = math.log10(lower.sep), math.log10(upper.sep)
            fraction = (math.log10(target) - a) / (b - a)
            return lower.es_n0_db + fraction * (
                upper.es_n0_db - lower.es_n0_db
            )
    return None
