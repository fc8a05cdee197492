import math

import numpy as np
import pytest

from ecmod.errors import BankMismatch, NoSamples, UnsupportedOrder
from ecmod.simlab.channel import ChannelConfig, awgn
from ecmod.simlab.entropy import quantized_entropy
from ecmod.simlab.scatter import read_scatter, scatter_export, scatter_samples
from ecmod.simlab.scheme import Scheme
from ecmod.simlab.sep import (
    SepReport,
    SepRow,
    sep_sweep,
    snr_at_sep,
    theoretical_sep,
)
from ecmod.tuplegen.stream import derive_stream


def test_scheme_names(small_bank):
    assert Scheme.parse("qpsk").name == "qpsk"
    assert Scheme.parse("16QAM-DR").name == "16qam-dr"
    assert Scheme.parse("ecm-dr", bank=small_bank).name == "4ecm-dr"
    assert Scheme.parse("4ecm", bank=small_bank).order == 4
    with pytest.raises(BankMismatch):
        Scheme.parse("16ecm", bank=small_bank)
    with pytest.raises(UnsupportedOrder):
        Scheme.parse("8qam")
    with pytest.raises(ValueError):
        Scheme.parse("bpsk")


def test_noiseless_channel_is_identity(noise_seed):
    symbols = np.exp(1j * np.linspace(0, 6, 100))
    out = awgn(symbols, ChannelConfig(math.inf, noise_seed))
    np.testing.assert_array_equal(out, symbols)


def test_noise_variance(noise_seed):
    symbols = np.ones(1_000_000, dtype=complex)
    config = ChannelConfig(10.0, noise_seed)
    noise = awgn(symbols, config) - symbols
    assert config.noise_variance == pytest.approx(0.05)
    assert np.var(noise.real) == pytest.approx(0.05, abs=3e-4)
    assert np.var(noise.imag) == pytest.approx(0.05, abs=3e-4)
    assert abs(np.mean(noise.real * noise.imag)) < 3e-4


def test_noise_is_reproducible(noise_seed):
    symbols = np.ones(1000, dtype=complex)
    config = ChannelConfig(5.0, noise_seed)
    np.testing.assert_array_equal(awgn(symbols, config), awgn(symbols, config))
    shifted = awgn(symbols[:500], config, start=500)
    np.testing.assert_array_equal(shifted, awgn(symbols, config)[500:])


def test_energy_warning(noise_seed):
    with pytest.warns(UserWarning, match="average energy"):
        awgn(np.full(10, 2.0 + 0j), ChannelConfig(10.0, noise_seed))


def test_theoretical_qpsk_sep():
    assert theoretical_sep(4, 10.0) == pytest.approx(1.565e-3, rel=1e-3)
    assert theoretical_sep(16, 10.0) > theoretical_sep(4, 10.0)


def test_qpsk_sweep_matches_theory(noise_seed):
    report = sep_sweep(
        Scheme.parse("qpsk"), [4.0, 8.0], 100_000, None, noise_seed
    )
    for row in report.rows:
        sigma = math.sqrt(row.theory * (1 - row.theory) / row.trials)
        assert abs(row.sep - row.theory) < 3 * sigma


def test_sweep_is_monotone_and_finite(noise_seed):
    report = sep_sweep(
        Scheme.parse("16qam"), [0.0, 10.0, 25.0], 5000, None, noise_seed
    )
    seps = [row.sep for row in report.rows]
    assert seps[0] > seps[1] > seps[2]
    assert seps[2] == 0.0


def test_sweep_independent_of_workers(noise_seed, seed, small_bank):
    scheme = Scheme.parse("ecm-dr", bank=small_bank)
    kwargs = dict(chunk_size=1000)
    serial = sep_sweep(
        scheme, [6.0], 4000, seed, noise_seed, workers=1, **kwargs
    )
    parallel = sep_sweep(
        scheme, [6.0], 4000, seed, noise_seed, workers=2, **kwargs
    )
    assert serial.rows == parallel.rows
    assert serial.rows[0].theory is None


def test_rotated_squares_match_qpsk(square_bank, seed, noise_seed):
    qpsk = sep_sweep(Scheme.parse("qpsk"), [6.0], 100_000, None, noise_seed)
    ecm = sep_sweep(
        Scheme.parse("ecm-dr", bank=square_bank),
        [6.0],
        100_000,
        seed,
        noise_seed,
    )
    a, b = qpsk.rows[0], ecm.rows[0]
    joint = math.sqrt(a.stderr**2 + b.stderr**2)
    assert abs(a.sep - b.sep) < 3 * joint


def test_sweep_rejects_few_trials(noise_seed):
    with pytest.raises(ValueError):
        sep_sweep(Scheme.parse("qpsk"), [0.0], 999, None, noise_seed)


def test_report_csv():
    row = SepRow("qpsk", 10.0, 10_000, 16, theory=1.565e-3)
    assert row.half_width == pytest.approx(
        1.96 * math.sqrt(0.0016 * 0.9984 / 10_000)
    )
    lines = SepReport([row]).to_csv().splitlines()
    assert lines[0] == "scheme,es_n0_db,trials,errors,sep,ci95,theory"
    assert lines[1].startswith("qpsk,10.0,10000,16,0.0016")


def test_snr_at_sep():
    rows = [
        SepRow("x", 5.0, 10_000, 100),
        SepRow("x", 10.0, 10_000, 1),
    ]
    assert snr_at_sep(rows, 1e-3) == pytest.approx(7.5)
    assert snr_at_sep(rows, 1e-6) is None


def test_entropy_of_identical_samples():
    report = quantized_entropy(np.full(1000, 0.3 + 0.3j), 6)
    assert report.entropy == 0.0
    assert report.occupied == 1


def test_entropy_of_uniform_samples(seed):
    u = derive_stream(seed, "entropy").uniforms_at(0, 2_000_000)
    samples = (4 * u[0::2] - 2) + 1j * (4 * u[1::2] - 2)
    report = quantized_entropy(samples, 6)
    assert 11.99 < report.entropy <= 12.0
    assert report.miller_madow == pytest.approx(12.0, abs=2e-3)
    assert report.clamp_fraction == 0.0


def test_entropy_clamps_outside_samples():
    report = quantized_entropy(np.array([5 + 5j, -9 - 9j]), 4)
    assert report.clamp_fraction == 1.0
    assert report.entropy == pytest.approx(1.0)


def test_entropy_is_order_invariant(seed):
    u = derive_stream(seed, "perm").uniforms_at(0, 2000)
    samples = u[:1000] + 1j * u[1000:]
    forward = quantized_entropy(samples, 7)
    backward = quantized_entropy(samples[::-1], 7)
    assert forward.entropy == backward.entropy
    assert 0.0 <= forward.entropy <= 14.0


def test_entropy_errors():
    with pytest.raises(NoSamples):
        quantized_entropy(np.array([], dtype=complex), 6)
    with pytest.raises(ValueError):
        quantized_entropy(np.ones(3), 17)
    with pytest.raises(ValueError):
        quantized_entropy(np.ones(3), 6, region=0.0)


def test_qpsk_scatter_has_four_points(noise_seed):
    samples = scatter_samples(Scheme.parse("qpsk"), 1000, None, noise_seed)
    assert len(np.unique(samples)) == 4


def test_ecm_dr_scatter_spreads(small_bank, seed, noise_seed):
    fixed = scatter_samples(
        Scheme.parse("ecm", bank=small_bank), 20_000, seed, noise_seed
    )
    rotated = scatter_samples(
        Scheme.parse("ecm-dr", bank=small_bank), 1000, seed, noise_seed
    )
    assert len(np.unique(fixed)) == small_bank.support_size()
    assert len(np.unique(rotated)) == 1000


def test_scatter_file(tmp_path, noise_seed):
    samples = scatter_samples(
        Scheme.parse("16qam-dr"), 50, bytes(32), noise_seed, es_n0_db=15.0
    )
    scatter_export(samples, tmp_path / "s.txt")
    np.testing.assert_array_equal(read_scatter(tmp_path / "s.txt"), samples)
