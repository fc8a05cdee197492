import json
import re
from pathlib import Path

import pytest
from click.testing import CliRunner

from ecmod.cli import main

SEED = bytes(range(32)).hex()
NOISE_SEED = "ffeeddccbbaa99887766554433221100" * 2
OTHER_SEED = "ff" * 32

GEN_TUPLES = "gen-tuples --m 4 --dmin 1.0 --n 10 --l 1000"


@pytest.fixture
def runner(tmp_path):
    cli = CliRunner()
    with cli.isolated_filesystem(temp_dir=tmp_path):
        yield cli


def invoke(runner, command: str, *extra: str):
    return runner.invoke(main, ["--no-progress", *command.split(), *extra])


def make_bank(runner, path="bank.json"):
    return invoke(
        runner, f"--curve test10007 --seed {SEED} --out {path} {GEN_TUPLES}"
    )


def test_gen_tuples(runner):
    result = make_bank(runner)
    assert result.exit_code == 0, result.output
    assert "10 of 10 tuples" in result.output
    data = json.loads(Path("bank.json").read_text())
    assert data["curve"] == "test10007"
    assert len(data["tuples"]) == 10
    assert not data["partial"]


def test_gen_tuples_is_reproducible(runner):
    assert make_bank(runner, "a.json").exit_code == 0
    assert make_bank(runner, "b.json").exit_code == 0
    assert Path("a.json").read_bytes() == Path("b.json").read_bytes()


def test_gen_tuples_infeasible(runner):
    result = invoke(
        runner,
        f"--curve test10007 --seed {SEED} gen-tuples --m 4 --dmin 10 --n 3 "
        "--l 200",
    )
    assert result.exit_code == 3
    assert "Partial bank written" in result.output
    assert json.loads(Path("bank.json").read_text())["partial"] is True


def test_pool_larger_than_group_is_infeasible(runner):
    result = invoke(
        runner,
        f"--curve toy17 --seed {SEED} gen-tuples --m 4 --dmin 0.1 --n 1 "
        "--l 100",
    )
    assert result.exit_code == 3
    assert "below n=19" in result.output
    assert not Path("bank.json").exists()


def test_bad_seed(runner):
    result = invoke(runner, "--seed 1234 gen-tuples")
    assert result.exit_code == 2


def test_missing_seed(runner):
    result = invoke(runner, f"--curve test10007 {GEN_TUPLES}")
    assert result.exit_code == 2
    assert "--seed" in result.output


def test_invalid_order(runner):
    result = invoke(runner, f"--seed {SEED} gen-tuples --m 6")
    assert result.exit_code == 2
    assert "Select one of the following" in result.output


@pytest.mark.parametrize("stream_name", ["tx.txt", "tx.bin"])
def test_modulate_demodulate(runner, stream_name):
    assert make_bank(runner).exit_code == 0
    message = bytes(range(256)) * 2
    Path("msg.bin").write_bytes(message)
    result = invoke(
        runner,
        f"--seed {SEED} --out {stream_name} modulate --bank bank.json "
        "--bits msg.bin --dr",
    )
    assert result.exit_code == 0, result.output
    result = invoke(
        runner,
        f"--seed {SEED} --out rx.bin demodulate --bank bank.json "
        f"--stream {stream_name} --reference msg.bin",
    )
    assert result.exit_code == 0, result.output
    assert Path("rx.bin").read_bytes() == message
    assert "100.0000%" in result.output


def test_demodulate_with_wrong_seed(runner):
    assert make_bank(runner).exit_code == 0
    Path("msg.bin").write_bytes(bytes(range(256)) * 8)
    result = invoke(
        runner,
        f"--seed {SEED} --out tx.txt modulate --bank bank.json "
        "--bits msg.bin --dr",
    )
    assert result.exit_code == 0, result.output
    with pytest.warns(UserWarning):
        result = invoke(
            runner,
            f"--seed {OTHER_SEED} --out rx.bin demodulate --bank bank.json "
            "--stream tx.txt --reference msg.bin",
        )
    assert result.exit_code == 0, result.output
    assert Path("rx.bin").read_bytes() != Path("msg.bin").read_bytes()
    match = re.search(
        r"Bit agreement with msg\.bin: ([0-9.]+)%", result.output
    )
    assert match, result.output
    assert 45.0 < float(match.group(1)) < 55.0


def test_qpsk_needs_no_seed(runner):
    Path("msg.bin").write_bytes(b"\x1b\xe4")
    result = invoke(
        runner, "--out tx.txt modulate --scheme qpsk --bits msg.bin"
    )
    assert result.exit_code == 0, result.output
    result = invoke(runner, "--out rx.bin demodulate --stream tx.txt")
    assert result.exit_code == 0, result.output
    assert Path("rx.bin").read_bytes() == b"\x1b\xe4"


def test_ecm_needs_bank(runner):
    Path("msg.bin").write_bytes(b"\x00")
    result = invoke(runner, f"--seed {SEED} modulate --bits msg.bin")
    assert result.exit_code == 2


def test_missing_bits_file(runner):
    result = invoke(runner, "modulate --scheme qpsk --bits absent.bin")
    assert result.exit_code == 4


def test_estimate(runner):
    result = invoke(runner, "estimate --l 100000 --m 16 --dmin 0.63 --a 4")
    assert result.exit_code == 0, result.output
    assert "approx: log10 E[T] = 50.43" in result.output
    assert "key space: log10 = 77.06" in result.output


def test_estimate_infeasible(runner):
    result = invoke(runner, "estimate --dmin 1.0 --a 0.1")
    assert result.exit_code == 3


def test_estimate_monte_carlo(runner):
    result = invoke(
        runner,
        f"--seed {SEED} estimate --l 8 --m 2 --dmin 0.3 --a 1 "
        "--monte-carlo 2000",
    )
    assert result.exit_code == 0, result.output
    assert "monte carlo:" in result.output


def test_simulate(runner):
    result = invoke(
        runner,
        f"--seed {SEED} --noise-seed {NOISE_SEED} --out sep.csv simulate "
        "--scheme qpsk --scheme 16qam-dr --snr 0:10:5 --trials 2000",
    )
    assert result.exit_code == 0, result.output
    lines = Path("sep.csv").read_text().splitlines()
    assert lines[0].startswith("scheme,es_n0_db")
    assert len(lines) == 7
    assert lines[1].startswith("qpsk,0.0,2000,")
    assert lines[4].startswith("16qam-dr,0.0,2000,")


def test_rotated_schemes_need_seed(runner):
    result = invoke(
        runner,
        f"--noise-seed {NOISE_SEED} simulate --scheme 16qam-dr --snr 0 "
        "--trials 1000",
    )
    assert result.exit_code == 2
    assert "--seed" in result.output


def test_simulate_needs_noise_seed(runner):
    result = invoke(runner, "simulate --trials 1000")
    assert result.exit_code == 2


def test_scatter_and_entropy(runner):
    result = invoke(
        runner,
        f"--noise-seed {NOISE_SEED} --out s.txt scatter --scheme qpsk "
        "--count 500",
    )
    assert result.exit_code == 0, result.output
    assert len(Path("s.txt").read_text().splitlines()) == 500
    result = invoke(runner, "--out h.csv entropy --input s.txt --q 6,7")
    assert result.exit_code == 0, result.output
    rows = Path("h.csv").read_text().splitlines()
    assert rows[0].startswith("label,q,region")
    assert len(rows) == 3
    assert all(float(row.split(",")[5]) <= 2.0 for row in rows[1:])


def test_entropy_needs_samples(runner):
    result = invoke(runner, "entropy")
    assert result.exit_code == 2


def test_entropy_rejects_bad_q(runner):
    result = invoke(
        runner, f"--noise-seed {NOISE_SEED} entropy --scheme qpsk --q 20"
    )
    assert result.exit_code == 2


def test_bench(runner):
    result = invoke(
        runner,
        f"--seed {SEED} --out b.csv bench --l 300,600 --m 4 --dmin 0.5 "
        "--n 2 --repeat 1 --uniform",
    )
    assert result.exit_code == 0, result.output
    assert len(Path("b.csv").read_text().splitlines()) == 3


def test_config_file_supplies_defaults(runner):
    Path("pyproject.toml").write_text(
        "[tool.ecmod]\n"
        'curve = "test10007"\n'
        "progress = false\n"
        "\n"
        "[tool.ecmod.gen-tuples]\n"
        "m = 4\n"
        "d-min = 1.0\n"
        "n-tuples = 5\n"
        "pool-size = 500\n"
    )
    result = runner.invoke(main, ["--seed", SEED, "gen-tuples"])
    assert result.exit_code == 0, result.output
    data = json.loads(Path("bank.json").read_text())
    assert data["curve"] == "test10007"
    assert data["m"] == 4
    assert data["n_tuples"] == 5
    assert data["pool_size"] == 500


def test_broken_config_file(runner):
    Path("broken.toml").write_text("[tool.ecmod\n")
    result = runner.invoke(main, ["-c", "broken.toml", "estimate"])
    assert result.exit_code == 2
