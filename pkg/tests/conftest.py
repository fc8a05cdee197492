import numpy as np
import pytest

from ecmod.constellation.qam import qam_reference
from ecmod.constellation.geometry import rotate
from ecmod.curves.named import TOY17, resolve_curve
from ecmod.tuplegen.bank import EcmTuple, TupleBank
from ecmod.tuplegen.generator import generate_tuples

SEED_HEX = bytes(range(32)).hex()
OTHER_SEED_HEX = "ff" * 32
NOISE_SEED_HEX = "ffeeddccbbaa99887766554433221100" * 2


@pytest.fixture(scope="session")
def seed() -> bytes:
    return bytes.fromhex(SEED_HEX)


@pytest.fixture(scope="session")
def other_seed() -> bytes:
    return bytes.fromhex(OTHER_SEED_HEX)


@pytest.fixture(scope="session")
def noise_seed() -> bytes:
    return bytes.fromhex(NOISE_SEED_HEX)


@pytest.fixture(scope="session")
def toy_curve():
    return TOY17


@pytest.fixture(scope="session")
def test_curve():
    return resolve_curve("test10007")


@pytest.fixture(scope="session")
def small_bank(seed, test_curve) -> TupleBank:
    """50 tuples of 4-ECM(1.0) from a 2000-point pool."""
    return generate_tuples(
        seed, test_curve, m=4, d_min=1.0, n_tuples=50, pool_size=2000
    )


@pytest.fixture(scope="session")
def square_bank() -> TupleBank:
    """Rotated copies of QPSK, a bank with the QPSK detector geometry."""
    base = qam_reference(4).points
    tuples = [
        EcmTuple(scalars=[4 * i + j + 1 for j in range(4)], points=points)
        for i, points in enumerate(
            rotate(base, angle) for angle in np.linspace(0.0, 1.5, 8)
        )
    ]
    return TupleBank(
        curve="none",
        m=4,
        d_min=float(np.sqrt(2.0)),
        n_tuples=len(tuples),
        pool_size=0,
        max_attempts=0,
        seed_fingerprint="",
        tuples=tuples,
    )
