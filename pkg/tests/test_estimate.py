import math

import pytest

from ecmod.errors import ConstraintInfeasible
from ecmod.tuplegen.estimate import (
    exclusion_fraction,
    expected_tuples_approx,
    expected_tuples_exact,
    key_space_log10,
    ln_binomial,
    monte_carlo_tuple_count,
)


def test_headline_estimate():
    approx = expected_tuples_approx(100_000, 16, 0.63, 4.0)
    assert approx.log10 == pytest.approx(50.43, abs=0.01)
    exact = expected_tuples_exact(100_000, 16, 0.63, 4.0)
    assert exact.log10 == pytest.approx(47.2, abs=0.1)
    assert approx.log10 - exact.log10 > 3.0
    assert approx.exponent == 50
    assert approx.scientific().endswith("e+50")


def test_pairs_without_exclusion_count_all_pairs():
    exact = expected_tuples_exact(1000, 2, 0.0, 4.0)
    assert math.exp(exact.ln_value) == pytest.approx(1000 * 999 / 2)


def test_small_pool_example():
    exact = expected_tuples_exact(8, 2, 0.3, 1.0)
    assert math.exp(exact.ln_value) == pytest.approx(20.08, abs=0.01)


def test_approximation_converges_for_pairs():
    exact = expected_tuples_exact(1_000_000, 2, 0.2, 4.0)
    approx = expected_tuples_approx(1_000_000, 2, 0.2, 4.0)
    relative = abs(math.expm1(approx.ln_value - exact.ln_value))
    assert relative < 0.01


def test_infeasible_exclusion_area():
    with pytest.raises(ConstraintInfeasible):
        exclusion_fraction(2.0, 4.0)
    with pytest.raises(ConstraintInfeasible):
        expected_tuples_exact(1000, 16, 2.0, 4.0)
    with pytest.raises(ValueError):
        exclusion_fraction(0.5, 0.0)


def test_order_bounds():
    with pytest.raises(ValueError):
        expected_tuples_exact(10, 1, 0.1, 1.0)
    with pytest.raises(ValueError):
        expected_tuples_approx(3, 4, 0.1, 1.0)


def test_ln_binomial():
    assert math.exp(ln_binomial(10, 3)) == pytest.approx(120)


def test_key_space():
    assert key_space_log10(256) == pytest.approx(77.06, abs=0.01)


def test_monte_carlo_matches_exact_for_pairs(seed):
    counted = monte_carlo_tuple_count(8, 2, 0.3, 1.0, 10_000, seed)
    exact = math.exp(expected_tuples_exact(8, 2, 0.3, 1.0).ln_value)
    assert counted.pools == 10_000
    assert abs(counted.mean - exact) < 3 * counted.stderr + 1e-9


def test_monte_carlo_triples(seed):
    counted = monte_carlo_tuple_count(12, 3, 0.05, 1.0, 4000, seed)
    exact = math.exp(expected_tuples_exact(12, 3, 0.05, 1.0).ln_value)
    assert abs(counted.mean - exact) < 3 * counted.stderr + 0.05


def test_monte_carlo_needs_two_pools(seed):
    with pytest.raises(ValueError):
        monte_carlo_tuple_count(8, 2, 0.3, 1.0, 1, seed)
