import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from physector.errors import ShapeError
from physector.measurement import (
    CommutingMeasurement,
    born_probabilities,
    identity_measurement,
    random_measurement,
    subset,
    validate,
)
from physector.states import even_cat_diagonal


def test_identity_is_valid():
    assert validate(identity_measurement(5)) == []


def test_negative_coefficient_reported():
    c = np.full((2, 2), 0.5)
    c[1, 0] = -1e-3
    problems = validate(CommutingMeasurement(c, complete=False))
    assert problems == ["negative coefficient at (1,0)"]


def test_completeness_defect_reported():
    c = np.array([[0.5, 0.5], [0.5, 0.4]])
    problems = validate(CommutingMeasurement(c, complete=True))
    assert len(problems) == 1
    assert problems[0].startswith("completeness defect 0.1")
    assert problems[0].endswith("at level 1")


def test_incomplete_measurement_skips_completeness():
    c = np.array([[0.5, 0.5], [0.5, 0.4]])
    assert validate(CommutingMeasurement(c, complete=False)) == []


def test_coefficients_are_read_only():
    m = identity_measurement(2)
    with pytest.raises(ValueError):
        m.coefficients[0, 0] = 3.0


def test_born_identity_cat_state():
    p = born_probabilities(identity_measurement(30), even_cat_diagonal(0.3536, 30))
    assert p[0] == pytest.approx(0.9922, abs=5e-5)
    assert p[2] == pytest.approx(0.0078, abs=5e-5)
    assert p[1] == 0.0
    assert p[3] == 0.0


@pytest.mark.parametrize("level", [0, 3, 6])
def test_single_level_state_picks_column(level):
    m = random_measurement(7, 9, seed=level)
    s = np.zeros(7)
    s[level] = 1.0
    np.testing.assert_array_equal(born_probabilities(m, s), m.coefficients[:, level])


def test_born_matches_double_loop():
    m = random_measurement(30, 40, seed=11)
    rho = np.random.default_rng(5).dirichlet(np.ones(30))
    expected = np.zeros(40)
    for j in range(40):
        for l in range(30):
            expected[j] += m.coefficients[j, l] * rho[l]
    np.testing.assert_allclose(born_probabilities(m, rho), expected, rtol=1e-13, atol=1e-16)


def test_born_shape_mismatch():
    with pytest.raises(ShapeError):
        born_probabilities(identity_measurement(3), np.ones(4) / 4)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_born_linear_in_state(seed, a):
    rng = np.random.default_rng(seed)
    m = random_measurement(6, 8, seed)
    s1, s2 = rng.dirichlet(np.ones(6)), rng.dirichlet(np.ones(6))
    mixed = born_probabilities(m, a * s1 + (1 - a) * s2)
    split = a * born_probabilities(m, s1) + (1 - a) * born_probabilities(m, s2)
    np.testing.assert_allclose(mixed, split, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.integers(2, 50), st.integers(0, 2**32 - 1))
def test_random_measurement_is_valid_and_normalizes_probabilities(d, j, seed):
    m = random_measurement(d, j, seed)
    assert validate(m) == []
    assert m.complete
    assert np.all(m.coefficients > 0)
    rho = np.random.default_rng(seed).dirichlet(np.ones(d))
    assert born_probabilities(m, rho).sum() == pytest.approx(1.0, abs=1e-12)


def test_random_measurement_small_and_deterministic():
    m = random_measurement(1, 2, seed=3)
    assert m.coefficients.shape == (2, 1)
    assert m.coefficients.sum() == pytest.approx(1.0, abs=1e-15)
    assert random_measurement(4, 6, 9) == random_measurement(4, 6, 9)
    assert random_measurement(4, 6, 9) != random_measurement(4, 6, 10)


def test_random_measurement_30x40_valid():
    assert validate(random_measurement(30, 40, seed=7)) == []


def test_random_measurement_needs_two_outcomes():
    with pytest.raises(ValueError):
        random_measurement(3, 1, seed=0)


def test_subset_all_indices_drops_complete():
    m = random_measurement(4, 5, seed=1)
    s = subset(m, range(5))
    np.testing.assert_array_equal(s.coefficients, m.coefficients)
    assert not s.complete


def test_subset_rows_of_identity():
    s = subset(identity_measurement(4), [0, 2])
    np.testing.assert_array_equal(s.coefficients, [[1, 0, 0, 0], [0, 0, 1, 0]])


def test_subset_matches_rows():
    m = random_measurement(10, 30, seed=2)
    idx = [3, 17, 0, 29]
    s = subset(m, idx)
    for row, j in enumerate(idx):
        np.testing.assert_array_equal(s.coefficients[row], m.coefficients[j])


@pytest.mark.parametrize("idx", [[0, 0], [5], [-1]])
def test_subset_bad_indices(idx):
    with pytest.raises(IndexError):
        subset(identity_measurement(3), idx)
