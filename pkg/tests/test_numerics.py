import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from physector.errors import InvalidMatrixError, ShapeError
from physector.numerics import min_norm_solve, numerical_rank, pseudoinverse


def penrose_residuals(M, P):
    return (
        np.max(np.abs(M @ P @ M - M)),
        np.max(np.abs(P @ M @ P - P)),
        np.max(np.abs(M @ P - (M @ P).T)),
        np.max(np.abs(P @ M - (P @ M).T)),
    )


def test_identity():
    np.testing.assert_array_equal(pseudoinverse(np.eye(3)), np.eye(3))


def test_rank_deficient_diagonal():
    np.testing.assert_allclose(pseudoinverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]), atol=0)


def test_random_3x5_penrose_conditions():
    M = np.random.default_rng(42).standard_normal((3, 5))
    P = pseudoinverse(M)
    assert P.shape == (5, 3)
    assert max(penrose_residuals(M, P)) < 1e-10


def test_explicit_tolerance_truncates():
    M = np.diag([1.0, 1e-3])
    np.testing.assert_allclose(pseudoinverse(M, tol=1e-2), np.diag([1.0, 0.0]))
    np.testing.assert_allclose(pseudoinverse(M), np.diag([1.0, 1e3]))


@pytest.mark.parametrize("bad", [[[np.nan, 1.0]], [[np.inf]], [], [1.0, 2.0]])
def test_invalid_matrix(bad):
    with pytest.raises(InvalidMatrixError):
        pseudoinverse(bad)


def test_negative_tol_rejected():
    with pytest.raises(ValueError):
        pseudoinverse(np.eye(2), tol=-1.0)


@st.composite
def matrices(draw):
    rows = draw(st.integers(1, 64))
    cols = draw(st.integers(1, 64))
    rank = draw(st.integers(1, min(rows, cols)))
    seed = draw(st.integers(0, 2**32 - 1))
    scale = draw(st.sampled_from([1e-3, 1.0, 1e4]))
    rng = np.random.default_rng(seed)
    return scale * rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, cols))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_penrose_property(M):
    P = pseudoinverse(M)
    r1, r2, r3, r4 = penrose_residuals(M, P)
    m_norm = np.max(np.abs(M))
    p_norm = np.max(np.abs(P))
    assert r1 <= 1e-9 * m_norm
    assert r2 <= 1e-9 * p_norm
    # M P and P M are orthogonal projectors, so their entries are O(1)
    assert r3 <= 1e-9
    assert r4 <= 1e-9


def test_min_norm_identity():
    res = min_norm_solve(np.eye(2), [3.0, 4.0])
    np.testing.assert_allclose(res.solution, [3.0, 4.0])
    assert res.residual_inf == 0.0
    assert res.norm_sq == pytest.approx(25.0)


def test_min_norm_equal_split():
    res = min_norm_solve([[1.0, 1.0]], [1.0])
    np.testing.assert_allclose(res.solution, [0.5, 0.5], atol=1e-15)


def test_min_norm_inconsistent_residual():
    # oracle: the solution family is (t, anything); scan t for the least-squares minimum
    A = np.array([[1.0, 0.0], [1.0, 0.0]])
    b = np.array([0.0, 1.0])
    ts = np.linspace(-2, 2, 4001)
    sq = [np.sum((A @ [t, 0.0] - b) ** 2) for t in ts]
    t_best = ts[int(np.argmin(sq))]
    expected = np.max(np.abs(A @ [t_best, 0.0] - b))
    res = min_norm_solve(A, b)
    assert expected == pytest.approx(0.5)
    assert res.residual_inf == pytest.approx(expected, abs=1e-12)
    np.testing.assert_allclose(res.solution, [0.5, 0.0], atol=1e-15)


def test_min_norm_shape_error():
    with pytest.raises(ShapeError):
        min_norm_solve(np.eye(3), [1.0, 2.0])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 10), st.integers(1, 10))
def test_consistent_system_residual(seed, rows, extra):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((rows, rows + extra))
    b = A @ rng.standard_normal(rows + extra)
    res = min_norm_solve(A, b)
    assert res.residual_inf <= 1e-9 * np.max(np.abs(b))


def test_min_norm_beats_grid_of_exact_solutions():
    # consistent 2x4 system; its exact solutions are x0 + N t with N spanning the null space
    A = np.array([[1.0, 2.0, 0.0, -1.0], [0.0, 1.0, 1.0, 1.0]])
    b = np.array([1.0, 2.0])
    res = min_norm_solve(A, b)
    _, _, vh = np.linalg.svd(A)
    null = vh[2:].T
    grid = np.linspace(-3, 3, 121)
    best = res.norm_sq
    for t1, t2 in itertools.product(grid, grid):
        x = res.solution + null @ [t1, t2]
        assert np.max(np.abs(A @ x - b)) < 1e-9
        assert x @ x >= best - 1e-12


def test_numerical_rank():
    assert numerical_rank(np.diag([1.0, 1e-20, 3.0])) == 2
    assert numerical_rank(np.ones((4, 5))) == 1
