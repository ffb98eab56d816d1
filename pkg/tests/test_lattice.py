import numpy as np
import pytest

from leadlag.errors import LengthMismatch, OutOfBounds, ParityViolation
from leadlag.lattice import (
    LatticeCoord,
    admissible_x,
    distance_matrix,
    node_count,
    rotate,
    unrotate,
)


def test_distance_matrix_example():
    E = distance_matrix([0, 0], [0, 1])
    np.testing.assert_array_equal(E.eps, [[0, 1], [0, 1]])


def test_distance_matrix_identical_series_has_zero_diagonal(rng):
    x = rng.random(7)
    assert np.all(np.diag(distance_matrix(x, x).eps) == 0)


def test_distance_matrix_swap_is_transpose(rng):
    x, y = rng.random(6), rng.random(6)
    np.testing.assert_array_equal(distance_matrix(x, y).eps, distance_matrix(y, x).eps.T)


def test_distance_matrix_length_mismatch():
    with pytest.raises(LengthMismatch):
        distance_matrix([0, 1, 2], [0, 1])


def test_distance_matrix_is_read_only():
    E = distance_matrix([0, 1], [1, 0])
    with pytest.raises(ValueError):
        E.eps[0, 0] = 5


def test_rotate_examples():
    assert rotate(3, 5) == LatticeCoord(8, 2)
    assert unrotate(8, 2) == (3, 5)
    with pytest.raises(ParityViolation):
        unrotate(3, 0)
    with pytest.raises(OutOfBounds):
        unrotate(2, 4, n=5)


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_admissible_corners(n):
    assert admissible_x(0, n) == [0]
    assert admissible_x(2 * (n - 1), n) == [0]


def test_admissible_small():
    assert admissible_x(1, 2) == [-1, 1]
    assert admissible_x(4, 4) == [-2, 0, 2]
    assert admissible_x(3, 4) == [-3, -1, 1, 3]
    with pytest.raises(OutOfBounds):
        admissible_x(7, 4)


def test_admissible_window():
    assert admissible_x(6, 10, max_abs_x=3) == [-2, 0, 2]
    assert admissible_x(7, 10, max_abs_x=3) == [-3, -1, 1, 3]
    assert admissible_x(1, 10, max_abs_x=1) == [-1, 1]
    with pytest.raises(OutOfBounds):
        admissible_x(1, 10, max_abs_x=0)


@pytest.mark.parametrize("n", range(2, 12))
def test_lattice_is_bijection_with_grid(n):
    assert node_count(n) == n * n
    seen = set()
    for t in range(2 * n - 1):
        for x in admissible_x(t, n):
            t1, t2 = unrotate(t, x, n)
            assert 0 <= t1 < n and 0 <= t2 < n
            assert rotate(t1, t2) == LatticeCoord(t, x)
            seen.add((t1, t2))
    assert len(seen) == n * n


def test_slice_values_matches_grid(rng):
    E = distance_matrix(rng.random(5), rng.random(5))
    xs = np.array(admissible_x(5, 5))
    expected = [E.eps[(5 - x) // 2, (5 + x) // 2] for x in xs]
    np.testing.assert_array_equal(E.slice_values(5, xs), expected)
