import numpy as np

from leadlag.lattice import DistanceMatrix, distance_matrix

TEMPERATURES = (0.5, 1.0, 2.0, 5.0)


def random_matrix(rng, n):
    return distance_matrix(rng.random(n), rng.random(n))


def integer_matrix(rng, n, high=4):
    """ε from integer-valued series, so equal-energy paths tie exactly."""
    return distance_matrix(rng.integers(0, high, n).astype(float), rng.integers(0, high, n).astype(float))
