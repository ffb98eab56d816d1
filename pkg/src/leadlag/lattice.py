"""
Distance matrix and rotated-lattice geometry.

Grid node ``(t1, t2)`` pairs ``X(t1)`` with ``Y(t2)``. The rotated coordinates
are ``t = t1 + t2`` (diagonal time) and ``x = t2 - t1`` (lag), so the n x n
grid becomes a diamond with ``x = t (mod 2)`` and
``|x| <= min(t, 2(n-1) - t)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, OutOfBounds, ParityViolation, TooShort


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """``eps[t1, t2] = |X(t1) - Y(t2)|`` for two equal-length series."""

    eps: np.ndarray

    def __post_init__(self):
        eps = np.array(self.eps, dtype=float)
        if eps.ndim != 2 or eps.shape[0] != eps.shape[1]:
            raise LengthMismatch(f"distance matrix must be square, got shape {eps.shape}")
        if eps.shape[0] < 2:
            raise TooShort("distance matrix needs n >= 2")
        if not np.all(np.isfinite(eps)) or np.any(eps < 0):
            raise ValueError("distance matrix entries must be finite and nonnegative")
        eps.setflags(write=False)
        object.__setattr__(self, "eps", eps)

    @property
    def n(self) -> int:
        return self.eps.shape[0]

    def transpose(self) -> DistanceMatrix:
        return DistanceMatrix(self.eps.T)

    def reversed(self) -> DistanceMatrix:
        """The matrix seen from the terminal corner (both axes reversed)."""
        return DistanceMatrix(self.eps[::-1, ::-1])

    def slice_values(self, t: int, xs: np.ndarray) -> np.ndarray:
        """ε at the nodes ``(t, x)`` for the given lag values."""
        xs = np.asarray(xs)
        return self.eps[(t - xs) // 2, (t + xs) // 2]


def distance_matrix(x_series, y_series) -> DistanceMatrix:
    """
    Build the absolute-difference matrix of two equal-length series.

    Accepts :class:`~leadlag.ingest.NormalizedSeries` or plain arrays.
    """
    x = np.asarray(getattr(x_series, "values", x_series), dtype=float)
    y = np.asarray(getattr(y_series, "values", y_series), dtype=float)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise TooShort("need series of length >= 2")
    return DistanceMatrix(np.abs(x[:, None] - y[None, :]))


@dataclass(frozen=True)
class LatticeCoord:
    t: int
    x: int


def half_width(t: int, n: int) -> int:
    return min(t, 2 * (n - 1) - t)


def rotate(t1: int, t2: int) -> LatticeCoord:
    return LatticeCoord(t1 + t2, t2 - t1)


def unrotate(t: int, x: int, n: int | None = None) -> tuple[int, int]:
    """
    Inverse of :func:`rotate`. With ``n`` given, also check the node lies on
    the n x n grid.
    """
    if (t - x) % 2:
        raise ParityViolation(f"x={x} and t={t} have different parity")
    if n is not None and (t < 0 or t > 2 * (n - 1) or abs(x) > half_width(t, n)):
        raise OutOfBounds(f"(t={t}, x={x}) is outside the {n}x{n} lattice")
    return (t - x) // 2, (t + x) // 2


def window_limit(t: int, n: int, max_abs_x: int | None = None) -> int:
    """Largest admissible |x| on slice ``t`` (same parity as ``t``)."""
    m = half_width(t, n)
    if max_abs_x is not None and max_abs_x < m:
        m = max_abs_x - ((max_abs_x - t) % 2)
    return m


def admissible_x(t: int, n: int, max_abs_x: int | None = None) -> list[int]:
    """
    Lag values reachable on slice ``t``, ascending.

    ``max_abs_x`` truncates the search window; lags beyond it can never be
    reported, so only use it when the true lag range is known to be narrower.
    """
    if n < 1 or t < 0 or t > 2 * (n - 1):
        raise OutOfBounds(f"t={t} outside [0, {2 * (n - 1)}] for n={n}")
    if max_abs_x is not None and max_abs_x < 1 and n > 1:
        raise OutOfBounds("max_abs_x must be at least 1 or odd slices are empty")
    m = window_limit(t, n, max_abs_x)
    return list(range(-m, m + 1, 2))


def node_count(n: int, max_abs_x: int | None = None) -> int:
    return sum(len(admissible_x(t, n, max_abs_x)) for t in range(2 * n - 1))
