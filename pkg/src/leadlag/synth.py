"""
Synthetic series pairs with a known, piecewise-constant lag.

Random numbers come from numpy's ``PCG64`` bit generator seeded through
``SeedSequence(seed)``, which numpy keeps stream-compatible across platforms
and releases. ``X`` is drawn first, then ``η``, then the fill noise. Keep that
order or old seeds will stop reproducing.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import InvalidProfile
from .ingest import NormalizedSeries, RawSeries, ReturnSeries, normalize

MIN_LENGTH = 32
START_DATE = date(2000, 1, 3)


@dataclass(frozen=True)
class LagProfile:
    """Lag ``τ(i)``: each segment ``(start, lag)`` holds until the next start."""

    segments: tuple
    n: int

    def __post_init__(self):
        segs = tuple((int(s), int(k)) for s, k in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise InvalidProfile("lag profile needs at least one segment")
        if segs[0][0] != 0:
            raise InvalidProfile(f"first segment must start at 0, got {segs[0][0]}")
        starts = [s for s, _ in segs]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise InvalidProfile(f"segment starts must be strictly increasing: {starts}")
        if starts[-1] >= self.n:
            raise InvalidProfile(f"segment start {starts[-1]} is beyond the series length {self.n}")
        for _, k in segs:
            if not abs(k) < self.n / 4:
                raise InvalidProfile(f"|lag| = {abs(k)} must be below n/4 = {self.n / 4:g}")

    @classmethod
    def constant(cls, lag: int, n: int) -> LagProfile:
        return cls(((0, lag),), n)

    @classmethod
    def step(cls, before: int, after: int, n: int, at: int | None = None) -> LagProfile:
        return cls(((0, before), (n // 2 if at is None else at, after)), n)

    @classmethod
    def parse(cls, text: str, n: int) -> LagProfile:
        """Parse ``"start:lag,start:lag,..."``; a bare integer means a constant lag."""
        text = text.strip()
        try:
            if ":" not in text:
                segs = [(0, int(text))]
            else:
                segs = []
                for part in text.split(","):
                    s, k = part.split(":")
                    segs.append((int(s), int(k)))
        except ValueError:
            raise InvalidProfile(f"cannot parse lag profile {text!r}") from None
        return cls(tuple(segs), n)

    def lags(self) -> np.ndarray:
        out = np.empty(self.n, dtype=int)
        bounds = [s for s, _ in self.segments[1:]] + [self.n]
        for (s, k), e in zip(self.segments, bounds):
            out[s:e] = k
        return out


def lagged_returns(n: int, profile: LagProfile, noise_sigma: float = 0.0, seed: int = 0, ar: float = 0.0):
    """
    Raw (unnormalized) pair ``(X, Y)`` with ``Y(i) = X(i - τ(i)) + σ η(i)``.

    ``ar`` turns the driver into an AR(1) process with that coefficient.
    Indices whose source falls outside the series get fresh standard normal
    draws instead of wrapping around.
    """
    if n < MIN_LENGTH:
        raise InvalidProfile(f"n must be at least {MIN_LENGTH}, got {n}")
    if profile.n != n:
        raise InvalidProfile(f"profile is for n={profile.n}, not n={n}")
    if noise_sigma < 0:
        raise InvalidProfile("noise_sigma must be nonnegative")
    if not -1 < ar < 1:
        raise InvalidProfile("AR coefficient must lie in (-1, 1)")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    shocks = rng.standard_normal(n)
    if ar:
        x = np.empty(n)
        x[0] = shocks[0] / np.sqrt(1 - ar * ar)
        for i in range(1, n):
            x[i] = ar * x[i - 1] + shocks[i]
    else:
        x = shocks
    eta = rng.standard_normal(n)
    fill = rng.standard_normal(n)

    src = np.arange(n) - profile.lags()
    inside = (src >= 0) & (src < n)
    y = np.where(inside, x[np.clip(src, 0, n - 1)], fill)
    if noise_sigma:
        y = y + noise_sigma * eta
    return x, y


def synthetic_dates(n: int, start: date = START_DATE) -> tuple:
    """``n`` consecutive business days beginning at ``start``."""
    days = np.busday_offset(np.datetime64(start, "D"), np.arange(n), roll="forward")
    return tuple(d.item() for d in days)


def generate_lagged_pair(
    n: int,
    profile: LagProfile,
    noise_sigma: float = 0.0,
    seed: int = 0,
    mode: str = "minmax",
    ar: float = 0.0,
) -> tuple[NormalizedSeries, NormalizedSeries]:
    x, y = lagged_returns(n, profile, noise_sigma, seed, ar)
    dates = synthetic_dates(n)
    return (
        normalize(ReturnSeries("x", dates, x), mode),
        normalize(ReturnSeries("y", dates, y), mode),
    )


def as_levels(returns: np.ndarray, name: str, start_level: float = 100.0) -> RawSeries:
    """
    Levels whose log returns are ``returns``; one extra leading observation,
    so the dates run one business day longer than the returns.
    """
    logs = np.log(start_level) + np.concatenate([[0.0], np.cumsum(returns)])
    return RawSeries(name, synthetic_dates(len(logs)), np.exp(logs))
