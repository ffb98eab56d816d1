"""
Boltzmann-weight sweeps over the rotated lattice and the lead-lag path.

The weight of a node is the sum over all monotone paths that reach it from a
corner of ``exp(-energy / T)``, where the energy is the sum of ε over every
visited node (end points included). Moving forward, node ``(t, x)`` is
entered from ``(t-1, x-1)``, ``(t-1, x+1)`` or diagonally from ``(t-2, x)``.

Raw weights under- or overflow for long series, so each slice is stored as a
normalized distribution plus the log of its total weight. The recursion mixes
two earlier slices, and their relative scale is restored from the difference
of their log offsets before they are combined. Slices are kept as log
probabilities because at low temperature the spread inside one slice exceeds
the range of a float.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from datetime import date

import numpy as np

from .errors import ConfigError, NonPositiveTemperature, NumericalOverflow, TooShort
from .lattice import DistanceMatrix, window_limit

DEFAULT_TEMPERATURE = 2.0
REPORT_GRIDS = ("even_t", "all_t")
FORWARD, BACKWARD = "forward", "backward"


def _check_temperature(T) -> float:
    T = float(T)
    if not T > 0 or not np.isfinite(T):
        raise NonPositiveTemperature(f"temperature must be positive and finite, got {T}")
    return T


@dataclass(frozen=True)
class EngineConfig:
    temperature: float = DEFAULT_TEMPERATURE
    normalization_mode: str = "minmax"
    report_grid: str = "even_t"
    max_abs_x: int | None = None

    def __post_init__(self):
        _check_temperature(self.temperature)
        if self.report_grid not in REPORT_GRIDS:
            raise ConfigError(f"report_grid must be one of {REPORT_GRIDS}, got {self.report_grid!r}")
        if self.normalization_mode not in ("minmax", "zscore"):
            raise ConfigError(f"unknown normalization mode {self.normalization_mode!r}")
        if self.max_abs_x is not None and int(self.max_abs_x) < 1:
            raise ConfigError("max_abs_x must be a positive integer")


def _slice_mean(xs: np.ndarray, p: np.ndarray) -> float:
    # Pair x with -x so a mirror-symmetric slice gives exactly 0.
    half = len(xs) // 2
    if half == 0:
        return 0.0
    return float(np.dot(xs[-half:], p[-half:] - p[:half][::-1]))


@dataclass(frozen=True, eq=False)
class SliceDistributions:
    """
    Per-slice marginals ``P(x | t)`` for one sweep direction.

    ``log_probs[t]`` is indexed like ``x_values(t)``; ``log_scale[t]`` is the
    log of the slice's total raw weight.
    """

    n: int
    direction: str
    temperature: float
    log_probs: list
    log_scale: np.ndarray
    max_abs_x: int | None = None

    @cached_property
    def probs(self) -> list:
        return [np.exp(lp) for lp in self.log_probs]

    def x_values(self, t: int) -> np.ndarray:
        m = window_limit(t, self.n, self.max_abs_x)
        return np.arange(-m, m + 1, 2)

    def marginal(self, t: int) -> dict[int, float]:
        return dict(zip(self.x_values(t).tolist(), self.probs[t].tolist()))

    def means(self) -> np.ndarray:
        return np.array([_slice_mean(self.x_values(t), p) for t, p in enumerate(self.probs)])

    def log_weights(self, t: int) -> np.ndarray:
        """Log of the raw (unnormalized) weights on slice ``t``."""
        return self.log_scale[t] + self.log_probs[t]


def _sweep(E: DistanceMatrix, T: float, direction: str, max_abs_x=None, keep=True):
    """Run one recursion; return (log probs or None, slice means, log offsets)."""
    n = E.n
    tmax = 2 * n - 2
    width = 2 * n + 1  # dense slot x + n, one spare slot each side for x +/- 1
    order = range(tmax + 1) if direction == FORWARD else range(tmax, -1, -1)

    log_probs = [None] * (tmax + 1) if keep else None
    means = np.zeros(tmax + 1)
    log_scale = np.zeros(tmax + 1)
    prev1 = prev2 = None
    logc1 = logc2 = 0.0

    for k, t in enumerate(order):
        m = window_limit(t, n, max_abs_x)
        xs = np.arange(-m, m + 1, 2)
        slot = xs + n
        energy = E.slice_values(t, xs) / T
        if k == 0:
            logh = -energy
            base = 0.0
        else:
            log_in = np.logaddexp(prev1[slot - 1], prev1[slot + 1])
            if k >= 2:
                log_in = np.logaddexp(log_in, prev2[slot] + (logc2 - logc1))
            logh = log_in - energy
            base = logc1
        top = logh.max()
        if not np.isfinite(top):
            raise NumericalOverflow(f"slice t={t} lost all weight (T={T})")
        lp = logh - top
        log_s = np.log(np.exp(lp).sum())
        lp -= log_s
        logc = base + top + log_s
        if not np.isfinite(logc):
            raise NumericalOverflow(f"log weight offset overflowed at slice t={t}")

        if keep:
            log_probs[t] = lp
        means[t] = _slice_mean(xs, np.exp(lp))
        log_scale[t] = logc
        dense = np.full(width, -np.inf)
        dense[slot] = lp
        prev2, prev1 = prev1, dense
        logc2, logc1 = logc1, logc

    return log_probs, means, log_scale


def forward_weights(E: DistanceMatrix, T: float = DEFAULT_TEMPERATURE, max_abs_x=None) -> SliceDistributions:
    """Marginals of paths started at the ``(0, 0)`` corner."""
    T = _check_temperature(T)
    log_probs, _, log_scale = _sweep(E, T, FORWARD, max_abs_x)
    return SliceDistributions(E.n, FORWARD, T, log_probs, log_scale, max_abs_x)


def backward_weights(E: DistanceMatrix, T: float = DEFAULT_TEMPERATURE, max_abs_x=None) -> SliceDistributions:
    """Marginals of paths started at the ``(n-1, n-1)`` corner, run in reverse."""
    T = _check_temperature(T)
    log_probs, _, log_scale = _sweep(E, T, BACKWARD, max_abs_x)
    return SliceDistributions(E.n, BACKWARD, T, log_probs, log_scale, max_abs_x)


def combine_means(x_fwd: np.ndarray, x_bwd: np.ndarray) -> np.ndarray:
    """Symmetric average of the two one-sided expected lags."""
    return (x_fwd + x_bwd) / 2


@dataclass(frozen=True, eq=False)
class LeadLagPath:
    """
    Expected lag ⟨x(t)⟩ on the reporting grid.

    Positive values mean the first series leads: ``X(t1)`` lines up with
    ``Y(t2)`` at a later ``t2 = t1 + x``. On the ``even_t`` grid ``index`` is
    the day index ``i`` with ``t = 2i``; on ``all_t`` it equals ``t``.
    """

    t: np.ndarray
    index: np.ndarray
    x_mean: np.ndarray
    x_fwd: np.ndarray
    x_bwd: np.ndarray
    temperature: float
    grid: str = "even_t"
    dates: tuple | None = None

    def __len__(self):
        return len(self.x_mean)

    def rows(self):
        dates = self.dates if self.dates is not None else [None] * len(self)
        for i, d, m, f, b in zip(self.index.tolist(), dates, self.x_mean.tolist(),
                                 self.x_fwd.tolist(), self.x_bwd.tolist()):
            yield {"index": i, "date": d.isoformat() if isinstance(d, date) else d,
                   "x_mean": m, "x_fwd": f, "x_bwd": b}


def _report(E: DistanceMatrix, x_fwd, x_bwd, T, grid, dates) -> LeadLagPath:
    tmax = 2 * E.n - 2
    if grid == "even_t":
        t = np.arange(0, tmax + 1, 2)
        index = t // 2
    else:
        t = np.arange(tmax + 1)
        index = t.copy()
    if dates is not None:
        dates = tuple(dates)
        if len(dates) != E.n:
            raise ConfigError(f"{len(dates)} dates for a lattice of n={E.n}")
        dates = tuple(dates[i // 2] for i in t.tolist())
    f, b = x_fwd[t], x_bwd[t]
    return LeadLagPath(t, index, combine_means(f, b), f, b, T, grid, dates)


def tops_path(E: DistanceMatrix, config: EngineConfig | None = None, dates=None) -> LeadLagPath:
    """
    Symmetric thermal optimal path: the average of the forward and backward
    expected lag on every reported slice.

    ``dates`` (length n, one per day index) labels the output; on the
    ``all_t`` grid odd slices carry the date of index ``t // 2``.
    """
    config = config or EngineConfig()
    T = config.temperature
    _, x_fwd, _ = _sweep(E, T, FORWARD, config.max_abs_x, keep=False)
    _, x_bwd, _ = _sweep(E, T, BACKWARD, config.max_abs_x, keep=False)
    return _report(E, x_fwd, x_bwd, T, config.report_grid, dates)


def temperature_sweep(E: DistanceMatrix, temperatures, config: EngineConfig | None = None, dates=None) -> list[LeadLagPath]:
    config = config or EngineConfig()
    temps = [_check_temperature(T) for T in temperatures]
    out = []
    for T in temps:
        cfg = EngineConfig(T, config.normalization_mode, config.report_grid, config.max_abs_x)
        out.append(tops_path(E, cfg, dates))
    return out


def node_occupancy(E: DistanceMatrix, T: float = DEFAULT_TEMPERATURE) -> np.ndarray:
    """
    Probability that a corner-to-corner path passes through each grid node,
    as an n x n array indexed ``[t1, t2]``.
    """
    T = _check_temperature(T)
    fwd = forward_weights(E, T)
    bwd = backward_weights(E, T)
    n = E.n
    log_z = fwd.log_scale[-1]
    occ = np.zeros((n, n))
    for t in range(2 * n - 1):
        xs = fwd.x_values(t)
        # The node's own weight is counted by both sweeps; remove it once.
        logp = fwd.log_weights(t) + bwd.log_weights(t) + E.slice_values(t, xs) / T - log_z
        occ[(t - xs) // 2, (t + xs) // 2] = np.exp(logp)
    return occ


@dataclass(frozen=True, eq=False)
class OptimalPath:
    """
    Minimum-energy monotone path from ``(0, 0)`` to ``(n-1, n-1)``.

    ``nodes`` lists every visited ``(t1, t2)``. A path may visit several
    ``t2`` for one ``t1``; ``phi[t1]`` is the first of them.
    """

    nodes: tuple
    total_energy: float
    phi: np.ndarray = field(init=False)

    def __post_init__(self):
        n = self.nodes[-1][0] + 1
        phi = np.full(n, -1, dtype=int)
        for t1, t2 in self.nodes:
            if phi[t1] < 0:
                phi[t1] = t2
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "phi", phi)

    @property
    def lags(self) -> np.ndarray:
        return np.array([t2 - t1 for t1, t2 in self.nodes])


def low_temperature_chain(E: DistanceMatrix, T: float) -> OptimalPath:
    """
    Nodes crossed by more than half of the thermal path ensemble.

    At most one node per slice can qualify. As ``T`` goes to 0 the chain
    converges to the zero-temperature path when that path is unique.
    """
    occ = node_occupancy(E, T)
    t1, t2 = np.nonzero(occ > 0.5)
    order = np.argsort(t1 + t2, kind="stable")
    nodes = [(int(a), int(b)) for a, b in zip(t1[order], t2[order])]
    energy = 0.0
    for a, b in nodes:
        energy = energy + E.eps[a, b]
    return OptimalPath(tuple(nodes), float(energy))


def zero_temperature_path(E: DistanceMatrix) -> OptimalPath:
    """
    Globally minimal path energy by dynamic programming over the slices.

    Ties between predecessors are resolved in this order: the diagonal step,
    then the step from the smaller ``|x|``, then the step from the more
    negative ``x`` (i.e. the one that decrements ``t2``).
    """
    n = E.n
    if n < 2:
        raise TooShort("need n >= 2")
    tmax = 2 * n - 2
    width = 2 * n + 1
    cost = []  # dense per-slice cumulative energies, +inf off-lattice
    for t in range(tmax + 1):
        m = window_limit(t, n)
        xs = np.arange(-m, m + 1, 2)
        slot = xs + n
        eps = E.slice_values(t, xs)
        dense = np.full(width, np.inf)
        if t == 0:
            dense[slot] = eps
        else:
            best = np.minimum(cost[t - 1][slot - 1], cost[t - 1][slot + 1])
            if t >= 2:
                best = np.minimum(best, cost[t - 2][slot])
            dense[slot] = eps + best
        cost.append(dense)

    t, x = tmax, 0
    nodes = [(n - 1, n - 1)]
    while t > 0:
        cands = []
        if t >= 2:
            cands.append((t - 2, x))
        side = sorted([x - 1, x + 1], key=lambda v: (abs(v), v))
        cands.extend((t - 1, v) for v in side)
        vals = [cost[ct][cx + n] for ct, cx in cands]
        low = min(vals)
        t, x = cands[vals.index(low)]
        nodes.append(((t - x) // 2, (t + x) // 2))
    nodes.reverse()
    return OptimalPath(tuple(nodes), float(cost[tmax][n]))


def path_energy(E: DistanceMatrix, nodes) -> float:
    """Sum of ε along ``nodes``, accumulated from the first node onward."""
    energy = 0.0
    for t1, t2 in nodes:
        energy = energy + E.eps[t1, t2]
    return float(energy)
