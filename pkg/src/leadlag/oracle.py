"""
Brute-force reference for small lattices.

Every monotone path (vertical, horizontal and diagonal unit steps) is listed
explicitly and its Boltzmann weight summed directly. Nothing here shares code
with the recursions in :mod:`leadlag.engine`, so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TooLarge
from .engine import LeadLagPath, OptimalPath, _check_temperature
from .lattice import DistanceMatrix

MAX_ORACLE_N = 8

_STEPS = ((0, 1), (1, 0), (1, 1))


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    """
    All paths leaving the ``(0, 0)`` corner of an n x n grid.

    Paths are ordered by length. ``nodes[k, :lengths[k]]`` are the flat grid
    indices ``t1 * n + t2`` of path ``k`` (padding is ``-1``); ``parent[k]``
    is the path one node shorter, ``-1`` for the single-node path.
    """

    n: int
    nodes: np.ndarray
    lengths: np.ndarray
    end: np.ndarray
    parent: np.ndarray

    @property
    def full(self) -> np.ndarray:
        """Mask of the corner-to-corner paths."""
        return self.end == self.n * self.n - 1

    def _levels(self):
        bounds = np.searchsorted(self.lengths, np.arange(1, 2 * self.n + 1))
        return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]

    def energies(self, eps: np.ndarray, dtype=np.longdouble) -> np.ndarray:
        """Energy of every path, accumulated node by node from the corner."""
        flat = np.asarray(eps).ravel().astype(dtype)
        total = np.zeros(len(self.end), dtype=dtype)
        for lv in self._levels():
            par = self.parent[lv]
            prior = np.where(par >= 0, total[par], dtype(0))
            total[lv] = prior + flat[self.end[lv]]
        return total

    def sequential_energies(self, eps: np.ndarray) -> np.ndarray:
        return self.energies(eps, dtype=np.float64)


def _check_n(n: int):
    if n > MAX_ORACLE_N:
        raise TooLarge(f"oracle enumeration is limited to n <= {MAX_ORACLE_N}, got n={n}")


@lru_cache(maxsize=None)
def path_ensemble(n: int) -> PathEnsemble:
    """Enumerate every partial path from ``(0, 0)`` (each prefix counts)."""
    _check_n(n)
    found = []
    stack = [((0, 0),)]
    while stack:
        path = stack.pop()
        found.append(path)
        t1, t2 = path[-1]
        for d1, d2 in _STEPS:
            a, b = t1 + d1, t2 + d2
            if a < n and b < n:
                stack.append(path + ((a, b),))
    found.sort(key=lambda p: (len(p), [a * n + b for a, b in p]))
    position = {p: k for k, p in enumerate(found)}
    width = 2 * n - 1
    nodes = np.full((len(found), width), -1, dtype=np.int64)
    lengths = np.empty(len(found), dtype=np.int64)
    parent = np.empty(len(found), dtype=np.int64)
    for k, path in enumerate(found):
        nodes[k, : len(path)] = [a * n + b for a, b in path]
        lengths[k] = len(path)
        parent[k] = position[path[:-1]] if len(path) > 1 else -1
    end = nodes[np.arange(len(found)), lengths - 1]
    for arr in (nodes, lengths, end, parent):
        arr.setflags(write=False)
    return PathEnsemble(n, nodes, lengths, end, parent)


def _node_weights(eps: np.ndarray, T: float) -> np.ndarray:
    """Σ exp(-energy/T) over all partial paths ending at each node, n x n."""
    n = eps.shape[0]
    ens = path_ensemble(n)
    energy = ens.energies(eps)
    w = np.exp(-(energy - energy.min()) / np.longdouble(T))
    acc = np.zeros(n * n, dtype=np.longdouble)
    np.add.at(acc, ens.end, w)
    return acc.reshape(n, n)


def _slice_marginal(weights: np.ndarray, t: int) -> tuple[np.ndarray, np.ndarray]:
    n = weights.shape[0]
    t1 = np.arange(max(0, t - n + 1), min(t, n - 1) + 1)[::-1]
    t2 = t - t1
    w = weights[t1, t2]
    return (t2 - t1), w / w.sum()


def _eps(E):
    eps = E.eps if isinstance(E, DistanceMatrix) else np.asarray(E, dtype=float)
    _check_n(eps.shape[0])
    return eps


def oracle_forward_marginal(E, T: float, t: int) -> np.ndarray:
    """``P(x | t)`` over ascending admissible x, by direct path summation."""
    eps = _eps(E)
    _, p = _slice_marginal(_node_weights(eps, _check_temperature(T)), t)
    return p.astype(float)


def oracle_backward_marginal(E, T: float, t: int) -> np.ndarray:
    """Same as the forward marginal, for paths leaving the terminal corner."""
    eps = _eps(E)
    n = eps.shape[0]
    # Reversing both axes maps node (t, x) to (2n-2-t, -x).
    _, p = _slice_marginal(_node_weights(eps[::-1, ::-1], _check_temperature(T)), 2 * n - 2 - t)
    return p[::-1].astype(float)


def oracle_marginals(E, T: float) -> tuple[list, list]:
    """All forward and backward slice marginals as lists of float arrays."""
    eps = _eps(E)
    n = eps.shape[0]
    T = _check_temperature(T)
    wf = _node_weights(eps, T)
    wb = _node_weights(eps[::-1, ::-1], T)
    fwd, bwd = [], []
    for t in range(2 * n - 1):
        fwd.append(_slice_marginal(wf, t)[1].astype(float))
        bwd.append(_slice_marginal(wb, 2 * n - 2 - t)[1][::-1].astype(float))
    return fwd, bwd


def oracle_tops(E, T: float, marginals=None) -> LeadLagPath:
    """Lead-lag path on every slice (``all_t`` grid) by enumeration."""
    eps = _eps(E)
    n = eps.shape[0]
    fwd, bwd = marginals if marginals is not None else oracle_marginals(eps, T)
    x_fwd = np.empty(2 * n - 1)
    x_bwd = np.empty(2 * n - 1)
    for t in range(2 * n - 1):
        m = min(t, 2 * n - 2 - t)
        xs = np.arange(-m, m + 1, 2, dtype=np.longdouble)
        x_fwd[t] = float(np.sum(xs * fwd[t]))
        x_bwd[t] = float(np.sum(xs * bwd[t]))
    t = np.arange(2 * n - 1)
    x_mean = 0.5 * x_fwd + 0.5 * x_bwd
    return LeadLagPath(t, t.copy(), x_mean, x_fwd, x_bwd, float(T), "all_t")


def _tie_ranks(nodes: tuple) -> list[int]:
    """
    Rank of every step read backward from the terminal corner: 0 diagonal,
    then ordered by the predecessor's (|x|, x).
    """
    ranks = []
    for (a1, a2), (b1, b2) in zip(nodes[-2::-1], nodes[::-1]):
        if (b1 - a1, b2 - a2) == (1, 1):
            ranks.append(0)
            continue
        x = b2 - b1
        options = sorted([x - 1, x + 1], key=lambda v: (abs(v), v))
        ranks.append(1 + options.index(a2 - a1))
    return ranks


def oracle_min_path(E) -> OptimalPath:
    """Exhaustive minimum over all corner-to-corner paths."""
    eps = _eps(E)
    n = eps.shape[0]
    ens = path_ensemble(n)
    full = np.nonzero(ens.full)[0]
    energy = ens.sequential_energies(eps)[full]
    best = energy.min()
    winners = []
    for k in full[energy == best]:
        flat = ens.nodes[k, : ens.lengths[k]]
        nodes = tuple((int(f // n), int(f % n)) for f in flat)
        winners.append(nodes)
    chosen = min(winners, key=_tie_ranks)
    return OptimalPath(chosen, float(best))


def compare_with_engine(E, T: float) -> float:
    """Largest absolute gap between engine and oracle marginals and paths."""
    from .engine import backward_weights, forward_weights, tops_path, EngineConfig

    dm = E if isinstance(E, DistanceMatrix) else DistanceMatrix(E)
    fwd_o, bwd_o = oracle_marginals(dm.eps, T)
    fwd_e = forward_weights(dm, T)
    bwd_e = backward_weights(dm, T)
    worst = 0.0
    for t in range(2 * dm.n - 1):
        worst = max(worst, float(np.max(np.abs(fwd_e.probs[t] - fwd_o[t]))))
        worst = max(worst, float(np.max(np.abs(bwd_e.probs[t] - bwd_o[t]))))
    path_e = tops_path(dm, EngineConfig(T, report_grid="all_t"))
    path_o = oracle_tops(dm.eps, T, (fwd_o, bwd_o))
    worst = max(worst, float(np.max(np.abs(path_e.x_mean - path_o.x_mean))))
    return worst
