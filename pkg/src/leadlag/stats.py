"""
Descriptive statistics for return series and summaries of lead-lag paths.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateSeries, EmptyPath, SingularRegression, TooShort

JB_P_FLOOR = 0.001
MIN_STATS_LENGTH = 8
MIN_ADF_LENGTH = 30
# Asymptotic Dickey-Fuller critical values, constant but no trend.
ADF_CRITICAL_VALUES = {"1%": -3.43, "5%": -2.86, "10%": -2.57}


@dataclass(frozen=True)
class StatsRow:
    n: int
    mean: float
    max: float
    min: float
    std: float
    skewness: float
    kurtosis: float
    jb_stat: float
    jb_p: float
    adf_stat: float | None = None
    adf_lags: int | None = None
    adf_reject: dict | None = None


@dataclass(frozen=True)
class SummaryRow:
    length: int
    mean: float
    median: float
    max: float
    min: float
    pct_positive: float
    pct_negative: float

    def as_dict(self):
        return asdict(self)


def _values(s) -> np.ndarray:
    if hasattr(s, "values"):
        s = s.values
    elif hasattr(s, "x_mean"):
        s = s.x_mean
    return np.asarray(s, dtype=float)


def jarque_bera(skewness: float, kurtosis: float, n: int) -> tuple[float, float]:
    """JB statistic and its χ²(2) tail probability, floored at ``JB_P_FLOOR``."""
    jb = n / 6.0 * (skewness ** 2 + (kurtosis - 3.0) ** 2 / 4.0)
    return jb, max(math.exp(-jb / 2.0), JB_P_FLOOR)


def moments(v: np.ndarray) -> tuple[float, float]:
    """Population skewness ``m3 / m2^1.5`` and (non-excess) kurtosis ``m4 / m2^2``."""
    n = len(v)
    d = v - v.mean()
    s2 = float(np.sum(d * d))
    s3 = float(np.sum(d ** 3))
    s4 = float(np.sum(d ** 4))
    # Written with raw sums so that integer-valued samples stay exact.
    skew = math.sqrt(n) * s3 / s2 ** 1.5
    kurt = n * s4 / (s2 * s2)
    return skew, kurt


def descriptive_stats(s, adf: bool = True, max_lag: int | None = None) -> StatsRow:
    """
    One column of the descriptive statistics table.

    ``std`` is the sample (n-1) standard deviation. The ADF fields are left
    empty when ``adf`` is false or the series is too short for the test.
    """
    v = _values(s)
    n = len(v)
    if n < MIN_STATS_LENGTH:
        raise DegenerateSeries(f"need at least {MIN_STATS_LENGTH} observations, got {n}")
    if not np.all(np.isfinite(v)):
        raise DegenerateSeries("series contains non-finite values")
    if v.max() == v.min():
        raise DegenerateSeries("constant series has no defined skewness or kurtosis")
    skew, kurt = moments(v)
    jb, jb_p = jarque_bera(skew, kurt, n)
    adf_stat = adf_lags = adf_reject = None
    if adf and n >= MIN_ADF_LENGTH:
        res = adf_test(v, max_lag)
        adf_stat, adf_lags, adf_reject = res.stat, res.lags, res.reject
    return StatsRow(
        n=n,
        mean=float(v.mean()),
        max=float(v.max()),
        min=float(v.min()),
        std=float(v.std(ddof=1)),
        skewness=skew,
        kurtosis=kurt,
        jb_stat=jb,
        jb_p=jb_p,
        adf_stat=adf_stat,
        adf_lags=adf_lags,
        adf_reject=adf_reject,
    )


@dataclass(frozen=True)
class ADFResult:
    stat: float
    lags: int
    nobs: int
    reject: dict

    @property
    def stationary_at_5pct(self) -> bool:
        return self.reject["5%"]


def schwert_lags(n: int) -> int:
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def adf_test(s, max_lag: int | None = None) -> ADFResult:
    """
    Augmented Dickey-Fuller t-statistic with a constant and ``p`` lagged
    differences:

        Δy_t = a + b y_{t-1} + Σ_j g_j Δy_{t-j} + e_t

    ``p`` defaults to ``floor(12 (n/100)^(1/4))``. ``reject[level]`` is True
    when the statistic falls below the asymptotic critical value, i.e. the
    unit root is rejected.
    """
    y = _values(s)
    n = len(y)
    if n < MIN_ADF_LENGTH:
        raise TooShort(f"ADF test needs at least {MIN_ADF_LENGTH} observations, got {n}")
    p = schwert_lags(n) if max_lag is None else int(max_lag)
    if p < 0 or n - p - 1 < p + 3:
        raise TooShort(f"lag order {p} leaves too few observations for n={n}")
    dy = np.diff(y)
    rows = np.arange(p, len(dy))
    cols = [np.ones(len(rows)), y[rows]]
    cols += [dy[rows - j] for j in range(1, p + 1)]
    X = np.column_stack(cols)
    target = dy[rows]

    beta, _, rank, _ = np.linalg.lstsq(X, target, rcond=None)
    if rank < X.shape[1]:
        raise SingularRegression("ADF design matrix is rank deficient (constant series?)")
    resid = target - X @ beta
    dof = len(target) - X.shape[1]
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.inv(X.T @ X)
    se = math.sqrt(cov[1, 1])
    if not se > 0:
        raise SingularRegression("ADF regression has a perfect fit")
    stat = float(beta[1] / se)
    reject = {level: stat < cv for level, cv in ADF_CRITICAL_VALUES.items()}
    return ADFResult(stat, p, len(target), reject)


def leadlag_summary(path) -> SummaryRow:
    """Table-style summary of a lead-lag path; zeros count as neither sign."""
    v = _values(path)
    if len(v) == 0:
        raise EmptyPath("cannot summarize an empty path")
    n = len(v)
    return SummaryRow(
        length=n,
        mean=float(v.mean()),
        median=float(np.median(v)),
        max=float(v.max()),
        min=float(v.min()),
        pct_positive=100.0 * int(np.sum(v > 0)) / n,
        pct_negative=100.0 * int(np.sum(v < 0)) / n,
    )


def sign_change_point(values) -> int:
    """
    Index ``c`` where a single sign change best explains ``values``.

    Picks the split minimizing the number of points whose sign disagrees with
    "one sign before ``c``, the opposite sign from ``c`` on"; the leading sign
    is whichever fits better. Returns the first index of the second regime.
    """
    v = _values(values)
    if len(v) < 2:
        raise EmptyPath("need at least two values to locate a sign change")
    best = None
    for lead in (1.0, -1.0):
        bad_before = np.concatenate([[0], np.cumsum(lead * v <= 0)])
        bad_after = np.concatenate([np.cumsum((lead * v >= 0)[::-1])[::-1], [0]])
        cost = bad_before + bad_after
        c = int(np.argmin(cost[1:-1])) + 1
        if best is None or cost[c] < best[0]:
            best = (int(cost[c]), c)
    return best[1]


STATS_FIELDS = (
    ("Mean", "mean"),
    ("Maximum", "max"),
    ("Minimum", "min"),
    ("Std.Dev", "std"),
    ("Skewness", "skewness"),
    ("Kurtosis", "kurtosis"),
    ("JB", "jb_stat"),
    ("JB p-value", "jb_p"),
    ("ADF", "adf_stat"),
    ("ADF lags", "adf_lags"),
)


def stats_table(rows: dict) -> list[list[str]]:
    """Rows of strings, statistics down and series across, header first."""
    names = list(rows)
    table = [[""] + names]
    for label, attr in STATS_FIELDS:
        line = [label]
        for name in names:
            value = getattr(rows[name], attr)
            if value is None:
                line.append("")
            elif isinstance(value, int):
                line.append(str(value))
            else:
                line.append(f"{value:.4f}")
        table.append(line)
    for level in ADF_CRITICAL_VALUES:
        line = [f"ADF reject {level}"]
        for name in names:
            rej = rows[name].adf_reject
            line.append("" if rej is None else ("yes" if rej[level] else "no"))
        table.append(line)
    return table


SUMMARY_HEADER = ("pair", "length", "mean", "median", "max", "min", "pct_positive", "pct_negative")


def summary_table(rows: dict) -> list[list[str]]:
    table = [list(SUMMARY_HEADER)]
    for name, r in rows.items():
        table.append([name, str(r.length)] + [f"{getattr(r, f):.2f}" for f in SUMMARY_HEADER[2:]])
    return table


def render_text(table: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in table) for i in range(len(table[0]))]
    lines = []
    for k, row in enumerate(table):
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
        if k == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines)
