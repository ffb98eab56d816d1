"""
Parsing, calendar alignment and transformation of raw level series.

The pipeline is ``parse_series -> align -> log_returns -> normalize``; each
step returns a new immutable series object.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import date, datetime

import numpy as np

from .errors import (
    DegenerateRange,
    DuplicateDate,
    EmptyInput,
    EmptyIntersection,
    LengthMismatch,
    MalformedRow,
    NonPositiveValue,
    TooShort,
)

NORMALIZE_MODES = ("minmax", "zscore")
MIN_COMMON_DATES = 3


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RawSeries:
    """Date-indexed strictly positive levels (prices or index values)."""

    name: str
    dates: tuple[date, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "values", _frozen(self.values))
        if len(self.dates) != len(self.values):
            raise LengthMismatch(f"{self.name}: {len(self.dates)} dates but {len(self.values)} values")
        if len(self.dates) == 0:
            raise EmptyInput(f"{self.name}: no observations")
        for a, b in zip(self.dates, self.dates[1:]):
            if b == a:
                raise DuplicateDate(f"{self.name}: duplicate date {a.isoformat()}")
            if b < a:
                raise ValueError(f"{self.name}: dates not increasing at {b.isoformat()}")
        if not np.all(np.isfinite(self.values)):
            raise MalformedRow(f"{self.name}: non-finite value")
        if np.any(self.values <= 0):
            i = int(np.argmax(self.values <= 0))
            raise NonPositiveValue(f"{self.name}: non-positive level {self.values[i]} on {self.dates[i].isoformat()}")

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Log returns; each date is the later endpoint of its interval."""

    name: str
    dates: tuple[date, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "values", _frozen(self.values))
        if len(self.dates) != len(self.values):
            raise LengthMismatch(f"{self.name}: {len(self.dates)} dates but {len(self.values)} values")

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True, eq=False)
class NormalizedSeries:
    """Standardized series fed to the distance matrix."""

    name: str
    dates: tuple[date, ...]
    values: np.ndarray
    mode: str = "minmax"

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "values", _frozen(self.values))
        if len(self.dates) != len(self.values):
            raise LengthMismatch(f"{self.name}: {len(self.dates)} dates but {len(self.values)} values")
        if self.mode not in NORMALIZE_MODES:
            raise ValueError(f"unknown normalization mode {self.mode!r}")

    def __len__(self):
        return len(self.values)


def _parse_date(text: str) -> date:
    return datetime.strptime(text.strip(), "%Y-%m-%d").date()


def parse_series(text: str, date_col: str = "date", value_col: str = "value", name: str = "series") -> RawSeries:
    """
    Parse CSV text with a header row into a :class:`RawSeries`.

    Rows may appear in any order; the result is sorted by date. Blank lines
    are skipped. Row numbers in error messages count the header as row 1.
    """
    if not text or not text.strip():
        raise EmptyInput(f"{name}: empty input")
    reader = csv.DictReader(io.StringIO(text.lstrip("﻿")))
    header = [h.strip() for h in (reader.fieldnames or [])]
    reader.fieldnames = header
    for col in (date_col, value_col):
        if col not in header:
            raise MalformedRow(f"{name}: missing column {col!r} (header: {','.join(header)})", row=1)

    rows: dict[date, float] = {}
    for rowno, row in enumerate(reader, start=2):
        raw_date, raw_value = row.get(date_col), row.get(value_col)
        if all(v is None or not str(v).strip() for v in row.values()):
            continue
        if raw_date is None or raw_value is None:
            raise MalformedRow(f"{name}: row {rowno}: missing field", row=rowno)
        try:
            d = _parse_date(raw_date)
        except ValueError:
            raise MalformedRow(f"{name}: row {rowno}: bad date {raw_date!r}", row=rowno) from None
        try:
            v = float(raw_value.strip())
        except ValueError:
            raise MalformedRow(f"{name}: row {rowno}: non-numeric value {raw_value!r}", row=rowno) from None
        if not math.isfinite(v):
            raise MalformedRow(f"{name}: row {rowno}: non-finite value {raw_value!r}", row=rowno)
        if v <= 0:
            raise NonPositiveValue(f"{name}: row {rowno}: non-positive value {v}")
        if d in rows:
            raise DuplicateDate(f"{name}: row {rowno}: duplicate date {d.isoformat()}")
        rows[d] = v

    if not rows:
        raise EmptyInput(f"{name}: no data rows")
    dates = sorted(rows)
    return RawSeries(name, dates, [rows[d] for d in dates])


def read_series(path, date_col: str = "date", value_col: str = "value") -> RawSeries:
    """Read and parse a CSV file; the series is named after the file stem."""
    from pathlib import Path

    path = Path(path)
    return parse_series(path.read_text(encoding="utf-8"), date_col, value_col, name=path.stem)


def shift_series(s: RawSeries, periods: int) -> RawSeries:
    """
    Re-date ``s`` by ``periods`` observations of its own calendar.

    With ``periods=1`` the level observed at ``dates[i]`` is attached to
    ``dates[i+1]``; observations pushed off either end are dropped.
    """
    if periods == 0:
        return s
    n = len(s)
    if abs(periods) >= n:
        raise TooShort(f"{s.name}: shift {periods} leaves no observations")
    if periods > 0:
        return RawSeries(s.name, s.dates[periods:], s.values[: n - periods])
    k = -periods
    return RawSeries(s.name, s.dates[: n - k], s.values[k:])


def align(a: RawSeries, b: RawSeries, shift: int = 0) -> tuple[RawSeries, RawSeries]:
    """
    Restrict both series to their common dates.

    ``shift`` re-dates ``b`` via :func:`shift_series` before intersecting.
    """
    if shift:
        b = shift_series(b, shift)
    common = sorted(set(a.dates).intersection(b.dates))
    if len(common) < MIN_COMMON_DATES:
        raise EmptyIntersection(
            f"{a.name} and {b.name} share {len(common)} dates (need at least {MIN_COMMON_DATES})"
        )
    if len(common) == len(a) and len(common) == len(b):
        return a, b

    def restrict(s):
        keep = set(common)
        idx = [i for i, d in enumerate(s.dates) if d in keep]
        return RawSeries(s.name, [s.dates[i] for i in idx], s.values[idx])

    return restrict(a), restrict(b)


def log_returns(s: RawSeries) -> ReturnSeries:
    """``value[i] = ln(level[i+1]) - ln(level[i])``, dated at ``dates[i+1]``."""
    if len(s) < 2:
        raise TooShort(f"{s.name}: need at least 2 levels for a return, got {len(s)}")
    if np.any(s.values <= 0):
        raise NonPositiveValue(f"{s.name}: non-positive level")
    logs = np.log(s.values)
    return ReturnSeries(s.name, s.dates[1:], logs[1:] - logs[:-1])


def normalize(r: ReturnSeries, mode: str = "minmax") -> NormalizedSeries:
    """
    Standardize a return series.

    ``minmax`` maps onto [0, 1]; ``zscore`` subtracts the mean and divides by
    the population standard deviation.
    """
    if mode not in NORMALIZE_MODES:
        raise ValueError(f"unknown normalization mode {mode!r}; expected one of {NORMALIZE_MODES}")
    v = np.asarray(r.values, dtype=float)
    if len(v) < 2:
        raise TooShort(f"{r.name}: need at least 2 values to normalize")
    if mode == "minmax":
        lo, hi = v.min(), v.max()
        if not hi > lo:
            raise DegenerateRange(f"{r.name}: constant series cannot be min-max scaled")
        out = (v - lo) / (hi - lo)
    else:
        mu = v.mean()
        sd = np.sqrt(np.mean((v - mu) ** 2))
        if not sd > 0:
            raise DegenerateRange(f"{r.name}: zero variance series cannot be z-scored")
        out = (v - mu) / sd
    return NormalizedSeries(r.name, r.dates, out, mode)


def prepare_pair(
    a: RawSeries, b: RawSeries, mode: str = "minmax", shift: int = 0
) -> tuple[NormalizedSeries, NormalizedSeries]:
    """Align two level series and turn them into normalized return series."""
    a, b = align(a, b, shift=shift)
    return normalize(log_returns(a), mode), normalize(log_returns(b), mode)
