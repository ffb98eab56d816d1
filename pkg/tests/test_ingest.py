import math
from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leadlag.errors import (
    DegenerateRange,
    DuplicateDate,
    EmptyInput,
    EmptyIntersection,
    MalformedRow,
    NonPositiveValue,
    TooShort,
)
from leadlag.ingest import (
    RawSeries,
    ReturnSeries,
    align,
    log_returns,
    normalize,
    parse_series,
    prepare_pair,
    shift_series,
)


def days(k, start=1):
    return [date.fromordinal(date(2020, 1, 1).toordinal() + i) for i in range(start - 1, start - 1 + k)]


def raw(values, start=1):
    return RawSeries("s", days(len(values), start), values)


def test_parse_single_row():
    s = parse_series("date,close\n2000-01-04,1455.22", value_col="close")
    assert len(s) == 1
    assert s.dates == (date(2000, 1, 4),)
    assert s.values[0] == 1455.22
    with pytest.raises(TooShort):
        log_returns(s)


def test_parse_sorts_rows():
    a = parse_series("date,value\n2000-01-05,2\n2000-01-04,1\n2000-01-06,3\n")
    b = parse_series("date,value\n2000-01-04,1\n2000-01-05,2\n2000-01-06,3\n")
    assert a.dates == b.dates
    np.testing.assert_array_equal(a.values, b.values)


@pytest.mark.parametrize(
    "text, exc",
    [
        ("date,value\n2000-13-40,5.0\n", MalformedRow),
        ("date,value\n2000-01-04,abc\n", MalformedRow),
        ("date,value\n2000-01-04,nan\n", MalformedRow),
        ("date,value\n2000-01-04,1\n2000-01-04,2\n", DuplicateDate),
        ("date,value\n2000-01-04,0\n", NonPositiveValue),
        ("date,value\n2000-01-04,-3\n", NonPositiveValue),
        ("", EmptyInput),
        ("date,value\n", EmptyInput),
        ("day,value\n2000-01-04,1\n", MalformedRow),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_series(text)


def test_malformed_row_reports_row_number():
    with pytest.raises(MalformedRow) as info:
        parse_series("date,value\n2000-01-04,1\n2000-01-05,x\n", name="spx")
    assert info.value.row == 3
    assert "spx" in str(info.value) and "row 3" in str(info.value)


def test_parse_custom_columns_and_blank_lines():
    s = parse_series("Close,Day,Other\n10,2001-02-03,x\n\n11,2001-02-05,y\n", date_col="Day", value_col="Close")
    assert s.dates == (date(2001, 2, 3), date(2001, 2, 5))
    np.testing.assert_array_equal(s.values, [10, 11])


def test_align_identical_calendars_unchanged():
    a, b = raw([1, 2, 3, 4]), raw([5, 6, 7, 8])
    a2, b2 = align(a, b)
    assert a2 is a and b2 is b


def test_align_drops_missing_date():
    a = raw([1, 2, 3, 4])
    b = RawSeries("b", [a.dates[0], a.dates[1], a.dates[3]], [5, 6, 8])
    a2, b2 = align(a, b)
    assert a2.dates == b2.dates == (a.dates[0], a.dates[1], a.dates[3])
    np.testing.assert_array_equal(a2.values, [1, 2, 4])
    np.testing.assert_array_equal(b2.values, [5, 6, 8])


def test_align_disjoint():
    with pytest.raises(EmptyIntersection):
        align(raw([1, 2, 3]), raw([1, 2, 3], start=10))


def test_align_needs_three_common_dates():
    with pytest.raises(EmptyIntersection):
        align(raw([1, 2, 3, 4]), raw([1, 2, 3, 4], start=3))


def test_shift_series():
    s = raw([1.0, 2.0, 3.0, 4.0])
    fwd = shift_series(s, 1)
    assert fwd.dates == s.dates[1:]
    np.testing.assert_array_equal(fwd.values, [1, 2, 3])
    back = shift_series(s, -1)
    assert back.dates == s.dates[:-1]
    np.testing.assert_array_equal(back.values, [2, 3, 4])
    a2, b2 = align(s, s, shift=1)
    np.testing.assert_array_equal(b2.values, a2.values - 1)


@pytest.mark.parametrize(
    "levels, expected",
    [([100, 100], [0.0]), ([1, math.e], [1.0]), ([2, 0.5], [-math.log(4)])],
)
def test_log_returns_examples(levels, expected):
    r = log_returns(raw(levels))
    np.testing.assert_allclose(r.values, expected, rtol=0, atol=1e-15)


def test_log_returns_dates_are_later_endpoints():
    s = raw([1, 2, 4])
    r = log_returns(s)
    assert r.dates == s.dates[1:]
    assert len(r) == len(s) - 1


def test_normalize_examples():
    r = ReturnSeries("r", [date(2020, 1, d) for d in (1, 2, 3)], [0, 1, 2])
    np.testing.assert_array_equal(normalize(r, "minmax").values, [0, 0.5, 1])
    r2 = ReturnSeries("r", [date(2020, 1, d) for d in (1, 2)], [1, 3])
    np.testing.assert_array_equal(normalize(r2, "zscore").values, [-1, 1])
    const = ReturnSeries("r", [date(2020, 1, d) for d in (1, 2, 3)], [5, 5, 5])
    for mode in ("minmax", "zscore"):
        with pytest.raises(DegenerateRange):
            normalize(const, mode)


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=3, max_size=40), st.floats(1e-3, 1e3), st.floats(-1e3, 1e3))
def test_minmax_affine_invariance(values, alpha, beta):
    v = np.array(values)
    if v.max() - v.min() < 1e-3:
        return
    dates = days(len(v))
    a = normalize(ReturnSeries("r", dates, v), "minmax").values
    b = normalize(ReturnSeries("r", dates, alpha * v + beta), "minmax").values
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=40))
def test_normalized_invariants(values):
    v = np.array(values)
    if v.max() - v.min() < 1e-6:
        return
    dates = days(len(v))
    r = ReturnSeries("r", dates, v)
    mm = normalize(r, "minmax").values
    assert abs(mm.min()) <= 1e-12 and abs(mm.max() - 1) <= 1e-12
    z = normalize(r, "zscore").values
    assert abs(z.mean()) <= 1e-12
    assert abs(np.sqrt(np.mean(z ** 2)) - 1) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.01, 1e4), min_size=2, max_size=40), st.floats(1e-3, 1e3))
def test_log_returns_scale_invariance(levels, c):
    a = log_returns(raw(levels)).values
    b = log_returns(raw([c * v for v in levels])).values
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 30), min_size=3), st.sets(st.integers(0, 30), min_size=3))
def test_align_idempotent(days_a, days_b):
    def build(days):
        days = sorted(days)
        return RawSeries("s", [date.fromordinal(730000 + d) for d in days], [1.0 + d for d in days])

    a, b = build(days_a), build(days_b)
    try:
        a1, b1 = align(a, b)
    except EmptyIntersection:
        assert len(days_a & days_b) < 3
        return
    a2, b2 = align(a1, b1)
    assert a1.dates == b1.dates == a2.dates == b2.dates
    np.testing.assert_array_equal(a1.values, a2.values)
    np.testing.assert_array_equal(b1.values, b2.values)


def test_prepare_pair_lengths():
    a = raw([1, 2, 3, 5, 4])
    b = raw([3, 1, 2, 2.5, 7])
    x, y = prepare_pair(a, b)
    assert len(x) == len(y) == 4
    assert x.dates == y.dates == a.dates[1:]
    assert x.mode == "minmax"
