import numpy as np
import pytest

from leadlag.errors import InvalidProfile
from leadlag.ingest import log_returns
from leadlag.synth import LagProfile, as_levels, generate_lagged_pair, lagged_returns, synthetic_dates


def test_zero_lag_no_noise_is_identity():
    x, y = lagged_returns(100, LagProfile.constant(0, 100), 0.0, seed=4)
    np.testing.assert_array_equal(x, y)


def test_constant_lag_copies_source():
    x, y = lagged_returns(100, LagProfile.constant(3, 100), 0.0, seed=4)
    np.testing.assert_array_equal(y[3:], x[:-3])
    assert not np.any(np.isin(y[:3], x))


def test_negative_lag():
    x, y = lagged_returns(64, LagProfile.constant(-2, 64), 0.0, seed=1)
    np.testing.assert_array_equal(y[:-2], x[2:])


def test_step_profile_lags():
    prof = LagProfile.step(5, -5, 200)
    lags = prof.lags()
    assert np.all(lags[:100] == 5) and np.all(lags[100:] == -5)
    x, y = lagged_returns(200, prof, 0.0, seed=9)
    np.testing.assert_array_equal(y[5:100], x[0:95])
    np.testing.assert_array_equal(y[100:195], x[105:200])


def test_deterministic_given_seed():
    prof = LagProfile.constant(7, 300)
    a = generate_lagged_pair(300, prof, 0.3, seed=11)
    b = generate_lagged_pair(300, prof, 0.3, seed=11)
    c = generate_lagged_pair(300, prof, 0.3, seed=12)
    for s, t in zip(a, b):
        assert s.values.tobytes() == t.values.tobytes()
    assert a[0].values.tobytes() != c[0].values.tobytes()


def test_noise_sigma_scales_residual():
    prof = LagProfile.constant(2, 400)
    x0, y0 = lagged_returns(400, prof, 0.0, seed=3)
    x1, y1 = lagged_returns(400, prof, 0.5, seed=3)
    np.testing.assert_array_equal(x0, x1)
    resid = (y1 - y0)[2:]
    assert 0.4 < resid.std() < 0.6


def test_ar_driver_has_autocorrelation():
    x, _ = lagged_returns(5000, LagProfile.constant(0, 5000), 0.0, seed=2, ar=0.6)
    r = np.corrcoef(x[1:], x[:-1])[0, 1]
    assert 0.55 < r < 0.65


def test_normalized_outputs():
    x, y = generate_lagged_pair(64, LagProfile.constant(1, 64), 0.1, seed=0)
    assert x.values.min() == 0 and x.values.max() == 1
    z, _ = generate_lagged_pair(64, LagProfile.constant(1, 64), 0.1, seed=0, mode="zscore")
    assert abs(z.values.mean()) < 1e-12
    assert len(x.dates) == 64 and x.dates == y.dates


@pytest.mark.parametrize(
    "segments, n",
    [
        ((), 100),
        (((1, 2),), 100),
        (((0, 2), (0, 3)), 100),
        (((0, 2), (50, 3), (40, 1)), 100),
        (((0, 25),), 100),
        (((0, -30),), 100),
        (((0, 1), (100, 2)), 100),
    ],
)
def test_invalid_profiles(segments, n):
    with pytest.raises(InvalidProfile):
        LagProfile(segments, n)


def test_generator_preconditions():
    with pytest.raises(InvalidProfile):
        lagged_returns(16, LagProfile.constant(0, 16))
    with pytest.raises(InvalidProfile):
        lagged_returns(64, LagProfile.constant(0, 100))
    with pytest.raises(InvalidProfile):
        lagged_returns(64, LagProfile.constant(0, 64), noise_sigma=-1)


def test_parse_profile():
    assert LagProfile.parse("4", 50).segments == ((0, 4),)
    assert LagProfile.parse("0:5, 250:-5", 500).segments == ((0, 5), (250, -5))
    with pytest.raises(InvalidProfile, match="n/4"):
        LagProfile.parse("25", 100)
    with pytest.raises(InvalidProfile, match="parse"):
        LagProfile.parse("0-5", 100)


def test_levels_round_trip_to_returns():
    x, _ = lagged_returns(200, LagProfile.constant(0, 200), seed=5)
    levels = as_levels(x, "x")
    assert len(levels) == 201
    np.testing.assert_allclose(log_returns(levels).values, x, rtol=0, atol=1e-12)


def test_synthetic_dates_are_business_days():
    d = synthetic_dates(10)
    assert all(day.weekday() < 5 for day in d)
    assert list(d) == sorted(set(d))
