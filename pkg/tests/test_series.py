import numpy as np
import pytest

from zenolab.series import TimeSeries, read_csv


def test_times_and_integral():
    s = TimeSeries(0.0, 0.5, np.array([0.0, 1.0, 2.0]))
    assert np.allclose(s.times, [0.0, 0.5, 1.0])
    assert s.t_end == 1.0
    assert s.integral() == pytest.approx(1.0)


def test_real_csv_round_trip():
    s = TimeSeries(0.0, 1e-3, np.array([1.0, 1.0 / 3.0, 2.0**-52]))
    text = s.to_csv_text()
    assert text.startswith("t,value\n")
    assert "\r" not in text
    back = read_csv(text)
    assert back.dt == s.dt
    assert np.array_equal(back.values, s.values)  # 17 digits round-trips exactly


def test_complex_csv_round_trip():
    s = TimeSeries(0.1, 0.2, np.array([1 + 2j, -0.5 - 1e-17j]))
    text = s.to_csv_text()
    assert text.startswith("t,re,im\n")
    back = read_csv(text)
    assert back.is_complex
    assert np.array_equal(back.values, s.values)


def test_serialization_is_deterministic():
    vals = np.random.default_rng(7).normal(size=64)
    a = TimeSeries(0.0, 0.25, vals).to_csv_text()
    b = TimeSeries(0.0, 0.25, vals.copy()).to_csv_text()
    assert a == b


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        TimeSeries(0.0, 0.0, np.array([1.0]))
    with pytest.raises(ValueError):
        TimeSeries(0.0, 1.0, np.array([np.nan, 1.0]))
    with pytest.raises(ValueError):
        TimeSeries(0.0, 1.0, np.array([]))
    with pytest.raises(ValueError):
        read_csv("a,b\n1,2\n2,3\n")
    with pytest.raises(ValueError):
        read_csv("t,value\n0,1\n1,2\n3,4\n")  # non-uniform
