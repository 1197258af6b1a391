import math

import numpy as np
import pytest

from rmt_gaps.errors import DomainError, SingularityError
from rmt_gaps.taylor import TaylorConfig, series_coefficients, taylor_integrate


def oscillator(s, y):
    return [y[1], -y[0]]


def test_oscillator_matches_trig():
    ts = np.linspace(0.5, 10.0, 20)
    rows = np.array(taylor_integrate(oscillator, 0.0, [0.0, 1.0], ts))
    assert np.max(np.abs(rows[:, 0] - np.sin(ts))) < 1e-14
    assert np.max(np.abs(rows[:, 1] - np.cos(ts))) < 1e-14


def test_backward_with_time_and_division():
    # y' = s / y through y(2) = sqrt(5): y = sqrt(1 + s^2)
    ts = [1.5, 0.7, 0.0, -1.0]
    rows = taylor_integrate(lambda s, y: [s / y[0]], 2.0, [math.sqrt(5.0)], ts)
    for t, (v,) in zip(ts, rows):
        assert v == pytest.approx(math.sqrt(1 + t * t), rel=1e-15)


def test_start_point_is_a_target():
    rows = taylor_integrate(oscillator, 0.0, [0.0, 1.0], [0.0, 1.0])
    assert rows[0] == [0.0, 1.0]


def test_pole_reports_partial_rows():
    # y' = y^2, y(0) = 1 blows up at s = 1
    with pytest.raises(SingularityError) as info:
        taylor_integrate(lambda s, y: [y[0] * y[0]], 0.0, [1.0], [0.5, 0.9, 1.2])
    err = info.value
    assert len(err.rows) == 2
    assert err.rows[1][0] == pytest.approx(10.0, rel=1e-14)
    assert 0.9 < err.last_good < 1.0


def test_series_coefficients():
    # y' = s y through y(0) = 1 is exp(s^2 / 2)
    (c,) = series_coefficients(lambda s, y: [s * y[0]], 0.0, [1.0], 8)
    want = [0, 0, 0, 0, 0, 0, 0, 0, 0]
    for k in range(5):
        want[2 * k] = 1 / (2 ** k * math.factorial(k))
    assert np.allclose(c, want, rtol=1e-15, atol=0)


def test_target_order_and_config():
    with pytest.raises(DomainError):
        taylor_integrate(oscillator, 0.0, [0.0, 1.0], [1.0, 0.5])
    assert taylor_integrate(oscillator, 0.0, [0.0, 1.0], []) == []
    for bad in (dict(digits=10), dict(tol=0.0), dict(tol=1e-40), dict(degree=2)):
        with pytest.raises(DomainError):
            TaylorConfig(**bad)
