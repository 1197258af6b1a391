import math

import numpy as np
import pytest

from rmt_gaps import closedform as cf
from rmt_gaps.errors import DomainError, UnsupportedError
from rmt_gaps.gapcore import GapGeometry, gap_probability_value, log_derivative
from rmt_gaps.orthopoly import OrthonormalBasis, WeightSpec
from rmt_gaps.specfun import erf, gauss_2f1


def test_gue_examples():
    s = 1.3
    assert cf.gue_closed(1, s).e2 == pytest.approx(erf(s), rel=1e-15)
    ref = erf(s) * (erf(s) - 2 / math.sqrt(math.pi) * s * math.exp(-s * s))
    assert cf.gue_closed(2, s).e2 == pytest.approx(ref, rel=1e-14)
    b = cf.gue_closed(1, 7.0)
    assert b.r_diag + b.r_off == 0.0 and b.r_diag < 1e-20
    with pytest.raises(UnsupportedError):
        cf.gue_closed(3, 1.0)
    with pytest.raises(DomainError):
        cf.gue_closed(1, -1.0)


def test_jue_examples():
    assert cf.jue_end_closed(1, 0, 0, 0.37).e2 == pytest.approx(0.37, rel=1e-14)
    al, s = 1.7, 0.6
    sig = 0.5 * (1 - s * s) ** (al + 1) / (s * gauss_2f1(-al, 0.5, 1.5, s * s))
    assert cf.jue_end_closed(1, al, al, s).sigma == pytest.approx(sig, rel=1e-14)
    sig = (al + 1) / (s * gauss_2f1(al + 1.5, 1, al + 2, 1 - s * s))
    assert cf.jue_interior_closed(1, al, al, s).sigma == pytest.approx(sig, rel=1e-14)
    assert cf.jue_interior_closed(1, 0.5, 0.5, 1e-6).e2 == pytest.approx(1.0, abs=1e-5)
    z = cf.jue_zero_alpha_closed(3, 0.9)
    assert z.e2 == pytest.approx(0.9 ** 9, rel=1e-14)
    assert z.sigma * 2 * 0.9 / (1 - 0.81) == pytest.approx(9, rel=1e-14)
    for N in (1, 2):
        a = cf.jue_zero_alpha_closed(N, 0.4)
        b = cf.jue_end_closed(N, 0.0, 0.0, 0.4)
        assert a.e2 == pytest.approx(b.e2, rel=1e-13) and a.sigma == pytest.approx(b.sigma, rel=1e-12)
    with pytest.raises(DomainError):
        cf.jue_end_closed(1, 0.5, 0.5, 1.0)


GRID = np.linspace(0.05, 0.95, 20)


@pytest.mark.parametrize("N", [1, 2])
@pytest.mark.parametrize("al,be", [(0, 0), (0.5, 0.5), (2, 2), (2, 1), (-0.5, 0.3)])
def test_jacobi_closed_forms_match_gram(N, al, be):
    b = OrthonormalBasis(WeightSpec.jacobi(al, be), N)
    for s in GRID:
        assert abs(cf.jue_end_closed(N, al, be, s).e2 - gap_probability_value(b, GapGeometry.jacobi_exterior(s))) < 1e-10
        assert abs(cf.jue_interior_closed(N, al, be, s).e2 - gap_probability_value(b, GapGeometry.interior(s))) < 1e-10


@pytest.mark.parametrize("N", [1, 2])
def test_hermite_closed_forms_match_gram(N):
    b = OrthonormalBasis(WeightSpec.hermite(), N)
    for s in np.linspace(0.1, 3.0, 20):
        assert abs(cf.gue_closed(N, s).e2 - gap_probability_value(b, GapGeometry.exterior(s))) < 1e-10
        assert abs(cf.gue_interior_closed(N, s).e2 - gap_probability_value(b, GapGeometry.interior(s))) < 1e-10


@pytest.mark.parametrize("fn,geo,kind", [
    (lambda N, s: cf.gue_closed(N, s), GapGeometry.exterior, "hermite"),
    (lambda N, s: cf.gue_interior_closed(N, s), GapGeometry.interior, "hermite"),
    (lambda N, s: cf.jue_end_closed(N, 1.5, 1.5, s), GapGeometry.jacobi_exterior, "jacobi"),
    (lambda N, s: cf.jue_interior_closed(N, 2, 1, s), GapGeometry.interior, "jacobi"),
])
@pytest.mark.parametrize("N", [1, 2])
def test_log_derivative_consistency(fn, geo, kind, N):
    s, h = 0.55, 1e-6
    fd = (math.log(fn(N, s + h).e2) - math.log(fn(N, s - h).e2)) / (2 * h)
    assert fn(N, s).dlog_e == pytest.approx(fd, rel=1e-5)
    w = WeightSpec.hermite() if kind == "hermite" else (WeightSpec.jacobi(1.5) if geo == GapGeometry.jacobi_exterior
                                                      else WeightSpec.jacobi(2, 1))
    assert fn(N, s).dlog_e == pytest.approx(log_derivative(OrthonormalBasis(w, N), geo(s)), rel=1e-9)


def test_interior_s_sigma_stable_near_zero():
    b = cf.jue_interior_closed(2, 1.0, 1.0, 1e-4)
    assert math.isfinite(b.s_sigma) and b.s_sigma == pytest.approx(b.sigma * 1e-4, rel=1e-12)
