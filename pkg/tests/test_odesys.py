import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmt_gaps import closedform as cf
from rmt_gaps.errors import DomainError, PreconditionError, SingularityError
from rmt_gaps.gapcore import GapGeometry, gap_probability_value
from rmt_gaps.odesys import (GaussState, SolverConfig, exact_state, gauss_aux, gauss_init,
                             gauss_invariant, gauss_rhs, integrate, integrate_gauss,
                             integrate_jacobi, jacobi_end_rhs, jacobi_invariant,
                             precise_state)
from rmt_gaps.orthopoly import OrthonormalBasis, WeightSpec

HERMITE = WeightSpec.hermite()


def gram(N, weight, geo):
    return gap_probability_value(OrthonormalBasis(weight, N), geo)


def test_zero_state_is_fixed_point():
    d = gauss_rhs(1.3, GaussState(0, 0, 0, 0), 3)
    assert np.all(d == 0)
    assert gauss_aux(1.3, 0, 0, 0, 0, 3) == (0.0, -0.0)
    with pytest.raises(SingularityError):
        gauss_rhs(0.0, GaussState(1, 1, 0, 0), 1)


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4), st.floats(0.1, 5), st.integers(1, 8))
def test_invariant_has_zero_derivative(y, s, N):
    q, p, u, w = y
    dq, dp, du, dw, _ = gauss_rhs(s, np.array(y + [0.0]), N)
    r = math.sqrt(2 * N)
    rate = p * dq + q * dp - du * w - u * dw + 0.5 * r * dw - 0.5 * r * du
    scale = 1 + max(abs(v) for v in (p * dq, q * dp, du * w, u * dw, r * dw, r * du))
    assert abs(rate) < 1e-13 * scale


@pytest.mark.parametrize("N", [1, 2])
def test_rhs_matches_resolvent_derivatives(N):
    s, h = 1.1, 1e-4
    y = exact_state(N, HERMITE, "exterior", s)
    fd = (exact_state(N, HERMITE, "exterior", s + h) - exact_state(N, HERMITE, "exterior", s - h)) / (2 * h)
    assert np.allclose(gauss_rhs(s, y, N), fd, rtol=1e-6, atol=1e-7)
    assert abs(gauss_invariant(*y[:4], N)) < 1e-12
    R, Rt = gauss_aux(s, *y[:4], N)
    b = cf.gue_closed(N, s)
    assert R == pytest.approx(b.r_diag, rel=1e-10) and Rt == pytest.approx(b.r_off, rel=1e-10)


def test_init_large_s():
    N, s0 = 1, 6.0
    y = gauss_init(N, s0)
    R, Rt = gauss_aux(s0, *y[:4], N)
    b = cf.gue_closed(N, s0)
    assert R == pytest.approx(b.r_diag, rel=1e-6)
    assert Rt == pytest.approx(b.r_off, rel=1e-6)
    far = gauss_init(N, 8.0)
    assert abs(far[2]) < abs(y[2]) and abs(far[3]) < abs(y[3])
    with pytest.raises(PreconditionError):
        gauss_init(3, 2.0)
    with pytest.raises(DomainError):
        gauss_init(1, 6.0, seed="guess")


@pytest.mark.parametrize("N", [1, 2])
def test_integrate_gauss_matches_closed_form(N):
    s = np.linspace(0.2, 3.0, 40)
    tr = integrate_gauss(N, s_grid=s)
    ref = np.array([cf.gue_closed(N, x).e2 for x in s])
    assert np.max(np.abs(tr.e2 - ref)) < 1e-8
    assert np.max(np.abs(gauss_invariant(*tr.y, N))) < 1e-8


def test_integrate_gauss_N5_against_gram():
    tr = integrate_gauss(5, s_grid=[1.0])
    assert tr.e2[0] == pytest.approx(gram(5, HERMITE, GapGeometry.exterior(1.0)), abs=1e-6)


def test_integrate_gauss_N2_from_six():
    tr = integrate_gauss(2, SolverConfig(s_start=6.0), s_grid=[1.0])
    assert tr.e2[0] == pytest.approx(gram(2, HERMITE, GapGeometry.exterior(1.0)), abs=1e-6)


def test_symmetric_jacobi_keeps_v_zero():
    w = WeightSpec.jacobi(1.0)
    s = np.linspace(0.2, 0.9, 8)
    tr = integrate_jacobi(2, w, "end", s_grid=s, symmetric=False)
    assert np.max(np.abs(tr.y[5])) < 1e-12
    # parity of the two endpoint values
    assert np.allclose(tr.y[0], tr.y[2], atol=1e-10)
    assert np.allclose(tr.y[1], -tr.y[3], atol=1e-10)
    y = exact_state(2, w, "end", 0.5, symmetric=False)
    assert jacobi_end_rhs(0.5, y, w, 2)[5] == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("geometry", ["end", "interior"])
def test_general_integral_is_conserved(geometry):
    w = WeightSpec.jacobi(2.0, 1.0)
    s = np.linspace(0.1, 0.9, 12)
    tr = integrate_jacobi(2, w, geometry, s_grid=s)
    vals = [jacobi_invariant(x, tr.y[:, k], w, 2, geometry) for k, x in enumerate(s)]
    assert np.max(np.abs(vals)) < 1e-9


def test_sigma_derivative_matches_closed_form():
    w, s, h = WeightSpec.jacobi(1.0), 0.6, 1e-5
    tr = integrate_jacobi(1, w, "end", s_grid=[s + h, s, s - h])
    sig = [cf.jue_end_closed(1, 1, 1, x).sigma for x in (s + h, s, s - h)]
    assert np.allclose(tr.sigma, sig, rtol=1e-8)
    dsig = (sig[0] - sig[2]) / (2 * h)
    assert (tr.sigma[0] - tr.sigma[2]) / (2 * h) == pytest.approx(dsig, rel=1e-5)


def test_uniform_end_is_linear():
    s = np.linspace(0.05, 0.95, 19)
    tr = integrate_jacobi(1, WeightSpec.jacobi(0.0), "end", s_grid=s)
    assert np.max(np.abs(tr.e2 - s)) < 1e-8


def test_interior_against_gram():
    w = WeightSpec.jacobi(1.5)
    s = np.linspace(0.05, 0.9, 10)
    tr = integrate_jacobi(2, w, "interior", s_grid=s)
    ref = [gram(2, w, GapGeometry.interior(x)) for x in s]
    assert np.max(np.abs(tr.e2 - ref)) < 1e-6


def test_general_end_against_closed_form():
    w = WeightSpec.jacobi(2.0, 1.0)
    s = np.linspace(0.05, 0.95, 10)
    tr = integrate(1, w, "end", s)
    ref = [cf.jue_end_closed(1, 2.0, 1.0, x).e2 for x in s]
    assert np.max(np.abs(tr.e2 - ref)) < 1e-6


def test_precise_state_agrees_with_double():
    w = WeightSpec.jacobi(0.5)
    a = np.array([float(v) for v in precise_state(2, w, "interior", 0.4)])
    assert np.allclose(a, exact_state(2, w, "interior", 0.4), rtol=1e-10, atol=1e-13)


def test_validation():
    with pytest.raises(DomainError):
        SolverConfig(rel_tol=1e-15)
    with pytest.raises(DomainError):
        SolverConfig(backend="euler")
    with pytest.raises(DomainError):
        integrate(1, HERMITE, "interior", [1.0])
    with pytest.raises(DomainError):
        integrate_jacobi(1, HERMITE, "end", s_grid=[0.5])
    with pytest.raises(PreconditionError):
        integrate_jacobi(1, WeightSpec.jacobi(1.0, 2.0), "end", s_grid=[0.5], symmetric=True)
    with pytest.raises(PreconditionError):
        integrate_gauss(1, SolverConfig(s_start=4.0), s_grid=[1.0, 5.0])
    with pytest.raises(SingularityError):
        integrate_jacobi(1, WeightSpec.jacobi(1.0), "end", s_grid=[0.0])
