import numpy as np
import pytest

from rmt_gaps import closedform as cf
from rmt_gaps.errors import BranchError, DomainError
from rmt_gaps.reduced import (reduced_residual_profile, residual_reduced_ode,
                              stencil_derivatives)

S_GAUSS = np.linspace(0.3, 2.5, 401)
S_JACOBI = np.linspace(0.3, 0.85, 441)


def wiggle(s, v):
    return v * (1 + 0.01 * np.sin(12 * s))


def gauss_samples(N, kind):
    if kind == "gauss_interior_R":
        b = [cf.gue_interior_closed(N, x) for x in S_GAUSS]
        return np.array([q.r_diag for q in b]), np.array([q.h_or_g for q in b])
    b = [cf.gue_closed(N, x) for x in S_GAUSS]
    if kind == "gauss_Rtilde":
        return np.array([q.r_off for q in b]), None
    return np.array([q.r_diag for q in b]), np.array([q.h_or_g for q in b])


def jacobi_samples(N, alpha, kind):
    fn = cf.jue_end_closed if kind == "jacobi_end_sigma" else cf.jue_interior_closed
    b = [fn(N, alpha, alpha, x) for x in S_JACOBI]
    return np.array([q.sigma for q in b]), np.array([q.h_or_g for q in b])


def test_stencil_exact_on_polynomials():
    s = np.linspace(0, 1, 21)
    f, d1, d2, d3 = stencil_derivatives(s ** 5 - 2 * s ** 3, s[1] - s[0])
    x = s[3:-3]
    assert np.allclose(d1, 5 * x ** 4 - 6 * x ** 2, atol=1e-9)
    assert np.allclose(d2, 20 * x ** 3 - 12 * x, atol=1e-8)
    assert np.allclose(d3, 60 * x ** 2 - 12, atol=1e-6)


@pytest.mark.parametrize("N", [1, 2])
@pytest.mark.parametrize("kind", ["gauss_R", "gauss_Rtilde", "gauss_interior_R"])
def test_gauss_closed_forms_solve_reduced_equations(N, kind):
    v, br = gauss_samples(N, kind)
    exact = residual_reduced_ode(kind, S_GAUSS, v, N, branch=br)
    perturbed = residual_reduced_ode(kind, S_GAUSS, wiggle(S_GAUSS, v), N, branch=br)
    assert exact < 1e-7
    assert perturbed > 1e-2
    assert perturbed > 1e4 * exact


@pytest.mark.parametrize("N", [1, 2])
@pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
@pytest.mark.parametrize("kind", ["jacobi_end_sigma", "jacobi_interior_sigma"])
def test_jacobi_closed_forms_solve_reduced_equations(N, alpha, kind):
    v, br = jacobi_samples(N, alpha, kind)
    exact = residual_reduced_ode(kind, S_JACOBI, v, N, alpha, br)
    perturbed = residual_reduced_ode(kind, S_JACOBI, wiggle(S_JACOBI, v), N, alpha, br)
    assert exact < 1e-7
    assert perturbed > 1e-2
    assert perturbed > 1e4 * exact


@pytest.mark.parametrize("N", range(1, 7))
def test_uniform_weight_sigma_any_N(N):
    b = [cf.jue_zero_alpha_closed(N, x) for x in S_JACOBI]
    sig, H = np.array([q.sigma for q in b]), np.array([q.h_or_g for q in b])
    assert residual_reduced_ode("jacobi_end_sigma", S_JACOBI, sig, N, 0.0, H) < 1e-7


def test_profile_drops_edges():
    v, br = gauss_samples(1, "gauss_R")
    s, r = reduced_residual_profile("gauss_R", S_GAUSS, v, 1, branch=br)
    assert s.size == S_GAUSS.size - 6 and s[0] == S_GAUSS[3]
    assert r.shape == s.shape


def test_wrong_solution_breaks_branch():
    # R' > s^2 / 2 makes h imaginary
    s = np.linspace(0.3, 1.0, 50)
    with pytest.raises(BranchError):
        residual_reduced_ode("gauss_R", s, s ** 3, 1)


def test_input_validation():
    s = np.linspace(0.3, 0.8, 20)
    with pytest.raises(DomainError):
        residual_reduced_ode("nonsense", s, s, 1)
    with pytest.raises(DomainError):
        residual_reduced_ode("gauss_R", s[:5], s[:5], 1)
    with pytest.raises(DomainError):
        residual_reduced_ode("gauss_R", s ** 2, s, 1)
    with pytest.raises(DomainError):
        residual_reduced_ode("gauss_R", s, s[:-1], 1)
    with pytest.raises(DomainError):
        residual_reduced_ode("jacobi_end_sigma", s + 0.5, s, 1)
    with pytest.raises(DomainError):
        residual_reduced_ode("gauss_R", s, s, 0)
    with pytest.raises(DomainError):
        residual_reduced_ode("gauss_R", s, 0 * s, 1, branch=0.5)
