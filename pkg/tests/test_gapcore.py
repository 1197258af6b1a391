import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rmt_gaps.errors import DomainError, PreconditionError
from rmt_gaps.gapcore import (GapGeometry, IntervalSet, QuadratureRule, factorization_check, finite_rank_state,
                              gap_probability, gap_probability_value, gram_matrix, log_derivative)
from rmt_gaps.orthopoly import OrthonormalBasis, WeightSpec, kernel_sum
from rmt_gaps.specfun import erf

H = WeightSpec.hermite()


def test_interval_set_validation():
    with pytest.raises(DomainError):
        IntervalSet.of((1.0, 0.0))
    with pytest.raises(DomainError):
        IntervalSet.of((0.0, 2.0), (1.0, 3.0))
    assert IntervalSet.of((-1, 0), (0.5, 1)).complement(-2, 2).intervals == ((-2, -1), (0, 0.5), (1, 2))
    with pytest.raises(DomainError):
        GapGeometry.jacobi_exterior(1.2)


def test_gram_matrix_examples():
    b = OrthonormalBasis(H, 3)
    assert np.all(gram_matrix(b, IntervalSet()) == 0)
    assert np.max(np.abs(gram_matrix(b, IntervalSet.of((-math.inf, math.inf))) - np.eye(3))) < 1e-12
    g = gram_matrix(OrthonormalBasis(H, 1), IntervalSet.of((-0.7, 0.7)))
    assert g[0, 0] == pytest.approx(erf(0.7), abs=1e-14)
    bj = OrthonormalBasis(WeightSpec.jacobi(-0.5, 0.3), 4)
    assert np.max(np.abs(gram_matrix(bj, IntervalSet.of((-1, 1))) - np.eye(4))) < 1e-12


def test_gap_probability_examples():
    for s in (0.3, 1.0, 2.2):
        assert gap_probability(OrthonormalBasis(H, 1), GapGeometry.exterior(s)).value == pytest.approx(erf(s), abs=1e-14)
    for N in (1, 3, 5):
        b = OrthonormalBasis(WeightSpec.jacobi(0), N)
        assert gap_probability(b, GapGeometry.jacobi_exterior(0.7)).value == pytest.approx(0.7 ** (N * N), abs=1e-13)
    assert gap_probability(OrthonormalBasis(H, 3), GapGeometry.interior(0.0)).value == 1.0


def test_tiny_probability_keeps_relative_accuracy():
    b = OrthonormalBasis(WeightSpec.jacobi(0), 6)
    res = gap_probability(b, GapGeometry.jacobi_exterior(0.05))
    assert res.log_value == pytest.approx(36 * math.log(0.05), rel=1e-6)


@pytest.mark.parametrize("w,variant", [(H, "exterior"), (H, "interior"), (WeightSpec.jacobi(1.5), "jacobi-exterior"),
                                       (WeightSpec.jacobi(0.5, 2), "interior")])
def test_monotone_in_s(w, variant):
    hi = 3.0 if w.is_hermite else 0.98
    s = np.linspace(0.02, hi, 30)
    b = OrthonormalBasis(w, 3)
    E = np.array([gap_probability_value(b, GapGeometry(variant, x)) for x in s])
    d = np.diff(E)
    assert np.all(d >= -1e-14) if variant != "interior" else np.all(d <= 1e-14)


def test_edge_limits():
    b = OrthonormalBasis(WeightSpec.jacobi(1), 3)
    assert gap_probability_value(b, GapGeometry.jacobi_exterior(0.999999)) == pytest.approx(1.0, abs=1e-9)
    assert gap_probability_value(b, GapGeometry.interior(0.999)) < 1e-6


@pytest.mark.parametrize("N", [1, 2])
def test_fredholm_expansion_rank_consistency(N):
    b = OrthonormalBasis(H, N)
    s = 0.9
    x, w = np.polynomial.legendre.leggauss(80)
    x, w = s * x, s * w
    K = kernel_sum(b, x[:, None], x[None, :])
    one = np.sum(w * np.diag(K))
    two = 0.5 * np.sum(w[:, None] * w[None, :] * (np.outer(np.diag(K), np.diag(K)) - K * K.T))
    expansion = 1 - one + (two if N == 2 else 0.0)
    assert gap_probability_value(b, GapGeometry.interior(s)) == pytest.approx(expansion, abs=1e-10)


@pytest.mark.parametrize("w", [H, WeightSpec.jacobi(0.5), WeightSpec.jacobi(2, 1)])
def test_quadrature_refinement_stable(w):
    geo = GapGeometry.exterior(1.3) if w.is_hermite else GapGeometry.jacobi_exterior(0.6)
    b = OrthonormalBasis(w, 6)
    e200 = gap_probability(b, geo, QuadratureRule.gauss_legendre(200)).value
    e400 = gap_probability(b, geo, QuadratureRule.gauss_legendre(400)).value
    assert abs(e200 - e400) < 1e-11


def test_log_derivative_matches_finite_difference():
    b = OrthonormalBasis(WeightSpec.jacobi(2, 1), 3)
    for geo in (GapGeometry.jacobi_exterior, GapGeometry.interior):
        s, h = 0.5, 1e-5
        fd = (math.log(gap_probability_value(b, geo(s + h))) - math.log(gap_probability_value(b, geo(s - h)))) / (2 * h)
        assert log_derivative(b, geo(s)) == pytest.approx(fd, rel=1e-7)


def test_finite_rank_state_requires_positive_gap():
    b = OrthonormalBasis(H, 2)
    with pytest.raises(PreconditionError):
        finite_rank_state(b, IntervalSet.of((-math.inf, math.inf)))


def test_factorization_examples():
    lhs, rhs, d = factorization_check(1, H, GapGeometry.exterior(0.6))
    assert d < 1e-12 and lhs == pytest.approx(erf(0.6), abs=1e-13)
    assert factorization_check(2, H, GapGeometry.exterior(0.8))[2] < 1e-9
    assert factorization_check(3, WeightSpec.jacobi(1), GapGeometry.jacobi_exterior(0.5))[2] < 1e-9
    with pytest.raises(PreconditionError):
        factorization_check(2, WeightSpec.jacobi(1, 2), GapGeometry.interior(0.5))


@given(st.integers(1, 8), st.floats(0.1, 2.5))
def test_factorization_hermite_property(N, s):
    assert factorization_check(N, H, GapGeometry.interior(s))[2] < 1e-9
