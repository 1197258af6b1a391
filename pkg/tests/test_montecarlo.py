import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats
from scipy.integrate import cumulative_trapezoid

from rmt_gaps import closedform as cf
from rmt_gaps import montecarlo as mc
from rmt_gaps.errors import DomainError, PreconditionError
from rmt_gaps.gapcore import GapGeometry, IntervalSet
from rmt_gaps.orthopoly import OrthonormalBasis, WeightSpec
from rmt_gaps.specfun import erf

# (ensemble, geometry, analytic E2)
COMBOS = [
    (mc.Ensemble.gue(1), GapGeometry.exterior(1.0), cf.gue_closed(1, 1.0).e2),
    (mc.Ensemble.gue(2), GapGeometry.exterior(1.0), cf.gue_closed(2, 1.0).e2),
    (mc.Ensemble.gue(2), GapGeometry.interior(0.5), cf.gue_interior_closed(2, 0.5).e2),
    (mc.Ensemble.jue(2, 3, 2), GapGeometry.jacobi_exterior(0.5), cf.jue_end_closed(2, 1, 0, 0.5).e2),
    (mc.Ensemble.jue(2, 3, 3), GapGeometry.interior(0.4), cf.jue_interior_closed(2, 1, 1, 0.4).e2),
    (mc.Ensemble.jue(3, 3, 3), GapGeometry.jacobi_exterior(0.9), cf.jue_zero_alpha_closed(3, 0.9).e2),
]


def test_single_gue_eigenvalue_is_gaussian():
    ev = mc.sample_spectra(mc.Ensemble.gue(1), 50_000, 3)[:, 0]
    # sd 1/sqrt(2) gives weight e^{-x^2}
    assert stats.kstest(ev, "norm", args=(0, 1 / math.sqrt(2))).pvalue > 1e-3
    est = mc.empirical_gap(mc.Ensemble.gue(1), GapGeometry.exterior(1.0), 100_000, 11)
    assert abs(est.p_hat - erf(1.0)) < 4 * est.stderr


def test_eigenvalue_sum_has_zero_mean():
    ev = mc.sample_spectra(mc.Ensemble.gue(3), 40_000, 5).sum(axis=1)
    assert abs(ev.mean()) < 4 * ev.std() / math.sqrt(ev.size)


def test_uniform_jue_single_eigenvalue():
    # M1 = M2 = N = 1 gives the uniform weight: P(|x| < s) = s
    est = mc.empirical_gap(mc.Ensemble.jue(1, 1, 1), GapGeometry.jacobi_exterior(0.3), 50_000, 2)
    assert abs(est.p_hat - 0.3) < 4 * est.stderr
    est = mc.empirical_gap(mc.Ensemble.jue(1, 1, 1), GapGeometry.interior(0.3), 50_000, 2)
    assert abs(est.p_hat - cf.jue_interior_closed(1, 0, 0, 0.3).e2) < 4 * est.stderr


def test_empty_region_is_certain():
    for ens in (mc.Ensemble.gue(2), mc.Ensemble.jue(2, 3, 3)):
        est = mc.empirical_gap(ens, GapGeometry.of(IntervalSet()), 2000, 1)
        assert est.p_hat == 1.0 and est.stderr == 0.0


@pytest.mark.parametrize("ens, geo, exact", COMBOS)
def test_acceptance_combinations(ens, geo, exact):
    est = mc.empirical_gap(ens, geo, 100_000, 20240)
    assert abs(est.p_hat - exact) < 4 * est.stderr
    assert est.stderr == pytest.approx(math.sqrt(est.p_hat * (1 - est.p_hat) / est.n_samples))


@pytest.mark.parametrize("ens, geo, exact", COMBOS)
def test_coverage_over_independent_seeds(ens, geo, exact):
    hits = 0
    for seed in range(20):
        est = mc.empirical_gap(ens, geo, 100_000, 1000 + seed)
        hits += abs(est.p_hat - exact) < 4 * est.stderr
    assert hits >= 19


def test_reruns_bit_identical_across_workers():
    ens, geo = mc.Ensemble.jue(2, 3, 3), GapGeometry.interior(0.4)
    a = mc.empirical_gap(ens, geo, 35_000, 9, workers=1)
    b = mc.empirical_gap(ens, geo, 35_000, 9, workers=4)
    assert a == b
    x = mc.sample_spectra(ens, 25_000, 9)
    y = mc.sample_spectra(ens, 25_000, 9)
    assert x.tobytes() == y.tobytes()
    assert mc.sample_spectra(ens, 25_000, 10).tobytes() != x.tobytes()


def test_worker_count_from_environment(monkeypatch):
    monkeypatch.setenv("RMT_GAPS_THREADS", "3")
    assert mc._workers() == 3
    monkeypatch.setenv("RMT_GAPS_THREADS", "many")
    with pytest.raises(DomainError):
        mc._workers()


def test_jue_spectrum_inside_interval():
    ev = mc.sample_spectra(mc.Ensemble.jue(4, 4, 6), 20_000, 4)
    assert np.all(np.abs(ev) < 1)
    assert np.all(np.diff(ev, axis=1) >= 0)
    one = mc.sample_jue(3, 5, 4, 1)
    assert one.eigenvalues.shape == (3,) and one.ensemble.dims == (5, 4)
    assert mc.sample_gue(4, 1).eigenvalues.shape == (4,)


def test_gue_density_matches_kernel():
    N = 8
    ev = mc.sample_spectra(mc.Ensemble.gue(N), 100_000, 17).ravel()
    basis = OrthonormalBasis(WeightSpec.hermite(), N)
    x = np.linspace(-7, 7, 20001)
    cdf = cumulative_trapezoid(basis.kernel_diag(x) / N, x, initial=0.0)
    stat = stats.kstest(ev, lambda v: np.interp(v, x, cdf)).statistic
    assert stat < 0.01


def test_hermitian_eigenvalues_examples():
    assert np.array_equal(mc.hermitian_eigenvalues(np.eye(3)), np.ones(3))
    assert np.allclose(mc.hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1, 2, 3])
    with pytest.raises(PreconditionError):
        mc.hermitian_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(PreconditionError):
        mc.hermitian_eigenvalues(np.ones((2, 3)))


@given(st.integers(0, 2 ** 32 - 1))
def test_hermitian_eigenvalues_against_quartic_roots(seed):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    M = Z + Z.conj().T
    ev = mc.hermitian_eigenvalues(M)
    roots = np.sort(np.roots(np.poly(M)).real)
    assert np.allclose(ev, roots, atol=1e-9 * max(1.0, np.abs(ev).max()))
    assert abs(ev.sum() - np.trace(M).real) < 1e-10 * 4 * max(1.0, np.abs(ev).max())


def test_ensemble_validation():
    with pytest.raises(PreconditionError):
        mc.Ensemble.jue(3, 2, 4)
    with pytest.raises(PreconditionError):
        mc.Ensemble(WeightSpec.jacobi(0.5, 1.0), 2)
    with pytest.raises(DomainError):
        mc.Ensemble.gue(0)
    with pytest.raises(DomainError):
        mc.empirical_gap(mc.Ensemble.gue(1), GapGeometry.exterior(1.0), 999, 1)
    assert mc.Ensemble.jue(2, 3, 4).label() == "jue(M1=3,M2=4)"


def test_dump_format(tmp_path):
    path = tmp_path / "spectra.txt"
    mc.dump_samples(path, mc.Ensemble.gue(3), 5, 42)
    lines = path.read_text().splitlines()
    assert lines[0] == "# ensemble=gue N=3 seed=42"
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert rows.shape == (5, 3)
    assert np.array_equal(rows, mc.sample_spectra(mc.Ensemble.gue(3), 5, 42))
