"""Scaling-limit checks: soft-edge convergence, the large-alpha Jacobi to
Hermite limit, the third-order limit equations and the small-s series.

Every limit is tested at finite parameters as a monotonically decreasing
sup-norm deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre, eval_legendre

from . import closedform as cf
from .errors import DomainError
from .gapcore import GapGeometry, log_derivative
from .orthopoly import OrthonormalBasis, WeightSpec
from .painleve import soft_edge_sigma
from .reduced import LIMIT_KINDS, limit_residual
from .series import series_R

SMALL_S_NODES = 48


@dataclass(frozen=True)
class ScalingReport:
    params: tuple
    deviations: tuple
    fitted_order: float

    def __post_init__(self):
        if len(self.params) != len(self.deviations):
            raise DomainError("parameter and deviation sequences differ in length")
        if any(d < 0 for d in self.deviations):
            raise DomainError("deviations must be nonnegative")

    @property
    def decreasing(self) -> bool:
        d = self.deviations
        return all(b < a for a, b in zip(d, d[1:]))


def _report(params, devs) -> ScalingReport:
    p, d = np.asarray(params, float), np.asarray(devs, float)
    order = math.nan
    if p.size >= 2 and np.all(d > 0):
        # deviation ~ C p^(-order)
        order = float(-np.polyfit(np.log(p), np.log(d), 1)[0])
    return ScalingReport(tuple(params), tuple(float(x) for x in devs), order)


def edge_scale(N: int) -> float:
    return math.sqrt(2.0) * N ** (1.0 / 6.0)


def edge_resolvent(N: int, t_grid) -> np.ndarray:
    """r(t) = R(sqrt(2N) + t / c) / c with c = sqrt(2) N^(1/6), Hermite exterior."""
    basis = OrthonormalBasis(WeightSpec.hermite(), N)
    c = edge_scale(N)
    return np.array([0.5 * log_derivative(basis, GapGeometry.exterior(math.sqrt(2.0 * N) + t / c)) / c
                     for t in np.asarray(t_grid, float)])


def edge_kernel(N: int, t: float) -> float:
    """Scaled diagonal of the Hermite kernel at the soft edge."""
    basis = OrthonormalBasis(WeightSpec.hermite(), N)
    c = edge_scale(N)
    return float(basis.kernel_diag(math.sqrt(2.0 * N) + t / c)) / c


def edge_scaling_deviation(N_list, t_grid) -> ScalingReport:
    t = np.asarray(t_grid, float)
    if t.size == 0 or t.min() < -2 or t.max() > 4:
        raise DomainError("t_grid must lie in [-2, 4]")
    Ns = list(N_list)
    if any(b <= a for a, b in zip(Ns, Ns[1:])) or max(Ns) > 100 or min(Ns) < 1:
        raise DomainError("N_list must be increasing with 1 <= N <= 100")
    soft = soft_edge_sigma(t)
    return _report(Ns, [float(np.max(np.abs(edge_resolvent(N, t) - soft))) for N in Ns])


def jacobi_scaled_R(N: int, alpha: float, t: float, geometry: str) -> float:
    """alpha^(-1/2) R_Jacobi(t / sqrt(alpha)) for alpha = beta."""
    s = t / math.sqrt(alpha)
    if N <= 2:
        fn = cf.jue_end_closed if geometry == "end" else cf.jue_interior_closed
        R = fn(N, alpha, alpha, s).r_diag
    else:
        geo = GapGeometry.jacobi_exterior(s) if geometry == "end" else GapGeometry.interior(s)
        dl = log_derivative(OrthonormalBasis(WeightSpec.jacobi(alpha), N), geo)
        R = 0.5 * dl if geometry == "end" else -0.5 * dl
    return R / math.sqrt(alpha)


def hermite_R(N: int, t: float, geometry: str) -> float:
    """Hermite R for the exterior ("end") or interior gap of half-width t."""
    if N <= 2:
        fn = cf.gue_closed if geometry == "end" else cf.gue_interior_closed
        return fn(N, t).r_diag
    geo = GapGeometry.exterior(t) if geometry == "end" else GapGeometry.interior(t)
    dl = log_derivative(OrthonormalBasis(WeightSpec.hermite(), N), geo)
    return 0.5 * dl if geometry == "end" else -0.5 * dl


def j2h_deviation(alpha_list, t_grid, N: int, geometry: str = "end") -> ScalingReport:
    if geometry not in ("end", "interior"):
        raise DomainError("geometry must be 'end' or 'interior'")
    alphas = list(alpha_list)
    if min(alphas) < 10:
        raise DomainError("alpha values must be at least 10")
    t = np.asarray(t_grid, float)
    if np.any(t <= 0):
        raise DomainError("t_grid must be positive")
    ref = np.array([hermite_R(N, x, geometry) for x in t])
    devs = []
    for a in alphas:
        if t.max() >= math.sqrt(a):
            raise DomainError(f"t_grid leaves (0, 1) after scaling by alpha = {a}")
        devs.append(float(np.max(np.abs([jacobi_scaled_R(N, a, x, geometry) for x in t] - ref))))
    return _report(alphas, devs)


def limit_ode_residuals(kind: str, t, values, N: int = 1, branch=None) -> float:
    """Largest normalised residual of a third-order limit equation; see reduced.limit_residual."""
    if kind not in LIMIT_KINDS:
        raise DomainError(f"unknown kind {kind!r}; choose from {sorted(LIMIT_KINDS)}")
    return limit_residual(kind, t, values, N, branch)


def small_s_R(N: int, s: float, nodes: int = SMALL_S_NODES) -> float:
    """Hermite-exterior R(s) from the Gram determinant in a rescaled Legendre basis.

    With x = s y, E(s) = const * s^(N^2) det C(s), C_jk = int_{-1}^{1}
    P_j P_k e^(-s^2 y^2) dy, so 2R = N^2 / s + tr(C^-1 C').  C stays well
    conditioned as s -> 0, unlike the orthonormal-basis Gram matrix.
    """
    if not s > 0:
        raise DomainError("s must be positive")
    y, wq = roots_legendre(nodes)
    P = np.array([eval_legendre(j, y) for j in range(N)])
    w = np.exp(-(s * y) ** 2)
    C = (P * (wq * w)) @ P.T
    dC = (P * (wq * y * (-2 * s * y) * w)) @ P.T
    return 0.5 * (N * N / s + np.trace(np.linalg.solve(C, dC)))


def small_s_compare(N: int, s_eval: float, terms: int = 6):
    """(series value, Gram value, relative deviation) at s_eval."""
    if not 0 < s_eval <= 0.2:
        raise DomainError("s_eval must lie in (0, 0.2]")
    ser = float(series_R(N, s_eval, terms))
    ref = small_s_R(N, s_eval)
    return ser, ref, abs(ser - ref) / abs(ref)
