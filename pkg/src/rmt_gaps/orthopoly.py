"""Orthonormal Hermite/Jacobi polynomials and the kernel built from them.

Polynomials are produced by the forward three-term recurrence in the
orthonormal normalisation

    x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1},

which avoids factorial overflow.  ``weighted=True`` multiplies by
``sqrt(w(x))`` so that the products integrate against Lebesgue measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, PreconditionError
from .specfun import log_beta


@dataclass(frozen=True)
class WeightSpec:
    kind: str = "hermite"
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind == "hermite":
            if self.alpha != 0.0 or self.beta != 0.0:
                raise DomainError("the Hermite weight takes no parameters")
        elif kind == "jacobi":
            if not (self.alpha > -1.0 and self.beta > -1.0):
                raise DomainError(f"Jacobi needs alpha, beta > -1, got {self.alpha}, {self.beta}")
        else:
            raise DomainError(f"unknown weight kind {self.kind!r}")

    @classmethod
    def hermite(cls) -> "WeightSpec":
        return cls("hermite")

    @classmethod
    def jacobi(cls, alpha: float, beta: float | None = None) -> "WeightSpec":
        return cls("jacobi", float(alpha), float(alpha if beta is None else beta))

    @property
    def is_hermite(self) -> bool:
        return self.kind == "hermite"

    @property
    def is_even(self) -> bool:
        return self.is_hermite or self.alpha == self.beta

    @property
    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf) if self.is_hermite else (-1.0, 1.0)

    @property
    def log_mass(self) -> float:
        """log of the total mass of the weight."""
        if self.is_hermite:
            return 0.5 * math.log(math.pi)
        a, b = self.alpha, self.beta
        return (a + b + 1) * math.log(2.0) + log_beta(a + 1, b + 1)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_hermite:
            return np.exp(-x * x)
        return (1.0 - x) ** self.alpha * (1.0 + x) ** self.beta

    def sqrt_weight(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_hermite:
            return np.exp(-0.5 * x * x)
        return (1.0 - x) ** (0.5 * self.alpha) * (1.0 + x) ** (0.5 * self.beta)

    def check_support(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(~np.isfinite(x)):
            raise DomainError("evaluation point must be finite")
        if not self.is_hermite and np.any(np.abs(x) > 1.0):
            raise DomainError("Jacobi evaluation point outside [-1, 1]")


def recurrence_coefficients(weight: WeightSpec, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(b[0..n_max], a[0..n_max+1])`` with ``a[0] = 0``."""
    n = np.arange(n_max + 2, dtype=float)
    if weight.is_hermite:
        return np.zeros(n_max + 1), np.sqrt(n / 2.0)
    al, be = weight.alpha, weight.beta
    ab = al + be
    b = np.empty(n_max + 1)
    b[0] = (be - al) / (ab + 2.0)
    k = n[1:n_max + 1]
    b[1:] = (be * be - al * al) / ((2 * k + ab) * (2 * k + ab + 2))
    a = np.zeros(n_max + 2)
    if n_max + 2 > 1:
        a[1] = math.sqrt(4 * (1 + al) * (1 + be) / ((2 + ab) ** 2 * (3 + ab)))
    k = n[2:]
    a[2:] = np.sqrt(4 * k * (k + al) * (k + be) * (k + ab)
                    / ((2 * k + ab) ** 2 * (2 * k + ab + 1) * (2 * k + ab - 1)))
    return b, a


def orthonormal_table(weight: WeightSpec, n_max: int, x, weighted: bool = False) -> np.ndarray:
    """Values of p_0..p_{n_max} at ``x``; shape ``(n_max + 1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    b, a = recurrence_coefficients(weight, n_max)
    out = np.empty((n_max + 1,) + x.shape)
    p0 = math.exp(-0.5 * weight.log_mass)
    out[0] = weight.sqrt_weight(x) * p0 if weighted else p0
    if n_max >= 1:
        out[1] = (x - b[0]) * out[0] / a[1]
    for k in range(1, n_max):
        out[k + 1] = ((x - b[k]) * out[k] - a[k] * out[k - 1]) / a[k + 1]
    return out


def _tail_pair(weight: WeightSpec, N: int, x) -> tuple[np.ndarray, np.ndarray]:
    """sqrt(w) p_{N-1} and sqrt(w) p_N, streamed without storing the table."""
    x = np.asarray(x, dtype=float)
    b, a = recurrence_coefficients(weight, N)
    prev = np.zeros_like(x)
    cur = weight.sqrt_weight(x) * math.exp(-0.5 * weight.log_mass)
    for k in range(N):
        prev, cur = cur, ((x - b[k]) * cur - a[k] * prev) / a[k + 1]
    return prev, cur


@dataclass(frozen=True)
class CoefficientPolynomials:
    """m(x) = mu0 + mu1 x + mu2 x^2, A = alpha0 + alpha1 x, B, C likewise."""
    mu0: float
    mu1: float
    mu2: float
    alpha0: float
    alpha1: float
    beta0: float
    beta1: float
    gamma0: float
    gamma1: float

    def m(self, x):
        return self.mu0 + self.mu1 * x + self.mu2 * x * x

    def A(self, x):
        return self.alpha0 + self.alpha1 * x

    def B(self, x):
        return self.beta0 + self.beta1 * x

    def C(self, x):
        return self.gamma0 + self.gamma1 * x


def coefficient_polynomials(weight: WeightSpec, N: int, ctx=None) -> CoefficientPolynomials:
    """Coefficients of the differential system for phi, psi.

    ``ctx`` may be an mpmath context to obtain them at its working precision.
    """
    sqrt = ctx.sqrt if ctx is not None else math.sqrt
    num = ctx.mpf if ctx is not None else float
    if weight.is_hermite:
        r = sqrt(num(2 * N))
        return CoefficientPolynomials(num(1), num(0), num(0), num(0), num(-1), r, num(0), r, num(0))
    al, be = num(weight.alpha), num(weight.beta)
    L = 2 * N + al + be
    core = 2 * sqrt(N * (N + al) * (N + be) * (N + al + be)) / L
    # for N = 1 the factor (L - 1) cancels against (N + al + be)
    if N == 1:
        core_sq_over = 4 * (1 + al) * (1 + be) / L ** 2
        b0 = sqrt(core_sq_over * (L + 1))
        g0 = sqrt(core_sq_over) * (1 + al + be) / sqrt(L + 1)
    else:
        b0 = core * sqrt((L + 1) / (L - 1))
        g0 = core * sqrt((L - 1) / (L + 1))
    return CoefficientPolynomials(num(1), num(0), num(-1), (be * be - al * al) / (2 * L), -L / 2,
                                  b0, num(0), g0, num(0))


def precise_recurrence(weight: WeightSpec, n_max: int, ctx) -> tuple[list, list, object]:
    """``(b, a, p0)`` as in ``recurrence_coefficients`` at mpmath precision."""
    if weight.is_hermite:
        b = [ctx.zero] * (n_max + 1)
        a = [ctx.sqrt(ctx.mpf(k) / 2) for k in range(n_max + 2)]
        return b, a, ctx.pi ** ctx.mpf(-0.25)
    al, be = ctx.mpf(weight.alpha), ctx.mpf(weight.beta)
    ab = al + be
    b = [(be - al) / (ab + 2)]
    b += [(be * be - al * al) / ((2 * k + ab) * (2 * k + ab + 2)) for k in range(1, n_max + 1)]
    a = [ctx.zero, ctx.sqrt(4 * (1 + al) * (1 + be) / ((2 + ab) ** 2 * (3 + ab)))]
    a += [ctx.sqrt(4 * k * (k + al) * (k + be) * (k + ab)
                   / ((2 * k + ab) ** 2 * (2 * k + ab + 1) * (2 * k + ab - 1)))
          for k in range(2, n_max + 2)]
    mass = 2 ** (ab + 1) * ctx.beta(al + 1, be + 1)
    return b, a[:n_max + 2], 1 / ctx.sqrt(mass)


@dataclass(frozen=True)
class OrthonormalBasis:
    """First N+1 orthonormal polynomials for ``weight`` together with the
    pair phi = c sqrt(w) p_N, psi = c sqrt(w) p_{N-1}, c^2 = a_{N-1}/a_N."""
    weight: WeightSpec
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")

    @property
    def degree_cap(self) -> int:
        return self.N

    @cached_property
    def leading_coeff_ratio(self) -> float:
        return float(recurrence_coefficients(self.weight, self.N)[1][self.N])

    @cached_property
    def coeffs(self) -> CoefficientPolynomials:
        return coefficient_polynomials(self.weight, self.N)

    def table(self, x, n_max: int | None = None, weighted: bool = True) -> np.ndarray:
        return orthonormal_table(self.weight, self.N if n_max is None else n_max, x, weighted)

    def phi_psi(self, x):
        self.weight.check_support(x)
        psi, phi = _tail_pair(self.weight, self.N, x)
        c = math.sqrt(self.leading_coeff_ratio)
        return c * phi, c * psi

    def phi_psi_prime(self, x):
        """Analytic derivatives from m phi' = A phi + B psi, m psi' = -C phi - A psi."""
        phi, psi = self.phi_psi(x)
        cp = self.coeffs
        x = np.asarray(x, dtype=float)
        m = cp.m(x)
        dphi = (cp.A(x) * phi + cp.B(x) * psi) / m
        dpsi = (-cp.C(x) * phi - cp.A(x) * psi) / m
        return dphi, dpsi

    def kernel_diag(self, x):
        phi, psi = self.phi_psi(x)
        dphi, dpsi = self.phi_psi_prime(x)
        return dphi * psi - phi * dpsi


def eval_orthonormal(basis: OrthonormalBasis, n: int, x):
    if not (0 <= n <= basis.N) or int(n) != n:
        raise PreconditionError(f"degree {n} outside [0, {basis.N}]")
    basis.weight.check_support(x)
    out = orthonormal_table(basis.weight, int(n), x)[int(n)]
    return float(out) if np.ndim(x) == 0 else out


def phi_psi(basis: OrthonormalBasis, x):
    phi, psi = basis.phi_psi(x)
    if np.ndim(x) == 0:
        return float(phi), float(psi)
    return phi, psi


def kernel_sum(basis: OrthonormalBasis, x, y):
    """Direct sum of sqrt(w) p_j products over j < N."""
    ex = orthonormal_table(basis.weight, basis.N - 1, x, weighted=True)
    ey = orthonormal_table(basis.weight, basis.N - 1, y, weighted=True)
    return np.sum(ex * ey, axis=0)


def cd_kernel(basis: OrthonormalBasis, x: float, y: float) -> float:
    basis.weight.check_support([x, y])
    x, y = float(x), float(y)
    if x == y:
        return float(basis.kernel_diag(x))
    scale = max(1.0, abs(x), abs(y))
    if abs(x - y) < 1e-4 * scale:
        # the difference quotient loses digits here
        return float(kernel_sum(basis, x, y))
    fx, sx = basis.phi_psi(x)
    fy, sy = basis.phi_psi(y)
    return float((fx * sy - fy * sx) / (x - y))
