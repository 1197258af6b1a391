"""Explicit small-N gap probabilities and their log-derivative data.

Conventions: for regions that shrink as s grows (Hermite exterior, Jacobi
end intervals) d/ds ln E = 2R; for the interior interval (-s, s)
d/ds ln E = -2R.  For Jacobi weights sigma = (1 - s^2) R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AccuracyError, DomainError, UnsupportedError
from .specfun import erf, erfc, gauss_2f1, log_beta, reg_inc_beta

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class ClosedFormBundle:
    e2: float
    r_diag: float | None = None
    r_off: float | None = None
    sigma: float | None = None
    h_or_g: float | None = None
    dlog_e: float | None = None
    s_sigma: float | None = None


def _check_N(N):
    if N not in (1, 2):
        raise UnsupportedError(f"closed forms exist only for N = 1, 2 (got {N})")


def _check_unit(s):
    if not (0.0 < s < 1.0):
        raise DomainError(f"s must lie in (0, 1), got {s}")


def gue_closed(N: int, s: float) -> ClosedFormBundle:
    """Hermite weight, no eigenvalue outside (-s, s).  r_off is R-tilde."""
    _check_N(N)
    if not s > 0:
        raise DomainError("s must be positive")
    e, g = erf(s), math.exp(-s * s)
    base = g / (_SQRT_PI * e)
    if N == 1:
        R, Rt, E = base, -base, e
    else:
        extra = s * s * g / (0.5 * _SQRT_PI * e - s * g)
        R, Rt = base + extra, base - extra
        E = e * (e - 2.0 / _SQRT_PI * s * g)
    return ClosedFormBundle(E, R, Rt, None, s - 2.0 * Rt, 2.0 * R)


def gue_interior_closed(N: int, t: float) -> ClosedFormBundle:
    """Hermite weight, no eigenvalue inside (-t, t).

    Obtained from the rank-one / rank-two Gram determinants.  r_off is
    (-1)^N times the resolvent kernel R(-t, t); h_or_g is g = t + 2 r_off.
    """
    _check_N(N)
    if not t > 0:
        raise DomainError("t must be positive")
    ec, g = erfc(t), math.exp(-t * t)
    base = g / (_SQRT_PI * ec)
    if N == 1:
        E, R, Rt = ec, base, -base
    else:
        d = ec + 2.0 * t * g / _SQRT_PI
        E = ec * d
        extra = 2.0 * t * t * g / (_SQRT_PI * d)
        R, Rt = base + extra, base - extra
    return ClosedFormBundle(E, R, Rt, None, t + 2.0 * Rt, -2.0 * R)


def _ibeta_gap(s, a, b):
    """I_{(1+s)/2}(a, b) - I_{(1-s)/2}(a, b) and its s-derivative."""
    xp, xm = 0.5 * (1 + s), 0.5 * (1 - s)
    val = reg_inc_beta(xp, a, b) - reg_inc_beta(xm, a, b)
    dens = math.exp((a - 1) * math.log(xp) + (b - 1) * math.log(xm) - log_beta(a, b))
    dens += math.exp((a - 1) * math.log(xm) + (b - 1) * math.log(xp) - log_beta(a, b))
    return val, 0.5 * dens


def _general_e(N, al, be, s, interior):
    def part(a, b):
        v, d = _ibeta_gap(s, a, b)
        return (1.0 - v, -d) if interior else (v, d)

    if N == 1:
        return part(al + 1, be + 1)
    f1, d1 = part(al + 1, be + 2)
    f2, d2 = part(al + 2, be + 1)
    f3, d3 = part(al + 2, be + 2)
    f4, d4 = part(al + 1, be + 1)
    c1, c2 = al + be + 3, al + be + 2
    E = c1 * f1 * f2 - c2 * f3 * f4
    dE = c1 * (d1 * f2 + f1 * d2) - c2 * (d3 * f4 + f3 * d4)
    return E, dE


def _contiguity_guard(resid, scale, what):
    if abs(resid) > 1e-8 * max(1.0, abs(scale)):
        raise AccuracyError(f"contiguous relation {what} violated by {resid:.3e}")


def jue_end_closed(N: int, alpha: float, beta: float, s: float) -> ClosedFormBundle:
    """Jacobi weight, no eigenvalue in (-1, -s) u (s, 1)."""
    _check_N(N)
    _check_unit(s)
    if not (alpha > -1 and beta > -1):
        raise DomainError("alpha, beta must exceed -1")
    if alpha != beta:
        E, dE = _general_e(N, alpha, beta, s, interior=False)
        dl = dE / E
        return ClosedFormBundle(E, 0.5 * dl, None, 0.5 * (1 - s * s) * dl, None, dl)
    al = alpha
    z = s * s
    F1 = gauss_2f1(-al, 0.5, 1.5, z)
    m = (1 - z) ** (al + 1)
    if N == 1:
        E = s * F1 * math.exp(-al * math.log(4.0) - log_beta(al + 1, al + 1))
        sig = 0.5 * m / (s * F1)
        H = (al + 1) * s + m / (s * F1)
    else:
        F2 = gauss_2f1(-al, 1.5, 2.5, z)
        resid = (2 * al + 3) / 3 * s ** 3 * F2 - s * F1 + s * m
        _contiguity_guard(resid, s * F1, "for the end-interval pair")
        E = ((2 * al + 3) / 3 * s ** 4 * F1 * F2
             * math.exp(-(2 * al + 1) * math.log(4.0) - 2 * log_beta(al + 1, al + 2)))
        sig = m / (2 * s) * (1 / F1 + 3 / F2)
        H = (al + 2) * s + m / s * (-1 / F1 + 3 / F2)
    R = sig / (1 - z)
    return ClosedFormBundle(E, R, None, sig, H, 2 * R, s * sig)


def jue_interior_closed(N: int, alpha: float, beta: float, s: float) -> ClosedFormBundle:
    """Jacobi weight, no eigenvalue in (-s, s)."""
    _check_N(N)
    _check_unit(s)
    if not (alpha > -1 and beta > -1):
        raise DomainError("alpha, beta must exceed -1")
    if alpha != beta:
        E, dE = _general_e(N, alpha, beta, s, interior=True)
        dl = dE / E
        return ClosedFormBundle(E, -0.5 * dl, None, -0.5 * (1 - s * s) * dl, None, dl)
    al = alpha
    z = 1 - s * s
    F1 = gauss_2f1(al + 1.5, 1.0, al + 2.0, z)
    if N == 1:
        lead = math.exp(-(2 * al + 1) * math.log(2.0) - log_beta(al + 1, al + 1)) / (al + 1)
        E = s * z ** (al + 1) * lead * F1
        s_sig = (al + 1) / F1
        G = (al + 1) * (s - 2 / (s * F1))
    else:
        F2 = gauss_2f1(al + 2.5, 1.0, al + 2.0, z)
        resid = -(2 * al + 3) * s * s * F2 + F1 + 2 * (al + 1)
        _contiguity_guard(resid, F1, "for the interior pair")
        lead = math.exp(-(2 * al + 2) * math.log(4.0) - 2 * log_beta(al + 2, al + 2)) / (2 * al + 3)
        E = z ** (2 * al + 2) * s ** 4 * lead * F1 * F2
        s_sig = (al + 1) * (1 / F1 + 1 / F2)
        G = (al + 2) * s + 2 * (al + 1) * (1 / (s * F1) - 1 / (s * F2))
    sig = s_sig / s
    R = sig / z
    return ClosedFormBundle(E, R, None, sig, G, -2 * R, s_sig)


def jue_zero_alpha_closed(N: int, s: float) -> ClosedFormBundle:
    """Uniform (alpha = beta = 0) weight, end-interval gap, any N."""
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    _check_unit(s)
    n2 = N * N
    sig = n2 * (1 - s * s) / (2 * s)
    return ClosedFormBundle(s ** n2, n2 / (2 * s), None, sig, N / s, n2 / s, s * sig)
