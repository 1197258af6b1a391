"""Real special functions used by closed forms, normalisations and seeds.

``erf``, ``log_gamma``, the regularised incomplete beta function and the
Airy pair are thin, domain-checked wrappers around the C library / SciPy.
The Gauss hypergeometric function is evaluated here directly because the
closed forms need it with arguments close to 1 and with parameter
combinations (integer ``c - a - b``) where care is required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import DomainError, NumericalFailure


@dataclass(frozen=True)
class EvalAccuracy:
    rel_tol: float = 1e-16
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-6):
            raise DomainError(f"rel_tol must lie in (0, 1e-6], got {self.rel_tol}")
        if self.max_terms < 32:
            raise DomainError("max_terms must be at least 32")


DEFAULT_ACCURACY = EvalAccuracy()
# beyond this the connection formula at 1 - z is cheaper; below it the direct
# series is smoother in z
DIRECT_SERIES_MAX_Z = 0.97


def erf(x):
    """Error function; accepts scalars or arrays."""
    if np.ndim(x) == 0:
        x = float(x)
        if not math.isfinite(x):
            raise DomainError("erf needs a finite argument")
        return math.erf(x)
    return _sp.erf(np.asarray(x, dtype=float))


def erfc(x):
    if np.ndim(x) == 0:
        return math.erfc(float(x))
    return _sp.erfc(np.asarray(x, dtype=float))


def log_gamma(x: float) -> float:
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if x <= 0 and float(x).is_integer():
        return 0.0
    return 1.0 / math.gamma(x)


def _gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    return -1.0 if math.floor(-x) % 2 == 0 else 1.0


def gamma_ratio(num, den) -> float:
    """prod Gamma(num) / prod Gamma(den) via log-gamma; 0 if a denominator hits a pole."""
    if any(_is_nonpos_int(d) for d in den):
        return 0.0
    if any(_is_nonpos_int(n) for n in num):
        raise DomainError("gamma_ratio numerator at a pole")
    sign = 1.0
    acc = 0.0
    for n in num:
        sign *= _gamma_sign(n)
        acc += math.lgamma(n)
    for d in den:
        sign *= _gamma_sign(d)
        acc -= math.lgamma(d)
    return sign * math.exp(acc)


def log_beta(a: float, b: float) -> float:
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def beta_fn(a: float, b: float) -> float:
    return math.exp(log_beta(a, b))


def reg_inc_beta(x, a: float, b: float):
    """Regularised incomplete beta function I_x(a, b)."""
    if not (a > 0 and b > 0):
        raise DomainError(f"reg_inc_beta needs a, b > 0, got a={a}, b={b}")
    xa = np.asarray(x, dtype=float)
    if np.any((xa < 0) | (xa > 1)) or np.any(~np.isfinite(xa)):
        raise DomainError("reg_inc_beta needs x in [0, 1]")
    out = _sp.betainc(a, b, xa)
    return float(out) if np.ndim(x) == 0 else out


def _is_nonpos_int(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def _series_2f1(a, b, c, z, acc: EvalAccuracy, max_terms=None):
    # compensated sum: plain accumulation leaves grid-to-grid jitter that
    # third-order finite differences amplify
    limit = acc.max_terms if max_terms is None else max_terms
    terms = [1.0]
    total = 1.0
    term = 1.0
    small = 0
    for n in range(limit):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        terms.append(term)
        total += term
        if term == 0.0:
            return math.fsum(terms)
        if abs(term) <= acc.rel_tol * abs(total):
            small += 1
            if small >= 2:
                return math.fsum(terms)
        else:
            small = 0
    raise NumericalFailure(
        f"2F1({a}, {b}; {c}; {z}) series did not converge in {limit} terms")


def gauss_2f1(a: float, b: float, c: float, z: float,
              acc: EvalAccuracy = DEFAULT_ACCURACY) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z in (-1, 1]."""
    a, b, c, z = float(a), float(b), float(c), float(z)
    terminating = _is_nonpos_int(a) or _is_nonpos_int(b)
    if _is_nonpos_int(c):
        cut = min(v for v in (a, b) if _is_nonpos_int(v)) if terminating else None
        if cut is None or cut < c:
            raise DomainError(f"2F1 undefined for c = {c}")
    if not (-1.0 < z <= 1.0):
        raise DomainError(f"2F1 argument must lie in (-1, 1], got {z}")
    if z == 0.0:
        return 1.0
    if terminating:
        n_terms = int(-min(v for v in (a, b) if _is_nonpos_int(v))) + 1
        total, term = 1.0, 1.0
        for n in range(n_terms):
            term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
            total += term
        return total
    if z == 1.0:
        if not c - a - b > 0:
            raise DomainError("2F1 at z = 1 diverges unless c - a - b > 0")
        return gamma_ratio((c, c - a - b), (c - a, c - b))
    if z < 0.0:
        # Pfaff: maps (-1, 0) into (0, 1/2)
        return (1.0 - z) ** (-a) * _series_2f1(a, c - b, c, z / (z - 1.0), acc)
    if z <= DIRECT_SERIES_MAX_Z:
        return _series_2f1(a, b, c, z, acc)
    d = c - a - b
    if abs(d - round(d)) < 1e-6:
        # degenerate connection formula; the direct series still converges
        return _series_2f1(a, b, c, z, acc)
    w = 1.0 - z
    first = gamma_ratio((c, d), (c - a, c - b)) * _series_2f1(a, b, 1.0 - d, w, acc)
    second = (gamma_ratio((c, -d), (a, b))
              * w ** d * _series_2f1(c - a, c - b, d + 1.0, w, acc))
    return first + second


def airy_ai(t):
    ai = _sp.airy(np.asarray(t, dtype=float))[0]
    return float(ai) if np.ndim(t) == 0 else ai


def airy_ai_prime(t):
    aip = _sp.airy(np.asarray(t, dtype=float))[1]
    return float(aip) if np.ndim(t) == 0 else aip
