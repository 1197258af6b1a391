"""Exact small-s Laurent expansion of the Hermite-exterior resolvent R(s).

With b(s) = s R-tilde(s) = sum r_n s^n (even n) the off-diagonal equation
becomes polynomial in b, b', b'':

    s^2 (b'' + 8N b + 24 b^2)^2 = 4 (s^2 + 2b)^2 (b'^2 + 8N b^2 + 16 b^3),

and a(s) = s R(s) follows from s a' - a = 2 s^2 b - 2 b^2.  All arithmetic is
in Fractions, so the coefficients come out as exact rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, NumericalFailure

MAX_TERMS = 12


def _mul(x, y, n):
    out = [Fraction(0)] * n
    for i, xi in enumerate(x[:n]):
        if xi:
            for j, yj in enumerate(y[:n - i]):
                out[i + j] += xi * yj
    return out


def _deriv(x):
    return [k * x[k] for k in range(1, len(x))] + [Fraction(0)]


def _residual(b, N, n):
    """Power-series coefficients (up to s^{n-1}) of the polynomial equation in b."""
    b1 = _deriv(b)
    b2 = _deriv(b1)
    bb = _mul(b, b, n)
    inner = [b2[k] + 8 * N * b[k] + 24 * bb[k] for k in range(n)]
    lhs = [Fraction(0)] * 2 + _mul(inner, inner, n)[:n - 2]
    s2b = [2 * b[k] + (1 if k == 2 else 0) for k in range(n)]
    rad = [x + 8 * N * y + 16 * z for x, y, z in zip(_mul(b1, b1, n), bb, _mul(bb, b, n))]
    rhs = [4 * c for c in _mul(_mul(s2b, s2b, n), rad, n)]
    return [x - y for x, y in zip(lhs, rhs)]


def offdiag_coefficients(N: int, terms: int) -> list[Fraction]:
    """r_0, r_2, ..., r_{2(terms-1)} of s R-tilde(s) about s = 0."""
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    if not 1 <= terms <= MAX_TERMS + 1:
        raise DomainError(f"terms must lie in [1, {MAX_TERMS + 1}]")
    N = int(N)
    r = [Fraction(-N, 2), Fraction(N * N, 4 * N * N - 1)]
    size = 2 * terms + 4
    while len(r) < terms:
        k = 2 * len(r)

        def series(x):
            b = [Fraction(0)] * size
            for i, c in enumerate(r + [x]):
                b[2 * i] = c
            return _residual(b, N, size)

        f0, f1, f2 = series(Fraction(0)), series(Fraction(1)), series(Fraction(2))
        order = next((i for i in range(size) if f1[i] != f0[i]), None)
        if order is None:
            raise NumericalFailure(f"coefficient r_{k} is not determined by the recursion")
        slope = f1[order] - f0[order]
        if f2[order] - f0[order] != 2 * slope:
            raise NumericalFailure(f"recursion for r_{k} is not linear")
        r.append(-f0[order] / slope)
    return r[:terms]


def small_s_recursion(N: int, terms: int) -> list[Fraction]:
    """Laurent coefficients b_{-1}, b_1, b_3, ... of R(s) about s = 0.

    ``terms`` counts the returned coefficients (at most 12).
    """
    if not 1 <= terms <= MAX_TERMS:
        raise DomainError(f"terms must lie in [1, {MAX_TERMS}]")
    r = offdiag_coefficients(N, terms)
    size = 2 * terms
    b = [Fraction(0)] * size
    for i, c in enumerate(r):
        if 2 * i < size:
            b[2 * i] = c
    bb = _mul(b, b, size)
    rhs = [-2 * bb[k] + (2 * b[k - 2] if k >= 2 else 0) for k in range(size)]
    # (n - 1) a_n = rhs_n for the coefficients of a = s R
    return [rhs[2 * i] / (2 * i - 1) for i in range(terms)]


def series_R(N: int, s, terms: int = 6):
    """Truncated small-s series of R(s) with ``terms`` Laurent coefficients."""
    coeffs = [float(c) for c in small_s_recursion(N, terms)]
    total = 0.0
    for i, c in enumerate(coeffs):
        total = total + c * s ** (2 * i - 1)
    return total
