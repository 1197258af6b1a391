"""Independent references for the small-s Laurent coefficients of R."""
from fractions import Fraction as F
from math import factorial

N1 = [F(1, 2), F(-1, 3), F(4, 45), F(-8, 945), F(-16, 14175), F(32, 93555), F(1472, 638512875)]
N2 = [F(2), F(-14, 15), F(248, 1575), F(-128, 23625), F(-51104, 27286875),
      F(1356032, 5320940625), F(6898816, 558698765625)]


def general_N(N):
    """First five Laurent coefficients as rational functions of N."""
    N = F(N)
    a, b, c, d = 4 * N ** 2 - 1, 4 * N ** 2 - 9, 4 * N ** 2 - 25, 4 * N ** 2 - 49
    return [N ** 2 / 2,
            -N * (2 * N ** 2 - 1) / a,
            2 * N ** 2 * (4 * N ** 4 - 9 * N ** 2 + 3) / (a ** 2 * b),
            8 * N ** 3 * (4 * N ** 4 - 13 * N ** 2 + 6) / (a ** 3 * b * c),
            8 * N ** 2 * (128 * N ** 10 - 1312 * N ** 8 + 3304 * N ** 6 - 3430 * N ** 4
                          + 1355 * N ** 2 - 315) / (a ** 4 * b ** 2 * c * d)]


def _series_div(num, den, n):
    out = []
    for k in range(n):
        out.append((num[k] - sum(out[j] * den[k - j] for j in range(k))) / den[0])
    return out


def closed_form_sR(N, terms):
    """Coefficients of s R = s E' / (2E) by exact power-series division.

    E is erf (N = 1) or erf (erf - 2 s e^{-s^2} / sqrt(pi)) (N = 2); the
    factors of 2 / sqrt(pi) cancel in the log-derivative.
    """
    n = 2 * terms + 6
    A = [F(0)] * n  # sqrt(pi) erf / 2
    G = [F(0)] * n  # s e^{-s^2}
    for k in range(n // 2):
        if 2 * k + 1 < n:
            A[2 * k + 1] = F((-1) ** k, factorial(k) * (2 * k + 1))
            G[2 * k + 1] = F((-1) ** k, factorial(k))
    if N == 1:
        E = A
    else:
        E = [sum(A[j] * (A[k - j] - G[k - j]) for j in range(k + 1)) for k in range(n)]
    lead = N * N
    sE1 = [k * E[k] for k in range(n)]
    q = _series_div(sE1[lead:], E[lead:], n - lead)
    return [q[2 * k] / 2 for k in range(terms)]
