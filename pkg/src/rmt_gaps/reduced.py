"""Residuals of the scalar second- and third-order ODEs obeyed by R and sigma.

Samples are given on a uniform grid; derivatives come from 7-point central
stencils, so three points are lost at each edge.  Every equation is written
as a list of additive terms and the residual at a point is
|sum of terms| / max |term|.

Branch handling: the square-root variables (h for the Hermite exterior, g
for the Hermite interior, H and G for the Jacobi systems) are computed from
the derivative of the samples; ``branch`` fixes their sign, either as a
constant +1 / -1 or as an array whose pointwise sign is used (for example
h = s - 2 R-tilde from a closed form).  The Hermite second-order equations
are evaluated in squared form, which does not depend on the sign placed in
front of the inner radical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchError, DomainError

EDGE = 3
RADICAND_TOL = 1e-8


def stencil_derivatives(values, step: float):
    """(f, f', f'', f''') at the interior points of a uniform grid."""
    f = np.asarray(values, dtype=float)
    if f.ndim != 1 or f.size < 2 * EDGE + 1:
        raise DomainError(f"need at least {2 * EDGE + 1} uniformly spaced samples")
    if not step > 0:
        raise DomainError("grid step must be positive")
    m3, m2, m1, c, p1, p2, p3 = (f[k:f.size - 6 + k] for k in range(7))
    d1 = (-m3 + 9 * m2 - 45 * m1 + 45 * p1 - 9 * p2 + p3) / (60 * step)
    d2 = (2 * m3 - 27 * m2 + 270 * m1 - 490 * c + 270 * p1 - 27 * p2 + 2 * p3) / (180 * step ** 2)
    d3 = (m3 - 8 * m2 + 13 * m1 - 13 * p1 + 8 * p2 - p3) / (8 * step ** 3)
    return c, d1, d2, d3


def _uniform_step(s):
    s = np.asarray(s, dtype=float)
    steps = np.diff(s)
    if steps.size == 0 or not np.all(steps > 0):
        raise DomainError("grid must be strictly increasing")
    if np.max(np.abs(steps - steps[0])) > 1e-9 * abs(steps[0]) + 1e-14:
        raise DomainError("grid must be uniform")
    return s[EDGE:s.size - EDGE], float(steps[0])


def _root(radicand, sign, what):
    scale = np.maximum(1.0, np.abs(radicand))
    bad = radicand < -RADICAND_TOL * scale
    if np.any(bad):
        raise BranchError(f"negative radicand in {what} (min {radicand.min():.3e})")
    return sign * np.sqrt(np.clip(radicand, 0.0, None))


def _sign(branch, size):
    if branch is None:
        return np.ones(size)
    b = np.asarray(branch, dtype=float)
    if b.ndim == 0:
        if b not in (1.0, -1.0):
            raise DomainError("scalar branch must be +1 or -1")
        return np.full(size, float(b))
    if b.size == size + 2 * EDGE:
        b = b[EDGE:b.size - EDGE]
    if b.size != size:
        raise DomainError("branch array must match the sample grid")
    return np.where(b >= 0, 1.0, -1.0)


def _gauss_exterior(s, R, R1, R2, R3, N, a1, sg):
    h = _root(s * s - 2 * R1, sg, "h")
    sh = s - h
    rad = (R + s * R1) ** 2 - 4 * s * s * sh * R - 2 * N * s * s * sh ** 2
    lhs = s * R2 + 2 * R1 - 2 * s * sh
    return [lhs ** 2, -4 * h * h * rad]


def _gauss_offdiag(s, Rt, Rt1, Rt2, Rt3, N, a1, sg):
    lhs = (s * Rt2 + 2 * Rt1 + 8 * N * s * Rt + 24 * s * s * Rt * Rt) ** 2
    rhs = 4 * (s + 2 * Rt) ** 2 * ((Rt + s * Rt1) ** 2 + 8 * N * s * s * Rt ** 2 + 16 * s ** 3 * Rt ** 3)
    return [lhs, -rhs]


def _gauss_interior(t, r, r1, r2, r3, N, a1, sg):
    g = _root(t * t + 2 * r1, sg, "g")
    tg = t - g
    rad = (r + t * r1) ** 2 + 4 * t * tg * (t * r) - 2 * N * t * t * tg ** 2
    lhs = t * r2 + 2 * r1 + 2 * t * tg
    return [lhs ** 2, -4 * g * g * rad]


def _jacobi_common(s, S, S1, S2, S3, a1, X):
    m = 1 - s * s
    return [m * m * S3, -2 * s * m * S2, -2 / s ** 2 * m * S1, -m * m * S2 ** 2 / S1,
            a1 * s / (2 * S1) * (a1 * s + X) / X ** 2 * (m * S2 - 2 / s * S1) ** 2,
            4 * a1 * X * S, 2 * S * S / (s * s * S1) * X * (X - a1 * s)]


def _jacobi_end(s, S, S1, S2, S3, N, a1, sg):
    H = _root(a1 * a1 * s * s - 2 * (1 - s * s) * S1, sg, "H")
    return _jacobi_common(s, S, S1, S2, S3, a1, H) + [2 * (a1 * s + H) * (a1 / s - H * S1)]


def _jacobi_interior(s, S, S1, S2, S3, N, a1, sg):
    G = _root(a1 * a1 * s * s + 2 * (1 - s * s) * S1, sg, "G")
    return _jacobi_common(s, S, S1, S2, S3, a1, G) + [-2 * (a1 * s + G) * (a1 / s + G * S1)]


def _limit_exterior(t, r, r1, r2, r3, N, a1, sg):
    h = _root(t * t - 2 * r1, sg, "h")
    return [r3, 2.0 + 0 * t, -r2 ** 2 / r1, -2 / t ** 2 * r1, 2 / t ** 2 * r ** 2 / r1 * h * (t + h),
            2 * r1 * h * (t - h), -(4 * r + 2 / t) * h, (t * r2 - 2 * r1) ** 2 / (2 * t * r1 * h ** 2) * (t - h)]


def _limit_interior(t, r, r1, r2, r3, N, a1, sg):
    g = _root(t * t + 2 * r1, sg, "g")
    return [r3, -2.0 + 0 * t, -r2 ** 2 / r1, -2 / t ** 2 * r1, 2 / t ** 2 * r ** 2 / r1 * g * (t + g),
            2 * r1 * g * (t - g), -(4 * r - 2 / t) * g, (t * r2 - 2 * r1) ** 2 / (2 * t * r1 * g ** 2) * (t - g)]


def _third_exterior(t, r, r1, r2, r3, N, a1, sg):
    h = _root(t * t - 2 * r1, sg, "h")
    return [t * r3, 3 * r2, -4 * t, -4 * h * h * (t * r1 + r + 2 * N * t), 2 * h,
            8 * t * (r + N * t) * h, (t - r2) * (2 * t * t - t * r2 - 2 * r1) / h ** 2]


def _third_interior(t, r, r1, r2, r3, N, a1, sg):
    g = _root(t * t + 2 * r1, sg, "g")
    return [t * r3, 3 * r2, 4 * t, -4 * g * g * (t * r1 + r - 2 * N * t), -2 * g,
            8 * t * (r - N * t) * g, -(t + r2) * (2 * t * t + t * r2 + 2 * r1) / g ** 2]


def _edge_third(t, r, r1, r2, r3, N, a1, sg):
    return [2 * r1 * r3, -r2 ** 2, 8 * r1 ** 3, -4 * t * r1 ** 2]


@dataclass(frozen=True)
class _Kind:
    terms: object
    jacobi: bool = False
    positive: bool = True


REDUCED_KINDS = {
    "gauss_R": _Kind(_gauss_exterior),
    "gauss_Rtilde": _Kind(_gauss_offdiag),
    "gauss_interior_R": _Kind(_gauss_interior),
    "jacobi_end_sigma": _Kind(_jacobi_end, jacobi=True),
    "jacobi_interior_sigma": _Kind(_jacobi_interior, jacobi=True),
}

LIMIT_KINDS = {
    "j2g_end": _Kind(_limit_exterior),
    "j2g_interior": _Kind(_limit_interior),
    "gauss_third_order": _Kind(_third_exterior),
    "gauss_interior_third_order": _Kind(_third_interior),
    "edge_third_order": _Kind(_edge_third, positive=False),
}


def _profile(table, kind, s, values, N, alpha, branch):
    if kind not in table:
        raise DomainError(f"unknown equation kind {kind!r}; choose from {sorted(table)}")
    spec = table[kind]
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    s_in, step = _uniform_step(s)
    if len(values) != len(s):
        raise DomainError("values and grid differ in length")
    f, d1, d2, d3 = stencil_derivatives(values, step)
    a1 = 0.0
    if spec.jacobi:
        if not alpha > -1:
            raise DomainError("alpha must exceed -1")
        if np.any((s_in <= 0) | (s_in >= 1)):
            raise DomainError("Jacobi samples must lie in (0, 1)")
        a1 = -(N + alpha)
    elif spec.positive and np.any(s_in <= 0):
        raise DomainError("samples must lie at s > 0")
    terms = spec.terms(s_in, f, d1, d2, d3, N, a1, _sign(branch, s_in.size))
    terms = np.array(np.broadcast_arrays(*terms))
    scale = np.max(np.abs(terms), axis=0)
    return s_in, np.abs(terms.sum(axis=0)) / np.where(scale > 0, scale, 1.0)


def reduced_residual_profile(kind: str, s, values, N: int, alpha: float = 0.0, branch=None):
    """Grid interior and pointwise normalised residuals of a reduced ODE."""
    return _profile(REDUCED_KINDS, kind, s, values, N, alpha, branch)


def residual_reduced_ode(kind: str, s, values, N: int, alpha: float = 0.0, branch=None) -> float:
    """Largest normalised residual of ``values`` in the chosen reduced ODE.

    Kinds: gauss_R and gauss_Rtilde (Hermite exterior R and R-tilde),
    gauss_interior_R (Hermite interior R with d ln E = -2R), jacobi_end_sigma
    and jacobi_interior_sigma (sigma = (1 - s^2) R for alpha = beta).
    """
    return float(np.max(reduced_residual_profile(kind, s, values, N, alpha, branch)[1]))


def limit_residual_profile(kind: str, t, values, N: int = 1, branch=None):
    return _profile(LIMIT_KINDS, kind, t, values, N, 0.0, branch)


def limit_residual(kind: str, t, values, N: int = 1, branch=None) -> float:
    """Largest normalised residual in the scaling-limit third-order equations.

    Kinds: j2g_end / j2g_interior (large-alpha limits of the Jacobi sigma
    equations), gauss_third_order / gauss_interior_third_order (derivatives
    of the Hermite second-order equations), edge_third_order (soft-edge r).
    """
    return float(np.max(limit_residual_profile(kind, t, values, N, branch)[1]))
