"""Painleve V / VI transcendents and their maps to the gap-probability scalars.

Hermite exterior: a PV transcendent w(s) (x = s^2 gives the standard form)
parametrises R-tilde, R and h; with an extra constant K it solves the
first-integral generalisation.  Jacobi (alpha = beta): a PVI transcendent
parametrises y, H and sigma.  Seeds are obtained by inverting the maps at one
anchor point from the small-N closed forms.

Soft edge: R_soft is computed twice, from the sigma form (differentiated
once so no square root has to be taken) and from the Hastings-McLeod PII
solution, R_soft(t) = int_t^inf q^2.

All fields are rational, so the extended-precision Taylor integrator
carries them; poles of w stop the integration and truncate the arc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closedform import gue_closed, jue_end_closed, jue_interior_closed
from .errors import DomainError, SeedError, SingularityError
from .reduced import stencil_derivatives
from .specfun import airy_ai, airy_ai_prime
from .taylor import TaylorConfig, series_coefficients, taylor_integrate

POLE_GUARD = 1e-8
DEFAULT_TAYLOR = TaylorConfig(digits=30, tol=1e-22, degree=24, min_step=1e-9)


@dataclass(frozen=True)
class BranchChoice:
    epsilon1: int = 1
    K: float = 0.0

    def __post_init__(self):
        if self.epsilon1 not in (1, -1):
            raise DomainError("epsilon1 must be +1 or -1")

    def K1(self, N: int) -> float:
        return 8 * self.K ** 2 * (N - 2 * self.K)


@dataclass(frozen=True)
class PVParams:
    alpha: float
    beta: float
    gamma: float
    delta: float

    @classmethod
    def gue(cls, N: int, branch: BranchChoice = BranchChoice()) -> "PVParams":
        e, K = branch.epsilon1, branch.K
        return cls((N - 2 * K) * (N + 6 * K) / 8, -(N - 2 * K - e) ** 2 / 8, (4 * K + e) / 2, -0.5)


@dataclass(frozen=True)
class PVIParams:
    alpha: float
    beta: float
    gamma: float
    delta: float

    @classmethod
    def jacobi(cls, alpha1: float, epsilon1: int, K1: float) -> "PVIParams":
        return cls(0.125, -(1 + 2 * epsilon1 * alpha1) ** 2 / 8, 0.0, (K1 - 4 * alpha1 ** 2) / 8)


@dataclass
class TranscendentTrajectory:
    grid: np.ndarray
    w: np.ndarray
    w_prime: np.ndarray
    params: object
    branch: BranchChoice
    variable: str = "s"
    truncated: bool = False
    diagnostics: str = ""
    extra: dict = field(default_factory=dict)


# -- fields (only +, -, *, / so that they can be traced) ---------------------

def pv_x_field(p: PVParams):
    """Standard PV in x: returns (w, dw/dx) -> (dw/dx, d^2w/dx^2)."""
    def f(x, y):
        w, wx = y
        acc = (1 / (2 * w) + 1 / (w - 1)) * wx * wx - wx / x
        acc = acc + (w - 1) * (w - 1) / (x * x) * (p.alpha * w + p.beta / w)
        acc = acc + p.gamma * w / x + p.delta * w * (w + 1) / (w - 1)
        return [wx, acc]
    return f


def pv_s_field(N: int, branch: BranchChoice = BranchChoice()):
    """The same transcendent written directly in s = sqrt(x)."""
    e, K = branch.epsilon1, branch.K
    a, b = (N - 2 * K) * (N + 6 * K), (N - 2 * K - e) ** 2

    def f(s, y):
        w, ws = y
        acc = (1 / (2 * w) + 1 / (w - 1)) * ws * ws - ws / s
        acc = acc + (w - 1) * (w - 1) / (2 * s * s) * (a * w - b / w)
        acc = acc + 2 * (4 * K + e) * w - 2 * s * s * w * (w + 1) / (w - 1)
        return [ws, acc]
    return f


def pvi_x_field(p: PVIParams):
    def f(x, y):
        w, wx = y
        acc = (1 / w + 1 / (w - 1) + 1 / (w - x)) * wx * wx / 2
        acc = acc - (1 / x + 1 / (x - 1) + 1 / (w - x)) * wx
        inner = p.alpha + p.beta * x / (w * w) + p.gamma * (x - 1) / ((w - 1) * (w - 1))
        inner = inner + p.delta * x * (x - 1) / ((w - x) * (w - x))
        acc = acc + w * (w - 1) * (w - x) / (x * x * (x - 1) * (x - 1)) * inner
        return [wx, acc]
    return f


def pvi_s_field(alpha1: float, epsilon1: int, K1: float):
    c = (1 + 2 * epsilon1 * alpha1) ** 2
    d = K1 - 4 * alpha1 ** 2

    def f(s, y):
        w, ws = y
        x = s * s
        acc = (1 / w + 1 / (w - 1) + 1 / (w - x)) * ws * ws / 2
        acc = acc - (1 / s + 2 * s / (x - 1) + 2 * s / (w - x)) * ws
        inner = 1 - c * x / (w * w) + d * x * (x - 1) / ((w - x) * (w - x))
        acc = acc + w * (w - 1) * (w - x) / (2 * x * (x - 1) * (x - 1)) * inner
        return [ws, acc]
    return f


# -- integration -------------------------------------------------------------

def _one_side(field_fn, s0, y0, targets, cfg):
    """Integrate to monotone ``targets``; stops early at a singular point."""
    if not targets:
        return [], ""
    try:
        return taylor_integrate(field_fn, s0, y0, targets, cfg), ""
    except SingularityError as exc:
        return exc.rows, str(exc)


def integrate_transcendent(field_fn, x0: float, w0: float, wp0: float, grid, params,
                           branch: BranchChoice, variable: str = "s",
                           cfg: TaylorConfig = DEFAULT_TAYLOR, moving_pole: bool = False):
    """Integrate w'' = F from (x0, w0, w0') to every grid point on both sides.

    The trajectory is cut to the arc around x0 on which w stays away from
    0, 1 (and from x when ``moving_pole``) by more than POLE_GUARD.
    """
    if w0 in (0.0, 1.0) or not x0 > 0:
        raise DomainError("initial data must have w0 not in {0, 1} and x0 > 0")
    grid = np.asarray(grid, float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be increasing")
    left = [float(t) for t in grid[grid <= x0][::-1]]
    right = [float(t) for t in grid[grid > x0]]
    rows_l, msg_l = _one_side(field_fn, x0, (w0, wp0), left, cfg)
    rows_r, msg_r = _one_side(field_fn, x0, (w0, wp0), right, cfg)
    xs = np.array(left[:len(rows_l)][::-1] + right[:len(rows_r)])
    rows = np.array(rows_l[::-1] + rows_r, dtype=float).reshape(-1, 2)
    w, wp = rows[:, 0], rows[:, 1]
    gaps = [w, w - 1]
    if moving_pole:
        gaps.append(w - (xs * xs if variable == "s" else xs))
    bad = ~np.isfinite(w)
    for g in gaps:
        bad |= np.abs(g) < POLE_GUARD
        # a sign change between samples means w crossed a singular value
        cross = np.flatnonzero(np.sign(g[:-1]) != np.sign(g[1:]))
        # keep the sample on the anchor side of the crossing
        bad[cross[xs[cross + 1] <= x0]] = True
        bad[cross[xs[cross] >= x0] + 1] = True
    diag = "; ".join(m for m in (msg_l, msg_r) if m)
    if np.any(bad):
        centre = int(np.searchsorted(xs, x0))
        lo = max((i for i in np.flatnonzero(bad) if i < centre), default=-1) + 1
        hi = min((i for i in np.flatnonzero(bad) if i >= centre), default=xs.size)
        xs, w, wp = xs[lo:hi], w[lo:hi], wp[lo:hi]
        diag = (diag + "; " if diag else "") + "w reached a singular value"
    return TranscendentTrajectory(xs, w, wp, params, branch, variable,
                                  truncated=xs.size < grid.size, diagnostics=diag)


def integrate_pv(params: PVParams, init, grid, branch: BranchChoice = BranchChoice(),
                 cfg: TaylorConfig = DEFAULT_TAYLOR) -> TranscendentTrajectory:
    """Standard PV in x from init = (x0, w0, dw/dx(x0))."""
    x0, w0, wp0 = init
    return integrate_transcendent(pv_x_field(params), x0, w0, wp0, grid, params, branch, "x", cfg)


def integrate_pv_s(N: int, branch: BranchChoice, init, s_grid,
                   cfg: TaylorConfig = DEFAULT_TAYLOR) -> TranscendentTrajectory:
    """The Hermite transcendent in s from init = (s0, w0, w'(s0))."""
    s0, w0, wp0 = init
    traj = integrate_transcendent(pv_s_field(N, branch), s0, w0, wp0, s_grid,
                                  PVParams.gue(N, branch), branch, "s", cfg)
    traj.extra["N"] = N
    return traj


def integrate_pvi(params: PVIParams, init, grid, branch: BranchChoice = BranchChoice(),
                  cfg: TaylorConfig = DEFAULT_TAYLOR) -> TranscendentTrajectory:
    """Standard PVI in x from init = (x0, w0, dw/dx(x0))."""
    x0, w0, wp0 = init
    if not 0 < x0 < 1:
        raise DomainError("x0 must lie in (0, 1)")
    return integrate_transcendent(pvi_x_field(params), x0, w0, wp0, grid, params, branch, "x", cfg,
                                  moving_pole=True)


def integrate_pvi_s(alpha1: float, K1: float, branch: BranchChoice, init, s_grid,
                    cfg: TaylorConfig = DEFAULT_TAYLOR) -> TranscendentTrajectory:
    s0, w0, wp0 = init
    if not 0 < s0 < 1:
        raise DomainError("s0 must lie in (0, 1)")
    traj = integrate_transcendent(pvi_s_field(alpha1, branch.epsilon1, K1), s0, w0, wp0, s_grid,
                                  PVIParams.jacobi(alpha1, branch.epsilon1, K1), branch, "s", cfg,
                                  moving_pole=True)
    traj.extra.update(alpha1=alpha1, K1=K1)
    return traj


# -- maps --------------------------------------------------------------------

def _pv_R(s, w, wp, N, K):
    first = ((s * wp + N * (w - 1) ** 2 + (2 * s * s - 1) * w + 1)
             * (s * wp - N * (w - 1) ** 2 - (2 * s * s + 1) * w + 1)) / (8 * s * w * (w - 1) ** 2)
    corr = K * (w + 1) * (N * (w - 1) ** 2 - 2 * s * s * w) / (2 * s * w * (w - 1))
    return first - corr + K * K * (w - 1) * (3 * w + 1) / (2 * s * w)


def _pv_h(s, w, wp, N, e, K):
    return (2 * s * w * w - e * wp) / (2 * w * (w - 1)) + ((N - 2 * K) * (w - 1) + e) / (2 * s * w)


def _pv_Rt(s, w, wp, N, e):
    return (e * wp - 2 * s * w) / (4 * w * (w - 1)) - (N * (w - 1) + e) / (4 * s * w)


def _require_s(traj):
    if traj.variable != "s":
        raise DomainError("maps need a trajectory parametrised by s")
    if np.any(np.abs(traj.w) < POLE_GUARD) or np.any(np.abs(traj.w - 1) < POLE_GUARD):
        raise SingularityError("w takes a singular value on the grid")


def map_pv_generalized(traj: TranscendentTrajectory, N: int, branch: BranchChoice | None = None):
    """(R, h) of the first-integral family with constant K1 = 8 K^2 (N - 2K)."""
    _require_s(traj)
    br = branch or traj.branch
    s, w, wp = traj.grid, traj.w, traj.w_prime
    return _pv_R(s, w, wp, N, br.K), _pv_h(s, w, wp, N, br.epsilon1, br.K)


def map_pv(traj: TranscendentTrajectory, N: int, branch: BranchChoice | None = None):
    """(R-tilde, R, h) on the trajectory grid."""
    br = branch or traj.branch
    if br.K != 0:
        raise DomainError("map_pv needs K = 0; use map_pv_generalized")
    R, h = map_pv_generalized(traj, N, br)
    return _pv_Rt(traj.grid, traj.w, traj.w_prime, N, br.epsilon1), R, h


def _field_of(traj):
    if isinstance(traj.params, PVParams):
        return pv_s_field(traj.extra["N"], traj.branch)
    return pvi_s_field(traj.extra["alpha1"], traj.branch.epsilon1, traj.extra["K1"])


def along(traj: "TranscendentTrajectory", fn, order: int) -> np.ndarray:
    """Derivatives 0..order of fn(s, w, w') along a trajectory in s.

    The local Taylor series of w at each grid point is generated from the
    ODE itself, so no finite differences are involved.
    """
    if traj.variable != "s":
        raise DomainError("needs a trajectory parametrised by s")
    fld = _field_of(traj)
    out = np.empty((order + 1, traj.grid.size))
    for i, (s, w, wp) in enumerate(zip(traj.grid, traj.w, traj.w_prime)):
        cw = series_coefficients(fld, s, [w, wp], order + 1)
        S = Jet([s, 1.0] + [0.0] * (order - 1))
        val = fn(S, Jet(cw[0][:order + 1]), Jet(cw[1][:order + 1]))
        out[:, i] = [val.derivative(k) for k in range(order + 1)]
    return out


def pv_R_derivatives(traj: "TranscendentTrajectory", N: int) -> np.ndarray:
    """R, R', R'' along a PV trajectory (generalised family when K != 0)."""
    K = traj.branch.K
    return along(traj, lambda s, w, v: _pv_R(s, w, v, N, K), 2)


def first_integral_residual(s, R, R1, R2, h, N: int, K1: float) -> np.ndarray:
    """Pointwise normalised residual of (sR'' + 2R' - 2s(s-h))^2 = 4h^2 (rad + K1)."""
    s = np.asarray(s, float)
    sh = s - h
    rad = (R + s * R1) ** 2 - 4 * s * s * sh * R - 2 * N * s * s * sh ** 2 + K1
    terms = np.array([(s * R2 + 2 * R1 - 2 * s * sh) ** 2, -4 * h * h * rad])
    return np.abs(terms.sum(0)) / np.max(np.abs(terms), axis=0)


def pv_ode_residual(traj: TranscendentTrajectory) -> float:
    """Largest normalised residual of the s-form PV equation, w'' by finite differences."""
    s = traj.grid
    w, d1, d2, _ = stencil_derivatives(traj.w, s[1] - s[0])
    si = s[3:-3]
    N = traj.extra.get("N")
    e, K = traj.branch.epsilon1, traj.branch.K
    a, b = (N - 2 * K) * (N + 6 * K), (N - 2 * K - e) ** 2
    terms = np.array([d2, -(1 / (2 * w) + 1 / (w - 1)) * d1 * d1, d1 / si,
                      -(w - 1) ** 2 / (2 * si * si) * (a * w - b / w), -2 * (4 * K + e) * w,
                      2 * si * si * w * (w + 1) / (w - 1)])
    return float(np.max(np.abs(terms.sum(0)) / np.max(np.abs(terms), axis=0)))


def map_pvi(traj: TranscendentTrajectory, alpha1: float, branch: BranchChoice | None = None,
            K1: float | None = None):
    """(y, H, sigma) on the trajectory grid."""
    if traj.variable != "s":
        raise DomainError("maps need a trajectory parametrised by s")
    e = (branch or traj.branch).epsilon1
    K1 = traj.extra.get("K1") if K1 is None else K1
    s, w, wp = traj.grid, traj.w, traj.w_prime
    x = s * s
    if np.any(np.abs(w) < POLE_GUARD) or np.any(np.abs(w - 1) < POLE_GUARD) or np.any(np.abs(w - x) < POLE_GUARD):
        raise SingularityError("w takes a singular value on the grid")
    y = (e * s * (x - 1) * wp - (w - 1) * (e * (w + x) + 2 * alpha1 * x)) / (2 * s * (x - 1) * w)
    H = (e * s * (1 - x) * wp + e * (w - 1) * (w + x) - 2 * alpha1 * x) / (2 * s * w)
    sigma = (-(s * (x - 1) * wp - (w - 1) * (w + x)) ** 2 / (8 * s * w * (w - 1) * (w - x))
             - s * (w - 1) * ((K1 - 4) * w - 4 * alpha1 ** 2 * x) / (8 * w * (w - x)))
    return y, H, sigma


class Jet:
    """Truncated Taylor series c_0 + c_1 h + ... (c_k = f^(k)/k!) with field arithmetic."""

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @staticmethod
    def _lift(o, n):
        if isinstance(o, Jet):
            return o.c
        out = np.zeros(n)
        out[0] = o
        return out

    def __add__(self, o):
        return Jet(self.c + self._lift(o, self.c.size))

    __radd__ = __add__

    def __sub__(self, o):
        return Jet(self.c - self._lift(o, self.c.size))

    def __rsub__(self, o):
        return Jet(self._lift(o, self.c.size) - self.c)

    def __neg__(self):
        return Jet(-self.c)

    def __mul__(self, o):
        if not isinstance(o, Jet):
            return Jet(self.c * o)
        n = self.c.size
        return Jet(np.convolve(self.c, o.c)[:n])

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, Jet):
            return Jet(self.c / o)
        n = self.c.size
        q = np.zeros(n)
        for k in range(n):
            q[k] = (self.c[k] - np.dot(o.c[1:k + 1], q[k - 1::-1][:k])) / o.c[0]
        return Jet(q)

    def __rtruediv__(self, o):
        return Jet(self._lift(o, self.c.size)) / self

    def __pow__(self, k: int):
        out = Jet(self._lift(1.0, self.c.size))
        for _ in range(k):
            out = out * self
        return out

    def derivative(self, k: int) -> float:
        return float(self.c[k] * math.factorial(k))


def y_derivatives(traj: TranscendentTrajectory, alpha1: float, order: int = 3) -> np.ndarray:
    """y, y', ..., y^(order) along a PVI trajectory."""
    e = traj.branch.epsilon1

    def y_of(S, W, V):
        x = S * S
        return (e * S * (x - 1) * V - (W - 1) * (e * (W + x) + 2 * alpha1 * x)) / (2 * S * (x - 1) * W)
    return along(traj, y_of, order)


def y_first_integral_residual(s, y, y1, y2, alpha1: float, K1: float) -> np.ndarray:
    """Pointwise normalised residual of the second-order second-degree equation for y."""
    s = np.asarray(s, float)
    m = s * s - 1
    L = (s * m * m * y2 + 2 * m * (2 * s * s - 1) * y1 + 8 * s ** 3 * y ** 3
         + 12 * alpha1 * s * s * y * y + s * (2 * s * s + K1 - 6) * y) ** 2
    R = 4 * ((s * s + 1) * y + alpha1 * s) ** 2 * (
        m * m * (s * y1 + y) ** 2 + s * s * y * y * (4 * s * s * y * y + 8 * alpha1 * s * y + K1 - 4))
    return np.abs(L - R) / np.maximum(np.abs(L), np.abs(R))


def sigma_from_y(s, y, y1, y2, y3, alpha1: float, min_denominator: float = 1e-6):
    """sigma expressed through y and its first three derivatives.

    Returns (sigma, mask); mask flags points whose denominator
    alpha1 s^2 y' - (s^2 - 1) y^2 exceeds ``min_denominator`` relative to
    its larger term.
    """
    s = np.asarray(s, float)
    x = s * s
    num = (x * (x - 1) ** 2 * (y * y3 - y1 * y2)
           + 2 * s * (x - 1) * ((4 * x - 1) * y * y2 - (2 * x - 1) * y1 * y1)
           - 2 * y * (2 * x * (x - 1) ** 2 * y * y + 3 * alpha1 * s ** 3 * (x - 1) * y - 6 * x * x + 3 * x + 1) * y1
           - 2 * s * y * y * ((x - 1) * (3 * x - 1) * y * y + 2 * alpha1 * s * (3 * x - 2) * y
                              + 2 * (alpha1 ** 2 - 1) * x))
    a, b = alpha1 * x * y1, (x - 1) * y * y
    den = a - b
    mask = np.abs(den) > min_denominator * np.maximum(np.abs(a), np.abs(b))
    return num / (4 * den), mask


def y_third_order_residual(s, y, y1, y2, sigma, alpha1: float) -> np.ndarray:
    """Pointwise normalised residual of the equation tying sigma to y, y', y''."""
    s = np.asarray(s, float)
    m = s * s - 1
    terms = np.array([(2 * sigma - alpha1 * s * s * y) ** 2, s * s * m * m * (y * y2 - y1 * y1),
                      2 * s ** 3 * m * y * y1,
                      -y * y * (s * s * m * m * y * y + 2 * alpha1 * s ** 3 * m * y + (alpha1 ** 2 - 1) * s ** 4 + 1)])
    return np.abs(terms.sum(0)) / np.max(np.abs(terms), axis=0)


# -- seeds -------------------------------------------------------------------

def _central(fn, s, step=1e-5):
    return (fn(s + step) - fn(s - step)) / (2 * step)


def _directional(fn, s, w, wp, wpp, step=1e-30):
    """d/ds of fn(s, w(s), w'(s)) by a complex step (fn is rational)."""
    z = fn(complex(s, step), complex(w, step * wp), complex(wp, step * wpp))
    return z.imag / step


def _real_roots(poly, exclude):
    out = []
    for r in poly.roots():
        if abs(r.imag) <= 1e-7 * max(1.0, abs(r)):
            v = float(r.real)
            if all(abs(v - e) > 1e-6 * max(1.0, abs(e)) for e in exclude):
                out.append(v)
    return out


def _newton(F, J, z, what, max_iter=50, tol=1e-14):
    z = np.array(z, float)
    norm = np.linalg.norm(F(z))
    for _ in range(max_iter):
        if norm < tol:
            return z
        step = np.linalg.solve(J(z), -F(z))
        lam = 1.0
        while lam > 1e-6:
            trial = z + lam * step
            tn = np.linalg.norm(F(trial))
            if np.isfinite(tn) and tn < norm:
                break
            lam /= 2
        else:
            break
        z, norm = trial, tn
    if norm < 1e-10:
        return z
    raise SeedError(f"Newton inversion for {what} stalled at residual {norm:.3e}")


def pv_seed_from_closedform(N: int, s0: float, epsilon1: int = 1):
    """(w0, w0') at s0 reproducing the closed-form R-tilde, R and R-tilde'."""
    if epsilon1 not in (1, -1):
        raise DomainError("epsilon1 must be +1 or -1")
    bundle = gue_closed(N, s0)
    Rt, R = bundle.r_off, bundle.r_diag
    dRt = _central(lambda x: gue_closed(N, x).r_off, s0)
    e, s = epsilon1, s0
    W = np.polynomial.Polynomial([0.0, 1.0])
    wp = e * (4 * W * (W - 1) * Rt + (W - 1) * (N * (W - 1) + e) / s + 2 * s * W)
    poly = ((s * wp + N * (W - 1) ** 2 + (2 * s * s - 1) * W + 1)
            * (s * wp - N * (W - 1) ** 2 - (2 * s * s + 1) * W + 1) - 8 * s * R * W * (W - 1) ** 2)
    roots = _real_roots(poly, (0.0, 1.0))

    def F(z):
        w, v = z
        return np.array([_pv_Rt(s, w, v, N, e) - Rt, _pv_R(s, w, v, N, 0.0) - R])

    def J(z):
        w, v = z
        h = 1e-7 * max(1.0, abs(w))
        k = 1e-7 * max(1.0, abs(v))
        return np.column_stack([(F((w + h, v)) - F((w - h, v))) / (2 * h),
                                (F((w, v + k)) - F((w, v - k))) / (2 * k)])

    field_fn = pv_s_field(N, BranchChoice(e))
    best, best_err = None, math.inf
    for r in roots:
        try:
            w, v = _newton(F, J, (r, wp(r)), "the PV seed")
        except (SeedError, np.linalg.LinAlgError):
            continue
        if min(abs(w), abs(w - 1)) < 1e-6:
            continue
        wpp = field_fn(s, [w, v])[1]
        err = abs(_directional(lambda a, b, c: _pv_Rt(a, b, c, N, e), s, w, v, wpp) - dRt)
        if err < best_err:
            best, best_err = (w, v), err
    if best is None or best_err > 1e-5 * max(1.0, abs(dRt)):
        raise SeedError(f"no admissible PV seed at s0 = {s0} (best derivative mismatch {best_err:.3e})")
    w, v = best
    if abs(_pv_R(s, w, v, N, 0.0) - R) > 1e-9 * max(1.0, abs(R)):
        raise SeedError("PV seed does not reproduce R(s0)")
    return float(w), float(v)


def pvi_constant(N: int, alpha: float) -> float:
    """First-integral constant K1 of the symmetric Jacobi problem."""
    a1 = -(N + alpha)
    return 4 * a1 * a1 + 4 * (1 - alpha * alpha)


def _jacobi_branch_data(N, alpha, geometry):
    if geometry == "end":
        return (lambda x: jue_end_closed(N, alpha, alpha, x)), 1.0
    if geometry == "interior":
        return (lambda x: jue_interior_closed(N, alpha, alpha, x)), -1.0
    raise DomainError("geometry must be 'end' or 'interior'")


def jacobi_y(N: int, alpha: float, s: float, geometry: str = "end") -> float:
    """y = (H + alpha1 s)/(1 - s^2) from the closed-form branch variable."""
    closed, _ = _jacobi_branch_data(N, alpha, geometry)
    return (closed(s).h_or_g - (N + alpha) * s) / (1 - s * s)


def pvi_seed_from_closedform(N: int, alpha: float, s0: float, epsilon1: int = 1, geometry: str = "end"):
    """(w0, w0', K1) at s0 reproducing the closed-form y, y' and sigma.

    For the interior geometry the PVI maps carry -sigma.
    """
    if epsilon1 not in (1, -1):
        raise DomainError("epsilon1 must be +1 or -1")
    closed, sgn = _jacobi_branch_data(N, alpha, geometry)
    a1 = -(N + alpha)
    K1 = pvi_constant(N, alpha)
    s, e, x = s0, epsilon1, s0 * s0
    y = jacobi_y(N, alpha, s, geometry)
    dy = _central(lambda t: jacobi_y(N, alpha, t, geometry), s)
    sigma = sgn * closed(s).sigma
    W = np.polynomial.Polynomial([0.0, 1.0])
    poly = (8 * s * sigma * W * (W - 1) * (W - x) + 4 * (s * (x - 1) * W * y + a1 * x * (W - 1)) ** 2
            + x * (W - 1) ** 2 * ((K1 - 4) * W - 4 * a1 * a1 * x))
    field_fn = pvi_s_field(a1, e, K1)

    def y_of(a, b, c):
        xx = a * a
        return (e * a * (xx - 1) * c - (b - 1) * (e * (b + xx) + 2 * a1 * xx)) / (2 * a * (xx - 1) * b)

    best, best_err = None, math.inf
    for w in _real_roots(poly, (0.0, 1.0, x)):
        v = (2 * s * (x - 1) * w * y + (w - 1) * (e * (w + x) + 2 * a1 * x)) / (e * s * (x - 1))
        wpp = field_fn(s, [w, v])[1]
        err = abs(_directional(y_of, s, w, v, wpp) - dy)
        if err < best_err:
            best, best_err = (w, v), err
    if best is None or best_err > 1e-5 * max(1.0, abs(dy)):
        raise SeedError(f"no admissible PVI seed at s0 = {s0} (best derivative mismatch {best_err:.3e})")
    return float(best[0]), float(best[1]), K1


# -- soft edge ---------------------------------------------------------------

def _soft_field(t, y):
    # t-derivative of the sigma form: R''' = -6 R'^2 + 4 t R' - 2 R
    R, R1, R2 = y
    return [R1, R2, -6 * R1 * R1 + 4 * t * R1 - 2 * R]


def _pii_field(t, y):
    q, qp, R = y
    return [qp, 2 * q * q * q + t * q, -q * q]


def _airy_start(t0):
    ai, aip = airy_ai(t0), airy_ai_prime(t0)
    return ai, aip, -t0 * ai * ai + aip * aip


def _desc(t_grid, t0):
    t = np.asarray(t_grid, float)
    if t.ndim != 1 or t.size == 0:
        raise DomainError("empty t grid")
    if np.any(t > t0) or np.any(t < -8):
        raise DomainError(f"t grid must lie within [-8, {t0}]")
    order = np.argsort(-t, kind="stable")
    return t, order


def soft_edge_sigma(t_grid, t0: float = 8.0, cfg: TaylorConfig = DEFAULT_TAYLOR, with_derivatives=False):
    """R_soft on ``t_grid`` from the sigma form, started from its Airy asymptotics at t0."""
    t, order = _desc(t_grid, t0)
    ai, aip, R0 = _airy_start(t0)
    rows = np.array(taylor_integrate(_soft_field, t0, [R0, -ai * ai, -2 * ai * aip], t[order].tolist(), cfg))
    out = np.empty((t.size, 3))
    out[order] = rows
    return out if with_derivatives else out[:, 0]


def soft_edge_pii(t_grid, t0: float = 8.0, cfg: TaylorConfig = DEFAULT_TAYLOR):
    """(q, q', R_soft) from the Hastings-McLeod solution q ~ Ai(t)."""
    t, order = _desc(t_grid, t0)
    ai, aip, R0 = _airy_start(t0)
    rows = np.array(taylor_integrate(_pii_field, t0, [ai, aip, R0], t[order].tolist(), cfg))
    out = np.empty((t.size, 3))
    out[order] = rows
    return out[:, 0], out[:, 1], out[:, 2]


def soft_sigma_residual(t, R, R1, R2) -> np.ndarray:
    """Normalised residual of R''^2 + 4R'(R'^2 - tR' + R) = 0."""
    terms = np.array([R2 * R2, 4 * R1 ** 3, -4 * t * R1 * R1, 4 * R1 * R])
    return np.abs(terms.sum(0)) / np.max(np.abs(terms), axis=0)


def offdiag_edge_residual(t, q, qp) -> np.ndarray:
    """Residual of 2 r r'' - r'^2 + 16 r^3 - 4 t r^2 = 0 for r = -q^2/2 (q'' from PII)."""
    qpp = 2 * q ** 3 + t * q
    r, r1, r2 = -q * q / 2, -q * qp, -(qp * qp + q * qpp)
    terms = np.array([2 * r * r2, -r1 * r1, 16 * r ** 3, -4 * t * r * r])
    return np.abs(terms.sum(0)) / np.max(np.abs(terms), axis=0)
