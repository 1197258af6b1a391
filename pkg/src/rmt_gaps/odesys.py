"""Coupled first-order systems for symmetric gap probabilities.

Three geometries are covered:

* ``exterior``: Hermite weight, region (-inf, -s) u (s, inf);
* ``end``: Jacobi weight, region (-1, -s) u (s, 1);
* ``interior``: Jacobi weight, region (-s, s).

The evolved quantities are the endpoint values q = Q(a), p = P(a) of
Q = (1 - K)^{-1} phi, P = (1 - K)^{-1} psi, the inner products u, v, w of
phi/psi with Q/P over the region, and ln E.  The diagonal resolvent values
are algebraic in these and are recomputed at every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, PreconditionError, SingularityError
from .gapcore import (DEFAULT_ORDER, GapGeometry, finite_rank_state,
                      hermite_cutoff)
from .orthopoly import OrthonormalBasis, WeightSpec, coefficient_polynomials, precise_recurrence
from .taylor import TaylorConfig, taylor_integrate


# -- state containers --------------------------------------------------------

@dataclass(frozen=True)
class GaussState:
    q: float
    p: float
    u: float
    w: float

    def as_array(self):
        return np.array([self.q, self.p, self.u, self.w])

    @classmethod
    def from_array(cls, y):
        return cls(*map(float, y[:4]))


@dataclass(frozen=True)
class JacobiGenState:
    q_plus: float
    p_plus: float
    q_minus: float
    p_minus: float
    u: float
    v: float
    w: float
    R_plus: float = math.nan
    R_minus: float = math.nan

    def as_array(self):
        return np.array([self.q_minus, self.p_minus, self.q_plus, self.p_plus, self.u, self.v, self.w])

    @classmethod
    def from_array(cls, y):
        qm, pm, qp, pp, u, v, w = map(float, y[:7])
        return cls(qp, pp, qm, pm, u, v, w)


_BACKENDS = ("auto", "rk", "taylor")


@dataclass(frozen=True)
class SolverConfig:
    """Integration settings.

    ``backend`` selects double-precision Runge-Kutta (``rk``, using
    ``method``/``rel_tol``/``abs_tol``), the extended-precision Taylor
    integrator (``taylor``), or ``auto``: Taylor once N reaches
    ``taylor_from_N``, where the neighbouring-solution growth outruns double
    precision over the standard ranges.
    """
    rel_tol: float = 1e-12
    abs_tol: float = 1e-40
    max_step: float = math.inf
    s_start: float | None = None
    s_end: float | None = None
    min_step: float = 1e-12
    method: str = "DOP853"
    backend: str = "auto"
    taylor_from_N: int = 4
    taylor: TaylorConfig = field(default_factory=TaylorConfig)

    def __post_init__(self):
        if not self.rel_tol >= 1e-13:
            raise DomainError("rel_tol must be at least 1e-13")
        if not (self.abs_tol > 0 and self.max_step > 0):
            raise DomainError("tolerances and max_step must be positive")
        if self.backend not in _BACKENDS:
            raise DomainError(f"backend must be one of {_BACKENDS}, got {self.backend!r}")

    def uses_taylor(self, N: int) -> bool:
        if self.backend == "auto":
            return N >= self.taylor_from_N
        return self.backend == "taylor"


# The fields below use only +, -, *, / so that they serve float arrays,
# mpmath numbers and the Taylor tracer alike.

# -- Hermite exterior --------------------------------------------------------

def _gauss_field(s, y, r):
    q, p, u, w = y[:4]
    R = q * q * (r + 2 * w) + p * p * (r - 2 * u) - 2 * s * q * p + 2 * q * q * p * p / s
    return [
        -s * q + p * (r - 2 * u) + 2 * q * q * p / s,
        s * p - q * (r + 2 * w) - 2 * q * p * p / s,
        -2 * q * q,
        -2 * p * p,
        2 * R,
    ]


def gauss_aux(s, q, p, u, w, N):
    """(R, R-tilde) from the algebraic relations of the Hermite system."""
    r = math.sqrt(2.0 * N)
    R = q * q * (r + 2 * w) + p * p * (r - 2 * u) - 2 * s * q * p + 2 * q * q * p * p / s
    Rt = -q * p / s
    return R, Rt


def gauss_rhs(s: float, state, N: int):
    """Derivative of (q, p, u, w, ln E).  Accepts a GaussState or an array."""
    if s == 0:
        raise SingularityError("the Hermite system is singular at s = 0")
    y = state.as_array() if isinstance(state, GaussState) else np.asarray(state, float)
    return np.array(_gauss_field(s, y, math.sqrt(2.0 * N)))


def gauss_invariant(q, p, u, w, N):
    """pq - (uw - beta0 w / 2 + gamma0 u / 2); zero along trajectories."""
    r = math.sqrt(2.0 * N)
    return p * q - (u * w - 0.5 * r * w + 0.5 * r * u)


# -- Jacobi, general parameters ---------------------------------------------

def _interior_sign(geometry: str) -> float:
    if geometry == "end":
        return 1.0
    if geometry == "interior":
        return -1.0
    raise DomainError(f"Jacobi geometry must be 'end' or 'interior', got {geometry!r}")


def _jacobi_general_aux(s, y, c, sg):
    qm, pm, qp, pp, u, v, w = y[:7]
    a0, a1 = c.alpha0, c.alpha1
    m = 1 - s * s
    R0 = (qp * pm - qm * pp) / (2 * s)
    cg = c.gamma0 - w * (2 * a1 + 1)
    cb = c.beta0 + u * (2 * a1 - 1)
    quad = sg * 2 * s * m * R0 * R0
    Rm = (cg * qm * qm + cb * pm * pm + (a0 - a1 * s + v) * 2 * qm * pm + quad) / m
    Rp = (cg * qp * qp + cb * pp * pp + (a0 + a1 * s + v) * 2 * qp * pp + quad) / m
    return Rm, Rp, R0


def _jacobi_general_field(s, y, c, sg):
    qm, pm, qp, pp, u, v, w = y[:7]
    a0, a1 = c.alpha0, c.alpha1
    m = 1 - s * s
    Rm, Rp, R0 = _jacobi_general_aux(s, y, c, sg)
    cb = c.beta0 + u * (2 * a1 - 1)
    cg = -c.gamma0 + w * (2 * a1 + 1)
    return [
        (-(a0 - a1 * s + v) * qm - cb * pm - sg * 2 * m * qp * R0) / m,
        (-cg * qm - (-a0 + a1 * s - v) * pm - sg * 2 * m * pp * R0) / m,
        ((a0 + a1 * s + v) * qp + cb * pp - sg * 2 * m * qm * R0) / m,
        (cg * qp + (-a0 - a1 * s - v) * pp - sg * 2 * m * pm * R0) / m,
        -sg * (qm * qm + qp * qp),
        -sg * (qm * pm + qp * pp),
        -sg * (pm * pm + pp * pp),
        sg * (Rm + Rp),
    ]


def jacobi_aux(s, y, weight: WeightSpec, N: int, geometry: str):
    """(R_minus, R_plus, R0) for the general Jacobi system."""
    return _jacobi_general_aux(s, y, coefficient_polynomials(weight, N), _interior_sign(geometry))


def _jacobi_general_rhs(s, y, weight, N, geometry):
    if s <= 0 or s >= 1:
        raise SingularityError(f"the Jacobi system is singular at s = {s}")
    c = coefficient_polynomials(weight, N)
    return np.array(_jacobi_general_field(s, y, c, _interior_sign(geometry)))


# -- Jacobi, alpha = beta -----------------------------------------------------

def _jacobi_sym_aux(s, q, p, u, w, c, sg):
    a1 = c.alpha1
    m = 1 - s * s
    R0 = q * p / s
    R = ((c.gamma0 - w * (2 * a1 + 1)) * q * q + (c.beta0 + u * (2 * a1 - 1)) * p * p
         + 2 * a1 * s * q * p + sg * 2 * s * m * R0 * R0) / m
    return R, R0


def _jacobi_sym_field(s, y, c, sg):
    q, p, u, w = y[:4]
    a1 = c.alpha1
    m = 1 - s * s
    R, _ = _jacobi_sym_aux(s, q, p, u, w, c, sg)
    return [
        (a1 * s * q + (c.beta0 + u * (2 * a1 - 1)) * p + sg * 2 * m / s * q * q * p) / m,
        (-a1 * s * p + (-c.gamma0 + w * (2 * a1 + 1)) * q - sg * 2 * m / s * q * p * p) / m,
        -sg * 2 * q * q,
        -sg * 2 * p * p,
        sg * 2 * R,
    ]


def jacobi_sym_aux(s, q, p, u, w, weight, N, geometry):
    """(R, R0) for the symmetric reduction; R0 = qp/s."""
    return _jacobi_sym_aux(s, q, p, u, w, coefficient_polynomials(weight, N), _interior_sign(geometry))


def _jacobi_sym_rhs(s, y, weight, N, geometry):
    if s <= 0 or s >= 1:
        raise SingularityError(f"the Jacobi system is singular at s = {s}")
    c = coefficient_polynomials(weight, N)
    return np.array(_jacobi_sym_field(s, y, c, _interior_sign(geometry)))


def jacobi_end_rhs(s, state, weight: WeightSpec, N: int):
    return _jacobi_dispatch(s, state, weight, N, "end")


def jacobi_interior_rhs(s, state, weight: WeightSpec, N: int):
    return _jacobi_dispatch(s, state, weight, N, "interior")


def _jacobi_dispatch(s, state, weight, N, geometry):
    if isinstance(state, JacobiGenState):
        y = np.append(state.as_array(), 0.0)
        return _jacobi_general_rhs(s, y, weight, N, geometry)
    y = np.asarray(state, float)
    if y.size in (4, 5):
        return _jacobi_sym_rhs(s, y, weight, N, geometry)
    return _jacobi_general_rhs(s, y, weight, N, geometry)


def jacobi_invariant(s, y, weight, N, geometry):
    """(1 - s^2)(R_- - R_+) - 2 alpha1 v (end) or its interior mirror; zero on trajectories."""
    c = coefficient_polynomials(weight, N)
    Rm, Rp, _ = jacobi_aux(s, y, weight, N, geometry)
    diff = (Rm - Rp) if geometry == "end" else (Rp - Rm)
    return (1 - s * s) * diff - 2 * c.alpha1 * y[5]


# -- exact states from the finite-rank resolvent ----------------------------

_GEOMETRY_OF = {"exterior": GapGeometry.exterior, "end": GapGeometry.jacobi_exterior,
                "interior": GapGeometry.interior}


def exact_state(N: int, weight: WeightSpec, geometry: str, s: float, symmetric: bool | None = None,
                order: int = DEFAULT_ORDER) -> np.ndarray:
    """ODE state vector (including ln E) computed from the Gram matrices at s."""
    basis = OrthonormalBasis(weight, N)
    geo = _GEOMETRY_OF[geometry](s)
    st = finite_rank_state(basis, geo.region(weight), order)
    Q, P = st.QP([-s, s])
    if weight.is_hermite:
        return np.array([Q[1], P[1], st.u, st.w, st.log_e])
    if symmetric is None:
        symmetric = weight.is_even
    if symmetric:
        return np.array([Q[1], P[1], st.u, st.w, st.log_e])
    return np.array([Q[0], P[0], Q[1], P[1], st.u, st.v, st.w, st.log_e])


def _neumann_state(N, weight, geometry, s, symmetric, order=DEFAULT_ORDER):
    """Leading-order seed: Q ~ phi, P ~ psi, inner products by quadrature."""
    from .gapcore import weighted_nodes
    basis = OrthonormalBasis(weight, N)
    region = _GEOMETRY_OF[geometry](s).region(weight)
    if weight.is_hermite:
        L = hermite_cutoff(N) + 8.0
        region = region.clip(-L, L)
    x, wt = weighted_nodes(weight, region, order, N)
    # weighted_nodes folds w(x) into wt; phi/psi carry sqrt(w) already
    w_x = weight(x)
    keep = w_x > 0
    phi, psi = basis.phi_psi(x[keep])
    ww = wt[keep] / w_x[keep]
    u = float(np.sum(ww * phi * phi))
    v = float(np.sum(ww * phi * psi))
    w = float(np.sum(ww * psi * psi))
    trace = float(np.sum(ww * basis.kernel_diag(x[keep])))
    log_e = math.log1p(-trace)
    f, g = basis.phi_psi(np.array([-s, s]))
    if weight.is_hermite or symmetric:
        return np.array([f[1], g[1], u, w, log_e])
    return np.array([f[0], g[0], f[1], g[1], u, v, w, log_e])


_REGION_OF = {"exterior": lambda s: ((-mpmath.inf, -s), (s, mpmath.inf)),
              "end": lambda s: ((-1, -s), (s, 1)),
              "interior": lambda s: ((-s, s),)}


def precise_state(N: int, weight: WeightSpec, geometry: str, s: float, symmetric: bool | None = None,
                  digits: int = 40) -> list:
    """``exact_state`` evaluated in mpmath arithmetic with ``digits`` digits.

    The region inner products use tanh-sinh quadrature, which absorbs the
    algebraic endpoint factors of the Jacobi weight.
    """
    if geometry not in _REGION_OF:
        raise DomainError(f"unknown geometry {geometry!r}")
    if symmetric is None:
        symmetric = weight.is_even
    ctx = mpmath.mp
    with ctx.workdps(digits):
        b, a, p0 = precise_recurrence(weight, N, ctx)
        if weight.is_hermite:
            sqrt_w = lambda x: ctx.exp(-x * x / 2)  # noqa: E731
        else:
            al, be = ctx.mpf(weight.alpha), ctx.mpf(weight.beta)
            sqrt_w = lambda x: (1 - x) ** (al / 2) * (1 + x) ** (be / 2)  # noqa: E731
        cache = {}

        def table(x):
            if x not in cache:
                vals, prev = [sqrt_w(x) * p0], ctx.zero
                for k in range(N):
                    vals.append(((x - b[k]) * vals[k] - a[k] * prev) / a[k + 1])
                    prev = vals[k]
                cache[x] = vals
            return cache[x]

        sm = ctx.mpf(s)
        G = ctx.zeros(N + 1, N + 1)
        pieces = _REGION_OF[geometry](sm)
        if weight.is_even:
            # parity: odd products vanish, even ones are twice the right half
            pieces = [(max(lo, ctx.zero), hi) for lo, hi in pieces if hi > 0]
        for lo, hi in pieces:
            for j in range(N + 1):
                for k in range(j, N + 1):
                    if weight.is_even and (j + k) % 2:
                        continue
                    val = ctx.quad(lambda x: table(x)[j] * table(x)[k], [lo, hi])
                    G[j, k] += 2 * val if weight.is_even else val
        for j in range(N + 1):
            for k in range(j):
                G[j, k] = G[k, j]
        A = ctx.eye(N) - G[:N, :N]
        M = ctx.inverse(A)
        g_phi = G[:N, N]
        g_psi = G[:N, N - 1]
        c2 = a[N]
        m_phi, m_psi = M * g_phi, M * g_psi
        u = c2 * (G[N, N] + (g_phi.T * m_phi)[0])
        v = c2 * (G[N - 1, N] + (g_psi.T * m_phi)[0])
        w = c2 * (G[N - 1, N - 1] + (g_psi.T * m_psi)[0])
        log_e = ctx.log(ctx.det(A))
        c = ctx.sqrt(c2)

        def qp(x):
            e = table(x)
            return (c * (e[N] + ctx.fsum(e[i] * m_phi[i] for i in range(N))),
                    c * (e[N - 1] + ctx.fsum(e[i] * m_psi[i] for i in range(N))))

        q_p, p_p = qp(sm)
        if weight.is_hermite or symmetric:
            return [q_p, p_p, u, w, log_e]
        q_m, p_m = qp(-sm)
        return [q_m, p_m, q_p, p_p, u, v, w, log_e]


# -- integration -------------------------------------------------------------

@dataclass
class Trajectory:
    """Sampled solution; arrays are aligned with ``s``."""
    s: np.ndarray
    y: np.ndarray
    log_e: np.ndarray
    R: np.ndarray
    R_off: np.ndarray
    sigma: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def e2(self):
        return np.exp(self.log_e)


def _run(fun, s0, y0, s_eval, cfg: SolverConfig, atol=None):
    s_eval = np.asarray(s_eval, float)
    sol = solve_ivp(fun, (s0, float(s_eval[-1])), y0, method=cfg.method, t_eval=s_eval,
                    rtol=cfg.rel_tol, atol=cfg.abs_tol if atol is None else atol, max_step=cfg.max_step,
                    first_step=None)
    if sol.status != 0 or sol.y.shape[1] != s_eval.size:
        last = float(sol.t[-1]) if sol.t.size else s0
        raise SingularityError(f"integration stopped near s = {last}: {sol.message}", last_good=last)
    return sol.y


def _run_taylor(make_field, s0, y0, s_eval, cfg: SolverConfig):
    """``make_field(ctx)`` builds the traced field at the working precision."""
    tc = cfg.taylor
    if cfg.min_step != tc.min_step:
        tc = replace(tc, min_step=cfg.min_step)
    with mpmath.mp.workdps(tc.digits):
        rows = taylor_integrate(make_field(mpmath.mp), s0, y0, s_eval, tc)
    return np.array(rows).T


def _ordered_eval(s_grid, s0):
    """Grid sorted in the direction of integration, and the permutation back."""
    s_grid = np.asarray(s_grid, float)
    if s_grid.size == 0:
        raise DomainError("empty evaluation grid")
    forward = np.all(s_grid >= s0)
    backward = np.all(s_grid <= s0)
    if not (forward or backward):
        raise PreconditionError("grid must lie on one side of the starting point")
    order = np.argsort(s_grid)
    if backward:
        order = order[::-1]
    return s_grid[order], order


def _assemble(s_sorted, order, Y, aux_fn):
    inv = np.empty_like(order)
    inv[order] = np.arange(order.size)
    Y = Y[:, inv]
    s = s_sorted[inv]
    R = np.empty(s.size)
    R_off = np.empty(s.size)
    for k in range(s.size):
        R[k], R_off[k] = aux_fn(s[k], Y[:, k])
    return s, Y, R, R_off


def _resolve_seed(seed, taylor):
    if seed is None:
        return "exact" if taylor else "asymptotic"
    if seed not in ("exact", "asymptotic"):
        raise DomainError(f"unknown seed {seed!r}")
    return seed


def integrate_gauss(N: int, cfg: SolverConfig | None = None, s_grid=None, seed: str | None = None) -> Trajectory:
    """Integrate the Hermite exterior system inward from s_start to s_end.

    With ``s_grid`` the solution is sampled there; otherwise 200 points
    between s_start and s_end are returned.  The default seed is the
    large-s form for Runge-Kutta and the extended-precision resolvent for
    the Taylor backend.
    """
    cfg = cfg or SolverConfig()
    s0 = cfg.s_start if cfg.s_start is not None else math.sqrt(2.0 * N) + 5.0
    if s_grid is None:
        if cfg.s_end is None:
            raise DomainError("need s_end or an explicit grid")
        if not cfg.s_end > 0 or not s0 > cfg.s_end:
            raise PreconditionError("need s_start > s_end > 0")
        s_grid = np.linspace(cfg.s_end, s0, 200)[:-1]
    weight = WeightSpec.hermite()
    taylor = cfg.uses_taylor(N)
    seed = _resolve_seed(seed, taylor)
    s_sorted, order = _ordered_eval(s_grid, s0)
    if np.any(s_sorted <= 0):
        raise SingularityError("the Hermite system is singular at s = 0")
    if taylor:
        y0 = (precise_state(N, weight, "exterior", s0) if seed == "exact"
              else list(gauss_init(N, s0, seed)))
        Y = _run_taylor(lambda ctx: (lambda s, y: _gauss_field(s, y, ctx.sqrt(2 * N))),
                        s0, y0, s_sorted, cfg)
    else:
        Y = _run(lambda s, y: gauss_rhs(s, y, N), s0, gauss_init(N, s0, seed), s_sorted, cfg)
    s, Y, R, Rt = _assemble(s_sorted, order, Y, lambda s, y: gauss_aux(s, *y[:4], N))
    return Trajectory(s, Y[:4], Y[4], R, Rt, None, {"N": N, "weight": weight, "geometry": "exterior",
                                                    "s0": s0, "seed": seed,
                                                    "backend": "taylor" if taylor else "rk"})


def gauss_init(N: int, s0: float, seed: str = "asymptotic") -> np.ndarray:
    """Initial (q, p, u, w, ln E) at large s0.

    ``asymptotic`` uses q = phi, p = psi and tail integrals; it is guarded by
    K_N(s0, s0) < 1e-14.  ``exact`` evaluates the finite-rank resolvent.
    """
    basis = OrthonormalBasis(WeightSpec.hermite(), N)
    if seed == "exact":
        return exact_state(N, basis.weight, "exterior", s0)
    if seed != "asymptotic":
        raise DomainError(f"unknown seed {seed!r}")
    if float(basis.kernel_diag(s0)) >= 1e-14:
        raise PreconditionError(f"s0 = {s0} too small: kernel diagonal not below 1e-14")
    return _neumann_state(N, basis.weight, "exterior", s0, True)


V_ATOL_SCALE = 1e-3


def jacobi_default_start(geometry: str) -> float:
    return 1.0 - 1e-3 if geometry == "end" else 1e-3


def integrate_jacobi(N: int, weight: WeightSpec, geometry: str, cfg: SolverConfig | None = None,
                     s_grid=None, seed: str | None = None, symmetric: bool | None = None) -> Trajectory:
    """Integrate the end (inward from near 1) or interior (outward from near 0) system."""
    sg = _interior_sign(geometry)
    if weight.is_hermite:
        raise DomainError("integrate_jacobi needs a Jacobi weight")
    cfg = cfg or SolverConfig()
    s0 = cfg.s_start if cfg.s_start is not None else jacobi_default_start(geometry)
    if not 0 < s0 < 1:
        raise PreconditionError("starting point must lie in (0, 1)")
    if s_grid is None:
        if cfg.s_end is None:
            raise DomainError("need s_end or an explicit grid")
        s_grid = np.linspace(cfg.s_end, s0, 200)[:-1] if geometry == "end" else np.linspace(s0, cfg.s_end, 200)[1:]
    if symmetric is None:
        symmetric = weight.is_even
    if symmetric and not weight.is_even:
        raise PreconditionError("the symmetric reduction needs alpha = beta")
    taylor = cfg.uses_taylor(N)
    seed = _resolve_seed(seed if seed is not None else "exact", taylor)
    s_sorted, order = _ordered_eval(s_grid, s0)
    if np.any((s_sorted <= 0) | (s_sorted >= 1)):
        raise SingularityError("the Jacobi system is singular at s = 0 and s = 1")
    if symmetric:
        fun = lambda s, y: _jacobi_sym_rhs(s, y, weight, N, geometry)  # noqa: E731
        field_of = _jacobi_sym_field
        aux = lambda s, y: jacobi_sym_aux(s, *y[:4], weight, N, geometry)  # noqa: E731
        nstate = 4
    else:
        fun = lambda s, y: _jacobi_general_rhs(s, y, weight, N, geometry)  # noqa: E731
        field_of = _jacobi_general_field

        def aux(s, y):
            Rm, Rp, R0 = jacobi_aux(s, y, weight, N, geometry)
            return 0.5 * (Rm + Rp), R0
        nstate = 7
    if taylor:
        y0 = (precise_state(N, weight, geometry, s0, symmetric) if seed == "exact"
              else list(_neumann_state(N, weight, geometry, s0, symmetric)))

        def make_field(ctx):
            c = coefficient_polynomials(weight, N, ctx)
            return lambda s, y: field_of(s, y, c, sg)
        Y = _run_taylor(make_field, s0, y0, s_sorted, cfg)
    else:
        y0 = (exact_state(N, weight, geometry, s0, symmetric) if seed == "exact"
              else _neumann_state(N, weight, geometry, s0, symmetric))
        atol = None
        if not symmetric:
            # v is pure rounding noise when alpha = beta; a relative test on it stalls the stepper
            atol = np.full(len(y0), cfg.abs_tol)
            atol[5] = max(cfg.abs_tol, cfg.rel_tol * V_ATOL_SCALE)
        Y = _run(fun, s0, y0, s_sorted, cfg, atol)
    s, Y, R, R0 = _assemble(s_sorted, order, Y, aux)
    meta = {"N": N, "weight": weight, "geometry": geometry, "s0": s0, "seed": seed,
            "symmetric": symmetric, "backend": "taylor" if taylor else "rk"}
    return Trajectory(s, Y[:nstate], Y[nstate], R, R0, (1 - s * s) * R, meta)


def integrate(N: int, weight: WeightSpec, geometry: str, s_grid, cfg: SolverConfig | None = None,
              seed: str | None = None) -> Trajectory:
    """Dispatch on weight/geometry; geometry is 'exterior', 'end' or 'interior'."""
    if weight.is_hermite:
        if geometry != "exterior":
            raise DomainError("the Hermite ODE route covers only the exterior geometry")
        return integrate_gauss(N, cfg, s_grid, seed)
    if geometry == "exterior":
        geometry = "end"
    return integrate_jacobi(N, weight, geometry, cfg, s_grid, seed)
