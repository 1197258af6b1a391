"""Finite-rank Fredholm determinants for gap probabilities.

Because the kernel has rank N, det(I - K|_I) = det(delta_jk - int_I p_j p_k w).
The identity matrix minus the Gram matrix over I is itself the Gram matrix
over the complement of I within the support, and that is what gets
factorised: it keeps full relative accuracy when the probability is tiny.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special as _sp
from scipy.special import roots_jacobi

from .errors import AccuracyError, DomainError, PreconditionError
from .orthopoly import OrthonormalBasis, WeightSpec, orthonormal_table, recurrence_coefficients

DEFAULT_ORDER = 200
_HERMITE_PANEL = 2.5


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        for lo, hi in ivs:
            if not lo < hi:
                raise DomainError(f"interval ({lo}, {hi}) is empty or reversed")
        for (_, h0), (l1, _) in zip(ivs, ivs[1:]):
            if not h0 <= l1:
                raise DomainError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def of(cls, *pairs) -> "IntervalSet":
        return cls(tuple(pairs))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_bounded(self) -> bool:
        return all(math.isfinite(lo) and math.isfinite(hi) for lo, hi in self.intervals)

    def clip(self, lo: float, hi: float) -> "IntervalSet":
        out = []
        for a, b in self.intervals:
            a, b = max(a, lo), min(b, hi)
            if a < b:
                out.append((a, b))
        return IntervalSet(tuple(out))

    def complement(self, lo: float, hi: float) -> "IntervalSet":
        """Complement within (lo, hi)."""
        out, cur = [], lo
        for a, b in self.clip(lo, hi):
            if a > cur:
                out.append((cur, a))
            cur = max(cur, b)
        if cur < hi:
            out.append((cur, hi))
        return IntervalSet(tuple(out))

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = np.zeros(x.shape, dtype=bool)
        for a, b in self.intervals:
            inside |= (x > a) & (x < b)
        return inside


@dataclass(frozen=True)
class GapGeometry:
    """Symmetric gap regions parametrised by s, or an explicit interval set."""
    variant: str
    s: float = 0.0
    explicit: IntervalSet | None = None

    VARIANTS = ("exterior", "jacobi-exterior", "interior", "explicit")

    def __post_init__(self):
        if self.variant not in self.VARIANTS:
            raise DomainError(f"unknown geometry {self.variant!r}")
        if self.variant == "explicit":
            if self.explicit is None:
                raise DomainError("explicit geometry needs an IntervalSet")
            return
        if not (math.isfinite(self.s) and self.s >= 0):
            raise DomainError(f"gap parameter must be finite and >= 0, got {self.s}")
        if self.variant == "jacobi-exterior" and not self.s < 1:
            raise DomainError("Jacobi geometries need s < 1")

    @classmethod
    def exterior(cls, s):
        return cls("exterior", float(s))

    @classmethod
    def jacobi_exterior(cls, s):
        return cls("jacobi-exterior", float(s))

    @classmethod
    def interior(cls, s):
        return cls("interior", float(s))

    @classmethod
    def of(cls, intervals: IntervalSet):
        return cls("explicit", 0.0, intervals)

    @property
    def is_symmetric(self) -> bool:
        if self.variant != "explicit":
            return True
        ivs = self.explicit.intervals
        return all(a == -d and b == -c for (a, b), (c, d) in zip(ivs, reversed(ivs)))

    def region(self, weight: WeightSpec) -> IntervalSet:
        lo, hi = weight.support
        s = self.s
        if self.variant == "explicit":
            return self.explicit.clip(lo, hi)
        if self.variant == "interior":
            if not weight.is_hermite and s >= 1:
                raise DomainError("Jacobi geometries need s < 1")
            return IntervalSet(((-s, s),)) if s > 0 else IntervalSet()
        if self.variant == "jacobi-exterior" and weight.is_hermite:
            raise DomainError("jacobi-exterior geometry needs a Jacobi weight")
        if self.variant == "exterior" and not weight.is_hermite:
            # the symmetric exterior of a Jacobi spectrum is the end-interval case
            if s >= 1:
                raise DomainError("Jacobi geometries need s < 1")
        return IntervalSet(((lo, -s), (s, hi))) if s > 0 else IntervalSet(((lo, hi),))

    def endpoint_signs(self) -> tuple[tuple[float, int], ...]:
        """Moving endpoints a(s) with +1 when increasing s enlarges the region."""
        if self.variant == "explicit":
            raise DomainError("explicit geometry has no gap parameter")
        if self.variant == "interior":
            return ((-self.s, +1), (self.s, +1))
        return ((-self.s, -1), (self.s, -1))


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule on [-1, 1] exact for polynomials of degree < 2 * order."""
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @classmethod
    def gauss_legendre(cls, order: int = DEFAULT_ORDER) -> "QuadratureRule":
        if order < 1:
            raise DomainError("quadrature order must be positive")
        x, w = _legendre(int(order))
        return cls(x, w, int(order))

    def refined(self, factor: float = 1.5) -> "QuadratureRule":
        return QuadratureRule.gauss_legendre(int(math.ceil(self.order * factor)))


@lru_cache(maxsize=64)
def _legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=256)
def _jacobi_rule(n: int, a: float, b: float):
    x, w = roots_jacobi(n, a, b)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class GapProbabilityResult:
    value: float
    est_error: float
    log_value: float = field(default=-math.inf)


def hermite_cutoff(n_max: int) -> float:
    """Beyond this |x| every e^{-x^2} p_j p_k (j, k <= n_max) is negligible."""
    return math.sqrt(2.0 * n_max + 1.0) + 12.0


def weighted_nodes(weight: WeightSpec, region: IntervalSet, order: int, n_max: int):
    """Nodes and weights (weight function included) integrating over ``region``."""
    xs, ws = [], []
    if weight.is_hermite:
        L = hermite_cutoff(n_max)
        gx, gw = _legendre(order)
        for a, b in region.clip(-L, L):
            panels = max(1, int(math.ceil((b - a) / _HERMITE_PANEL)))
            edges = np.linspace(a, b, panels + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                half = 0.5 * (hi - lo)
                x = lo + half * (gx + 1.0)
                xs.append(x)
                ws.append(half * gw * np.exp(-x * x))
    else:
        al, be = weight.alpha, weight.beta
        for a, b in region.clip(-1.0, 1.0):
            half = 0.5 * (b - a)
            at_hi, at_lo = b >= 1.0, a <= -1.0
            # absorb the endpoint factors touching +-1 into a Gauss-Jacobi rule
            ra = al if at_hi else 0.0
            rb = be if at_lo else 0.0
            t, tw = _jacobi_rule(order, ra, rb) if (ra or rb) else _legendre(order)
            x = a + half * (t + 1.0)
            factor = half ** (1.0 + ra + rb)
            rest = np.ones_like(x)
            if not at_hi:
                rest = rest * (1.0 - x) ** al
            if not at_lo:
                rest = rest * (1.0 + x) ** be
            xs.append(x)
            ws.append(factor * tw * rest)
    if not xs:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs), np.concatenate(ws)


def gram_over(weight: WeightSpec, n_max: int, region: IntervalSet, order: int = DEFAULT_ORDER) -> np.ndarray:
    """(n_max+1)x(n_max+1) matrix of integrals of p_j p_k w over ``region``."""
    x, w = weighted_nodes(weight, region, order, n_max)
    if x.size == 0:
        return np.zeros((n_max + 1, n_max + 1))
    P = orthonormal_table(weight, n_max, x)
    G = (P * w) @ P.T
    return 0.5 * (G + G.T)


def _complement(weight: WeightSpec, region: IntervalSet) -> IntervalSet:
    lo, hi = weight.support
    return region.complement(lo, hi)


def _check_order(order: int, N: int):
    if order < 2 * N:
        raise AccuracyError(f"quadrature order {order} too low for N = {N}")


def gram_matrix(basis: OrthonormalBasis, region: IntervalSet, quad: QuadratureRule | None = None) -> np.ndarray:
    """N x N Gram matrix of the first N orthonormal functions over ``region``."""
    order = (quad or QuadratureRule.gauss_legendre()).order
    _check_order(order, basis.N)
    region = region.clip(*basis.weight.support)
    if basis.weight.is_hermite and not region.is_bounded:
        comp = _complement(basis.weight, region)
        if comp.is_bounded:
            return np.eye(basis.N) - gram_over(basis.weight, basis.N - 1, comp, order)
    return gram_over(basis.weight, basis.N - 1, region, order)


def log_det(G: np.ndarray) -> tuple[float, float]:
    """(sign, log|det|) by LU with partial pivoting after symmetric equilibration."""
    if G.size == 0:
        return 1.0, 0.0
    d = np.sqrt(np.abs(np.diag(G)))
    if np.any(d == 0):
        return 0.0, -math.inf
    sign, ld = np.linalg.slogdet(G / np.outer(d, d))
    return float(sign), float(ld + 2.0 * np.sum(np.log(d)))


def _short_interval_log_det(weight: WeightSpec, N: int, lo: float, hi: float, order: int) -> tuple[float, float]:
    """log det of the Gram matrix over (lo, hi) in a basis rescaled to the interval.

    With x = c + r y, p_j = k_j r^j (y^j + ...), so the determinant equals
    prod (k_j r^j)^2 times the Gram determinant of any monic basis in y;
    monic Legendre polynomials keep that matrix well conditioned even when
    the interval is short and det G is tiny.
    """
    c, r = 0.5 * (lo + hi), 0.5 * (hi - lo)
    x, wt = weighted_nodes(weight, IntervalSet(((lo, hi),)), order, N)
    y = (x - c) / r
    j = np.arange(N)
    P = np.array([_sp.eval_legendre(k, y) for k in j])
    sign, ld = log_det((P * wt) @ P.T)
    _, a = recurrence_coefficients(weight, N)
    log_k = -0.5 * weight.log_mass - np.concatenate(([0.0], np.cumsum(np.log(a[1:N]))))
    log_lead = _sp.gammaln(2 * j + 1) - j * math.log(2.0) - 2 * _sp.gammaln(j + 1)
    return sign, ld + 2 * float(np.sum(log_k + j * math.log(r) - log_lead))


def _gap_value(basis: OrthonormalBasis, region: IntervalSet, order: int) -> tuple[float, float]:
    w = basis.weight
    if region.clip(*w.support).is_empty:
        return 1.0, 0.0
    comp = _complement(w, region)
    if len(comp) == 1 and comp.is_bounded and (not w.is_hermite or comp.intervals[0][1] - comp.intervals[0][0] <= 2.0):
        sign, ld = _short_interval_log_det(w, basis.N, *comp.intervals[0], order)
    else:
        sign, ld = log_det(gram_over(w, basis.N - 1, comp, order))
    return sign * math.exp(ld), ld


def gap_probability(basis: OrthonormalBasis, geometry: GapGeometry,
                    quad: QuadratureRule | None = None) -> GapProbabilityResult:
    """E(0; I) = det(I - G_I), evaluated as the Gram determinant of the complement."""
    quad = quad or QuadratureRule.gauss_legendre()
    _check_order(quad.order, basis.N)
    region = geometry.region(basis.weight)
    value, ld = _gap_value(basis, region, quad.order)
    fine, _ = _gap_value(basis, region, quad.refined().order)
    return GapProbabilityResult(value, abs(fine - value), ld)


def gap_probability_value(basis: OrthonormalBasis, geometry: GapGeometry, order: int = DEFAULT_ORDER) -> float:
    """Single-order evaluation without the refinement estimate."""
    return _gap_value(basis, geometry.region(basis.weight), order)[0]


@dataclass(frozen=True)
class FiniteRankState:
    """Exact resolvent quantities of the rank-N kernel restricted to a region.

    ``Q`` and ``P`` are (1 - K)^{-1} applied to phi and psi; ``u, v, w`` are
    their inner products over the region; ``resolvent(x, y)`` is the kernel
    of K (1 - K)^{-1}.
    """
    basis: OrthonormalBasis
    log_e: float
    inv: np.ndarray
    g_phi: np.ndarray
    g_psi: np.ndarray
    u: float
    v: float
    w: float

    def _vectors(self, x):
        e = orthonormal_table(self.basis.weight, self.basis.N, np.atleast_1d(np.asarray(x, float)), weighted=True)
        return e

    def resolvent(self, x, y):
        ex = self._vectors(x)[:-1]
        ey = self._vectors(y)[:-1]
        return np.einsum("ia,ij,jb->ab", ex, self.inv, ey)

    def resolvent_diag(self, x):
        e = self._vectors(x)[:-1]
        return np.einsum("ia,ij,ja->a", e, self.inv, e)

    def QP(self, x):
        e = self._vectors(x)
        c = math.sqrt(self.basis.leading_coeff_ratio)
        N = self.basis.N
        low = e[:N]
        Q = c * (e[N] + low.T @ (self.inv @ self.g_phi))
        P = c * (e[N - 1] + low.T @ (self.inv @ self.g_psi))
        return Q, P


def finite_rank_state(basis: OrthonormalBasis, region: IntervalSet, order: int = DEFAULT_ORDER) -> FiniteRankState:
    N = basis.N
    _check_order(order, N)
    region = region.clip(*basis.weight.support)
    comp = _complement(basis.weight, region)
    Gc = gram_over(basis.weight, N, comp, order)
    Gi = np.eye(N + 1) - Gc
    A = Gc[:N, :N]
    sign, ld = log_det(A)
    if sign <= 0:
        raise PreconditionError("gap probability is zero; resolvent undefined")
    d = 1.0 / np.sqrt(np.diag(A))
    inv = np.linalg.inv(A * np.outer(d, d)) * np.outer(d, d)
    inv = 0.5 * (inv + inv.T)
    g_phi = Gi[:N, N]
    g_psi = Gi[:N, N - 1]
    c2 = basis.leading_coeff_ratio
    u = c2 * (Gi[N, N] + g_phi @ inv @ g_phi)
    v = c2 * (Gi[N - 1, N] + g_psi @ inv @ g_phi)
    w = c2 * (Gi[N - 1, N - 1] + g_psi @ inv @ g_psi)
    return FiniteRankState(basis, ld, inv, g_phi, g_psi, float(u), float(v), float(w))


def log_derivative(basis: OrthonormalBasis, geometry: GapGeometry, order: int = DEFAULT_ORDER) -> float:
    """d/ds ln E from the resolvent at the moving endpoints."""
    st = finite_rank_state(basis, geometry.region(basis.weight), order)
    total = 0.0
    for a, sgn in geometry.endpoint_signs():
        total -= sgn * float(st.resolvent_diag(a)[0])
    return total


# -- squared-variable factorisation -----------------------------------------

def _moment_gram_full(weight: WeightSpec, size: int, shift: float) -> np.ndarray:
    """Exact moments of y^{k+shift} times the mapped weight over the full half-line/segment."""
    k = np.add.outer(np.arange(size), np.arange(size)).astype(float) + shift
    if weight.is_hermite:
        return _sp.gamma(k + 1.0)
    return np.exp(_sp.betaln(k + 1.0, weight.alpha + 1.0))


def _moment_gram_piece(weight: WeightSpec, size: int, shift: float, a: float, b: float, order: int) -> np.ndarray:
    """Moments over (a, b) in the y variable with weight y^shift w(sqrt y)."""
    k = np.add.outer(np.arange(size), np.arange(size)).astype(float)
    if weight.is_hermite and math.isinf(b):
        # upper incomplete gamma in closed form
        return _sp.gammaincc(k + shift + 1.0, a) * _sp.gamma(k + shift + 1.0)
    if weight.is_hermite:
        ea = 0.0
    else:
        ea = weight.alpha if b >= 1.0 else 0.0
    eb = shift if a <= 0.0 else 0.0
    t, tw = _jacobi_rule(order, ea, eb) if (ea or eb) else _legendre(order)
    half = 0.5 * (b - a)
    y = a + half * (t + 1.0)
    wts = tw * half ** (1.0 + ea + eb)
    if not eb:
        wts = wts * y ** shift
    if weight.is_hermite:
        wts = wts * np.exp(-y)
    elif not ea:
        wts = wts * (1.0 - y) ** weight.alpha
    V = y[None, :] ** np.arange(size)[:, None]
    return (V * wts) @ V.T


def squared_gap(weight: WeightSpec, size: int, shift: float, region_y: IntervalSet, order: int) -> float:
    """Gap probability for ``size`` particles with weight y^shift w(sqrt y) on y > 0."""
    if size == 0:
        return 1.0
    top = math.inf if weight.is_hermite else 1.0
    comp = region_y.complement(0.0, top)
    Gc = np.zeros((size, size))
    for a, b in comp:
        Gc += _moment_gram_piece(weight, size, shift, a, b, order)
    Gf = _moment_gram_full(weight, size, shift)
    s1, l1 = log_det(Gc)
    s2, l2 = log_det(Gf)
    return s1 * s2 * math.exp(l1 - l2)


def factorization_check(N: int, weight: WeightSpec, geometry: GapGeometry,
                        quad: QuadratureRule | None = None) -> tuple[float, float, float]:
    """Compare E(0; I) for N with the product of the two squared-variable gaps."""
    if not weight.is_even:
        raise PreconditionError("factorisation needs an even weight")
    if not geometry.is_symmetric:
        raise PreconditionError("factorisation needs a region symmetric about 0")
    quad = quad or QuadratureRule.gauss_legendre()
    basis = OrthonormalBasis(weight, N)
    lhs = gap_probability(basis, geometry, quad).value
    region = geometry.region(weight)
    pos = region.clip(0.0, math.inf)
    region_y = IntervalSet(tuple((a * a, b * b) for a, b in pos))
    rhs = (squared_gap(weight, (N + 1) // 2, -0.5, region_y, quad.order)
           * squared_gap(weight, N // 2, 0.5, region_y, quad.order))
    return lhs, rhs, abs(lhs - rhs)
