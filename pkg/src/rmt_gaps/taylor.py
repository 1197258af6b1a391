"""Arbitrary-precision Taylor-series integration of rational vector fields.

The right-hand side is traced once into an operation tape.  Each step then
expands the solution coefficient by coefficient (the classical recursion for
products and quotients of power series) in MPFR arithmetic, picks the step
from the last two coefficients and sums the polynomial.

This is used where the gap-probability systems carry a neighbouring solution
that grows like a power of s relative to the wanted one: double-precision
Runge-Kutta then loses the trajectory, while carrying ~30 digits keeps the
amplified rounding error far below the requested accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from operator import mul

import gmpy2

from .errors import DomainError, SingularityError

_VAR, _TIME, _CONST, _ADD, _SUB, _MUL, _DIV, _NEG, _CMUL, _CADD = range(10)
_INF_DEG = 1 << 30


def _to_mpfr(x):
    """Exact conversion of int, float, mpmath mpf or mpfr."""
    if isinstance(x, (int, float)) or type(x).__name__ == "mpfr":
        return gmpy2.mpfr(x)
    sign, man, exp, _ = x._mpf_
    if not man:
        return gmpy2.mpfr(float(x))
    val = gmpy2.mul_2exp(gmpy2.mpfr(man), exp)
    return -val if sign else val


class _Tape:
    def __init__(self):
        self.ops: list[tuple] = []
        # polynomial degree in s of each node, _INF_DEG once a state variable enters
        self.deg: list[int] = []

    def push(self, op, deg) -> "_Node":
        self.ops.append(op)
        self.deg.append(min(deg, _INF_DEG))
        return _Node(self, len(self.ops) - 1)

    def const(self, c) -> "_Node":
        return self.push((_CONST, _to_mpfr(c), None), 0)


class _Node:
    __slots__ = ("tape", "idx")

    def __init__(self, tape, idx):
        self.tape = tape
        self.idx = idx

    @property
    def _deg(self):
        return self.tape.deg[self.idx]

    def __add__(self, o):
        if isinstance(o, _Node):
            return self.tape.push((_ADD, self.idx, o.idx), max(self._deg, o._deg))
        return self.tape.push((_CADD, _to_mpfr(o), self.idx), self._deg)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, _Node):
            return self.tape.push((_SUB, self.idx, o.idx), max(self._deg, o._deg))
        return self.tape.push((_CADD, -_to_mpfr(o), self.idx), self._deg)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, _Node):
            return self.tape.push((_MUL, self.idx, o.idx), self._deg + o._deg)
        return self.tape.push((_CMUL, _to_mpfr(o), self.idx), self._deg)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, _Node):
            return self.tape.push((_DIV, self.idx, o.idx), _INF_DEG)
        return self.tape.push((_CMUL, 1 / _to_mpfr(o), self.idx), self._deg)

    def __rtruediv__(self, o):
        return self.tape.const(o) / self

    def __neg__(self):
        return self.tape.push((_NEG, None, self.idx), self._deg)


def _trace(field, dim):
    tape = _Tape()
    s = tape.push((_TIME, None, None), 1)
    ys = [tape.push((_VAR, i, None), _INF_DEG) for i in range(dim)]
    outs = []
    for f in field(s, ys):
        outs.append(f.idx if isinstance(f, _Node) else tape.const(f).idx)
    if len(outs) != dim:
        raise DomainError(f"field returned {len(outs)} components for a {dim}-dimensional state")
    return tape.ops, tape.deg, outs


def _expand(ops, deg, outs, s0, y0, degree):
    """Taylor coefficients of the solution through (s0, y0), up to ``degree``."""
    zero, one = gmpy2.mpfr(0), gmpy2.mpfr(1)
    co = [[] for _ in ops]
    yc = [[v] for v in y0]
    for k in range(degree + 1):
        for i, (kind, a, b) in enumerate(ops):
            c = co[i]
            if kind == _VAR:
                c.append(yc[a][k])
            elif kind == _MUL:
                ca, cb = co[a], co[b]
                lo = max(0, k - deg[b])
                hi = min(k, deg[a])
                if lo > hi:
                    c.append(zero)
                elif lo == hi:
                    c.append(ca[lo] * cb[k - lo])
                else:
                    c.append(sum(map(mul, ca[lo:hi + 1], cb[k - lo:k - hi - 1 if k - hi else None:-1])))
            elif kind == _CMUL:
                c.append(a * co[b][k])
            elif kind == _ADD:
                c.append(co[a][k] + co[b][k])
            elif kind == _SUB:
                c.append(co[a][k] - co[b][k])
            elif kind == _CADD:
                c.append(co[b][k] + a if k == 0 else co[b][k])
            elif kind == _NEG:
                c.append(-co[b][k])
            elif kind == _DIV:
                cb = co[b]
                if k == 0:
                    c.append(co[a][0] / cb[0])
                else:
                    top = min(k, deg[b])
                    acc = sum(map(mul, cb[1:top + 1], c[k - 1:k - top - 1 if k - top else None:-1]))
                    c.append((co[a][k] - acc) / cb[0])
            elif kind == _TIME:
                c.append(s0 if k == 0 else (one if k == 1 else zero))
            else:
                c.append(a if k == 0 else zero)
        if k < degree:
            for j, o in enumerate(outs):
                yc[j].append(co[o][k] / (k + 1))
    return yc


def _horner(coeffs, h):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * h + c
    return acc


@dataclass(frozen=True)
class TaylorConfig:
    digits: int = 32
    tol: float = 1e-24
    degree: int = 28
    min_step: float = 1e-12
    max_steps: int = 20_000

    def __post_init__(self):
        if self.digits < 16:
            raise DomainError("digits must be at least 16")
        if not 0 < self.tol < 1:
            raise DomainError("tol must lie in (0, 1)")
        if self.tol < 10.0 ** (-self.digits + 2):
            raise DomainError("tol is finer than the working precision supports")
        if self.degree < 4:
            raise DomainError("degree must be at least 4")

    @property
    def bits(self) -> int:
        return int(math.ceil(self.digits * math.log2(10))) + 8


def _step_size(yc, degree, tol):
    h = gmpy2.inf()
    for c in yc:
        scale = abs(c[0])
        if scale == 0:
            scale = max(abs(x) for x in c) or gmpy2.mpfr(1)
        for k in (degree - 1, degree):
            if c[k] != 0:
                h = min(h, gmpy2.root(tol * scale / abs(c[k]), k))
    return h


def _partial(exc, rows):
    exc.rows = rows
    return exc


def taylor_integrate(field, s0, y0, s_targets, cfg: TaylorConfig | None = None):
    """Solve y' = field(s, y) from (s0, y0), returning float rows at ``s_targets``.

    ``field`` must use only +, -, *, / so that it can be traced; its
    constants and ``y0`` may be ints, floats or mpmath numbers and are
    converted exactly.  Targets must be monotone on one side of ``s0``.
    Raises SingularityError (with the last good abscissa, and the rows
    already produced in ``rows``) when the admissible step collapses.
    """
    cfg = cfg or TaylorConfig()
    targets = [float(t) for t in s_targets]
    if not targets:
        return []
    direction = 1 if targets[-1] > s0 else -1
    if any(direction * (b - a) < 0 for a, b in zip([s0] + targets, targets)):
        raise DomainError("targets must be monotone in the direction of integration")
    with gmpy2.context(gmpy2.get_context(), precision=cfg.bits):
        ops, deg, outs = _trace(field, len(y0))
        tol = gmpy2.mpfr(cfg.tol)
        s = _to_mpfr(s0)
        y = [_to_mpfr(v) for v in y0]
        rows = []
        ti = 0
        for _ in range(cfg.max_steps):
            while ti < len(targets) and targets[ti] == s:
                rows.append([float(v) for v in y])
                ti += 1
            if ti == len(targets):
                return rows
            yc = _expand(ops, deg, outs, s, y, cfg.degree)
            h = _step_size(yc, cfg.degree, tol)
            if not gmpy2.is_finite(h):
                h = abs(gmpy2.mpfr(targets[-1]) - s)
            if h < cfg.min_step:
                raise _partial(SingularityError(f"Taylor step collapsed near s = {float(s):.6g}",
                                                last_good=float(s)), rows)
            end = s + direction * h
            while ti < len(targets) and direction * (targets[ti] - end) <= 0:
                dt = gmpy2.mpfr(targets[ti]) - s
                rows.append([float(_horner(c, dt)) for c in yc])
                ti += 1
            if ti == len(targets):
                return rows
            dh = end - s
            y = [_horner(c, dh) for c in yc]
            if not all(gmpy2.is_finite(v) for v in y):
                raise _partial(SingularityError(f"non-finite state near s = {float(s):.6g}",
                                                last_good=float(s)), rows)
            s = end
        raise _partial(SingularityError(f"step budget exhausted near s = {float(s):.6g}",
                                        last_good=float(s)), rows)


def series_coefficients(field, s0, y0, degree: int, digits: int = 20):
    """Taylor coefficients y_k = y^(k)(s0)/k! of the solution through (s0, y0), as floats."""
    bits = int(math.ceil(digits * math.log2(10))) + 8
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        ops, deg, outs = _trace(field, len(y0))
        yc = _expand(ops, deg, outs, _to_mpfr(s0), [_to_mpfr(v) for v in y0], degree)
        return [[float(c) for c in comp] for comp in yc]
