"""Command-line front end: every computation route as a CSV or JSON table.

Exit status: 0 success, 1 usage error, 2 domain error, 3 numerical failure
(rows that failed are emitted as NaN with a diagnostics entry and the last
good point goes to stderr).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import asymptotics, closedform, montecarlo, painleve
from .errors import DomainError, NumericalFailure
from .gapcore import GapGeometry, factorization_check, gap_probability
from .odesys import SolverConfig, integrate
from .orthopoly import OrthonormalBasis, WeightSpec
from .series import small_s_recursion

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

COMMANDS = ("gap-prob", "ode-solve", "painleve-check", "series", "edge-scaling", "j2h", "mc", "factor-check")
GEOMETRIES = ("exterior", "jacobi-exterior", "interior")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise DomainError("grid count must be at least 2")
        if not self.start < self.stop:
            raise DomainError("grid start must be below stop")

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = str(text).split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} is not start:stop:count")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError:
            raise UsageError(f"grid {text!r} is not start:stop:count") from None

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class JobSpec:
    command: str
    ensemble: str = "hermite"
    alpha: float = 0.0
    beta: float = 0.0
    N: int = 1
    geometry: str = "exterior"
    s_grid: Grid | None = None
    s: float | None = None
    t_grid: Grid | None = None
    N_list: tuple = (20, 50, 100)
    alpha_list: tuple = (10.0, 40.0, 160.0)
    rel_tol: float = 1e-12
    epsilon: int = 1
    K: float = 0.0
    terms: int = 6
    seed: int = 0
    samples: int = 100_000
    format: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if self.geometry not in GEOMETRIES:
            raise UsageError(f"geometry must be one of {GEOMETRIES}")
        if self.ensemble not in ("hermite", "jacobi"):
            raise UsageError("ensemble must be hermite or jacobi")
        if self.ensemble == "hermite" and self.geometry == "jacobi-exterior":
            raise DomainError("jacobi-exterior geometry needs the Jacobi ensemble")

    @property
    def weight(self) -> WeightSpec:
        if self.ensemble == "hermite":
            return WeightSpec.hermite()
        return WeightSpec.jacobi(self.alpha, self.beta)

    def points(self) -> np.ndarray:
        if self.s is not None:
            return np.array([float(self.s)])
        if self.s_grid is None:
            raise UsageError("give --s or --s-grid")
        return self.s_grid.values()


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def add(self, values: dict, diagnostics: str = ""):
        row = [values.get(c, math.nan) for c in self.columns]
        if diagnostics or any(isinstance(v, float) and not math.isfinite(v) for v in row):
            row = [v if isinstance(v, str) or _finite(v) else math.nan for v in row]
            self.failures.append(diagnostics or "non-finite value")
        self.rows.append((row, diagnostics))


def _finite(v) -> bool:
    return isinstance(v, (int, float)) and math.isfinite(v)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    return "NaN" if math.isnan(v) else repr(v)


def render(table: Table, fmt: str) -> str:
    cols = table.columns + ["diagnostics"]
    if fmt == "json":
        recs = []
        for row, diag in table.rows:
            rec = {c: (None if isinstance(v, float) and math.isnan(v) else v) for c, v in zip(table.columns, row)}
            rec = {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in rec.items()}
            rec["diagnostics"] = diag
            recs.append(rec)
        return json.dumps(recs, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for row, diag in table.rows:
        buf.write(",".join(_fmt(v) for v in row) + "," + diag.replace(",", ";") + "\n")
    return buf.getvalue()


def _workers() -> int:
    env = os.environ.get("RMT_GAPS_THREADS")
    if not env:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise DomainError("RMT_GAPS_THREADS must be an integer") from None


def _ordered_map(fn, items):
    """fn over items, results in input order; failures come back as exceptions."""
    def safe(x):
        try:
            return fn(x)
        except NumericalFailure as exc:
            return exc
    n = _workers()
    if n == 1:
        return [safe(x) for x in items]
    with ThreadPoolExecutor(n) as pool:
        return list(pool.map(safe, items))


def _geometry(job: JobSpec, s: float) -> GapGeometry:
    if job.geometry == "exterior" and job.ensemble == "jacobi":
        return GapGeometry.jacobi_exterior(s)
    return GapGeometry(job.geometry, float(s))


def _ode_geometry(job: JobSpec) -> str:
    return {"exterior": "exterior" if job.ensemble == "hermite" else "end",
            "jacobi-exterior": "end", "interior": "interior"}[job.geometry]


def _fill(table: Table, keys, results, build):
    for key, res in zip(keys, results):
        if isinstance(res, Exception):
            table.add({table.columns[0]: key}, f"{type(res).__name__}: {res}")
        else:
            table.add(build(key, res))


def cmd_gap_prob(job: JobSpec) -> Table:
    basis = OrthonormalBasis(job.weight, job.N)
    pts = job.points()
    res = _ordered_map(lambda s: gap_probability(basis, _geometry(job, s)), pts)
    t = Table(["s", "E2", "est_error"])
    _fill(t, pts, res, lambda s, r: {"s": float(s), "E2": r.value, "est_error": r.est_error})
    return t


def cmd_ode_solve(job: JobSpec) -> Table:
    pts = job.points()
    geo = _ode_geometry(job)
    tr = integrate(job.N, job.weight, geo, pts, SolverConfig(rel_tol=job.rel_tol))
    cols = ["s", "E2", "R", "Rtilde"] + (["sigma"] if not job.weight.is_hermite else [])
    t = Table(cols)
    for i, s in enumerate(tr.s):
        rec = {"s": float(s), "E2": float(tr.e2[i]), "R": float(tr.R[i]), "Rtilde": float(tr.R_off[i])}
        if tr.sigma is not None:
            rec["sigma"] = float(tr.sigma[i])
        t.add(rec)
    return t


def cmd_painleve_check(job: JobSpec) -> Table:
    pts = job.points()
    anchor = float(pts[len(pts) // 2])
    branch = painleve.BranchChoice(job.epsilon, job.K)
    if job.weight.is_hermite:
        if job.geometry != "exterior":
            raise DomainError("the PV parametrisation covers the Hermite exterior geometry")
        w0, wp0 = painleve.pv_seed_from_closedform(job.N, anchor, job.epsilon)
        tr = painleve.integrate_pv_s(job.N, branch, (anchor, w0, wp0), pts)
        R, h = painleve.map_pv_generalized(tr, job.N)
        if job.K == 0:
            cols = ["s", "w", "w_prime", "R", "h", "R_closed", "deviation"]
            extra = [{"R_closed": closedform.gue_closed(job.N, float(s)).r_diag} for s in tr.grid]
            for e, r in zip(extra, R):
                e["deviation"] = abs(r - e["R_closed"])
        else:
            cols = ["s", "w", "w_prime", "R", "h", "first_integral_residual"]
            D = painleve.pv_R_derivatives(tr, job.N)
            res = painleve.first_integral_residual(tr.grid, *D, h, job.N, branch.K1(job.N))
            extra = [{"first_integral_residual": r} for r in res]
        vals = {float(s): {"s": float(s), "w": tr.w[i], "w_prime": tr.w_prime[i], "R": R[i], "h": h[i], **extra[i]}
                for i, s in enumerate(tr.grid)}
    else:
        if job.alpha != job.beta:
            raise DomainError("the PVI parametrisation needs alpha = beta")
        geo = _ode_geometry(job)
        w0, wp0, K1 = painleve.pvi_seed_from_closedform(job.N, job.alpha, anchor, job.epsilon, geo)
        a1 = -(job.N + job.alpha)
        tr = painleve.integrate_pvi_s(a1, K1, branch, (anchor, w0, wp0), pts)
        y, H, sig = painleve.map_pvi(tr, a1)
        sgn = 1.0 if geo == "end" else -1.0
        closed = closedform.jue_end_closed if geo == "end" else closedform.jue_interior_closed
        cols = ["s", "w", "w_prime", "y", "H", "sigma", "sigma_closed", "deviation"]
        vals = {}
        for i, s in enumerate(tr.grid):
            sc = closed(job.N, job.alpha, job.alpha, float(s)).sigma
            vals[float(s)] = {"s": float(s), "w": tr.w[i], "w_prime": tr.w_prime[i], "y": y[i], "H": H[i],
                              "sigma": sgn * sig[i], "sigma_closed": sc, "deviation": abs(sgn * sig[i] - sc)}
    t = Table(cols)
    for s in pts:
        rec = vals.get(float(s))
        if rec is None:
            t.add({"s": float(s)}, "outside the pole-free arc: " + (tr.diagnostics or "integration stopped"))
        else:
            t.add({k: float(v) for k, v in rec.items()})
    return t


def cmd_series(job: JobSpec) -> Table:
    coeffs = small_s_recursion(job.N, job.terms)
    t = Table(["power", "coefficient", "value"])
    for i, c in enumerate(coeffs):
        t.add({"power": 2 * i - 1, "coefficient": str(c), "value": float(c)})
    return t


def cmd_edge_scaling(job: JobSpec) -> Table:
    tg = job.t_grid or Grid(-2.0, 4.0, 25)
    rep = asymptotics.edge_scaling_deviation(job.N_list, tg.values())
    t = Table(["N", "deviation", "fitted_order"])
    for p, d in zip(rep.params, rep.deviations):
        t.add({"N": int(p), "deviation": d, "fitted_order": rep.fitted_order})
    return t


def cmd_j2h(job: JobSpec) -> Table:
    tg = job.t_grid or Grid(0.3, 2.5, 12)
    geo = "interior" if job.geometry == "interior" else "end"
    rep = asymptotics.j2h_deviation(job.alpha_list, tg.values(), job.N, geo)
    t = Table(["alpha", "deviation", "fitted_order"])
    for p, d in zip(rep.params, rep.deviations):
        t.add({"alpha": float(p), "deviation": d, "fitted_order": rep.fitted_order})
    return t


def cmd_mc(job: JobSpec) -> Table:
    w = job.weight
    if w.is_hermite:
        ens = montecarlo.Ensemble.gue(job.N)
    else:
        if job.alpha != int(job.alpha) or job.beta != int(job.beta):
            raise DomainError("Monte Carlo needs integer alpha and beta")
        ens = montecarlo.Ensemble.jue(job.N, job.N + int(job.alpha), job.N + int(job.beta))
    t = Table(["s", "p_hat", "stderr", "n_samples", "seed"])
    for s in job.points():
        est = montecarlo.empirical_gap(ens, _geometry(job, s), job.samples, job.seed)
        t.add({"s": float(s), "p_hat": est.p_hat, "stderr": est.stderr,
               "n_samples": est.n_samples, "seed": est.seed})
    return t


def cmd_factor_check(job: JobSpec) -> Table:
    pts = job.points()
    res = _ordered_map(lambda s: factorization_check(job.N, job.weight, _geometry(job, s)), pts)
    t = Table(["s", "lhs", "rhs", "diff"])
    _fill(t, pts, res, lambda s, r: {"s": float(s), "lhs": r[0], "rhs": r[1], "diff": r[2]})
    return t


HANDLERS = {"gap-prob": cmd_gap_prob, "ode-solve": cmd_ode_solve, "painleve-check": cmd_painleve_check,
            "series": cmd_series, "edge-scaling": cmd_edge_scaling, "j2h": cmd_j2h, "mc": cmd_mc,
            "factor-check": cmd_factor_check}


def run(job: JobSpec) -> tuple[int, str, str]:
    """(exit status, table text, stderr text)."""
    try:
        table = HANDLERS[job.command](job)
    except DomainError as exc:
        return 2, "", f"domain error: {exc}\n"
    except NumericalFailure as exc:
        last = "" if exc.last_good is None else f" (last good point {exc.last_good!r})"
        return 3, "", f"numerical failure: {exc}{last}\n"
    text = render(table, job.format)
    if table.failures:
        good = [row[0] for row, diag in table.rows if not diag]
        last = f" (last good point {good[-1]!r})" if good else ""
        return 3, text, f"numerical failure: {table.failures[0]}{last}\n"
    return 0, text, ""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _list(conv):
    def parse(text):
        try:
            return tuple(conv(x) for x in str(text).split(",") if x)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rmt-gaps", description="Gap probabilities of GUE/JUE spectra by several routes.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="TOML file with flag values (flags override it)")
    p.add_argument("--ensemble", choices=("hermite", "jacobi"))
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--geometry", choices=GEOMETRIES)
    p.add_argument("--s-grid", help="start:stop:count, both ends included")
    p.add_argument("--s", type=float)
    p.add_argument("--t-grid")
    p.add_argument("--N-list", type=_list(int))
    p.add_argument("--alpha-list", type=_list(float))
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--epsilon", type=int, choices=(1, -1))
    p.add_argument("--K", type=float)
    p.add_argument("--terms", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    return p


_GRID_KEYS = ("s_grid", "t_grid")
_LIST_KEYS = {"N_list": int, "alpha_list": float}


def job_from_args(argv) -> JobSpec:
    args = vars(build_parser().parse_args(argv))
    config = {}
    path = args.pop("config")
    if path:
        try:
            with open(path, "rb") as fh:
                config = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    names = {f.name for f in fields(JobSpec)}
    merged = {}
    for key, val in config.items():
        k = key.replace("-", "_")
        if k == "n":
            k = "N"
        if k not in names or k == "command":
            raise UsageError(f"unknown config key {key!r}")
        merged[k] = val
    merged.update({k: v for k, v in args.items() if v is not None})
    for k in _GRID_KEYS:
        if k in merged and not isinstance(merged[k], Grid):
            merged[k] = Grid.parse(merged[k])
    for k, conv in _LIST_KEYS.items():
        if k in merged:
            v = merged[k]
            merged[k] = tuple(conv(x) for x in (v if isinstance(v, (list, tuple)) else str(v).split(",")))
    return replace(JobSpec(merged.pop("command")), **merged)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        job = job_from_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return 2
    status, text, err = run(job)
    if text:
        if job.out:
            with open(job.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    if err:
        sys.stderr.write(err)
    return status
