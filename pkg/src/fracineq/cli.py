"""``fracineq`` command line: operator evaluation, suite sweeps, limit tables.

Exit codes: 0 success, 2 usage or domain error, 3 verification failure or
ambiguous constant resolution, 4 unreadable configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .core import (
    Certificate,
    Convention,
    DomainError,
    EvaluationError,
    FracParams,
    Interval,
    TestFunction,
    make_function,
)
from .corpus import FAMILIES, CorpusSpec, generate_convex, generate_weights, manifest_records, select
from .inequalities import (
    AmbiguousResolution,
    ConstantVariant,
    constant_residuals,
    fejer_bound,
    fejer_f,
    fejer_identity,
    first_derivative_bound,
    hh_f,
    hh_f_derivative_bound,
    hh_katugampola,
    hh_rl_baseline,
    identity_f,
    resolve_disputed_constant,
    second_derivative_bound,
    strict_derivative_bound,
    trapezoid_identity,
)
from .limits import Target, limit_corollary_hh_hadamard, limit_to_hadamard, limit_to_rl
from .operators import Kind, OperatorRequest, evaluate
from .quadrature import MIN_TOL, Side

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_CONFIG = 0, 2, 3, 4

SUITES = ("hh2", "bounds2", "identity2", "hh3", "fejer3", "identities3", "limits")
ACCEPTANCE_ALPHAS = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0)
ACCEPTANCE_RHOS = (0.1, 0.5, 1.0, 2.0, 5.0)

# Human-readable statement labels carried by every report row.
LABELS = {
    "hh": "katugampola-hh",
    "rl-hh": "riemann-liouville-hh",
    "trapezoid": "trapezoid-identity",
    "second": "second-derivative-bound",
    "first": "first-derivative-bound",
    "strict": "strict-derivative-bound",
    "hh-F": "symmetrised-hh",
    "identity-F": "symmetrised-identity",
    "bound-F": "symmetrised-derivative-bound",
    "fejer": "weighted-hh",
    "fejer-identity": "weighted-identity",
    "fejer-bound": "weighted-derivative-bound",
    "limit-rl": "limit-riemann-liouville",
    "limit-h": "limit-hadamard",
    "limit-hh-h": "limit-hadamard-symmetrised-hh",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    alpha_grid: Tuple[float, ...] = ACCEPTANCE_ALPHAS
    rho_grid: Tuple[float, ...] = ACCEPTANCE_RHOS
    intervals: Tuple[Tuple[float, float], ...] = ((0.0, 1.0), (1.0, 2.0))
    families: Tuple[str, ...] = FAMILIES
    count_per_family: int = 3
    seed: int = 20160425
    weight_count: int = 4
    tol: float = 1e-10
    suites: Tuple[str, ...] = SUITES
    limit_alphas: Tuple[float, ...] = (0.25, 0.5, 1.0, 1.5, 2.0)
    limit_kmax: int = 14
    limit_threshold: float = 1e-4
    output_path: str = "report.csv"
    format: str = "csv"

    def __post_init__(self) -> None:
        for name in ("alpha_grid", "rho_grid", "families", "suites", "limit_alphas"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "intervals", tuple(tuple(float(v) for v in iv) for iv in self.intervals))
        if not self.alpha_grid or not self.rho_grid or not self.intervals:
            raise ConfigError("alpha_grid, rho_grid and intervals must be nonempty")
        if not MIN_TOL <= self.tol <= 1e-2:
            raise ConfigError(f"tol must lie in [{MIN_TOL}, 1e-2], got {self.tol}")
        bad = set(self.suites) - set(SUITES)
        if bad:
            raise ConfigError(f"unknown suites {sorted(bad)}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        try:
            for iv in self.intervals:
                Interval(*iv).require_nonnegative()
            for a in self.alpha_grid + self.limit_alphas:
                FracParams(a, 1.0)
            for r in self.rho_grid:
                FracParams(1.0, r)
            CorpusSpec(self.families, self.count_per_family, self.seed)
        except (DomainError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


@dataclass
class ReportRow:
    suite: str
    label: str
    function: str
    weight: str = ""
    alpha: float = math.nan
    rho: float = math.nan
    a: float = math.nan
    b: float = math.nan
    lhs: float = math.nan
    mid: float = math.nan
    rhs: float = math.nan
    quantity: float = math.nan
    bound: float = math.nan
    residual: float = math.nan
    margin_left: float = math.nan
    margin_right: float = math.nan
    slack: float = math.nan
    status: str = "pass"
    error: float = math.nan


COLUMNS = tuple(f.name for f in fields(ReportRow))


def _status(passed: bool, skipped: bool = False) -> str:
    return "skip" if skipped else ("pass" if passed else "fail")


def _verdict_row(suite, key, f, params, iv, v, weight="") -> ReportRow:
    return ReportRow(suite, LABELS[key], f.name, weight, params.alpha, params.rho, iv.a, iv.b,
                     lhs=v.lhs, mid=v.mid, rhs=v.rhs, margin_left=v.margin_left,
                     margin_right=v.margin_right, status=_status(v.passed, v.skipped), error=v.error)


def _bound_row(suite, key, f, params, iv, v, weight="") -> ReportRow:
    return ReportRow(suite, LABELS[key], f.name, weight, params.alpha, params.rho, iv.a, iv.b,
                     quantity=v.quantity, bound=v.bound, slack=v.slack,
                     status=_status(v.passed, v.skipped), error=v.error)


def _identity_row(suite, key, f, params, iv, v, weight="") -> ReportRow:
    return ReportRow(suite, LABELS[key], f.name, weight, params.alpha, params.rho, iv.a, iv.b,
                     lhs=v.left, rhs=v.right, residual=v.residual,
                     status=_status(v.passed, v.skipped), error=v.error)


# --------------------------------------------------------------------------
# corpora, rebuilt from the config inside each worker
# --------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _corpus(config_json: str, interval: Tuple[float, float], convention: str) -> Tuple[TestFunction, ...]:
    cfg = RunConfig.from_dict(json.loads(config_json))
    spec = CorpusSpec(cfg.families, cfg.count_per_family, cfg.seed, Interval(*interval),
                      Convention(convention), cfg.rho_grid)
    return tuple(generate_convex(spec))


@lru_cache(maxsize=8)
def _weights(config_json: str, interval: Tuple[float, float]):
    cfg = RunConfig.from_dict(json.loads(config_json))
    return tuple(generate_weights(Interval(*interval), cfg.weight_count, cfg.seed))


def _cells(cfg: RunConfig) -> List[tuple]:
    cells = []
    for suite in cfg.suites:
        if suite == "limits":
            for i, iv in enumerate(cfg.intervals):
                if iv[0] > 0:
                    cells.extend(("limits", i, a, math.nan) for a in cfg.limit_alphas)
            continue
        for i, _ in enumerate(cfg.intervals):
            for a in cfg.alpha_grid:
                for r in cfg.rho_grid:
                    cells.append((suite, i, a, r))
    return cells


def run_cell(config_json: str, cell: tuple, variant: str) -> List[ReportRow]:
    """Every report row for one ``(suite, interval, alpha, rho)`` cell."""
    cfg = RunConfig.from_dict(json.loads(config_json))
    suite, idx, alpha, rho = cell
    ivt = cfg.intervals[idx]
    iv = Interval(*ivt)
    tol = cfg.tol
    variant = ConstantVariant(variant)
    rows: List[ReportRow] = []

    if suite == "limits":
        funcs = select(_corpus(config_json, ivt, "direct"), need_deriv1=True)
        ks = range(1, cfg.limit_kmax + 1)
        cap = cfg.limit_threshold
        for f in funcs:
            for d in (1, -1):
                s = limit_to_rl(f, iv, alpha, ks, tol, direction=d)
                rows.append(ReportRow(suite, LABELS["limit-rl"], f.name, "", alpha, s.rhos[-1],
                                      iv.a, iv.b, quantity=s.final_deviation, bound=cap,
                                      slack=cap - s.final_deviation, residual=s.coincidence,
                                      status=_status(s.final_deviation <= cap
                                                     and s.coincidence <= 2 * tol)))
            for study, key in ((limit_to_hadamard(f, iv, alpha, ks, tol), "limit-h"),
                               (limit_corollary_hh_hadamard(f, iv, alpha, ks, tol), "limit-hh-h")):
                ok = study.final_deviation <= cap and all(study.orderings)
                rows.append(ReportRow(suite, LABELS[key], f.name, "", alpha, study.rhos[-1],
                                      iv.a, iv.b, quantity=study.final_deviation, bound=cap,
                                      slack=cap - study.final_deviation, status=_status(ok)))
        return rows

    params = FracParams(alpha, rho)
    if suite in ("hh2", "bounds2", "identity2"):
        funcs = _corpus(config_json, ivt, "power-composed")
        for f in funcs:
            if suite == "hh2":
                rows.append(_verdict_row(suite, "hh", f, params, iv, hh_katugampola(f, iv, params, tol)))
                if rho == 1.0:
                    direct = f.with_convention(Convention.DIRECT)
                    rows.append(_verdict_row(suite, "rl-hh", f, params, iv,
                                             hh_rl_baseline(direct, iv, alpha, tol)))
            elif suite == "identity2" and f.deriv1 is not None:
                rows.append(_identity_row(suite, "trapezoid", f, params, iv,
                                          trapezoid_identity(f, iv, params, variant, tol)))
            elif suite == "bounds2":
                if f.deriv2 is not None:
                    rows.append(_bound_row(suite, "second", f, params, iv,
                                           second_derivative_bound(f, iv, params, variant, tol)))
                if f.has(Certificate.ABS_DERIV_CONVEX) and f.deriv1 is not None:
                    rows.append(_bound_row(suite, "first", f, params, iv,
                                           first_derivative_bound(f, iv, params, variant, tol)))
                    rows.append(_bound_row(suite, "strict", f, params, iv,
                                           strict_derivative_bound(f, iv, params, variant, tol)))
        return rows

    funcs = _corpus(config_json, ivt, "direct")
    weights = _weights(config_json, ivt)
    for f in funcs:
        if suite == "hh3":
            rows.append(_verdict_row(suite, "hh-F", f, params, iv, hh_f(f, iv, params, tol)))
            if f.has(Certificate.ABS_DERIV_CONVEX) and f.deriv1 is not None:
                rows.append(_bound_row(suite, "bound-F", f, params, iv,
                                       hh_f_derivative_bound(f, iv, params, tol)))
        elif suite == "fejer3":
            for g in weights:
                rows.append(_verdict_row(suite, "fejer", f, params, iv,
                                         fejer_f(f, g, iv, params, tol), g.name))
                if f.has(Certificate.ABS_DERIV_CONVEX) and f.deriv1 is not None:
                    rows.append(_bound_row(suite, "fejer-bound", f, params, iv,
                                           fejer_bound(f, g, iv, params, tol), g.name))
        elif suite == "identities3" and f.deriv1 is not None:
            rows.append(_identity_row(suite, "identity-F", f, params, iv,
                                      identity_f(f, iv, params, tol)))
            for g in weights:
                rows.append(_identity_row(suite, "fejer-identity", f, params, iv,
                                          fejer_identity(f, g, iv, params, max(tol, 1e-9)), g.name))
    return rows


# --------------------------------------------------------------------------
# constant adjudication sample
# --------------------------------------------------------------------------

def constant_sample(size: int = 4, seed: int = 20160425, linear_only: bool = False):
    """``u^2`` on ``[0,1]`` at ``alpha in {0.5, 2}``, ``rho in {1, 2}``, plus
    ``size`` smooth corpus members on ``[1,2]`` at ``rho in {0.5, 2}``.

    ``linear_only`` swaps in affine functions vanishing at the midpoint of
    ``[a^rho, b^rho]``, for which both constants reproduce the identity.
    """
    out = []
    if linear_only:
        for rho in (1.0, 2.0):
            for alpha in (0.5, 2.0):
                iv = Interval(1.0, 2.0)
                m = 0.5 * (1.0 + 2.0**rho)
                f = make_function(f"centred-linear-{rho:g}", lambda u, m=m: u - m, (1.0, 2.0**rho),
                                  lambda u: 1.0 + 0 * u, lambda u: 0 * u,
                                  tags=("convex", "abs-deriv-convex", "second-deriv-bounded"),
                                  convention="power-composed")
                out.append((f, iv, FracParams(alpha, rho)))
        return out
    sq = make_function("square", lambda u: u * u, (0.0, 1.0), lambda u: 2 * u, lambda u: 2 + 0 * u,
                       tags=("convex", "abs-deriv-convex", "second-deriv-bounded"),
                       convention="power-composed")
    for rho in (1.0, 2.0):
        for alpha in (0.5, 2.0):
            out.append((sq, Interval(0.0, 1.0), FracParams(alpha, rho)))
    if size > 0:
        spec = CorpusSpec(("quadratic", "exponential", "power-p", "neg-log"), max(1, (size + 3) // 4),
                          seed, Interval(1.0, 2.0), Convention.POWER_COMPOSED, (0.5, 2.0))
        for i, f in enumerate(generate_convex(spec)[:size]):
            out.append((f, Interval(1.0, 2.0), FracParams((0.5, 1.5)[i % 2], (0.5, 2.0)[i % 2])))
    return out


# --------------------------------------------------------------------------
# report emission
# --------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def header(cfg: RunConfig, variant: str) -> Dict[str, object]:
    return {
        "artifact": "fracineq",
        "version": __version__,
        "seed": cfg.seed,
        "tol": cfg.tol,
        "alpha_grid": list(cfg.alpha_grid),
        "rho_grid": list(cfg.rho_grid),
        "intervals": [list(iv) for iv in cfg.intervals],
        "suites": list(cfg.suites),
        "constant": variant,
    }


def render(cfg: RunConfig, variant: str, rows: Sequence[ReportRow]) -> str:
    head = header(cfg, variant)
    if cfg.format == "json":
        body = [{k: (None if isinstance(v, float) and math.isnan(v) else v)
                 for k, v in asdict(r).items()} for r in rows]
        return json.dumps({"header": head, "rows": body}, indent=1) + "\n"
    buf = io.StringIO()
    for k, v in head.items():
        buf.write(f"# {k}: {json.dumps(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def run_sweep(cfg: RunConfig, jobs: int = 1) -> Tuple[str, List[ReportRow]]:
    """Resolve the constant, then evaluate every cell; rows come back in cell order."""
    needs_constant = {"identity2", "bounds2"} & set(cfg.suites)
    variant = (resolve_disputed_constant(constant_sample(seed=cfg.seed)).value
               if needs_constant else ConstantVariant.WITHOUT_ALPHA.value)
    config_json = json.dumps(cfg.to_dict(), sort_keys=True)
    cells = _cells(cfg)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run_cell, [config_json] * len(cells), cells,
                                   [variant] * len(cells), chunksize=4))
    else:
        chunks = [run_cell(config_json, c, variant) for c in cells]
    return variant, [r for chunk in chunks for r in chunk]


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

NAMED_FUNCTIONS = {
    "const1": lambda t: np.ones_like(t),
    "identity": lambda t: t,
    "square": lambda t: t * t,
    "exp": np.exp,
    "log": np.log,
}


def _named(name: str):
    if name.startswith("const") and name[5:]:
        try:
            c = float(name[5:])
        except ValueError:
            raise DomainError(f"unknown function {name!r}") from None
        return lambda t: np.full_like(np.asarray(t, dtype=float), c)
    if name not in NAMED_FUNCTIONS:
        raise DomainError(f"unknown function {name!r}; choose from {sorted(NAMED_FUNCTIONS)} "
                          "or constN")
    return NAMED_FUNCTIONS[name]


def cmd_eval(args) -> int:
    req = OperatorRequest(Kind(args.kind), Side(args.side), FracParams(args.alpha, args.rho),
                          args.a, args.x, _named(args.function), args.tol)
    res = evaluate(req)
    print(f"value={res.value!r} error={res.error:.3e} nodes={res.nodes} converged={res.converged}")
    return EXIT_OK


def _load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {}
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.format is not None:
        overrides["format"] = args.format
    if args.out is not None:
        overrides["output_path"] = args.out
    if overrides:
        cfg = RunConfig.from_dict({**cfg.to_dict(), **overrides})
    return cfg


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    try:
        variant, rows = run_sweep(cfg, args.jobs)
    except AmbiguousResolution as exc:
        print(f"ambiguous: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = render(cfg, variant, rows)
    with open(cfg.output_path, "w", newline="") as fh:
        fh.write(text)
    counts = {s: sum(r.status == s for r in rows) for s in ("pass", "skip", "fail")}
    print(f"rows={len(rows)} pass={counts['pass']} skip={counts['skip']} fail={counts['fail']} "
          f"constant={variant} report={cfg.output_path}")
    return EXIT_FAIL if counts["fail"] else EXIT_OK


def cmd_limits(args) -> int:
    iv = Interval(args.a, args.b)
    f = make_function(args.function, _named(args.function), (iv.a, iv.b))
    ks = range(1, args.k_max + 1)
    if args.target == Target.HADAMARD.value:
        study = limit_to_hadamard(f, iv, args.alpha, ks, args.tol)
    else:
        study = limit_to_rl(f, iv, args.alpha, ks, args.tol)
        print(f"rho=1 deviation={study.coincidence:.3e}")
    print("k,rho,deviation")
    for k, r, d in study.rows():
        print(f"{k},{r!r},{d:.6e}")
    if study.truncated_at is not None:
        print(f"conditioning alarm at k={study.truncated_at}; sequence truncated")
    print(f"estimated order={study.estimated_order:.3f}")
    return EXIT_OK


def cmd_constant(args) -> int:
    sample = constant_sample(args.sample_size, args.seed if args.seed is not None else 20160425,
                             linear_only=args.linear_only)
    table = constant_residuals(sample, 1e-11)
    print("function,alpha,rho,with-alpha,without-alpha")
    for name, a, r, w, wo in table.rows:
        print(f"{name},{a:g},{r:g},{w:.3e},{wo:.3e}")
    try:
        verdict = resolve_disputed_constant(sample, args.tol)
    except AmbiguousResolution as exc:
        print(f"ambiguous: {exc}")
        return EXIT_FAIL
    print(verdict.value)
    return EXIT_OK


def cmd_corpus(args) -> int:
    cfg = _load_config(args)
    convention = Convention(args.convention)
    lines = []
    for iv in cfg.intervals:
        spec = CorpusSpec(cfg.families, cfg.count_per_family, cfg.seed, Interval(*iv),
                          convention, cfg.rho_grid)
        for rec in manifest_records(generate_convex(spec)):
            lines.append(json.dumps(rec, sort_keys=True))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracineq", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate one fractional integral")
    e.add_argument("kind", choices=[k.value for k in Kind])
    e.add_argument("side", choices=[s.value for s in Side])
    e.add_argument("--alpha", type=float, required=True)
    e.add_argument("--rho", type=float, default=1.0)
    e.add_argument("--a", type=float, required=True, help="base point")
    e.add_argument("--x", type=float, required=True, help="evaluation point")
    e.add_argument("--function", default="const1")
    e.add_argument("--tol", type=float, default=1e-10)
    e.set_defaults(run=cmd_eval)

    for name, fn, helptext in (("verify", cmd_verify, "run the verification suites"),
                               ("corpus", cmd_corpus, "dump the corpus manifest")):
        v = sub.add_parser(name, help=helptext)
        v.add_argument("--config")
        v.add_argument("--tol", type=float)
        v.add_argument("--seed", type=int)
        v.add_argument("--format", choices=("csv", "json"))
        v.add_argument("--out")
        v.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        v.set_defaults(run=fn)
    sub.choices["corpus"].add_argument("--convention", default="direct",
                                       choices=[c.value for c in Convention])

    lim = sub.add_parser("limits", help="deviation table along a rho sequence")
    lim.add_argument("--function", default="const1")
    lim.add_argument("--a", type=float, default=1.0)
    lim.add_argument("--b", type=float, default=2.0)
    lim.add_argument("--alpha", type=float, required=True)
    lim.add_argument("--k-max", type=int, default=10)
    lim.add_argument("--target", choices=[t.value for t in Target],
                     default=Target.RIEMANN_LIOUVILLE.value)
    lim.add_argument("--tol", type=float, default=1e-10)
    lim.set_defaults(run=cmd_limits)

    c = sub.add_parser("constant", help="adjudicate the trapezoid-identity constant")
    c.add_argument("--sample-size", type=int, default=4)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--seed", type=int)
    c.add_argument("--linear-only", action="store_true")
    c.set_defaults(run=cmd_constant)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
