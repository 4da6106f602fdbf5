"""Seeded generators for convex test functions and symmetric weights.

Each family is written in the normalised coordinate ``z = (x - lo)/(hi - lo)``
of the function's domain, which keeps values O(1) whatever the domain is
(a power-composed domain such as ``[1, 2^5]`` would otherwise push an
exponential to 1e27). Affine reparametrisation preserves convexity of ``f``
and of ``|f'|``, so every certificate carries over.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .core import (
    Certificate,
    Convention,
    DomainError,
    Interval,
    TestFunction,
    WeightFunction,
    check_convex,
    check_deriv1,
    check_symmetric_weight,
)

FAMILIES = (
    "affine",
    "quadratic",
    "even-power",
    "exponential",
    "power-p",
    "piecewise-linear-random",
    "neg-log",
)

SMOOTH_TAGS = frozenset({Certificate.CONVEX, Certificate.ABS_DERIV_CONVEX,
                         Certificate.SECOND_DERIV_BOUNDED})


@dataclass(frozen=True)
class CorpusSpec:
    families: Tuple[str, ...] = FAMILIES
    count_per_family: int = 3
    seed: int = 20160425
    interval: Interval = Interval(1.0, 2.0)
    convention: Convention = Convention.DIRECT
    rho_grid: Tuple[float, ...] = (1.0,)

    def __post_init__(self) -> None:
        if not self.families:
            raise DomainError("corpus needs at least one family")
        unknown = set(self.families) - set(FAMILIES)
        if unknown:
            raise DomainError(f"unknown families: {sorted(unknown)}")
        if self.count_per_family < 1:
            raise DomainError("count_per_family must be >= 1")
        object.__setattr__(self, "convention", Convention(self.convention))
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "rho_grid", tuple(float(r) for r in self.rho_grid))

    def domain(self) -> Tuple[float, float]:
        """Direct: the interval. Power-composed: the hull of ``[a^r, b^r]`` over the grid."""
        a, b = self.interval.a, self.interval.b
        if self.convention is Convention.DIRECT:
            return a, b
        self.interval.require_nonnegative()
        return min(a**r for r in self.rho_grid), max(b**r for r in self.rho_grid)


# Each builder returns (F, F', F'', params, tags) in the normalised coordinate.
Builder = Callable[[np.random.Generator], tuple]


def _affine(rng):
    p = rng.uniform(-1.0, 1.0)
    q = max(0.0, -p) + rng.uniform(0.1, 1.0)
    return (lambda z: p * z + q, lambda z: p + 0 * z, lambda z: 0 * z,
            {"slope": p, "intercept": q}, SMOOTH_TAGS)


def _quadratic(rng):
    c2 = rng.uniform(0.2, 2.0)
    c1 = rng.uniform(-2.0, 2.0)
    zmin = min(max(-c1 / (2 * c2), 0.0), 1.0)
    c0 = -(c2 * zmin**2 + c1 * zmin) + rng.uniform(0.1, 1.0)
    return (lambda z: (c2 * z + c1) * z + c0, lambda z: 2 * c2 * z + c1,
            lambda z: 2 * c2 + 0 * z, {"c2": c2, "c1": c1, "c0": c0}, SMOOTH_TAGS)


def _even_power(rng):
    k = int(rng.integers(1, 4))
    c = rng.uniform(0.5, 2.0)
    d = rng.uniform(0.1, 1.0)
    m = 2 * k
    return (lambda z: c * (z - 0.5) ** m + d,
            lambda z: c * m * (z - 0.5) ** (m - 1),
            lambda z: c * m * (m - 1) * (z - 0.5) ** (m - 2),
            {"power": m, "scale": c, "offset": d},
            SMOOTH_TAGS | {Certificate.SYMMETRIC})


def _exponential(rng):
    k = rng.uniform(0.1, 2.0)
    c = rng.uniform(0.5, 1.5)
    return (lambda z: c * np.exp(k * z), lambda z: c * k * np.exp(k * z),
            lambda z: c * k * k * np.exp(k * z), {"rate": k, "scale": c}, SMOOTH_TAGS)


def _power_p(rng):
    p = rng.uniform(2.0, 4.0)
    s = rng.uniform(0.0, 0.5)
    return (lambda z: (z + s) ** p, lambda z: p * (z + s) ** (p - 1),
            lambda z: p * (p - 1) * (z + s) ** (p - 2), {"p": p, "shift": s}, SMOOTH_TAGS)


def _piecewise_linear(rng):
    pieces = int(rng.integers(3, 6))
    knots = np.sort(rng.uniform(0.05, 0.95, pieces - 1))
    slopes = np.sort(rng.uniform(-2.0, 2.0, pieces))
    # lines meet at the knots and slopes increase, so their max is convex
    offsets = np.concatenate(([0.0], np.cumsum(np.diff(slopes) * -knots)))
    values = np.max(np.outer(np.linspace(0, 1, 257), slopes) + offsets, axis=1)
    lift = -values.min() + rng.uniform(0.1, 1.0)

    def F(z):
        z = np.asarray(z, dtype=float)
        return np.max(z[..., None] * slopes + offsets, axis=-1) + lift

    return (F, None, None,
            {"knots": knots.tolist(), "slopes": slopes.tolist(), "lift": lift},
            frozenset({Certificate.CONVEX}))


def _neg_log(rng):
    s = rng.uniform(0.2, 1.0)
    c = math.log(1.0 + s) + rng.uniform(0.1, 1.0)
    return (lambda z: c - np.log(z + s), lambda z: -1.0 / (z + s),
            lambda z: 1.0 / (z + s) ** 2, {"shift": s, "offset": c}, SMOOTH_TAGS)


_BUILDERS: Dict[str, Builder] = {
    "affine": _affine,
    "quadratic": _quadratic,
    "even-power": _even_power,
    "exponential": _exponential,
    "power-p": _power_p,
    "piecewise-linear-random": _piecewise_linear,
    "neg-log": _neg_log,
}


def _rescale(F, F1, F2, lo: float, hi: float):
    L = hi - lo

    def f(x):
        return F((np.asarray(x, dtype=float) - lo) / L)

    d1 = None if F1 is None else (lambda x: F1((np.asarray(x, dtype=float) - lo) / L) / L)
    d2 = None if F2 is None else (lambda x: F2((np.asarray(x, dtype=float) - lo) / L) / L**2)
    return f, d1, d2


def generate_convex(spec: CorpusSpec) -> List[TestFunction]:
    """Deterministic convex corpus; one RNG stream per family."""
    lo, hi = spec.domain()
    out = []
    for fam in spec.families:
        rng = np.random.default_rng([spec.seed, FAMILIES.index(fam)])
        for i in range(spec.count_per_family):
            F, F1, F2, params, tags = _BUILDERS[fam](rng)
            f, d1, d2 = _rescale(F, F1, F2, lo, hi)
            params = dict(params, family=fam, index=i, seed=spec.seed)
            out.append(TestFunction(
                name=f"{fam}-{i}", eval=f, domain=(lo, hi), deriv1=d1, deriv2=d2,
                tags=frozenset(tags), convention=spec.convention, params=params,
            ))
    return out


def generate_weights(interval: Interval, count: int, seed: int = 0) -> List[WeightFunction]:
    """``1``, ``(x-m)^2``, ``1 + cos(pi (x-m)/(b-a))``, then seeded even polynomials."""
    if count < 1:
        raise DomainError("count must be >= 1")
    m, L = interval.mid, interval.width
    out = [
        WeightFunction("one", lambda x: np.ones_like(np.asarray(x, dtype=float)), interval,
                       params={"kind": "constant"}),
        WeightFunction("centred-square", lambda x: (np.asarray(x, dtype=float) - m) ** 2,
                       interval, params={"kind": "square"}),
        WeightFunction("raised-cosine",
                       lambda x: 1.0 + np.cos(np.pi * (np.asarray(x, dtype=float) - m) / L),
                       interval, params={"kind": "cosine"}),
    ]
    rng = np.random.default_rng([seed, 1009])
    j = 0
    while len(out) < count:
        coeffs = rng.uniform(0.1, 1.0, int(rng.integers(2, 5)))

        def g(x, c=coeffs):
            y = ((np.asarray(x, dtype=float) - m) / L) ** 2
            return np.polynomial.polynomial.polyval(y, c)

        out.append(WeightFunction(f"even-poly-{j}", g, interval,
                                  params={"kind": "even-poly", "coefficients": coeffs.tolist()}))
        j += 1
    return out[:count]


def certificate_report(f: TestFunction, samples: int = 256, seed: int = 0) -> Dict[str, bool]:
    """Sampled soundness checks for the certificates that can be sampled.

    ``abs-deriv-convex`` is guaranteed by family construction and is not
    checked here.
    """
    out = {}
    if f.has(Certificate.CONVEX):
        out["convex"] = check_convex(f, samples, seed)
    if f.deriv1 is not None:
        out["deriv1"] = check_deriv1(f, seed=seed)
    if f.has(Certificate.SYMMETRIC):
        rng = np.random.default_rng(seed)
        lo, hi = f.domain
        x = rng.uniform(lo, hi, samples)
        fx = f(x)
        out["symmetric"] = bool(np.all(np.abs(fx - f(lo + hi - x))
                                       <= 1e-12 * np.maximum(1.0, np.abs(fx))))
    return out


def weight_report(g: WeightFunction, seed: int = 0) -> bool:
    return check_symmetric_weight(g, seed=seed)


def select(functions: Iterable[TestFunction], *required: Certificate,
           need_deriv1: bool = False, need_deriv2: bool = False) -> List[TestFunction]:
    """Corpus members carrying every required certificate."""
    out = []
    for f in functions:
        if not all(f.has(t) for t in required):
            continue
        if need_deriv1 and f.deriv1 is None:
            continue
        if need_deriv2 and f.deriv2 is None:
            continue
        out.append(f)
    return out


def manifest_records(functions: Sequence[TestFunction]) -> List[dict]:
    return [
        {
            "id": f.name,
            "family": f.params.get("family"),
            "parameters": {k: v for k, v in f.params.items()
                           if k not in ("family", "index", "seed")},
            "certificates": sorted(t.value for t in f.tags),
            "seed": f.params.get("seed"),
            "domain": list(f.domain),
            "convention": f.convention.value,
        }
        for f in functions
    ]


def write_manifest(functions: Sequence[TestFunction], path) -> None:
    """One JSON record per line."""
    with open(path, "w") as fh:
        for rec in manifest_records(functions):
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
