"""Executable Hermite-Hadamard and Hermite-Hadamard-Fejer statements.

Two conventions are in play and are kept apart by the ``convention`` tag on
:class:`~fracineq.core.TestFunction`:

* power-composed: ``f`` lives on ``[a^rho, b^rho]`` and the operators act on
  ``t -> f(t^rho)`` (``hh_katugampola``, ``trapezoid_identity`` and the three
  derivative bounds built on it);
* direct: operators act on ``F(x) = f(x) + f(a+b-x)`` over ``[a, b]``
  (``hh_f``, ``identity_f``, ``fejer_*``).

Every evaluator returns a verdict object; none of them raise on a failed
inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .core import (
    Certificate,
    Convention,
    DomainError,
    FracParams,
    Interval,
    TestFunction,
    WeightFunction,
    gamma,
)
from .operators import katugampola_integral, riemann_liouville_integral
from .quadrature import Side, integrate_singular_batch, integrate_smooth

VERDICT_FLOOR = 1e-7
WIDTH_UNDERFLOW = 1e-280


class CertificateError(DomainError):
    """An inequality check was handed a function lacking a required certificate."""


class AmbiguousResolution(RuntimeError):
    """Both or neither normalising constant reproduced the identity."""


class ConstantVariant(str, Enum):
    WITH_ALPHA = "with-alpha"
    WITHOUT_ALPHA = "without-alpha"


@dataclass(frozen=True)
class InequalityVerdict:
    lhs: float
    mid: float
    rhs: float
    tol: float
    error: float = 0.0
    skipped: bool = False

    @property
    def margin_left(self) -> float:
        return self.mid - self.lhs

    @property
    def margin_right(self) -> float:
        return self.rhs - self.mid

    @property
    def passed(self) -> bool:
        return self.skipped or (self.margin_left >= -self.tol and self.margin_right >= -self.tol)


@dataclass(frozen=True)
class IdentityResidual:
    left: float
    right: float
    tol: float
    error: float = 0.0
    skipped: bool = False

    @property
    def residual(self) -> float:
        return abs(self.left - self.right)

    @property
    def passed(self) -> bool:
        return self.skipped or self.residual <= self.tol


@dataclass(frozen=True)
class BoundVerdict:
    quantity: float
    bound: float
    tol: float
    error: float = 0.0
    skipped: bool = False

    @property
    def slack(self) -> float:
        return self.bound - self.quantity

    @property
    def passed(self) -> bool:
        return self.skipped or self.slack >= -self.tol


def verdict_tol(error: float) -> float:
    return VERDICT_FLOOR + 10.0 * error


def _require(f: TestFunction, *tags: Certificate) -> None:
    missing = [t.value for t in tags if not f.has(t)]
    if missing:
        raise CertificateError(f"{f.name} lacks certificate(s) {missing}")


def _require_convention(f: TestFunction, want: Convention) -> None:
    if f.convention is not want:
        raise DomainError(f"{f.name} uses the {f.convention.value} convention; "
                          f"this statement needs {want.value}")


def _powered(interval: Interval, rho: float) -> Tuple[float, float, float]:
    """``a^rho``, ``b^rho`` and their difference without cancellation."""
    a, b = interval.a, interval.b
    if a > 0:
        A = a**rho
        return A, b**rho, A * math.expm1(rho * math.log(b / a))
    interval.require_nonnegative()
    B = b**rho
    return 0.0, B, B


def _scalar(f, x: float) -> float:
    return float(np.asarray(f(np.array([x])))[0])


def _grade(*exponents: float) -> int:
    """Endpoint grading degree for integrands behaving like ``s^e``."""
    frac = [e for e in exponents if e > 0 and e != int(e)]
    if not frac:
        return 1
    return int(min(64, max(2, math.ceil(4.0 / min(frac)))))


# --------------------------------------------------------------------------
# power-composed statements
# --------------------------------------------------------------------------

def _composed_pair(f: TestFunction, interval: Interval, params: FracParams, tol: float):
    """Left integral at ``b`` plus right integral at ``a`` of ``t -> f(t^rho)``."""
    lo, hi = interval.powered(params.rho).a, interval.powered(params.rho).b
    if not f.covers(lo, hi):
        raise DomainError(f"{f.name} is defined on {f.domain}, needs [{lo}, {hi}]")
    left = katugampola_integral(f, params, interval.a, interval.b, Side.LEFT, tol, composed=True)
    right = katugampola_integral(f, params, interval.b, interval.a, Side.RIGHT, tol, composed=True)
    return left + right


def _fractional_mean_factor(width: float, params: FracParams) -> float:
    """``rho^alpha G(alpha+1) / (2 width^alpha)``."""
    return params.rho**params.alpha * gamma(params.alpha + 1) / (2.0 * width**params.alpha)


def hh_katugampola(f: TestFunction, interval: Interval, params: FracParams,
                   tol: float = 1e-10) -> InequalityVerdict:
    """Midpoint <= fractional mean <= endpoint average for ``f(t^rho)``."""
    _require_convention(f, Convention.POWER_COMPOSED)
    _require(f, Certificate.CONVEX)
    A, B, width = _powered(interval, params.rho)
    if width**params.alpha < WIDTH_UNDERFLOW:
        return InequalityVerdict(math.nan, math.nan, math.nan, VERDICT_FLOOR, skipped=True)
    pair = _composed_pair(f, interval, params, tol)
    c = _fractional_mean_factor(width, params)
    return InequalityVerdict(
        lhs=_scalar(f, 0.5 * (A + B)),
        mid=c * pair.value,
        rhs=0.5 * (_scalar(f, A) + _scalar(f, B)),
        tol=verdict_tol(c * pair.error),
        error=c * pair.error,
    )


def hh_rl_baseline(f: TestFunction, interval: Interval, alpha: float,
                   tol: float = 1e-10) -> InequalityVerdict:
    """The Riemann-Liouville form: ``G(alpha+1)/(2(b-a)^alpha) [J_a+ f(b) + J_b- f(a)]``."""
    _require(f, Certificate.CONVEX)
    a, b = interval.a, interval.b
    left = riemann_liouville_integral(f, alpha, a, b, Side.LEFT, tol)
    right = riemann_liouville_integral(f, alpha, b, a, Side.RIGHT, tol)
    c = gamma(alpha + 1) / (2.0 * (b - a) ** alpha)
    err = c * (left.error + right.error)
    return InequalityVerdict(
        lhs=_scalar(f, interval.mid),
        mid=c * (left.value + right.value),
        rhs=0.5 * (_scalar(f, a) + _scalar(f, b)),
        tol=verdict_tol(err),
        error=err,
    )


def _composed_gap(f: TestFunction, interval: Interval, params: FracParams,
                  variant: ConstantVariant, tol: float):
    """``(f(A)+f(B))/2 - C [I_a+ f(b^rho) + I_b- f(a^rho)]`` and its error."""
    A, B, width = _powered(interval, params.rho)
    pair = _composed_pair(f, interval, params, tol)
    c = _fractional_mean_factor(width, params)
    if ConstantVariant(variant) is ConstantVariant.WITH_ALPHA:
        c *= params.alpha
    gap = 0.5 * (_scalar(f, A) + _scalar(f, B)) - c * pair.value
    return gap, c * pair.error


def trapezoid_kernel_integral(f: TestFunction, interval: Interval, params: FracParams,
                              tol: float = 1e-10):
    """``int_0^1 [(1-t^rho)^alpha - t^(rho alpha)] t^(rho-1) f'(t^rho A + (1-t^rho) B) dt``.

    Evaluated after ``v = t^rho``, which absorbs ``t^(rho-1) dt = dv/rho``;
    the bracket changes sign at ``v = 1/2``, declared as a kink.
    """
    if f.deriv1 is None:
        raise CertificateError(f"{f.name} has no first derivative")
    alpha, rho = params.alpha, params.rho
    A, B, _ = _powered(interval, rho)

    def integrand(v):
        return ((1.0 - v) ** alpha - v**alpha) * f.deriv1(v * A + (1.0 - v) * B)

    res = integrate_smooth(integrand, 0.0, 1.0, tol, kinks=(0.5,), grade=_grade(alpha))
    return res.scaled(1.0 / rho)


def trapezoid_identity(f: TestFunction, interval: Interval, params: FracParams,
                       variant: ConstantVariant = ConstantVariant.WITHOUT_ALPHA,
                       tol: float = 1e-10, rho_factor: bool = True,
                       residual_tol: float = 1e-6) -> IdentityResidual:
    """Endpoint average minus fractional mean versus the ``f'``-kernel integral.

    Integration by parts of the right-hand integral produces boundary terms
    ``f(A)/(rho (B-A))`` and ``f(B)/(rho (B-A))``; with ``rho_factor`` the
    right side is ``rho (B-A)/2 * kernel integral`` so that the two sides
    agree for every ``rho``. With ``rho_factor=False`` the factor ``rho`` is
    dropped, which only balances at ``rho = 1``.
    """
    _require_convention(f, Convention.POWER_COMPOSED)
    if f.deriv1 is None:
        raise CertificateError(f"{f.name} has no first derivative")
    _, _, width = _powered(interval, params.rho)
    if width**params.alpha < WIDTH_UNDERFLOW:
        return IdentityResidual(math.nan, math.nan, residual_tol, skipped=True)
    left, err_left = _composed_gap(f, interval, params, variant, tol)
    kern = trapezoid_kernel_integral(f, interval, params, tol)
    scale = 0.5 * width * (params.rho if rho_factor else 1.0)
    return IdentityResidual(left, scale * kern.value, residual_tol,
                            error=err_left + scale * kern.error)


@dataclass(frozen=True)
class ConstantTable:
    """Worst residual of each variant over a sample."""

    rows: List[Tuple[str, float, float, float, float]] = field(default_factory=list)

    def worst(self, variant: ConstantVariant) -> float:
        col = 3 if ConstantVariant(variant) is ConstantVariant.WITH_ALPHA else 4
        return max((r[col] for r in self.rows), default=0.0)


def constant_residuals(sample: Iterable[Tuple[TestFunction, Interval, FracParams]],
                       tol: float = 1e-10) -> ConstantTable:
    """Residuals of :func:`trapezoid_identity` under both constant variants.

    Rows are ``(function name, alpha, rho, with-alpha residual, without-alpha residual)``.
    """
    rows = []
    for f, interval, params in sample:
        res = [trapezoid_identity(f, interval, params, v, tol).residual
               for v in (ConstantVariant.WITH_ALPHA, ConstantVariant.WITHOUT_ALPHA)]
        rows.append((f.name, params.alpha, params.rho, res[0], res[1]))
    return ConstantTable(rows)


def resolve_disputed_constant(sample: Sequence[Tuple[TestFunction, Interval, FracParams]],
                              tol: float = 1e-8, quad_tol: float = 1e-11) -> ConstantVariant:
    """Pick the normalising constant under which the trapezoid identity holds.

    Returns the unique variant whose worst residual over ``sample`` is within
    ``tol``; raises :class:`AmbiguousResolution` when both or neither qualify.
    """
    if not sample:
        raise DomainError("empty sample")
    table = constant_residuals(sample, quad_tol)
    ok = [v for v in ConstantVariant if table.worst(v) <= tol]
    if len(ok) != 1:
        raise AmbiguousResolution(
            f"{len(ok)} variants qualify (worst residuals: with-alpha "
            f"{table.worst(ConstantVariant.WITH_ALPHA):.3e}, without-alpha "
            f"{table.worst(ConstantVariant.WITHOUT_ALPHA):.3e})")
    return ok[0]


def sup_abs(fn, lo: float, hi: float, points: int = 4097) -> float:
    """``sup |fn|`` on ``[lo, hi]``: dense grid, then a bounded local refinement."""
    grid = np.linspace(lo, hi, points)
    vals = np.abs(np.asarray(fn(grid), dtype=float))
    i = int(np.argmax(vals))
    best = float(vals[i])
    l, r = grid[max(i - 1, 0)], grid[min(i + 1, points - 1)]
    if r > l:
        opt = minimize_scalar(lambda x: -abs(_scalar(fn, x)), bounds=(l, r), method="bounded",
                              options={"xatol": 1e-12 * max(1.0, abs(hi))})
        best = max(best, -float(opt.fun))
    return best


def second_derivative_bound(f: TestFunction, interval: Interval, params: FracParams,
                            variant: ConstantVariant = ConstantVariant.WITHOUT_ALPHA,
                            tol: float = 1e-10) -> BoundVerdict:
    """Gap bounded by ``(B-A)^2/(2(a+1)(a+2)) (a + 2^-a) sup|f''|``."""
    _require_convention(f, Convention.POWER_COMPOSED)
    if f.deriv2 is None:
        raise CertificateError(f"{f.name} has no second derivative")
    alpha = params.alpha
    A, B, width = _powered(interval, params.rho)
    if width**alpha < WIDTH_UNDERFLOW:
        return BoundVerdict(math.nan, math.nan, VERDICT_FLOOR, skipped=True)
    gap, err = _composed_gap(f, interval, params, variant, tol)
    bound = width**2 / (2 * (alpha + 1) * (alpha + 2)) * (alpha + 2.0**-alpha) * sup_abs(f.deriv2, A, B)
    return BoundVerdict(abs(gap), bound, verdict_tol(err), err)


def _endpoint_slopes(f: TestFunction, lo: float, hi: float) -> float:
    return abs(_scalar(f.deriv1, lo)) + abs(_scalar(f.deriv1, hi))


def first_derivative_bound(f: TestFunction, interval: Interval, params: FracParams,
                           variant: ConstantVariant = ConstantVariant.WITHOUT_ALPHA,
                           tol: float = 1e-10) -> BoundVerdict:
    """Gap bounded by ``(B-A)/(2(alpha+1)) (|f'(A)| + |f'(B)|)``."""
    _require_convention(f, Convention.POWER_COMPOSED)
    _require(f, Certificate.ABS_DERIV_CONVEX)
    A, B, width = _powered(interval, params.rho)
    if width**params.alpha < WIDTH_UNDERFLOW:
        return BoundVerdict(math.nan, math.nan, VERDICT_FLOOR, skipped=True)
    gap, err = _composed_gap(f, interval, params, variant, tol)
    bound = width / (2 * (params.alpha + 1)) * _endpoint_slopes(f, A, B)
    return BoundVerdict(abs(gap), bound, verdict_tol(err), err)


def strict_bound_value(f: TestFunction, interval: Interval, params: FracParams,
                       rho_factor: bool = True) -> float:
    """``(B-A)/(2(alpha+1)) (1 - 2^-alpha) (|f'(A)| + |f'(B)|)``, divided by ``rho``
    when ``rho_factor`` is off."""
    A, B, width = _powered(interval, params.rho)
    scale = 1.0 if rho_factor else 1.0 / params.rho
    return (scale * width / (2 * (params.alpha + 1)) * (1 - 2.0**-params.alpha)
            * _endpoint_slopes(f, A, B))


def strict_derivative_bound(f: TestFunction, interval: Interval, params: FracParams,
                            variant: ConstantVariant = ConstantVariant.WITHOUT_ALPHA,
                            tol: float = 1e-10, rho_factor: bool = True) -> BoundVerdict:
    """The ``(1 - 2^-alpha)`` bound obtained from the trapezoid identity.

    ``rho_factor`` selects the bound that follows from the identity with its
    factor ``rho`` restored; turning it off divides the bound by ``rho``,
    which is only valid for ``rho <= 1``.
    """
    _require_convention(f, Convention.POWER_COMPOSED)
    _require(f, Certificate.ABS_DERIV_CONVEX)
    _, _, width = _powered(interval, params.rho)
    if width**params.alpha < WIDTH_UNDERFLOW:
        return BoundVerdict(math.nan, math.nan, VERDICT_FLOOR, skipped=True)
    gap, err = _composed_gap(f, interval, params, variant, tol)
    return BoundVerdict(abs(gap), strict_bound_value(f, interval, params, rho_factor),
                        verdict_tol(err), err)


# --------------------------------------------------------------------------
# symmetrised (direct) statements
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FTransform:
    """``F(x) = f(x) + f(a+b-x)`` and ``F'(x) = f'(x) - f'(a+b-x)``."""

    source: TestFunction
    interval: Interval

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s = self.interval.a + self.interval.b
        return self.source(x) + self.source(s - x)

    def deriv1(self, x):
        if self.source.deriv1 is None:
            raise CertificateError(f"{self.source.name} has no first derivative")
        x = np.asarray(x, dtype=float)
        s = self.interval.a + self.interval.b
        return self.source.deriv1(x) - self.source.deriv1(s - x)

    def as_function(self) -> TestFunction:
        tags = {Certificate.SYMMETRIC}
        if self.source.has(Certificate.CONVEX):
            tags.add(Certificate.CONVEX)
        return TestFunction(
            name=f"F[{self.source.name}]", eval=self,
            domain=(self.interval.a, self.interval.b),
            deriv1=None if self.source.deriv1 is None else self.deriv1,
            tags=frozenset(tags), convention=Convention.DIRECT,
        )


def f_transform(f: TestFunction, interval: Interval) -> FTransform:
    if not f.covers(interval.a, interval.b):
        raise DomainError(f"{f.name} is defined on {f.domain}, needs [{interval.a}, {interval.b}]")
    return FTransform(f, interval)


def _direct_pair(fn, interval: Interval, params: FracParams, tol: float):
    """``I_a+ fn(b) + I_b- fn(a)``."""
    left = katugampola_integral(fn, params, interval.a, interval.b, Side.LEFT, tol)
    right = katugampola_integral(fn, params, interval.b, interval.a, Side.RIGHT, tol)
    return left + right


def hh_f(f: TestFunction, interval: Interval, params: FracParams,
         tol: float = 1e-10) -> InequalityVerdict:
    """``F(m) <= rho^a G(a+1)/(2(B-A)^a) [I_a+ F(b) + I_b- F(a)] <= (F(a)+F(b))/2``."""
    _require_convention(f, Convention.DIRECT)
    _require(f, Certificate.CONVEX)
    _, _, width = _powered(interval, params.rho)
    if width**params.alpha < WIDTH_UNDERFLOW:
        return InequalityVerdict(math.nan, math.nan, math.nan, VERDICT_FLOOR, skipped=True)
    F = f_transform(f, interval)
    pair = _direct_pair(F, interval, params, tol)
    c = _fractional_mean_factor(width, params)
    return InequalityVerdict(
        lhs=_scalar(F, interval.mid),
        mid=c * pair.value,
        rhs=0.5 * (_scalar(F, interval.a) + _scalar(F, interval.b)),
        tol=verdict_tol(c * pair.error),
        error=c * pair.error,
    )


def hh_direct(f: TestFunction, interval: Interval, params: FracParams,
              tol: float = 1e-10) -> InequalityVerdict:
    """The unsymmetrised direct-convention form, operators applied to ``f`` itself.

    For ``f`` symmetric about the midpoint, ``F = 2f`` and :func:`hh_f`
    returns exactly twice these three numbers.
    """
    _require_convention(f, Convention.DIRECT)
    _require(f, Certificate.CONVEX)
    _, _, width = _powered(interval, params.rho)
    if width**params.alpha < WIDTH_UNDERFLOW:
        return InequalityVerdict(math.nan, math.nan, math.nan, VERDICT_FLOOR, skipped=True)
    pair = _direct_pair(f, interval, params, tol)
    c = _fractional_mean_factor(width, params)
    return InequalityVerdict(
        lhs=_scalar(f, interval.mid),
        mid=c * pair.value,
        rhs=0.5 * (_scalar(f, interval.a) + _scalar(f, interval.b)),
        tol=verdict_tol(c * pair.error),
        error=c * pair.error,
    )


def kernel_K(t, interval: Interval, params: FracParams):
    """``[x^rho - a^rho]^alpha - [b^rho - x^rho]^alpha`` at ``x = (1-t) a + t b``."""
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise DomainError("kernel_K needs t in [0, 1]")
    A, B, _ = _powered(interval, params.rho)
    x = (1.0 - t) * interval.a + t * interval.b
    xr = np.power(x, params.rho)
    return np.maximum(xr - A, 0.0) ** params.alpha - np.maximum(B - xr, 0.0) ** params.alpha


def kernel_K_zero(interval: Interval, params: FracParams) -> float:
    """The unique ``t`` with ``x(t)^rho = (a^rho + b^rho)/2``."""
    A, B, _ = _powered(interval, params.rho)
    x = (0.5 * (A + B)) ** (1.0 / params.rho)
    return (x - interval.a) / interval.width


def _kernel_grade(interval: Interval, params: FracParams) -> int:
    # K behaves like t^alpha at the ends (t^(rho alpha) at t = 0 when a = 0)
    exps = [params.alpha]
    if interval.a == 0:
        exps.append(params.rho * params.alpha)
    return _grade(*exps)


def abs_kernel_integral(interval: Interval, params: FracParams, tol: float = 1e-12):
    """``int_0^1 |K(t)| dt`` with the zero of ``K`` declared as a kink."""
    return integrate_smooth(lambda t: np.abs(kernel_K(t, interval, params)), 0.0, 1.0, tol,
                            kinks=(kernel_K_zero(interval, params),),
                            grade=_kernel_grade(interval, params))


def _direct_gap(F, interval: Interval, params: FracParams, tol: float):
    _, _, width = _powered(interval, params.rho)
    pair = _direct_pair(F, interval, params, tol)
    c = _fractional_mean_factor(width, params)
    gap = 0.5 * (_scalar(F, interval.a) + _scalar(F, interval.b)) - c * pair.value
    return gap, c * pair.error


def identity_f(f: TestFunction, interval: Interval, params: FracParams,
               tol: float = 1e-10, residual_tol: float = 1e-6) -> IdentityResidual:
    """Symmetrised gap versus ``(b-a)/(2(B-A)^alpha) int_0^1 K(t) F'((1-t)a + tb) dt``."""
    _require_convention(f, Convention.DIRECT)
    if f.deriv1 is None:
        raise CertificateError(f"{f.name} has no first derivative")
    _, _, width = _powered(interval, params.rho)
    if width**params.alpha < WIDTH_UNDERFLOW:
        return IdentityResidual(math.nan, math.nan, residual_tol, skipped=True)
    F = f_transform(f, interval)
    gap, err = _direct_gap(F, interval, params, tol)
    a, b = interval.a, interval.b

    def integrand(t):
        return kernel_K(t, interval, params) * F.deriv1((1.0 - t) * a + t * b)

    kern = integrate_smooth(integrand, 0.0, 1.0, tol, grade=_kernel_grade(interval, params))
    c = (b - a) / (2.0 * width**params.alpha)
    return IdentityResidual(gap, c * kern.value, residual_tol, error=err + c * kern.error)


def hh_f_derivative_bound(f: TestFunction, interval: Interval, params: FracParams,
                          tol: float = 1e-10) -> BoundVerdict:
    """Gap bounded by ``(b-a)/(2(B-A)^alpha) int|K| (|f'(a)| + |f'(b)|)``."""
    _require_convention(f, Convention.DIRECT)
    _require(f, Certificate.ABS_DERIV_CONVEX)
    _, _, width = _powered(interval, params.rho)
    if width**params.alpha < WIDTH_UNDERFLOW:
        return BoundVerdict(math.nan, math.nan, VERDICT_FLOOR, skipped=True)
    F = f_transform(f, interval)
    gap, err = _direct_gap(F, interval, params, tol)
    k = abs_kernel_integral(interval, params, tol)
    bound = interval.width / (2.0 * width**params.alpha) * k.value * _endpoint_slopes(f, interval.a, interval.b)
    return BoundVerdict(abs(gap), bound, verdict_tol(err), err)


def _check_weight(g: WeightFunction, interval: Interval) -> None:
    grid = np.linspace(interval.a, interval.b, 1025)
    if np.any(np.asarray(g(grid)) < 0):
        raise DomainError(f"weight {g.name} takes negative values on [{interval.a}, {interval.b}]")


def weight_mass(g, interval: Interval, params: FracParams, tol: float = 1e-10):
    """``S_g = I_a+ g(b) + I_b- g(a)``."""
    return _direct_pair(g, interval, params, tol)


def fejer_f(f: TestFunction, g: WeightFunction, interval: Interval, params: FracParams,
            tol: float = 1e-10) -> InequalityVerdict:
    """``F(m) S_g <= I_a+ (gF)(b) + I_b- (gF)(a) <= (F(a)+F(b))/2 S_g``."""
    _require_convention(f, Convention.DIRECT)
    _require(f, Certificate.CONVEX)
    _check_weight(g, interval)
    F = f_transform(f, interval)
    mass = weight_mass(g, interval, params, tol)
    mid = _direct_pair(lambda x: g(x) * F(x), interval, params, tol)
    Fm = _scalar(F, interval.mid)
    Fe = 0.5 * (_scalar(F, interval.a) + _scalar(F, interval.b))
    err = mid.error + max(abs(Fm), abs(Fe)) * mass.error
    return InequalityVerdict(Fm * mass.value, mid.value, Fe * mass.value, verdict_tol(err), err)


def kernel_G(s, interval: Interval, params: FracParams):
    """``s^(rho-1) (b^rho - s^rho)^(alpha-1) + s^(rho-1) (s^rho - a^rho)^(alpha-1)``."""
    s = np.asarray(s, dtype=float)
    if np.any((s <= interval.a) | (s >= interval.b)):
        raise DomainError("kernel_G needs s in (a, b)")
    A, B, _ = _powered(interval, params.rho)
    sr = np.power(s, params.rho)
    lam = params.alpha - 1.0
    return np.power(s, params.rho - 1.0) * ((B - sr) ** lam + (sr - A) ** lam)


def _fejer_gap(F, g, interval: Interval, params: FracParams, tol: float):
    mass = weight_mass(g, interval, params, tol)
    mid = _direct_pair(lambda x: g(x) * F(x), interval, params, tol)
    Fe = 0.5 * (_scalar(F, interval.a) + _scalar(F, interval.b))
    return Fe * mass.value - mid.value, mid.error + abs(Fe) * mass.error


def signed_weight_integral(g, interval: Interval, params: FracParams, t, tol: float = 1e-12):
    """``W(t) = int_a^t G g ds - int_t^b G g ds`` at every ``t`` (vectorized).

    In ``u = s^rho`` the two halves of ``G`` become ``(B-u)^(alpha-1)/rho`` and
    ``(u-A)^(alpha-1)/rho``. Each partial integral is taken on the side that
    contains its own singular endpoint:
    ``P1(T) = int_T^B (B-u)^(alpha-1) g``, ``P2(T) = int_A^T (u-A)^(alpha-1) g``,
    and ``W = (P1(A) - P2(B) + 2 P2(T) - 2 P1(T)) / rho``.
    """
    alpha, rho = params.alpha, params.rho
    lam = alpha - 1.0
    A, B, _ = _powered(interval, rho)
    inv = 1.0 / rho

    def gu(u):
        return g(np.power(u, inv)) if rho != 1.0 else g(u)

    t = np.asarray(t, dtype=float)
    T = np.clip(np.power(t.ravel(), rho), A, B)
    if A == 0.0 and rho > 1.0:
        p1, p2, tot1, tot2, err = _partials_from_zero(g, gu, t.ravel(), T, B, alpha, rho, tol)
    else:
        p1, e1, _ = integrate_singular_batch(gu, T, np.full_like(T, B), Side.RIGHT, lam, tol)
        p2, e2, _ = integrate_singular_batch(gu, np.full_like(T, A), T, Side.LEFT, lam, tol)
        ends, e3, _ = integrate_singular_batch(gu, np.array([A, A]), np.array([B, B]),
                                               Side.RIGHT, lam, tol)
        tot1 = ends[0]
        tot2, e4, _ = integrate_singular_batch(gu, np.array([A]), np.array([B]), Side.LEFT, lam, tol)
        tot2 = tot2[0]
        err = e1 + e2 + e3 + e4
    W = (tot1 - tot2 + 2.0 * p2 - 2.0 * p1) / rho
    return W.reshape(t.shape), err * 2.0 / rho


def _partials_from_zero(g, gu, t, T, B, alpha, rho, tol):
    """``P1``, ``P2`` and totals for ``a = 0``, ``rho > 1``.

    ``g(u^(1/rho))`` has a root-type singularity at ``u = 0``; pieces touching
    zero go back to ``s`` where ``s^(rho alpha - 1)`` and ``s^(rho - 1)`` are
    Jacobi weights.
    """
    lam = alpha - 1.0
    b = B ** (1.0 / rho)
    zeros = np.zeros_like(t)
    p2, e2, _ = integrate_singular_batch(lambda s: rho * g(s), zeros, t, Side.LEFT,
                                         rho * alpha - 1.0, tol)
    tot2, e4, _ = integrate_singular_batch(lambda s: rho * g(s), np.zeros(1), np.array([b]),
                                           Side.LEFT, rho * alpha - 1.0, tol)

    def near(s):
        return rho * (B - np.power(s, rho)) ** lam * g(s)

    half = 0.5 * B
    hb = half ** (1.0 / rho)
    q_half, e5, _ = integrate_singular_batch(near, np.zeros(1), np.array([hb]), Side.LEFT, rho - 1.0, tol)
    upper, e6, _ = integrate_singular_batch(gu, np.array([half]), np.array([B]), Side.RIGHT, lam, tol)
    tot1 = q_half[0] + upper[0]

    low = T <= half
    p1 = np.empty_like(T)
    q, e1, _ = integrate_singular_batch(near, zeros[low], t[low], Side.LEFT, rho - 1.0, tol)
    p1[low] = tot1 - q
    r, e3, _ = integrate_singular_batch(gu, T[~low], np.full((~low).sum(), B), Side.RIGHT, lam, tol)
    p1[~low] = r
    return p1, p2, tot1, tot2[0], e1 + e2 + e3 + e4 + e5 + e6


def fejer_identity(f: TestFunction, g: WeightFunction, interval: Interval, params: FracParams,
                   tol: float = 1e-9, residual_tol: float = 1e-6) -> IdentityResidual:
    """Weighted gap versus ``rho^(1-alpha)/(2 G(alpha)) int_a^b W(t) F'(t) dt``.

    Inner integrals run at ``tol / (10 (b-a))``.
    """
    _require_convention(f, Convention.DIRECT)
    if f.deriv1 is None:
        raise CertificateError(f"{f.name} has no first derivative")
    _check_weight(g, interval)
    alpha, rho = params.alpha, params.rho
    F = f_transform(f, interval)
    gap, err = _fejer_gap(F, g, interval, params, tol)
    inner_tol = max(1e-14, tol / (10.0 * interval.width))
    inner_err = [0.0]

    def outer(t):
        W, e = signed_weight_integral(g, interval, params, t, inner_tol)
        inner_err[0] = max(inner_err[0], e)
        return W * F.deriv1(t)

    exps = [alpha] + ([rho * alpha] if interval.a == 0 else [])
    res = integrate_smooth(outer, interval.a, interval.b, tol, grade=_grade(*exps))
    c = rho ** (1.0 - alpha) / (2.0 * gamma(alpha))
    total_err = err + c * (res.error + interval.width * inner_err[0] * 1.0)
    return IdentityResidual(gap, c * res.value, residual_tol, error=total_err)


def fejer_bound(f: TestFunction, g: WeightFunction, interval: Interval, params: FracParams,
                tol: float = 1e-10) -> BoundVerdict:
    """Weighted gap bounded by ``(b-a) ||g|| / (rho^a G(a+1)) (|f'(a)|+|f'(b)|) int|K|``."""
    _require_convention(f, Convention.DIRECT)
    _require(f, Certificate.ABS_DERIV_CONVEX)
    _check_weight(g, interval)
    F = f_transform(f, interval)
    gap, err = _fejer_gap(F, g, interval, params, tol)
    k = abs_kernel_integral(interval, params, tol)
    bound = (interval.width * g.sup_norm / (params.rho**params.alpha * gamma(params.alpha + 1))
             * _endpoint_slopes(f, interval.a, interval.b) * k.value)
    return BoundVerdict(abs(gap), bound, verdict_tol(err), err)
