"""Left and right Riemann-Liouville, Hadamard and Katugampola integrals.

All Katugampola evaluations go through ``u = t^rho`` first::

    rho^(1-a)/G(a) int_a^x t^(rho-1) (x^rho - t^rho)^(a-1) f(t) dt
        = rho^(-a)/G(a) int_{a^rho}^{x^rho} (x^rho - u)^(a-1) f(u^(1/rho)) du

which leaves a single algebraic endpoint singularity for every ``rho`` and
also removes the ``t^(rho-1)`` blow-up at ``t = 0`` when ``rho < 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

import numpy as np

from .core import Convention, DomainError, FracParams, TestFunction, gamma
from .quadrature import (
    IntegralResult,
    Side,
    SingularIntegralSpec,
    integrate_singular,
    integrate_smooth,
)

Integrand = Union[TestFunction, Callable[[np.ndarray], np.ndarray]]


class Kind(str, Enum):
    RIEMANN_LIOUVILLE = "riemann-liouville"
    HADAMARD = "hadamard"
    KATUGAMPOLA = "katugampola"


@dataclass(frozen=True)
class OperatorRequest:
    """One evaluation of a fractional integral.

    ``base`` is the lower terminal ``a`` for left operators and the upper
    terminal ``b`` for right operators; ``x`` is the evaluation point.
    """

    kind: Kind
    side: Side
    params: FracParams
    base: float
    x: float
    integrand: Integrand
    tol: float = 1e-10

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "side", Side(self.side))
        _check_points(self.side, self.base, self.x)
        if self.kind is Kind.HADAMARD and min(self.base, self.x) <= 0:
            raise DomainError("Hadamard integrals need positive points")
        if self.kind is Kind.KATUGAMPOLA and min(self.base, self.x) < 0:
            raise DomainError("Katugampola integrals need nonnegative points")


def _check_points(side: Side, base: float, x: float) -> None:
    if side is Side.LEFT and not base < x:
        raise DomainError(f"left operator needs base < x, got base={base}, x={x}")
    if side is Side.RIGHT and not x < base:
        raise DomainError(f"right operator needs x < base, got base={base}, x={x}")


def _kernel_integral(phi, lo: float, hi: float, side: Side, alpha: float,
                     tol: float, method: str = "auto") -> IntegralResult:
    """``int_lo^hi phi(u) |u_s - u|^(alpha-1) du`` with ``u_s = hi`` for a
    left operator and ``u_s = lo`` for a right one."""
    lam = alpha - 1.0
    endpoint = Side.RIGHT if side is Side.LEFT else Side.LEFT
    if method == "auto":
        method = "legendre" if lam >= 0 and lam == int(lam) else "jacobi"
    if method == "jacobi":
        return integrate_singular(SingularIntegralSpec(phi, lo, hi, endpoint, lam), tol)
    if method != "legendre":
        raise ValueError(f"unknown method {method!r}")
    if endpoint is Side.RIGHT:
        def integrand(u):
            return phi(u) * np.abs(hi - u) ** lam
    else:
        def integrand(u):
            return phi(u) * np.abs(u - lo) ** lam
    # A non-integer exponent >= 0 is bounded but not smooth; grade the ends.
    grade = 1 if lam == int(lam) else 4
    return integrate_smooth(integrand, lo, hi, tol, grade=grade)


def riemann_liouville_integral(f: Integrand, alpha: float, base: float, x: float,
                               side: Side = Side.LEFT, tol: float = 1e-10,
                               method: str = "auto") -> IntegralResult:
    side = Side(side)
    _check_points(side, base, x)
    lo, hi = (base, x) if side is Side.LEFT else (x, base)
    res = _kernel_integral(f, lo, hi, side, alpha, tol, method)
    return res.scaled(1.0 / gamma(alpha))


def hadamard_integral(f: Integrand, alpha: float, base: float, x: float,
                      side: Side = Side.LEFT, tol: float = 1e-10,
                      method: str = "auto") -> IntegralResult:
    side = Side(side)
    _check_points(side, base, x)
    if min(base, x) <= 0:
        raise DomainError("Hadamard integrals need positive points")
    lo, hi = (base, x) if side is Side.LEFT else (x, base)
    # v = ln t turns (ln(x/t))^(alpha-1) f(t)/t dt into (ln x - v)^(alpha-1) f(e^v) dv
    res = _kernel_integral(lambda v: f(np.exp(v)), math.log(lo), math.log(hi),
                           side, alpha, tol, method)
    return res.scaled(1.0 / gamma(alpha))


def _powered_bounds(lo: float, hi: float, rho: float):
    """``(lo^rho, hi^rho)`` with the difference formed without cancellation."""
    if lo > 0:
        plo = lo**rho
        return plo, plo + plo * math.expm1(rho * math.log(hi / lo))
    return 0.0, hi**rho


def katugampola_integral(f: Integrand, params: FracParams, base: float, x: float,
                         side: Side = Side.LEFT, tol: float = 1e-10,
                         composed: bool = False, method: str = "auto") -> IntegralResult:
    """Katugampola integral of ``f`` (or of ``t -> f(t^rho)`` when ``composed``).

    Left: ``rho^(1-a)/G(a) int_base^x t^(rho-1) (x^rho - t^rho)^(a-1) f(t) dt``;
    the right operator mirrors the kernel. With ``composed=True`` the result
    is the quantity written ``I f(x^rho)`` in the power-composed convention:
    ``f`` is then sampled on ``[base^rho, x^rho]`` directly.
    """
    side = Side(side)
    _check_points(side, base, x)
    if min(base, x) < 0:
        raise DomainError("Katugampola integrals need nonnegative points")
    alpha, rho = params.alpha, params.rho
    lo, hi = (base, x) if side is Side.LEFT else (x, base)
    ulo, uhi = _powered_bounds(lo, hi, rho)
    if composed:
        phi = f
    elif rho == 1.0:
        phi = f
    else:
        inv = 1.0 / rho

        def phi(u):
            return f(np.power(u, inv))

    if composed or rho <= 1.0 or lo > 0:
        res = _kernel_integral(phi, ulo, uhi, side, alpha, tol, method)
    else:
        res = _from_zero(f, phi, uhi, side, alpha, rho, tol, method)
    return res.scaled(rho ** (-alpha) / gamma(alpha))


def _from_zero(f, phi, uhi: float, side: Side, alpha: float, rho: float,
               tol: float, method: str) -> IntegralResult:
    """Direct-convention integral over ``u in [0, uhi]`` for ``rho > 1``.

    ``f(u^(1/rho))`` has a root-type singularity at ``u = 0``, so the half next to zero is
    taken back to ``t`` where the power of ``t`` becomes a Jacobi weight:
    ``t^(rho-1)`` when the kernel is singular at ``uhi`` (left operator) and
    ``t^(rho alpha - 1)`` when it is singular at ``0`` (right operator).
    """
    cut = 0.5 * uhi
    tcut = cut ** (1.0 / rho)
    lam = alpha - 1.0
    if side is Side.LEFT:
        near = SingularIntegralSpec(
            lambda t: rho * (uhi - np.power(t, rho)) ** lam * f(t), 0.0, tcut, Side.LEFT, rho - 1.0)
        far = _kernel_integral(phi, cut, uhi, side, alpha, tol, method)
    else:
        near = SingularIntegralSpec(lambda t: rho * f(t), 0.0, tcut, Side.LEFT, rho * alpha - 1.0)
        far = integrate_smooth(lambda u: phi(u) * u**lam, cut, uhi, tol)
    return integrate_singular(near, 0.5 * tol) + far


def _require_convention(f: Integrand, want: Convention) -> None:
    conv = getattr(f, "convention", None)
    if conv is not None and conv is not want:
        raise DomainError(f"integrand carries the {conv.value} convention, "
                          f"operator expects {want.value}")


def riemann_liouville(req: OperatorRequest) -> IntegralResult:
    if req.kind is not Kind.RIEMANN_LIOUVILLE:
        raise DomainError(f"expected a Riemann-Liouville request, got {req.kind.value}")
    return riemann_liouville_integral(req.integrand, req.params.alpha, req.base, req.x,
                                      req.side, req.tol)


def hadamard(req: OperatorRequest) -> IntegralResult:
    if req.kind is not Kind.HADAMARD:
        raise DomainError(f"expected a Hadamard request, got {req.kind.value}")
    return hadamard_integral(req.integrand, req.params.alpha, req.base, req.x,
                             req.side, req.tol)


def katugampola(req: OperatorRequest) -> IntegralResult:
    if req.kind is not Kind.KATUGAMPOLA:
        raise DomainError(f"expected a Katugampola request, got {req.kind.value}")
    _require_convention(req.integrand, Convention.DIRECT)
    return katugampola_integral(req.integrand, req.params, req.base, req.x,
                                req.side, req.tol)


def katugampola_composed(req: OperatorRequest) -> IntegralResult:
    """Katugampola operator applied to ``t -> f(t^rho)``, ``f`` on ``[a^rho, b^rho]``."""
    if req.kind is not Kind.KATUGAMPOLA:
        raise DomainError(f"expected a Katugampola request, got {req.kind.value}")
    f = req.integrand
    _require_convention(f, Convention.POWER_COMPOSED)
    rho = req.params.rho
    lo, hi = sorted((req.base, req.x))
    if isinstance(f, TestFunction) and not f.covers(lo**rho, hi**rho):
        raise DomainError(f"{f.name} is defined on {f.domain}, "
                          f"needs [{lo**rho}, {hi**rho}]")
    return katugampola_integral(f, req.params, req.base, req.x, req.side, req.tol,
                                composed=True)


def evaluate(req: OperatorRequest) -> IntegralResult:
    """Dispatch on ``req.kind`` (and on the integrand's convention)."""
    if req.kind is Kind.RIEMANN_LIOUVILLE:
        return riemann_liouville(req)
    if req.kind is Kind.HADAMARD:
        return hadamard(req)
    if getattr(req.integrand, "convention", None) is Convention.POWER_COMPOSED:
        return katugampola_composed(req)
    return katugampola(req)
