"""Closed-form reference values and an independent brute-force integrator.

Nothing here touches :mod:`fracineq.quadrature`: the brute-force path is a
composite midpoint rule on a graded mesh written in the original variable
``t``, so agreement with the Gauss-Jacobi path is a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Convention, DomainError, FracParams, lgamma
from .operators import Kind, OperatorRequest
from .quadrature import Side


@dataclass(frozen=True)
class ClosedFormCase:
    family: str  # "constant" or "power-beta"
    parameter: float
    params: FracParams
    a: float
    x: float

    @property
    def expected(self) -> float:
        if self.family == "constant":
            return closed_form_constant(self.parameter, self.params, self.a, self.x)
        return closed_form_power(self.parameter, self.params, self.a, self.x)


def closed_form_constant(c: float, params: FracParams, a: float, x: float) -> float:
    """Left Katugampola integral of the constant ``c``: ``c (x^r - a^r)^a / (r^a G(a+1))``.

    By symmetry the same number is the right integral over ``[a, x]`` at ``a``.
    """
    if not 0 <= a < x:
        raise DomainError(f"need 0 <= a < x, got a={a}, x={x}")
    return closed_form_power(0.0, params, a, x) * c


def closed_form_power(beta: float, params: FracParams, a: float, x: float) -> float:
    """Left integral of ``(t^rho - a^rho)^beta``; equals
    ``rho^-alpha G(beta+1)/G(alpha+beta+1) (x^rho - a^rho)^(alpha+beta)``.

    The right integral at ``a`` of ``(x^rho - t^rho)^beta`` has the same value.
    """
    if not beta > -1:
        raise DomainError(f"beta must exceed -1, got {beta}")
    if not 0 <= a < x:
        raise DomainError(f"need 0 <= a < x, got a={a}, x={x}")
    alpha, rho = params.alpha, params.rho
    if a > 0:
        width = a**rho * math.expm1(rho * math.log(x / a))
    else:
        width = x**rho
    log_value = (-alpha * math.log(rho) + lgamma(beta + 1) - lgamma(alpha + beta + 1)
                 + (alpha + beta) * math.log(width))
    return math.exp(log_value)


def power_family(beta: float, rho: float, anchor: float, side: Side = Side.LEFT):
    """The integrand whose closed form :func:`closed_form_power` gives.

    ``side=LEFT`` returns ``(t^rho - anchor^rho)^beta``; ``RIGHT`` returns
    ``(anchor^rho - t^rho)^beta`` for use with a right operator based at the
    upper end.
    """
    p = anchor**rho
    if Side(side) is Side.LEFT:
        return lambda t: np.maximum(np.power(t, rho) - p, 0.0) ** beta
    return lambda t: np.maximum(p - np.power(t, rho), 0.0) ** beta


def _log_graded(n: int, q: float, h: float):
    """Logs of nodes and weights for the midpoint rule in ``sigma`` after
    ``t = h sigma^q`` on ``[0, h]``; weights carry the Jacobian.

    Working in logs keeps the first nodes representable even for very strong
    grading.
    """
    log_sigma = np.log((np.arange(n, dtype=float) + 0.5) / n)
    log_node = math.log(h) + q * log_sigma
    log_weight = math.log(h * q / n) + (q - 1.0) * log_sigma
    return log_node, log_weight


def _log_kernel(kind: Kind, params: FracParams, side: Side, x: float,
                log_t: np.ndarray, log_dist: np.ndarray, near: bool) -> np.ndarray:
    """Log of the operator kernel at ``t``, given ``log t`` and ``log|t - x|``.

    Near ``x`` the kernel distance is formed relative to ``x`` (no
    cancellation); away from it the plain difference is accurate.
    """
    alpha, rho = params.alpha, params.rho
    sign = -1.0 if side is Side.LEFT else 1.0  # t = x + sign * dist
    if kind is Kind.RIEMANN_LIOUVILLE:
        return (alpha - 1) * log_dist - lgamma(alpha)
    if kind is Kind.HADAMARD:
        if near:
            log_d = np.log(np.abs(np.log1p(sign * np.exp(log_dist - math.log(x)))))
        else:
            log_d = np.log(np.abs(math.log(x) - log_t))
        return (alpha - 1) * log_d - log_t - lgamma(alpha)
    const = (1 - alpha) * math.log(rho) - lgamma(alpha)
    if x == 0:
        log_d = rho * log_t
    elif near:
        rel = sign * np.exp(log_dist - math.log(x))
        log_d = rho * math.log(x) + np.log(np.abs(np.expm1(rho * np.log1p(rel))))
    else:
        log_d = np.log(np.abs(x**rho - np.exp(rho * log_t)))
    return const + (rho - 1) * log_t + (alpha - 1) * log_d


def brute_force(req: OperatorRequest, n: int = 100_000) -> float:
    """Graded-mesh composite midpoint rule with one Richardson step.

    ``(4 M(n) - M(n/2)) / 3`` where ``M(n)`` is the midpoint sum on ``n``
    cells. The grading makes the transformed integrand smooth at the
    singular end, so the midpoint error expands in even powers of the cell
    size and the extrapolation removes the leading term.
    """
    if n < 10_000:
        raise DomainError(f"brute force needs n >= 1e4, got {n}")
    fine = _midpoint(req, n)
    coarse = _midpoint(req, n // 2)
    return (4.0 * fine - coarse) / 3.0


def _midpoint(req: OperatorRequest, n: int) -> float:
    """Composite midpoint rule on a mesh graded toward the kernel singularity.

    The interval is split in the middle. The half touching the evaluation
    point ``x`` is graded toward it with exponent ``2/alpha`` (``2/(alpha
    rho)`` for a Katugampola kernel at ``x = 0``, where ``t^(rho-1)`` joins
    in); the other half is graded toward ``t = 0`` with exponent ``2/rho``
    when a Katugampola kernel is based there with ``rho < 1``.
    """
    alpha, rho = req.params.alpha, req.params.rho
    side, x, base = req.side, req.x, req.base
    f = req.integrand
    kat = req.kind is Kind.KATUGAMPOLA
    if kat and getattr(f, "convention", None) is Convention.POWER_COMPOSED:
        g = f

        def f(t):
            return g(np.power(t, rho))

    h = 0.5 * abs(x - base)
    sign = -1.0 if side is Side.LEFT else 1.0
    half = n // 2
    total = 0.0

    q_near = 2.0 / (alpha * rho) if (kat and x == 0) else 2.0 / alpha
    log_dist, log_w = _log_graded(half, max(1.0, q_near), h)
    t = x + sign * np.exp(log_dist)
    log_t = log_dist if x == 0 else np.log(t)
    k = _log_kernel(req.kind, req.params, side, x, log_t, log_dist, near=True)
    total += float(np.sum(np.exp(k + log_w) * f(t)))

    q_far = 2.0 / rho if (kat and base == 0 and rho < 1) else 1.0
    log_off, log_w = _log_graded(n - half, max(1.0, q_far), h)
    t = base - sign * np.exp(log_off)
    log_t = log_off if base == 0 else np.log(t)
    log_dist = np.log(np.abs(t - x))
    k = _log_kernel(req.kind, req.params, side, x, log_t, log_dist, near=False)
    total += float(np.sum(np.exp(k + log_w) * f(t)))
    return total
