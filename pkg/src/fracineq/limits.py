"""Behaviour of the Katugampola integral as rho -> 1 and rho -> 0+.

Each study walks a power-of-two sequence of ``rho`` values toward the limit
point and compares against an independently computed target operator
(Riemann-Liouville or Hadamard), never against a plugged-in formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import DomainError, FracParams, Interval, TestFunction, gamma
from .inequalities import f_transform, hh_f
from .operators import hadamard_integral, katugampola_integral, riemann_liouville_integral
from .quadrature import Side

CONDITIONING_LIMIT = 1e8


class Target(str, Enum):
    RIEMANN_LIOUVILLE = "riemann-liouville"
    HADAMARD = "hadamard"


@dataclass(frozen=True)
class LimitStudy:
    target: Target
    function: str
    alpha: float
    interval: Interval
    ks: Tuple[int, ...]
    rhos: Tuple[float, ...]
    deviations: Tuple[float, ...]
    tol: float
    estimated_order: float = math.nan
    coincidence: Optional[float] = None  # deviation at rho = 1 exactly
    truncated_at: Optional[int] = None  # first k refused by the conditioning alarm
    orderings: Tuple[bool, ...] = field(default=())

    @property
    def final_deviation(self) -> float:
        return self.deviations[-1] if self.deviations else math.nan

    @property
    def limit_point(self) -> float:
        return 1.0 if self.target is Target.RIEMANN_LIOUVILLE else 0.0

    def monotone_tail(self, skip: int = 2, floor: Optional[float] = None) -> bool:
        """Deviations after the first ``skip`` never increase, ignoring noise below ``floor``."""
        floor = 100 * self.tol if floor is None else floor
        tail = np.asarray(self.deviations[skip:])
        return bool(np.all(np.diff(tail) <= np.maximum(floor, 0.0)))

    def rows(self):
        for k, r, d in zip(self.ks, self.rhos, self.deviations):
            yield k, r, d


def fit_order(distances: Sequence[float], deviations: Sequence[float], floor: float) -> float:
    """Slope of ``log deviation`` against ``log distance`` over points above ``floor``."""
    d = np.asarray(distances, dtype=float)
    e = np.asarray(deviations, dtype=float)
    keep = e > floor
    if keep.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log(d[keep]), np.log(e[keep]), 1)[0])


def amplification(rho: float, alpha: float) -> float:
    """Size of the ``rho^(1-alpha)`` kernel prefactor."""
    return rho ** (1.0 - alpha)


def _check_ks(ks: Sequence[int], cap: int) -> Tuple[int, ...]:
    ks = tuple(int(k) for k in ks)
    if not ks:
        raise DomainError("need at least one k")
    if any(k < 1 or k > cap for k in ks) or list(ks) != sorted(set(ks)):
        raise DomainError(f"ks must be strictly increasing integers in [1, {cap}]")
    return ks


def limit_to_rl(f: TestFunction, interval: Interval, alpha: float, ks: Sequence[int],
                tol: float = 1e-10, direction: int = 1) -> LimitStudy:
    """``|I_rho f(b) - J f(b)|`` (left operators based at ``a``) for ``rho = 1 + direction 2^-k``."""
    if direction not in (1, -1):
        raise DomainError("direction must be +1 or -1")
    ks = _check_ks(ks, 40)
    interval.require_nonnegative()
    a, b = interval.a, interval.b
    target = riemann_liouville_integral(f, alpha, a, b, Side.LEFT, tol).value
    at_one = katugampola_integral(f, FracParams(alpha, 1.0), a, b, Side.LEFT, tol).value
    rhos = tuple(1.0 + direction * 2.0**-k for k in ks)
    devs = tuple(abs(katugampola_integral(f, FracParams(alpha, r), a, b, Side.LEFT, tol).value - target)
                 for r in rhos)
    order = fit_order([2.0**-k for k in ks], devs, 100 * tol)
    return LimitStudy(Target.RIEMANN_LIOUVILLE, f.name, alpha, interval, ks, rhos, devs, tol,
                      estimated_order=order, coincidence=abs(at_one - target))


def _hadamard_sequence(alpha: float, ks: Tuple[int, ...]):
    kept = []
    for k in ks:
        if amplification(2.0**-k, alpha) > CONDITIONING_LIMIT:
            return tuple(kept), k
        kept.append(k)
    return tuple(kept), None


def limit_to_hadamard(f: TestFunction, interval: Interval, alpha: float, ks: Sequence[int],
                      tol: float = 1e-10) -> LimitStudy:
    """``|I_rho f(b) - H f(b)|`` for ``rho = 2^-k``, stopping at the conditioning alarm."""
    interval.require_positive()
    ks = _check_ks(ks, 20)
    kept, cut = _hadamard_sequence(alpha, ks)
    a, b = interval.a, interval.b
    target = hadamard_integral(f, alpha, a, b, Side.LEFT, tol).value
    rhos = tuple(2.0**-k for k in kept)
    devs = tuple(abs(katugampola_integral(f, FracParams(alpha, r), a, b, Side.LEFT, tol).value - target)
                 for r in rhos)
    order = fit_order(rhos, devs, 100 * tol)
    return LimitStudy(Target.HADAMARD, f.name, alpha, interval, kept, rhos, devs, tol,
                      estimated_order=order, truncated_at=cut)


def hadamard_hh_mid(f: TestFunction, interval: Interval, alpha: float, tol: float = 1e-10) -> float:
    """``G(alpha+1)/(2 ln(b/a)^alpha) [H_a+ F(b) + H_b- F(a)]``."""
    interval.require_positive()
    F = f_transform(f, interval)
    a, b = interval.a, interval.b
    left = hadamard_integral(F, alpha, a, b, Side.LEFT, tol).value
    right = hadamard_integral(F, alpha, b, a, Side.RIGHT, tol).value
    return gamma(alpha + 1) / (2.0 * math.log(b / a) ** alpha) * (left + right)


def limit_corollary_hh_hadamard(f: TestFunction, interval: Interval, alpha: float,
                                ks: Sequence[int], tol: float = 1e-10) -> LimitStudy:
    """Symmetrised fractional mean at ``rho = 2^-k`` against its Hadamard limit.

    ``orderings`` records whether the midpoint/mean/endpoint ordering held at
    each ``k``.
    """
    interval.require_positive()
    ks = _check_ks(ks, 20)
    kept, cut = _hadamard_sequence(alpha, ks)
    target = hadamard_hh_mid(f, interval, alpha, tol)
    rhos = tuple(2.0**-k for k in kept)
    verdicts = [hh_f(f, interval, FracParams(alpha, r), tol) for r in rhos]
    devs = tuple(abs(v.mid - target) for v in verdicts)
    order = fit_order(rhos, devs, 100 * tol)
    return LimitStudy(Target.HADAMARD, f.name, alpha, interval, kept, rhos, devs, tol,
                      estimated_order=order, truncated_at=cut,
                      orderings=tuple(v.passed for v in verdicts))
