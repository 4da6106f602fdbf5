"""Shared domain types and special functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, FrozenSet, Optional, Tuple

import numpy as np

ScalarMap = Callable[[np.ndarray], np.ndarray]


class DomainError(ValueError):
    """Raised when an argument lies outside the admissible domain."""


class EvaluationError(ArithmeticError):
    """Raised when an integrand produces a non-finite sample."""


class Convention(str, Enum):
    DIRECT = "direct"
    POWER_COMPOSED = "power-composed"


class Certificate(str, Enum):
    CONVEX = "convex"
    ABS_DERIV_CONVEX = "abs-deriv-convex"
    SECOND_DERIV_BOUNDED = "second-deriv-bounded"
    SYMMETRIC = "symmetric-to-midpoint"


@dataclass(frozen=True)
class FracParams:
    """Order ``alpha`` and generalization parameter ``rho``."""

    alpha: float
    rho: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise DomainError(f"rho must be positive, got {self.rho}")


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"non-finite interval [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise DomainError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def width(self) -> float:
        return self.b - self.a

    def powered(self, rho: float) -> "Interval":
        """The image ``[a^rho, b^rho]``; requires ``a >= 0``."""
        self.require_nonnegative()
        return Interval(self.a**rho, self.b**rho)

    def require_nonnegative(self) -> None:
        if self.a < 0:
            raise DomainError(f"left endpoint must be >= 0, got {self.a}")

    def require_positive(self) -> None:
        if self.a <= 0:
            raise DomainError(f"left endpoint must be > 0, got {self.a}")


def _vectorize(fn: ScalarMap) -> ScalarMap:
    def wrapped(x):
        return np.asarray(fn(np.asarray(x, dtype=float)), dtype=float)

    return wrapped


@dataclass(frozen=True)
class TestFunction:
    """An evaluable real function with optional derivatives and certificates.

    All maps accept numpy arrays. ``domain`` is the closed interval on which
    the function (and its tags) are guaranteed.
    """

    __test__ = False  # not a pytest class

    name: str
    eval: ScalarMap
    domain: Tuple[float, float]
    deriv1: Optional[ScalarMap] = None
    deriv2: Optional[ScalarMap] = None
    tags: FrozenSet[Certificate] = frozenset()
    convention: Convention = Convention.DIRECT
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, x):
        return self.eval(x)

    def has(self, tag: Certificate) -> bool:
        return tag in self.tags

    def covers(self, lo: float, hi: float, slack: float = 1e-12) -> bool:
        scale = max(1.0, abs(lo), abs(hi))
        return self.domain[0] <= lo + slack * scale and hi - slack * scale <= self.domain[1]

    def with_convention(self, convention: Convention) -> "TestFunction":
        return TestFunction(
            self.name, self.eval, self.domain, self.deriv1, self.deriv2,
            self.tags, Convention(convention), self.params,
        )


def make_function(name, eval, domain, deriv1=None, deriv2=None, tags=(),
                  convention=Convention.DIRECT, **params) -> TestFunction:
    """Convenience constructor that vectorizes plain callables."""
    return TestFunction(
        name=name,
        eval=_vectorize(eval),
        domain=(float(domain[0]), float(domain[1])),
        deriv1=None if deriv1 is None else _vectorize(deriv1),
        deriv2=None if deriv2 is None else _vectorize(deriv2),
        tags=frozenset(Certificate(t) for t in tags),
        convention=Convention(convention),
        params=params,
    )


@dataclass(frozen=True)
class WeightFunction:
    name: str
    eval: ScalarMap
    interval: Interval
    symmetric: bool = True
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, x):
        return self.eval(x)

    @property
    def sup_norm(self) -> float:
        grid = np.linspace(self.interval.a, self.interval.b, 4097)
        return float(np.max(np.abs(self.eval(grid))))


def check_convex(f: TestFunction, samples: int = 256, seed: int = 0) -> bool:
    """Sampled midpoint-convexity check over ``f.domain``."""
    rng = np.random.default_rng(seed)
    lo, hi = f.domain
    x = rng.uniform(lo, hi, samples)
    y = rng.uniform(lo, hi, samples)
    fx, fy, fm = f(x), f(y), f(0.5 * (x + y))
    scale = np.maximum(1.0, np.abs(fx) + np.abs(fy))
    return bool(np.all(fm <= 0.5 * (fx + fy) + 1e-12 * scale))


def check_deriv1(f: TestFunction, samples: int = 64, seed: int = 0,
                 rtol: float = 1e-6) -> bool:
    """Compare ``deriv1`` with a central difference at interior points."""
    if f.deriv1 is None:
        return False
    rng = np.random.default_rng(seed)
    lo, hi = f.domain
    h = 1e-5 * (hi - lo)
    x = rng.uniform(lo + 2 * h, hi - 2 * h, samples)
    fd = (f(x + h) - f(x - h)) / (2 * h)
    d = f.deriv1(x)
    # central difference carries O(h^2) truncation plus cancellation noise
    scale = np.maximum(np.abs(d), np.max(np.abs(f(x))) / (hi - lo))
    return bool(np.all(np.abs(fd - d) <= rtol * np.maximum(scale, 1.0)))


def check_symmetric_weight(g: WeightFunction, samples: int = 256,
                           seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    a, b = g.interval.a, g.interval.b
    x = rng.uniform(a, b, samples)
    gx = g(x)
    if np.any(gx < 0):
        return False
    if not g.symmetric:
        return True
    return bool(np.all(np.abs(gx - g(a + b - x)) <= 1e-12 * max(1.0, g.sup_norm)))


def gamma(x: float) -> float:
    """Euler's Gamma function for positive arguments."""
    if not 0 < x < math.inf:
        raise DomainError(f"gamma needs finite x > 0, got {x}")
    try:
        return math.gamma(x)
    except OverflowError:
        raise EvaluationError(f"gamma({x}) overflows; use lgamma") from None


def lgamma(x: float) -> float:
    if not 0 < x < math.inf:
        raise DomainError(f"lgamma needs finite x > 0, got {x}")
    return math.lgamma(x)


def lbeta(p: float, q: float) -> float:
    if not (p > 0 and q > 0):
        raise DomainError(f"beta needs p, q > 0, got ({p}, {q})")
    p, q = min(p, q), max(p, q)
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q)


def beta(p: float, q: float) -> float:
    """Beta function via log-Gamma; symmetric in its arguments bit for bit."""
    return math.exp(lbeta(p, q))
