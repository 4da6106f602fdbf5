"""Katugampola fractional integrals and numerically checked Hermite-Hadamard
and Hermite-Hadamard-Fejer inequalities."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    Certificate,
    Convention,
    DomainError,
    EvaluationError,
    FracParams,
    Interval,
    TestFunction,
    WeightFunction,
    make_function,
)
from .operators import (  # noqa: E402
    Kind,
    OperatorRequest,
    evaluate,
    hadamard_integral,
    katugampola_integral,
    riemann_liouville_integral,
)
from .quadrature import Side  # noqa: E402

__all__ = [
    "Certificate", "Convention", "DomainError", "EvaluationError", "FracParams", "Interval",
    "Kind", "OperatorRequest", "Side", "TestFunction", "WeightFunction", "evaluate",
    "hadamard_integral", "katugampola_integral", "make_function", "riemann_liouville_integral",
]
