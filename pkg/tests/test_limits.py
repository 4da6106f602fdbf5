import math

import numpy as np
import pytest

from fracineq.core import DomainError, FracParams, Interval, gamma, make_function
from fracineq.corpus import CorpusSpec, generate_convex
from fracineq.limits import (
    Target,
    amplification,
    fit_order,
    hadamard_hh_mid,
    limit_corollary_hh_hadamard,
    limit_to_hadamard,
    limit_to_rl,
)
from fracineq.operators import OperatorRequest
from fracineq.oracle import brute_force

ONE_TWO = Interval(1.0, 2.0)
const1 = make_function("const1", lambda t: np.ones_like(t), (0, 3))
ident = make_function("t", lambda t: t, (0, 3))


def test_rl_limit_constant_matches_closed_form():
    s = limit_to_rl(const1, ONE_TWO, 0.5, range(1, 11))
    for r, d in zip(s.rhos, s.deviations):
        exact = abs((2**r - 1) ** 0.5 / r**0.5 - 1) / gamma(1.5)
        assert d == pytest.approx(exact, abs=1e-12)
    assert s.target is Target.RIEMANN_LIOUVILLE and s.limit_point == 1.0
    assert s.coincidence <= 2 * s.tol


def test_rl_limit_first_order_for_identity():
    for direction in (1, -1):
        s = limit_to_rl(ident, ONE_TWO, 0.5, range(1, 15), direction=direction)
        assert s.monotone_tail()
        assert 0.8 <= s.estimated_order <= 1.2
        assert s.final_deviation <= 1e-4
    # the k = 3 point against the brute-force oracle
    rho = 1 + 2**-3
    bf = brute_force(OperatorRequest("katugampola", "left", FracParams(0.5, rho), 1.0, 2.0, ident))
    bf_rl = brute_force(OperatorRequest("riemann-liouville", "left", FracParams(0.5), 1.0, 2.0, ident))
    s = limit_to_rl(ident, ONE_TWO, 0.5, [3])
    assert s.deviations[0] == pytest.approx(abs(bf - bf_rl), abs=1e-7)


def test_hadamard_limit_constant_and_log():
    s = limit_to_hadamard(const1, ONE_TWO, 0.7, range(1, 15))
    for r, d in zip(s.rhos, s.deviations):
        exact = abs((2**r - 1) ** 0.7 / r**0.7 - math.log(2) ** 0.7) / gamma(1.7)
        assert d == pytest.approx(exact, abs=1e-12)
    log = make_function("log", np.log, (1, math.e))
    s = limit_to_hadamard(log, Interval(1, math.e), 0.5, range(1, 15))
    assert s.monotone_tail(skip=0) and s.final_deviation < 1e-4
    lin = limit_to_hadamard(ident, ONE_TWO, 1.0, range(1, 15))
    assert lin.final_deviation < 1e-4


def test_hadamard_limit_conditioning_alarm_truncates():
    s = limit_to_hadamard(const1, ONE_TWO, 3.0, range(1, 21))
    assert s.truncated_at == 14 and s.ks[-1] == 13
    assert amplification(2.0**-13, 3.0) <= 1e8 < amplification(2.0**-14, 3.0)


def test_preconditions():
    with pytest.raises(DomainError):
        limit_to_hadamard(const1, Interval(0.0, 1.0), 0.5, [1, 2])
    with pytest.raises(DomainError):
        limit_to_hadamard(const1, ONE_TWO, 0.5, [1, 25])
    with pytest.raises(DomainError):
        limit_to_rl(const1, ONE_TWO, 0.5, [3, 2])
    with pytest.raises(DomainError):
        limit_to_rl(const1, ONE_TWO, 0.5, [1], direction=0)


def test_corollary_limit():
    sq = make_function("sq", lambda x: x * x, (0, 3), lambda x: 2 * x, lambda x: 2 + 0 * x,
                       tags=("convex", "abs-deriv-convex"))
    s = limit_corollary_hh_hadamard(sq, ONE_TWO, 1.0, range(1, 15))
    assert all(s.orderings) and s.final_deviation < 1e-4
    # alpha = 1: Hadamard mean of F = (1/ln 2) int_1^2 F(t)/t dt
    t = np.linspace(1, 2, 200001)
    F = t**2 + (3 - t) ** 2
    exact = np.trapezoid(F / t, t) / math.log(2)
    assert hadamard_hh_mid(sq, ONE_TWO, 1.0) == pytest.approx(exact, abs=1e-5)
    lin = make_function("lin", lambda x: 2 * x, (0, 3), lambda x: 2 + 0 * x, tags=("convex",))
    s = limit_corollary_hh_hadamard(lin, ONE_TWO, 0.5, range(1, 10))
    assert max(s.deviations) < 1e-10


def test_corpus_limits_within_threshold():
    for f in generate_convex(CorpusSpec(families=("exponential", "neg-log"), count_per_family=2)):
        for alpha in (0.25, 2.0):
            assert limit_to_rl(f, ONE_TWO, alpha, range(1, 15)).final_deviation <= 1e-4
            assert limit_to_hadamard(f, ONE_TWO, alpha, range(1, 15)).final_deviation <= 1e-4


def test_fit_order():
    d = 2.0 ** -np.arange(1, 10)
    assert fit_order(d, 3 * d**2, 1e-30) == pytest.approx(2.0)
    assert math.isnan(fit_order(d, np.zeros_like(d), 1e-12))
