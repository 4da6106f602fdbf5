import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracineq.core import DomainError, FracParams, gamma, make_function
from fracineq.operators import (
    OperatorRequest,
    evaluate,
    hadamard,
    hadamard_integral,
    katugampola,
    katugampola_composed,
    katugampola_integral,
    riemann_liouville,
    riemann_liouville_integral,
)
from fracineq.oracle import brute_force, closed_form_constant

one = lambda t: np.ones_like(np.asarray(t, dtype=float))  # noqa: E731


def req(kind, alpha, a, x, f, rho=1.0, side="left"):
    return OperatorRequest(kind, side, FracParams(alpha, rho), a, x, f)


def test_riemann_liouville_examples():
    assert riemann_liouville(req("riemann-liouville", 0.5, 0, 1, one)).value == pytest.approx(
        1 / gamma(1.5), abs=1e-12)
    assert riemann_liouville(req("riemann-liouville", 1, 0, 1, lambda t: t)).value == pytest.approx(0.5)
    assert riemann_liouville(req("riemann-liouville", 0.5, 0, 1, lambda t: t)).value == pytest.approx(
        gamma(2) / gamma(2.5), abs=1e-12)


def test_hadamard_examples():
    for alpha in (0.3, 1.0, 2.5):
        v = hadamard(req("hadamard", alpha, 1, math.e, lambda t: 3 * one(t))).value
        assert v == pytest.approx(3 / gamma(alpha + 1), abs=1e-12)
    assert hadamard(req("hadamard", 1, 1, math.e**2, one)).value == pytest.approx(2.0, abs=1e-13)
    assert hadamard(req("hadamard", 0.5, 1, math.e, np.log)).value == pytest.approx(
        gamma(2) / gamma(2.5), abs=1e-12)


def test_katugampola_examples():
    assert katugampola(req("katugampola", 0.5, 0, 1, one, rho=2)).value == pytest.approx(
        math.sqrt(2 / math.pi), abs=1e-12)
    v = katugampola(req("katugampola", 0.5, 0, 1, lambda t: t**3, rho=3)).value
    assert v == pytest.approx(gamma(2) / gamma(2.5) / math.sqrt(3), abs=1e-12)


def test_katugampola_reduces_to_riemann_liouville_at_rho_one():
    for f in (np.exp, np.cos, lambda t: t**2.5):
        for side, a, x in (("left", 0.3, 1.7), ("right", 1.7, 0.3)):
            k = katugampola_integral(f, FracParams(0.7, 1.0), a, x, side)
            r = riemann_liouville_integral(f, 0.7, a, x, side)
            assert abs(k.value - r.value) <= 2e-10


def test_composed_identity_example():
    # I^1_{0+} applied to t -> f(t^2) with f(u) = u is int_0^1 t * t^2 dt = 1/4
    f = make_function("u", lambda u: u, (0, 1), convention="power-composed")
    r = katugampola_composed(req("katugampola", 1.0, 0, 1, f, rho=2))
    assert r.value == pytest.approx(0.25, abs=1e-14)


def test_composed_constant_and_square():
    c = make_function("c", lambda u: 2.5 + 0 * u, (0, 8), convention="power-composed")
    r = katugampola_composed(req("katugampola", 0.7, 1, 2, c, rho=3))
    assert r.value == pytest.approx(closed_form_constant(2.5, FracParams(0.7, 3), 1, 2), rel=1e-12)
    sq = make_function("sq", lambda u: u * u, (0, 1), convention="power-composed")
    r = katugampola_composed(req("katugampola", 0.5, 0, 1, sq))
    assert r.value == pytest.approx(gamma(3) / gamma(3.5), abs=1e-12)


def test_composed_domain_and_convention_checks():
    small = make_function("u", lambda u: u, (0, 1), convention="power-composed")
    with pytest.raises(DomainError):
        katugampola_composed(req("katugampola", 1.0, 0, 2, small, rho=2))
    with pytest.raises(DomainError):
        katugampola(req("katugampola", 1.0, 0, 1, small, rho=2))
    plain = make_function("u", lambda u: u, (0, 1))
    with pytest.raises(DomainError):
        katugampola_composed(req("katugampola", 1.0, 0, 1, plain, rho=2))


def test_evaluate_dispatch_uses_convention():
    f = make_function("u", lambda u: u, (0, 1), convention="power-composed")
    assert evaluate(req("katugampola", 1.0, 0, 1, f, rho=2)).value == pytest.approx(0.25)
    g = make_function("u", lambda u: u, (0, 1))
    # direct: rho^(1-a)... with a = 1: int_0^1 t^(rho-1) t dt = 1/3
    assert evaluate(req("katugampola", 1.0, 0, 1, g, rho=2)).value == pytest.approx(1 / 3)


@pytest.mark.parametrize("kind, a, x, side", [
    ("riemann-liouville", 1.0, 1.0, "left"),
    ("riemann-liouville", 2.0, 1.0, "left"),
    ("riemann-liouville", 0.0, 1.0, "right"),
    ("hadamard", 0.0, 1.0, "left"),
    ("katugampola", -1.0, 1.0, "left"),
])
def test_request_validation(kind, a, x, side):
    with pytest.raises(DomainError):
        req(kind, 0.5, a, x, one, side=side)


def test_wrong_kind_is_rejected():
    r = req("hadamard", 0.5, 1, 2, one)
    with pytest.raises(DomainError):
        riemann_liouville(r)
    with pytest.raises(DomainError):
        katugampola(r)


@pytest.mark.parametrize("kind", ["riemann-liouville", "hadamard", "katugampola"])
@pytest.mark.parametrize("side", ["left", "right"])
def test_alpha_one_seam_agrees_on_both_paths(kind, side):
    a, x = (1.0, 2.0) if side == "left" else (2.0, 1.0)
    ops = {"riemann-liouville": lambda m: riemann_liouville_integral(np.exp, 1.0, a, x, side, method=m),
           "hadamard": lambda m: hadamard_integral(np.exp, 1.0, a, x, side, method=m),
           "katugampola": lambda m: katugampola_integral(np.exp, FracParams(1.0, 2.0), a, x, side,
                                                         method=m)}
    assert ops[kind]("jacobi").value == pytest.approx(ops[kind]("legendre").value, abs=1e-12)


@pytest.mark.parametrize("rho", [1.5, 2.0, 5.0])
@pytest.mark.parametrize("side", ["left", "right"])
def test_direct_integral_from_zero_for_large_rho(rho, side):
    # f(u^(1/rho)) is root-singular at u = 0; check against the brute-force oracle
    a, x = (0.0, 1.0) if side == "left" else (1.0, 0.0)
    for alpha in (0.25, 1.5):
        val = katugampola_integral(np.exp, FracParams(alpha, rho), a, x, side)
        ref = brute_force(OperatorRequest("katugampola", side, FracParams(alpha, rho), a, x, np.exp))
        assert val.converged
        assert val.value == pytest.approx(ref, abs=1e-7)


@settings(max_examples=40, deadline=None)
@given(alpha=st.sampled_from([0.25, 0.5, 1.0, 1.5, 3.0]), rho=st.sampled_from([0.1, 0.5, 1.0, 2.0, 5.0]),
       c1=st.floats(-3, 3), c2=st.floats(-3, 3))
def test_linearity(alpha, rho, c1, c2):
    p = FracParams(alpha, rho)
    lhs = katugampola_integral(lambda t: c1 * np.exp(t) + c2 * t, p, 1.0, 2.0).value
    rhs = (c1 * katugampola_integral(np.exp, p, 1.0, 2.0).value
           + c2 * katugampola_integral(lambda t: t, p, 1.0, 2.0).value)
    assert lhs == pytest.approx(rhs, abs=1e-9 * (1 + abs(c1) + abs(c2)) * 50)


@settings(max_examples=30, deadline=None)
@given(alpha=st.floats(0.2, 3.0), rho=st.floats(0.1, 5.0), lo=st.floats(0.5, 2.0))
def test_positivity_and_monotonicity(alpha, rho, lo):
    p = FracParams(alpha, rho)
    small = katugampola_integral(lambda t: 1.0 + 0 * t, p, 0.5, lo + 1.0).value
    big = katugampola_integral(lambda t: 2.0 + np.sin(t) ** 2, p, 0.5, lo + 1.0).value
    assert 0 < small <= big
