"""Residual tables behind the trapezoid-identity constant and the strict bound.

Prints three experiments:
  1. worst identity residual per normalising constant, on a general sample
     and on centred-affine functions only;
  2. the same residual with and without the rho factor on the right side;
  3. the strict first-derivative bound with and without its rho correction.

    python scripts/adjudicate_constant.py
"""

from fracineq.cli import constant_sample
from fracineq.core import Certificate, FracParams, Interval, make_function
from fracineq.corpus import CorpusSpec, generate_convex, select
from fracineq.inequalities import (
    AmbiguousResolution,
    ConstantVariant,
    constant_residuals,
    resolve_disputed_constant,
    strict_bound_value,
    strict_derivative_bound,
    trapezoid_identity,
)


def adjudicate():
    print("== normalising constant ==")
    for linear in (False, True):
        sample = constant_sample(8, linear_only=linear)
        table = constant_residuals(sample, 1e-11)
        try:
            verdict = resolve_disputed_constant(sample).value
        except AmbiguousResolution as exc:
            verdict = f"ambiguous ({exc})"
        print(f"{'centred affine' if linear else 'general':15s} "
              f"with-alpha {table.worst(ConstantVariant.WITH_ALPHA):.3e}  "
              f"without-alpha {table.worst(ConstantVariant.WITHOUT_ALPHA):.3e}  -> {verdict}")


def rho_factor():
    print("== rho factor on the identity's right side ==")
    iv = Interval(1.0, 2.0)
    rhos = (0.5, 2.0, 5.0)
    fs = select(generate_convex(CorpusSpec(count_per_family=1, convention="power-composed",
                                           rho_grid=rhos)), need_deriv1=True)
    for rho in rhos:
        worst = {True: 0.0, False: 0.0}
        for f in fs:
            for alpha in (0.5, 1.0, 2.0):
                for flag in worst:
                    r = trapezoid_identity(f, iv, FracParams(alpha, rho), rho_factor=flag)
                    worst[flag] = max(worst[flag], r.residual)
        print(f"rho={rho:<4g} with factor {worst[True]:.3e}   without factor {worst[False]:.3e}")


def strict_bound():
    print("== strict first-derivative bound, f(u) = u^2 ==")
    iv = Interval(1.0, 2.0)
    for rho in (0.5, 1.0, 2.0, 5.0):
        p = FracParams(1.0, rho)
        A, B = iv.a**rho, iv.b**rho
        f = make_function("square", lambda u: u * u, (A, B), deriv1=lambda u: 2 * u,
                          tags=(Certificate.CONVEX, Certificate.ABS_DERIV_CONVEX),
                          convention="power-composed")
        raw = strict_derivative_bound(f, iv, p, rho_factor=False)
        fixed = strict_derivative_bound(f, iv, p, rho_factor=True)
        print(f"rho={rho:<4g} gap {raw.quantity:.4e}  uncorrected bound {raw.bound:.4e} "
              f"({'holds' if raw.passed else 'VIOLATED'})  corrected bound {fixed.bound:.4e} "
              f"({'holds' if fixed.passed else 'VIOLATED'})")
        assert strict_bound_value(f, iv, p) == fixed.bound


if __name__ == "__main__":
    adjudicate()
    rho_factor()
    strict_bound()
