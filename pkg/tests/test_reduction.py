import math
from fractions import Fraction

import mpmath
import pytest

from narep.baker import PUBLISHED_M
from narep.numerics import HPReal, PrecisionError
from narep.reduction import (
    PUBLISHED_TABLES,
    InconclusiveReduction,
    ReductionContext,
    ReductionProblem,
    cf_expand,
    digit_products,
    dujella_petho,
    mu_value,
    reduce_step,
    step_problem,
    tau_value,
)


def test_cf_of_rational():
    cf = cf_expand(Fraction(415, 93), 10)
    assert cf.partial_quotients == [4, 2, 6, 7] and cf.terminated
    assert cf.convergents[-1] == (415, 93)
    # numerically rational input stops at the same place
    cf2 = cf_expand(HPReal.of(Fraction(415, 93).numerator, 60) / 93, 10)
    assert cf2.partial_quotients == [4, 2, 6, 7] and cf2.terminated


def test_cf_of_sqrt2():
    cf = cf_expand(HPReal.of(2, 100).sqrt(), 30)
    assert cf.partial_quotients == [1] + [2] * 29


def test_cf_precision_error():
    with pytest.raises(PrecisionError):
        cf_expand(HPReal(mpmath.mpf(0.999999999999), 1), 5)


def test_cf_certified_length_grows_with_precision():
    n1 = len(cf_expand(lambda d: tau_value(2, d), 10**4, 100))
    n2 = len(cf_expand(lambda d: tau_value(2, d), 10**4, 200))
    assert n2 > n1 > 50


def test_convergents_approximate_tau():
    cf = cf_expand(lambda d: tau_value(3, d), 200)
    with mpmath.workdps(300):
        tau = tau_value(3).value
        for p, q in cf.convergents[1:60]:
            assert abs(tau - mpmath.mpf(p) / q) < mpmath.mpf(1) / q**2


def test_problem_validation():
    t = tau_value(2, 60)
    with pytest.raises(ValueError):
        ReductionProblem(t, t, -1.0, 2.0, 10)
    with pytest.raises(ValueError):
        ReductionProblem(t, t, 1.0, 1.0, 10)
    with pytest.raises(ValueError):
        step_problem(2, 2, 1, ())


def test_step1_matches_published_first_policy():
    for g in (2, 7, 8, 12):
        cf = cf_expand(lambda d: tau_value(g, d), 300)
        outs = [dujella_petho(step_problem(g, 1, P, ()), cf) for P in digit_products(g)]
        worst = max(outs, key=lambda o: o.x)
        idx, eps, bound = PUBLISHED_TABLES[1][g]
        assert (worst.convergent_index, worst.w_bound) == (idx, bound)
        assert min(o.epsilon for o in outs) == pytest.approx(eps, rel=0.06)
        assert worst.q > 6 * PUBLISHED_M


def test_best_policy_never_worse():
    g, P = 2, 1
    cf = cf_expand(lambda d: tau_value(g, d), 300)
    p = step_problem(g, 3, P, (5, 28))
    assert dujella_petho(p, cf, policy="best").w_bound <= dujella_petho(p, cf).w_bound


def test_inconclusive():
    # for l = 5, m = 28, n = 38 in base 2 the first four convergents past 6M fail
    p = step_problem(2, 4, 1, (5, 28, 38))
    cf = cf_expand(lambda d: tau_value(2, d), 300)
    with pytest.raises(InconclusiveReduction):
        dujella_petho(p, cf, window=1)


def test_engine_agrees_with_scalar_step1():
    for g in (3, 12):
        ctx = ReductionContext(g)
        res = reduce_step(g, 1, policy="first", ctx=ctx)
        idx, _, bound = PUBLISHED_TABLES[1][g]
        assert (res.used_index, res.variable_bound) == (idx, bound)
        scalar = dujella_petho(step_problem(g, 1, res.binding_product, ()), ctx.cf, policy="first")
        assert scalar.epsilon == pytest.approx(res.min_epsilon, abs=1e-15)


def test_engine_binding_instance_rechecked():
    res = reduce_step(5, 3)
    cf = cf_expand(lambda d: tau_value(5, d), 300)
    scalar = dujella_petho(step_problem(5, 3, res.binding_product, res.binding_exponents), cf, policy="best")
    assert scalar.w_bound == res.variable_bound
    assert res.q > 6 * PUBLISHED_M and res.min_epsilon > 0


def test_duplicate_products_do_not_change_result():
    a = reduce_step(4, 2)
    b = reduce_step(4, 2, products=digit_products(4, distinct=False))
    assert (a.variable_bound, a.used_index, a.min_epsilon) == (b.variable_bound, b.used_index, b.min_epsilon)
    assert len(digit_products(4)) == 15


def test_mu_value():
    g, P = 10, 6
    mu = mu_value(g, P, (2,))
    with mpmath.workdps(60):
        a = mpmath.mpf(0.4172379800)
        approx = mpmath.log(a * 9**4 / (6 * 99)) / mpmath.log(10)
    assert abs(float(mu) - float(approx)) < 1e-7


def test_window_doubling_recovers():
    # window 1 is too small somewhere in step 4 for base 2; doubling finds a bound
    res = reduce_step(2, 2, window=1, policy="first")
    assert res.variable_bound <= PUBLISHED_TABLES[2][2][2] + 5
    with pytest.raises(InconclusiveReduction):
        reduce_step(2, 2, window=1, max_window=1, policy="first")
