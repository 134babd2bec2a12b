import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from narep.narayana import (
    binet_coefficients,
    binet_estimate,
    binet_residual,
    growth_bounds_check,
    narayana,
    narayana_list,
)
from narep.numerics import PrecisionError


def test_initial_terms():
    assert narayana_list(16) == [0, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60, 88, 129, 189]


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 3000))
def test_recurrence(n):
    assert narayana(n) == narayana(n - 1) + narayana(n - 3)


def test_large_index_digits():
    # digit count agrees with log10(a alpha^n)
    c = binet_coefficients(100)
    with mpmath.workdps(60):
        expected = int(mpmath.floor(mpmath.log10(c.a.value) + 8051 * mpmath.log10(c.alpha.value))) + 1
    assert len(str(narayana(8051))) == expected == 1337


def test_binet_coefficient_a():
    c = binet_coefficients(100)
    assert abs(float(c.a) - 0.41723799) < 1e-8
    # a is a root of 31x^3 - 3x - 1
    with mpmath.workdps(100):
        x = c.a.value
        assert abs(31 * x**3 - 3 * x - 1) < mpmath.mpf(10) ** -90
    assert abs(float(c.a * c.alpha**10) - 19.0745) < 0.01


def test_abs_b_matches_complex_roots():
    c = binet_coefficients(80)
    with mpmath.workdps(80):
        roots = mpmath.polyroots([1, -1, 0, -1], extraprec=100)
        beta = min(roots, key=lambda z: mpmath.im(z))
        b = beta**2 / (beta**3 + 2)
        assert abs(abs(b) - c.abs_b.value) < mpmath.mpf(10) ** -60


def test_binet_residual_small():
    for n in (1, 10, 100, 1000):
        alpha = binet_coefficients(400).alpha
        assert abs(binet_residual(n, 400)) < alpha ** (-mpmath.mpf(n) / 2)


def test_binet_estimate_precision_error():
    with pytest.raises(PrecisionError):
        binet_estimate(5000, 60)


def test_growth_bounds():
    rep = growth_bounds_check(1000)
    assert rep.ok
    assert 10 in rep.literal_lower_violations
    assert "fails" in rep.summary()


def test_growth_rejects_bad_range():
    with pytest.raises(ValueError):
        growth_bounds_check(0)
