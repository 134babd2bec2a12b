import math

import pytest

from narep.baker import (
    PUBLISHED_MATVEEV,
    MatveevInput,
    absorb_constant,
    absorption_holds,
    derive_stage_bounds,
    guzman_luca_absorb,
    height_a,
    height_eta1,
    k_bound_closed_form,
    k_max_direct,
    lemma4_k_bound,
    matveev_constant,
    matveev_log_lower_bound,
    round_up,
    theorem1_bounds,
)


def test_height_of_a():
    assert abs(height_a() - math.log(31) / 3) < 1e-12


def test_height_eta1():
    assert height_eta1(1, 2) == pytest.approx(7 * math.log(2))
    assert height_eta1(2, 2, (5,)) == pytest.approx(12 * math.log(2))
    with pytest.raises(ValueError):
        height_eta1(2, 2)


def test_matveev_constant():
    assert float(matveev_constant(3, 3)) == pytest.approx(2.7044e12, rel=1e-4)
    lb = matveev_log_lower_bound(MatveevInput(3, 3, 100.0, (1.0, 0.4, 1.0)))
    assert lb < 0
    with pytest.raises(ValueError):
        MatveevInput(3, 3, 10.0, (1.0, 0.1, 1.0))


def test_stage_constants_close_to_published():
    for s in derive_stage_bounds():
        assert 0.5 <= s.matveev_ratio <= 1.05
        assert 0.5 <= s.ratio <= 1.05
        assert s.t_power == s.stage and s.g_power == 2 * s.stage
    assert derive_stage_bounds()[0].matveev_coefficient >= PUBLISHED_MATVEEV[1]


def test_absolute_bounds():
    b = theorem1_bounds(12)
    assert b.t_coefficient == pytest.approx(2.11e67, rel=0.05)
    assert b.k_coefficient == pytest.approx(2.54e68, rel=0.05)
    assert b.t_bound == pytest.approx(1.18e72, rel=0.05)
    assert b.k_bound < 3.5e73
    assert b.k_bound / b.t_bound == pytest.approx(12 * math.log(12))
    assert b.absorb_constant == 186


def test_k_bound_from_t():
    assert lemma4_k_bound(270, 12) == 8051
    assert lemma4_k_bound(270, 2) == 2245
    assert lemma4_k_bound(1, 2) == 8
    for g in range(2, 13):
        for t in range(1, 40):
            assert k_max_direct(t, g) < 12 * t * math.log(g)
    # the clean closed form 3 + 4 t log g / log alpha stays below 12 t log g except at t = 2, g = 2
    assert k_bound_closed_form(2, 2) > 12 * 2 * math.log(2)
    assert k_bound_closed_form(3, 2) < 12 * 3 * math.log(2)


def test_absorption():
    assert all(absorption_holds(t, g) for t in range(2, 300) for g in range(2, 13))
    assert absorb_constant(1.1e57) == 186
    assert guzman_luca_absorb(1, 10.0) == pytest.approx(20 * math.log(10))
    with pytest.raises(ValueError):
        guzman_luca_absorb(4, 100.0)


def test_round_up():
    assert round_up(6.513e13) == pytest.approx(6.52e13)
    assert round_up(7.8e14) == pytest.approx(7.8e14)
    with pytest.raises(ValueError):
        round_up(0)
