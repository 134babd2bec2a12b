import pytest
from hypothesis import given, strategies as st

from narep.repdigit import (
    Repdigit,
    RepdigitError,
    as_repdigit,
    enumerate_repdigits,
    parse,
    render,
    repdigit_value,
    repdigit_lookup,
)


def test_positional_value():
    for g in range(2, 13):
        for d in range(1, g):
            for L in range(1, 31):
                assert repdigit_value(d, L, g) == sum(d * g**i for i in range(L))


def test_examples():
    assert repdigit_value(3, 2, 4) == 15
    assert repdigit_value(10, 1, 12) == 10
    assert render(Repdigit.make(10, 1, 12)) == "A"
    assert render(Repdigit.make(11, 2, 12)) == "BB"
    assert parse("333", 6).value == 129


def test_errors():
    with pytest.raises(RepdigitError):
        repdigit_value(0, 2, 10)
    with pytest.raises(RepdigitError):
        repdigit_value(4, 2, 4)
    with pytest.raises(RepdigitError):
        repdigit_value(1, 0, 10)
    with pytest.raises(RepdigitError):
        parse("12", 10)
    with pytest.raises(RepdigitError):
        parse("9", 8)


@given(st.integers(2, 12), st.data())
def test_round_trip(g, data):
    d = data.draw(st.integers(1, g - 1))
    L = data.draw(st.integers(1, 40))
    r = Repdigit.make(d, L, g)
    assert parse(render(r), g) == r
    assert as_repdigit(r.value, g) == r


def test_enumeration_sorted_and_unique():
    for g in range(2, 13):
        reps = enumerate_repdigits(g, 20)
        values = [r.value for r in reps]
        assert values == sorted(values)
        assert len(set(values)) == len(values) == (g - 1) * 20
        assert set(repdigit_lookup(g, 20)) == set(values)
    assert [r.value for r in enumerate_repdigits(10, 3, 50)] == [1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 22, 33, 44]


def test_as_repdigit_rejects():
    assert as_repdigit(12, 10) is None
    assert as_repdigit(0, 10) is None
    assert as_repdigit(1111, 10, max_length=3) is None
