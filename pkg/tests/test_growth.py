from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dehn.growth import (
    Exponential, GrowthTable, Polynomial, Zero, classify_table, dominates_symbolic, equivalent,
    equivalent_symbolic, find_witness,
)

FAMILY = [Zero(), Polynomial(1, 0), Polynomial(1, 1), Polynomial(2, 1), Polynomial(1, 2), Polynomial(2, 2),
          Polynomial(1, 3), Exponential(2)]

symbolic = st.one_of(
    st.just(Zero()),
    st.builds(Polynomial, st.fractions(min_value=Fraction(1, 4), max_value=8), st.integers(0, 4)),
    st.builds(Exponential, st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(3), Fraction(10)])),
)


@pytest.mark.parametrize("f, g, holds", [
    (Polynomial(1, 2), Polynomial(1, 3), True),
    (Polynomial(1, 3), Polynomial(1, 2), False),
    (Exponential(2), Exponential(3), True),
    (Exponential(3), Exponential(2), True),
    (Exponential(2), Polynomial(1, 5), False),
    (Polynomial(7, 1), Zero(), True),
    (Polynomial(1, 2), Zero(), False),
])
def test_symbolic_domination(f, g, holds):
    assert bool(dominates_symbolic(f, g)) is holds


@settings(max_examples=200)
@given(symbolic, symbolic)
def test_symbolic_witnesses_check_out(f, g):
    res = dominates_symbolic(f, g)
    if res.holds:
        for n in range(0, 40):
            assert res.witness.holds_at(f, g, n)


@given(symbolic, symbolic, symbolic)
def test_equivalence_is_an_equivalence_relation(f, g, h):
    assert equivalent_symbolic(f, f)
    assert equivalent_symbolic(f, g) == equivalent_symbolic(g, f)
    if equivalent_symbolic(f, g) and equivalent_symbolic(g, h):
        assert equivalent_symbolic(f, h)


@pytest.mark.parametrize("d", [0, 1])
def test_at_most_linear_is_equivalent_to_linear(d):
    assert equivalent_symbolic(Polynomial(3, d), Polynomial(1, 1))


def test_table_search_agrees_with_symbolic_on_family():
    tabs = [GrowthTable.from_function(f, 1, 30) for f in FAMILY]
    for i, f in enumerate(FAMILY):
        for j, g in enumerate(FAMILY):
            w = find_witness(tabs[i], tabs[j], max_exp=3)
            assert (w is not None) == bool(dominates_symbolic(f, g)), (str(f), str(g))
            if w is not None:
                assert not w.clamped
                fi, gj = tabs[i], tabs[j]
                assert all(w.holds_at(lambda n: fi[int(n)], lambda m: gj[int(m)], n) for n in range(1, 31))


def test_csv_round_trip_and_errors():
    t = GrowthTable({1: 0, 2: 1, 3: Fraction(5, 2)})
    assert GrowthTable.from_csv(t.to_csv()).samples == t.samples
    with pytest.raises(ValueError):
        GrowthTable.from_csv("x,y\n1,2\n")
    with pytest.raises(ValueError):
        GrowthTable({1: 1, 3: 2})


def test_table_equivalence_report():
    a = GrowthTable.from_function(Polynomial(1, 2), 1, 30)
    b = GrowthTable.from_function(Polynomial(2, 2), 1, 30)
    rep = equivalent(a, b, max_exp=3)
    assert rep.equivalent and "A=" in str(rep)


def test_classification_picks_quadratic():
    t = GrowthTable.from_function(lambda n: n * n + 3, 1, 30)
    res = classify_table(t)
    assert [k for k, r in res.items() if r.equivalent] == ["quadratic"]


def test_constructor_validation():
    with pytest.raises(ValueError):
        Polynomial(0, 2)
    with pytest.raises(ValueError):
        Exponential(1)
