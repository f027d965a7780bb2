import pytest
from hypothesis import given, settings, strategies as st

from dehn.presentation import (
    AreaLimits, Presentation, canonical_cyclic, combinatorial_area, cyclic_group, cyclic_reduce,
    dehn_function, exponent_area_bound, free_group, free_reduce, inverse, is_reduced, parse_presentation,
    winding_area_bound, word_problem_oracle, z2,
)

letters = st.sampled_from([1, -1, 2, -2])
words = st.lists(letters, max_size=14).map(tuple)


@given(words)
def test_free_reduce_is_idempotent_and_reduced(w):
    r = free_reduce(w)
    assert is_reduced(r)
    assert free_reduce(r) == r


@given(words, words)
def test_free_reduce_respects_products(u, v):
    assert free_reduce(free_reduce(u) + free_reduce(v)) == free_reduce(u + v)


@given(words)
def test_inverse_cancels(w):
    assert free_reduce(w + inverse(w)) == ()


@given(words)
def test_canonical_cyclic_is_a_class_invariant(w):
    c = cyclic_reduce(free_reduce(w))
    if not c:
        return
    for k in range(len(c)):
        assert canonical_cyclic(c[k:] + c[:k]) == canonical_cyclic(c)
    assert canonical_cyclic(inverse(c)) == canonical_cyclic(c)


def test_parse_and_format_round_trip():
    P = parse_presentation("# torus\ngen a b\nrel abAB\n")
    assert P == z2()
    assert P.parse_word("aBA") == (1, -2, -1)
    assert P.format_word((1, -2, -1)) == "aBA"
    assert Presentation.from_text(P.to_text()) == P
    assert P.parse_word("1") == ()


@pytest.mark.parametrize("text", ["rel ab\n", "gen a\nrel ax\n", "gen a a\n", "gen a\nrel aA\n", "gen a\nfoo\n"])
def test_malformed_presentations_raise(text):
    with pytest.raises(ValueError):
        parse_presentation(text)


@pytest.mark.parametrize("word, area", [("abAB", 1), ("aabbAABB", 4), ("aaabbbAAABBB", 9), ("abABbaBA", 0)])
def test_z2_areas(word, area):
    P = z2()
    w = free_reduce(P.parse_word(word))
    res = combinatorial_area(w, P)
    assert res.status == "Exact" and res.area == area


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cyclic_group_areas(k):
    P = cyclic_group(3)
    assert combinatorial_area((1,) * (3 * k), P).area == k


def test_nontrivial_words_are_reported():
    assert combinatorial_area((1,), z2()).status == "NotNullhomotopic"
    assert combinatorial_area((1, 1), cyclic_group(3)).status == "NotNullhomotopic"
    assert combinatorial_area((1, 2), free_group(2)).status == "NotNullhomotopic"


def test_unreduced_words_are_rejected():
    with pytest.raises(ValueError):
        combinatorial_area((1, -1), z2())


def test_small_limits_give_lower_bounds():
    res = combinatorial_area(z2().parse_word("aaabbbAAABBB"), z2(), AreaLimits(max_area=4))
    assert res.status in ("LowerBound", "Unknown")
    assert res.lower_bound <= 9
    assert str(res).startswith(("LowerBound", "Unknown"))


def test_dehn_tables():
    t = dehn_function(z2(), 8)
    assert t[4] == 1 and t[8] == 4
    c = dehn_function(cyclic_group(3), 9)
    assert [c[3 * k] for k in (1, 2, 3)] == [1, 2, 3]
    f = dehn_function(free_group(2), 10)
    assert all(v == 0 for v in f.samples.values())
    assert not any(t.flags.values())


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=2, max_size=10))
def test_winding_bound_is_admissible(steps):
    # close up the walk into a loop and compare the bound with the exact area
    P = z2()
    x = sum(1 if s == 1 else -1 if s == -1 else 0 for s in steps)
    y = sum(1 if s == 2 else -1 if s == -2 else 0 for s in steps)
    loop = tuple(steps) + ((-1,) * x if x > 0 else (1,) * -x) + ((-2,) * y if y > 0 else (2,) * -y)
    w = cyclic_reduce(free_reduce(loop))
    if not w or len(w) > 12:
        return
    res = combinatorial_area(w, P, AreaLimits(max_area=12))
    if res.exact:
        assert winding_area_bound(P)(w) <= res.area
        assert exponent_area_bound(P)(w) <= res.area
