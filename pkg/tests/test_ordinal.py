import pytest
from hypothesis import given, strategies as st

from nittm.ordinal import (OMEGA, ZERO, Cmp, Ordinal, OrdinalParseError, ord_add, ord_compare,
                           ord_is_limit, ord_next_limit, parse_ordinal, render_ordinal)

from oracles import is_limit_triple, next_limit_triple, triple, triple_add

W = OMEGA


def o(text):
    return parse_ordinal(text)


def test_compare_examples():
    assert ord_compare(ZERO, ZERO) is Cmp.EQUAL
    assert ord_compare(Ordinal.of(3), W) is Cmp.LESS
    assert ord_compare(o("w*2 + 1"), o("w*2")) is Cmp.GREATER


def test_add_examples():
    assert ord_add(Ordinal.of(1), W) == W
    assert ord_add(W, Ordinal.of(1)) == o("w + 1")
    assert ord_add(o("w*2 + 3"), W) == o("w*3")
    assert W + 1 == o("w*1 + 1")
    assert 1 + W == W


def test_limit_examples():
    assert not ord_is_limit(ZERO)
    assert ord_is_limit(W)
    assert not ord_is_limit(o("w^2 + 5"))
    assert ord_next_limit(Ordinal.of(5)) == W
    assert ord_next_limit(W) == o("w*2")
    assert ord_next_limit(o("w^2 + w + 4")) == o("w^2*1 + w*2")


def test_render_grammar():
    assert render_ordinal(ZERO) == "0"
    assert render_ordinal(o("w^2*3 + w*1 + 4")) == "w^2*3 + w*1 + 4"
    assert str(W) == "w*1"
    assert str(Ordinal.of(7)) == "7"


@pytest.mark.parametrize("bad", ["", "w^", "x", "w*0x", "1 + + 2", "-3"])
def test_parse_rejects(bad):
    with pytest.raises(OrdinalParseError):
        parse_ordinal(bad)


def test_canonical_form_enforced():
    with pytest.raises(ValueError):
        Ordinal(((1, 1), (2, 1)))
    with pytest.raises(ValueError):
        Ordinal(((1, 0),))


below_w3 = st.builds(
    lambda c2, c1, c0: Ordinal(tuple((e, c) for e, c in ((2, c2), (1, c1), (0, c0)) if c)),
    st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
below_ww = st.lists(st.tuples(st.integers(0, 6), st.integers(1, 5)), max_size=4).map(
    lambda ts: Ordinal(tuple(sorted(dict(ts).items(), reverse=True))))


@given(below_w3, below_w3)
def test_against_triples(a, b):
    assert (ord_compare(a, b), ord_compare(b, a)) == (
        Cmp((triple(a) > triple(b)) - (triple(a) < triple(b))),
        Cmp((triple(b) > triple(a)) - (triple(b) < triple(a))))
    assert triple(a + b) == triple_add(triple(a), triple(b))
    assert ord_is_limit(a) == is_limit_triple(triple(a))
    assert triple(ord_next_limit(a)) == next_limit_triple(triple(a))


@given(below_ww)
def test_render_parse_round_trip(a):
    assert parse_ordinal(render_ordinal(a)) == a


@given(below_ww, below_ww, below_ww)
def test_addition_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + ZERO == a == ZERO + a
    assert a <= a + b
    if b < c:
        assert a + b < a + c
    if a < b:
        assert a + c <= b + c  # left monotonicity is only weak


@given(below_ww)
def test_next_limit_is_least_limit_above(a):
    lim = ord_next_limit(a)
    assert ord_is_limit(lim) and a < lim
    # anything strictly between a and lim is a + k for finite k
    for k in range(1, 6):
        assert a + k < lim
