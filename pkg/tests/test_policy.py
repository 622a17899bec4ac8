import pytest
from hypothesis import given, strategies as st

from nittm.policy import ChoicePolicy, PolicyError, parse_policy, render_policy

idx = st.integers(0, 2)
policies = st.builds(ChoicePolicy, st.lists(idx, max_size=4).map(tuple),
                     st.lists(idx, min_size=1, max_size=4).map(tuple))


def test_parse_forms():
    assert parse_policy("script=101;tail=0") == ChoicePolicy((1, 0, 1), (0,))
    assert parse_policy("tail=1") == ChoicePolicy((), (1,))
    assert parse_policy("script=1,12;tail=3") == ChoicePolicy((1, 12), (3,))
    for bad in ["", "script=1", "tail=", "tail=x", "foo=1"]:
        with pytest.raises(PolicyError):
            parse_policy(bad)


@given(policies)
def test_canonical_preserves_choices(p):
    c = p.canonical()
    assert c.word(40) == p.word(40)
    assert c.canonical() == c


@given(policies)
def test_render_round_trip(p):
    assert parse_policy(render_policy(p)) == p


@given(policies, st.integers(0, 30), st.integers(0, 30))
def test_equal_phase_means_equal_future(p, a, b):
    if p.phase(a) == p.phase(b):
        assert [p.choice(a + k) for k in range(12)] == [p.choice(b + k) for k in range(12)]
