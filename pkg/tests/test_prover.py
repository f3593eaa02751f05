import pytest
from hypothesis import given, settings, strategies as st

from hypsys import library
from hypsys.kernel import check_hyp, check_sys, end_sequent
from hypsys.prover import SearchConfig, prove, random_derivation
from hypsys.syntax import parse_hypersequent, parse_sequent


def _prove(goal, *rules, depth=8):
    return prove(parse_hypersequent(goal), library.calculus("HLJ", *rules), SearchConfig(max_depth=depth))


@pytest.mark.parametrize("goal", ["p => p", "(p & q) => (q & p)", "(p v q) => (q v p)", "=> (p -> (q -> p))",
                                  "bot => q", "p, (p -> q) => q", "=> ~~(p v ~p)"])
def test_intuitionistic_theorems(goal):
    res = _prove(goal)
    assert res.proved and res.status == "proved"
    assert check_hyp(res.derivation, library.calculus("HLJ")).ok


def test_linearity_needs_com():
    assert _prove("=> ((p -> q) v (q -> p))", "com").proved
    assert not _prove("=> ((p -> q) v (q -> p))", depth=6).proved


def test_excluded_middle():
    res = _prove("=> (p v ~p)", depth=10)
    assert not res.proved and res.status == "depth-exceeded"
    assert _prove("=> (p v ~p)", "lem", depth=10).proved


def test_refuted_when_search_space_is_finite():
    res = _prove("p => q", depth=8)
    assert res.status == "refuted"


def test_hypersequent_goal():
    res = _prove("p => q | q => p", "com")
    assert res.proved


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(allow_cut=True)
    with pytest.raises(ValueError):
        SearchConfig(max_depth=0)


@settings(max_examples=30)
@given(st.sampled_from(["com", "lq", "lem"]), st.integers(0, 100_000))
def test_random_derivation_is_deterministic_and_valid(name, seed):
    for base, check in (("HLJ", check_hyp), ("LJ", check_sys)):
        c = library.calculus(base, name)
        a = random_derivation(c, SearchConfig(max_depth=4), seed)
        b = random_derivation(c, SearchConfig(max_depth=4), seed)
        assert check(a, c).ok
        assert end_sequent(a) == end_sequent(b)


def test_proved_goal_is_end_sequent():
    res = _prove("(p & q) => p")
    assert end_sequent(res.derivation) == parse_sequent("(p & q) => p")
