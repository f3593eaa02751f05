import pytest
from hypothesis import given

from hypsys.syntax import (BOT, And, Atom, Imp, Or, ParseError, atoms, fmt,
                           hyp_equal, latex, msub, neg, parse_formula, parse_hypersequent,
                           parse_sequent, subformulas)

from conftest import formulas, hypersequents, sequents


@given(formulas)
def test_formula_roundtrip(f):
    assert parse_formula(fmt(f)) == f


@given(sequents)
def test_sequent_roundtrip(s):
    assert parse_sequent(fmt(s)) == s


@given(hypersequents)
def test_hypersequent_roundtrip(h):
    assert hyp_equal(parse_hypersequent(fmt(h)), h)


@given(formulas)
def test_subformulas_contain_atoms(f):
    subs = set(subformulas(f))
    assert f in subs
    assert {Atom(a) for a in atoms(f)} <= subs


def test_negation_is_implication_to_bottom():
    assert parse_formula("~p") == Imp(Atom("p"), BOT) == neg(Atom("p"))


def test_connectives():
    f = parse_formula("((p & q) v (q -> r))")
    assert f == Or(And(Atom("p"), Atom("q")), Imp(Atom("q"), Atom("r")))


def test_sequent_multiset_equality():
    assert parse_sequent("p, q => r") == parse_sequent("q, p => r")
    assert parse_sequent("p, p => r") != parse_sequent("p => r")


def test_hypersequent_is_multiset_of_components():
    assert hyp_equal(parse_hypersequent("p => q | => r"), parse_hypersequent("=> r | p => q"))
    assert not hyp_equal(parse_hypersequent("=> r | => r"), parse_hypersequent("=> r"))


def test_empty_succedent():
    s = parse_sequent("p, q =>")
    assert s.succ is None and len(s.ant) == 2


def test_msub():
    p, q = Atom("p"), Atom("q")
    assert sorted(map(fmt, msub((p, p, q), (p,)))) == ["p", "q"]


@pytest.mark.parametrize("bad", ["p v q", "(p", "p =>> q", "(p & )", "p q"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_formula(bad)


def test_parse_error_offset():
    with pytest.raises(ParseError) as e:
        parse_formula("(p & q) r")
    assert "offset" in str(e.value)


def test_latex():
    assert "\\rightarrow" in latex(parse_formula("(p -> q)"))
    assert "\\Rightarrow" in latex(parse_sequent("p => q"))
