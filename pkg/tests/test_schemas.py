import pytest
from hypothesis import given, strategies as st

from hypsys import library
from hypsys.fileio import parse_rule
from hypsys.generate import random_nd_schema, random_schema
from hypsys.report import IncompleteSubstitution
from hypsys.schemas import (FORMULA, MULTISET, SUCCEDENT, instantiate, match_active, rule_vars,
                            sequent_pattern_vars,
                            subst_key, validate_schema, validate_system)
from hypsys.syntax import hyp_equal, parse_sequent

from conftest import formulas, sequents


def _subst(rule, draw):
    s = {}
    for v in rule_vars(rule):
        kind = rule.metavars[v]
        if kind == MULTISET:
            s[v] = tuple(draw(st.lists(formulas, max_size=2)))
        elif kind == FORMULA:
            s[v] = draw(formulas)
        else:
            s[v] = draw(st.none() | formulas)
    s["G"] = tuple(draw(st.lists(sequents, max_size=1)))
    return s


@given(st.sampled_from(["com", "comstar", "lq", "lem", "lemn", "lin", "bc1", "bc2"]), st.data())
def test_match_recovers_instance(name, data):
    r = library.rule(name)
    s = _subst(r, data.draw)
    prems, concl = instantiate(r, s)
    found = False
    free = set(rule_vars(r)) - {v for c in r.conclusion for v in sequent_pattern_vars(c)}
    for s2, _ in match_active(r, concl, seed={v: s[v] for v in free}):
        p2, c2 = instantiate(r, s2)
        assert hyp_equal(c2, concl)
        found = found or all(hyp_equal(a, b) for a, b in zip(p2, prems))
    assert found


@given(st.integers(0, 100_000))
def test_random_schemas_are_valid(seed):
    assert validate_schema(random_schema(seed)).ok
    assert validate_schema(random_nd_schema(seed)).ok


def test_library_valid():
    for name in library.names():
        assert validate_schema(library.rule(name)).ok, name
        assert validate_system(library.system(name)).ok, name


def test_com_instance():
    r = library.rule("com")
    s = {"Phi": (parse_sequent("p =>").ant), "Psi": parse_sequent("q =>").ant,
         "Gamma1": (), "Gamma2": (), "Pi1": parse_sequent("=> r").succ, "Pi2": None}
    prems, concl = instantiate(r, s)
    assert [str(p) for p in prems] == ["p => r", "q =>"]
    assert hyp_equal(concl, prems[0].__class__([parse_sequent("q => r"), parse_sequent("p =>")]))


def test_incomplete_substitution():
    with pytest.raises(IncompleteSubstitution):
        instantiate(library.rule("com"), {"Phi": ()})


def test_subst_key_ignores_multiset_order():
    a, b = parse_sequent("p, q =>").ant, parse_sequent("q, p =>").ant
    assert subst_key({"X": a}) == subst_key({"X": b})


@pytest.mark.parametrize("text,constraint", [
    ("rule bad\nmultiset: A\npremiss: G | A => A\nconclusion: G | active: A =>\nlink: 1 -> 1\n", "metavar-kind"),
    ("rule bad\nmultiset: A\npremiss: G | A =>\nconclusion: G | active: A =>\nlink: 1 -> 3\n", "linkage"),
])
def test_invalid_schemas(text, constraint):
    assert constraint in validate_schema(parse_rule(text)).constraints()


def test_succedent_kind():
    r = library.rule("com")
    assert r.metavars["Pi1"] == SUCCEDENT and r.metavars["Phi"] == MULTISET
