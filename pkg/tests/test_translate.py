import pytest
from hypothesis import given, strategies as st

from hypsys import library
from hypsys.generate import random_schema
from hypsys.library import _parsed
from hypsys.schemas import validate_schema, validate_system
from hypsys.translate import (hyp_to_sys, roundtrip_check, rules_equivalent, shared_metavars,
                              sys_to_hyp, systems_equivalent)

PAIRS = ["com", "comstar", "lq", "lemn", "lem"]


@pytest.mark.parametrize("name", PAIRS)
def test_system_to_rule_matches_library(name):
    p = _parsed()
    assert rules_equivalent(sys_to_hyp(p["systems"][name]), p["rules"][name])
    assert systems_equivalent(hyp_to_sys(p["rules"][name]), p["systems"][name])


@pytest.mark.parametrize("name,shared", [("com", {"Phi", "Psi"}), ("lq", {"Sigma1"}), ("lem", {"sigma"})])
def test_shared_metavars(name, shared):
    assert set(shared_metavars(library.system(name).tops)) == shared


@pytest.mark.parametrize("name", ["bc1", "bc2", "bc3", "lin"])
def test_rule_only_entries_translate(name):
    s = hyp_to_sys(library.rule(name))
    assert validate_system(s).ok
    assert s.k == library.rule(name).k
    assert roundtrip_check(s) and roundtrip_check(library.rule(name))


@given(st.integers(0, 1_000_000))
def test_random_roundtrip(seed):
    r = random_schema(seed)
    s = hyp_to_sys(r)
    assert validate_system(s).ok
    assert validate_schema(sys_to_hyp(s)).ok
    assert roundtrip_check(r) and roundtrip_check(s)


def test_equivalence_is_not_trivial():
    assert not rules_equivalent(library.rule("com"), library.rule("comstar"))
    assert not systems_equivalent(library.system("lq"), library.system("lem"))
