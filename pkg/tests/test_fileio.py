from hypothesis import given, strategies as st

from hypsys import library
from hypsys.fileio import (from_json, parse_blocks, parse_calculus, parse_derivation, parse_rule,
                           parse_system, to_json, write_calculus, write_derivation, write_rule,
                           write_system)
from hypsys.generate import random_derivation
from hypsys.kernel import check_hyp, check_sys, end_sequent, size
from hypsys.translate import rules_equivalent, systems_equivalent

from conftest import fixture


def test_fixture_loads_with_calculus_header():
    d, c = fixture("linearity_sys.drv")
    assert c.base == "LJ" and "com" in c.systems
    assert check_sys(d, c).ok


def test_library_rules_roundtrip_through_text():
    for name in library.names():
        r = library.rule(name)
        assert rules_equivalent(parse_rule(write_rule(r)), r), name
        s = library.system(name)
        assert systems_equivalent(parse_system(write_system(s)), s), name


def test_calculus_roundtrip():
    c = library.calculus("HLJ", "com", "lq")
    c2 = parse_calculus(write_calculus(c))
    assert c2.base == "HLJ" and set(c2.hyp_rules) == {"com", "lq"}


@given(st.integers(0, 10_000))
def test_derivation_text_and_json_roundtrip(seed):
    c = library.calculus("HLJ", "com")
    d = random_derivation(c, seed, size=8)
    for back in (parse_derivation(write_derivation(d), c), from_json(to_json(d))):
        assert size(back) == size(d)
        assert end_sequent(back) == end_sequent(d)
        assert check_hyp(back, c).ok


def test_sys_derivation_roundtrip():
    c = library.calculus("LJ", "com")
    d = random_derivation(c, 7, mode="sys", size=10)
    assert check_sys(parse_derivation(write_derivation(d), c), c).ok


def test_blocks_comments_ignored():
    b = parse_blocks("# a comment\n" + write_rule(library.rule("lq")))
    assert [r.name for r in b["rules"]] == ["lq"]
