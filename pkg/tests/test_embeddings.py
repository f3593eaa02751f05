import pytest
from hypothesis import given, settings, strategies as st

from hypsys import library
from hypsys.generate import random_derivation, with_contractions
from hypsys.h2s import partial_derivations, sys_calculus, translate_h2s
from hypsys.hypnorm import reduce_ec, structure_ew
from hypsys.kernel import Node, check_hyp, check_sys, count_rules, end_sequent, nodes
from hypsys.report import InvalidInput
from hypsys.s2h import hyp_calculus, translate_s2h
from hypsys.syntax import parse_hypersequent, parse_sequent

from conftest import fixture

CALCS = ["com", "comstar", "lq", "lem", "lemn"]


@settings(max_examples=40)
@given(st.sampled_from(CALCS), st.integers(0, 100_000))
def test_s2h_property(name, seed):
    c = library.calculus("LJ", name)
    d = random_derivation(c, seed, mode="sys", size=15)
    out = translate_s2h(d, c)
    assert check_hyp(out, hyp_calculus(c)).ok
    assert end_sequent(out) == end_sequent(d)


@settings(max_examples=40)
@given(st.sampled_from(CALCS), st.integers(0, 100_000))
def test_h2s_property(name, seed):
    c = library.calculus("HLJ", name)
    d = with_contractions(random_derivation(c, seed, size=15), seed, k=2)
    out = translate_h2s(d, c)
    assert check_sys(out, sys_calculus(c)).ok
    assert end_sequent(out) == end_sequent(d)


@settings(max_examples=20)
@given(st.sampled_from(["com", "lq", "lem"]), st.integers(0, 100_000))
def test_composed_roundtrip(name, seed):
    c = library.calculus("LJ", name)
    d = random_derivation(c, seed, mode="sys", size=12)
    h = translate_s2h(d, c)
    back = translate_h2s(h, hyp_calculus(c))
    assert end_sequent(back) == end_sequent(d)
    assert check_sys(back, sys_calculus(hyp_calculus(c))).ok


def test_s2h_fixture_shape():
    d, c = fixture("linearity_sys.drv")
    out = translate_s2h(d, c)
    assert count_rules(out, "com") == 2 and count_rules(out, "EC") == 1
    assert out.rule == "EC"


def test_s2h_bc_systems():
    c = library.calculus("LJ", "bc1")
    for seed in range(20):
        d = random_derivation(c, seed, mode="sys", size=15)
        assert check_hyp(translate_s2h(d, c), hyp_calculus(c)).ok


def test_h2s_mixed_fixture():
    d, c = fixture("mixed_split_hyp.drv")
    out = translate_h2s(d, c)
    bottoms = [n for n in nodes(out) if n.sys and n.sys[1] == "bottom"]
    assert [n.rule for n in bottoms] == ["comB", "comB"]
    tops = [n for n in nodes(out) if n.rule in ("com1", "com2")]
    assert len(tops) == 4


def test_partial_derivations_use_dummy_bottom():
    d, c = fixture("mixed_split_hyp.drv")
    s = structure_ew(reduce_ec(d, c), c)
    parts = partial_derivations(s, c)
    assert len(parts) == 2
    assert all(p.conclusion == d.conclusion for p in parts)
    left = [n.rule for n in nodes(parts[0])]
    assert "dummy-bottom" in left and left.count("com1") == 2
    right = [n for n in nodes(parts[1]) if n.rule == "com2"]
    assert len({n.tag for n in right}) == 2


def test_s2h_rejects_invalid_input():
    c = library.calculus("LJ", "com")
    with pytest.raises(InvalidInput):
        translate_s2h(Node(parse_hypersequent("p => q"), "ax"), c)


def test_h2s_rejects_hypersequent_end():
    c = library.calculus("HLJ", "com")
    d = Node(parse_hypersequent("p => p | q => q"), "EW", [Node(parse_hypersequent("p => p"), "ax")])
    with pytest.raises(InvalidInput):
        translate_h2s(d, c)


def test_trivial_derivations_pass_through():
    c = library.calculus("LJ", "com")
    d = Node(parse_hypersequent("p => p"), "ax")
    out = translate_s2h(d, c)
    assert end_sequent(out) == parse_sequent("p => p")
    back = translate_h2s(out, hyp_calculus(c))
    assert end_sequent(back) == parse_sequent("p => p")
