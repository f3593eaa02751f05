from hypothesis import given, strategies as st

from hypsys import library
from hypsys.generate import random_derivation
from hypsys.kernel import (Node, check_hyp, check_sys, copy_tree, count_rules, height, instances,
                           nodes, size)
from hypsys.syntax import parse_hypersequent

from conftest import fixture

CALCS = ["com", "comstar", "lq", "lem", "bc1"]


@given(st.sampled_from(CALCS), st.integers(0, 10_000))
def test_random_hyp_derivations_check(name, seed):
    c = library.calculus("HLJ", name)
    assert check_hyp(random_derivation(c, seed, size=10), c).ok


@given(st.sampled_from(CALCS), st.integers(0, 10_000))
def test_random_sys_derivations_check(name, seed):
    c = library.calculus("LJ", name)
    assert check_sys(random_derivation(c, seed, mode="sys", size=10), c).ok


def _leaf(text):
    return Node(parse_hypersequent(text), "ax")


def test_axiom():
    c = library.calculus("HLJ")
    assert check_hyp(_leaf("p => p"), c).ok
    assert not check_hyp(_leaf("p => q"), c).ok


def test_logical_rules():
    c = library.calculus("HLJ")
    d = Node(parse_hypersequent("=> (p -> p)"), "→r", [_leaf("p => p")])
    assert check_hyp(d, c).ok
    d = Node(parse_hypersequent("=> (p -> q)"), "→r", [_leaf("p => p")])
    assert "inference" in check_hyp(d, c).constraints()


def test_structural_rules():
    c = library.calculus("HLJ")
    d = Node(parse_hypersequent("p => p"), "EC", [Node(parse_hypersequent("p => p | p => p"), "EW",
                                                       [_leaf("p => p")])])
    assert check_hyp(d, c).ok
    bad = Node(parse_hypersequent("p => p | q => q"), "EC", [_leaf("p => p")])
    assert not check_hyp(bad, c).ok


def test_hyp_rule_application():
    c = library.calculus("HLJ", "com")
    d, _ = fixture("mixed_split_hyp.drv")
    assert check_hyp(d, c).ok
    assert count_rules(d, "com") == 2
    assert not check_hyp(d, library.calculus("HLJ")).ok


def test_unknown_rule():
    c = library.calculus("HLJ")
    assert not check_hyp(Node(parse_hypersequent("p => p"), "magic"), c).ok


def test_sys_fixture_instances():
    d, c = fixture("entangled_sys.drv")
    assert check_sys(d, c).ok
    inst = instances(d, c)
    assert set(inst) == {"a", "b"}
    assert len(inst["b"]["tops"]) == 3 and len(inst["a"]["tops"]) == 2


def test_sys_wrong_top_index():
    d, c = fixture("same_path_sys.drv")
    d = copy_tree(d, fresh=False)
    t = next(n for n in nodes(d) if n.rule == "com2")
    t.rule = "com1"
    assert not check_sys(d, c).ok


def test_sys_missing_bottom():
    d, c = fixture("same_path_sys.drv")
    top = d.premisses[0]
    assert not check_sys(top, c).ok


def test_top_rule_not_allowed_in_hlj():
    d, c = fixture("linearity_sys.drv")
    rep = check_hyp(d, library.calculus("HLJ", "com"))
    assert not rep.ok and any("unknown rule" in v.message for v in rep.violations)


def test_hyp_rule_not_allowed_in_lj():
    d, _ = fixture("mixed_split_hyp.drv")
    assert not check_sys(d, library.calculus("LJ", "com")).ok


def test_duplicate_ids():
    c = library.calculus("HLJ")
    leaf = _leaf("p => p")
    d = Node(parse_hypersequent("p => p | p => p"), "EW", [leaf], id=leaf.id)
    assert "duplicate-id" in check_hyp(d, c).constraints()


def test_measures():
    d, _ = fixture("linearity_sys.drv")
    assert size(d) == len(list(nodes(d)))
    assert height(d) >= 1
    assert size(copy_tree(d)) == size(d)
