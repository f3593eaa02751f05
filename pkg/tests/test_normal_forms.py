import pytest
from hypothesis import given, settings, strategies as st

from hypsys import hypnorm, library
from hypsys import sysnorm as sn
from hypsys.generate import random_derivation, with_contractions
from hypsys.kernel import Node, check_hyp, check_sys, end_sequent, nodes
from hypsys.report import NotAnEC, PreconditionViolated
from hypsys.syntax import parse_hypersequent

from conftest import fixture


# -- LJ + 2-systems ---------------------------------------------------------------

def test_same_path_fixture():
    d, c = fixture("same_path_sys.drv")
    v = sn.same_path_violations(d, c)
    assert len(v) == 1 and v[0][0] == "t"
    trace = []
    out = sn.eliminate_same_path(d, c, trace)
    assert len(trace) == 1
    assert sn.same_path_violations(out, c) == []
    assert check_sys(out, c).ok and end_sequent(out) == end_sequent(d)


def test_entangled_fixture():
    d, c = fixture("entangled_sys.drv")
    assert sn.entangled_pairs(d, c) == [("a", "b")]
    assert sn.e_number(d, c, "a") == 2
    assert sn.e_number(d, c, "b") == 1
    assert sn.same_path_violations(d, c) == []
    trace = []
    out = sn.disentangle(d, c, trace)
    assert len(trace) == 1
    assert sn.entangled_pairs(out, c) == []
    assert check_sys(out, c).ok and end_sequent(out) == end_sequent(d)


def test_measure_of_fixture():
    d, c = fixture("entangled_sys.drv")
    m, pick = sn.measure(d, c)
    assert m == (2, 1, 1) and pick == "b"
    assert sn.measure(sn.disentangle(d, c), c) == ((0, 0, 0), None)


def test_normalize_sys_fixtures():
    for name in ("entangled_sys.drv", "same_path_sys.drv", "linearity_sys.drv"):
        d, c = fixture(name)
        out = sn.normalize_sys(d, c)
        assert check_sys(out, c).ok and end_sequent(out) == end_sequent(d)
        assert sn.same_path_violations(out, c) == [] and sn.entangled_pairs(out, c) == []


def test_union_find():
    uf = sn.UnionFind()
    uf.union("a", "b")
    uf.union("c", "d")
    assert uf.find("a") == uf.find("b") != uf.find("c")
    uf.union("b", "c")
    assert uf.find("a") == uf.find("d")


@settings(max_examples=30)
@given(st.sampled_from(["com", "comstar", "lq", "lem"]), st.integers(0, 100_000))
def test_sys_normal_form_property(name, seed):
    c = library.calculus("LJ", name)
    d = random_derivation(c, seed, mode="sys", size=15)
    out = sn.normalize_sys(d, c)
    assert check_sys(out, c).ok and end_sequent(out) == end_sequent(d)
    assert sn.same_path_violations(out, c) == [] and sn.entangled_pairs(out, c) == []


# -- HLJ + rules ------------------------------------------------------------------

def _ec_detour():
    leaf = Node(parse_hypersequent("p => p"), "ax")
    w = Node(parse_hypersequent("p => p | p => p"), "EW", [leaf])
    top = Node(parse_hypersequent("p => p | p => p | q => q"), "EW", [w])
    ec = Node(parse_hypersequent("p => p | q => q"), "EC", [top])
    return Node(parse_hypersequent("p => p | q => q | r => r"), "EW", [ec])


def test_ec_rank():
    d = _ec_detour()
    ec = next(n for n in nodes(d) if n.rule == "EC")
    assert hypnorm.ec_rank(d, ec.id) == 1
    assert hypnorm.ec_measure(d) == (1, 1)
    with pytest.raises(NotAnEC):
        hypnorm.ec_rank(d, d.id)


def test_reduce_ec_moves_contraction_down():
    d = _ec_detour()
    c = library.calculus("HLJ")
    out = hypnorm.reduce_ec(d, c)
    assert check_hyp(out, c).ok
    assert out.conclusion == d.conclusion
    assert hypnorm.ec_measure(out)[0] == 0


def test_structure_ew_needs_sequent():
    d = _ec_detour()
    with pytest.raises(PreconditionViolated):
        hypnorm.structure_ew(d, library.calculus("HLJ"))


def test_structured_fixture():
    d, c = fixture("mixed_split_hyp.drv")
    out = hypnorm.normalize_hyp(d, c)
    assert hypnorm.is_structured_form(out, c)
    assert check_hyp(out, c).ok and end_sequent(out) == end_sequent(d)


@settings(max_examples=30)
@given(st.sampled_from(["com", "comstar", "lq", "lem", "bc1"]), st.integers(0, 100_000))
def test_hyp_normal_form_property(name, seed):
    c = library.calculus("HLJ", name)
    d = with_contractions(random_derivation(c, seed, size=15), seed)
    trace = []
    r = hypnorm.reduce_ec(d, c, trace)
    assert all(b < a for a, b in trace)
    assert all(hypnorm.ec_rank(r, n.id) == 0 for n in nodes(r) if n.rule == "EC")
    s = hypnorm.structure_ew(r, c)
    assert hypnorm.is_structured_form(s, c)
    for x in (r, s):
        assert check_hyp(x, c).ok and end_sequent(x) == end_sequent(d)
