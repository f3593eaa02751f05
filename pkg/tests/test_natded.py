import pytest
from hypothesis import given, strategies as st

from hypsys import library
from hypsys.generate import random_nd_schema
from hypsys.natded import (NDNode, associated_axiom, check_nd, classify, copy_nd, derive_axiom,
                           eliminate_nd_rules, hr_to_nd, hyp, in_N, in_P, nd_calculus, nd_nodes,
                           open_assumptions, parse_nd, read_nd_file, write_nd)
from hypsys.report import UnsupportedShape
from hypsys.syntax import BOT, TOP, And, Atom, Imp, Or, fmt, parse_formula

from conftest import FIX, formulas


def levels(f):
    """Least (P, N) levels, computed bottom-up from the grammar."""
    if isinstance(f, Atom):
        return 0, 0
    if f in (BOT, TOP):
        return 1, 1
    (pa, na), (pb, nb) = levels(f.left), levels(f.right)
    if isinstance(f, And):
        x, y = max(pa, pb, 1), max(na, nb, 1)
        return min(x, y + 1), min(y, x + 1)
    if isinstance(f, Or):
        p = max(pa, pb, 1)
        return p, p + 1
    n = max(pa, nb, 1)
    return n + 1, n


@given(formulas)
def test_classify_matches_level_oracle(f):
    c = classify(f)
    assert (c.p, c.n) == levels(f)
    assert in_P(f, c.p) and (c.p == 0 or not in_P(f, c.p - 1))
    assert in_N(f, c.n) and (c.n == 0 or not in_N(f, c.n - 1))


@given(formulas)
def test_classes_are_cumulative(f):
    c = classify(f)
    assert all(c.in_P(k) for k in range(c.p, c.p + 3))
    assert in_N(f, c.p + 1) and in_P(f, c.n + 1)


@pytest.mark.parametrize("text,p", [
    ("((p -> q) v (q -> p))", 2), ("(~a v ~~a)", 3), ("(s v ~s)", 2), ("(p0 v (p0 -> p1))", 2),
    ("p", 0), ("bot", 1),
])
def test_known_classes(text, p):
    c = classify(parse_formula(text))
    assert c.p == p and c.in_P(3)


def test_report_lines():
    r = classify(parse_formula("(s v ~s)")).report()
    assert "in P2: yes" in r and "in P1: no" in r


# -- higher-level rules -----------------------------------------------------------

@pytest.mark.parametrize("name,axiom", [
    ("lin", "((delta -> sigma) v (sigma -> delta))"),
    ("com", "((Psi -> Phi) v (Phi -> Psi))"),
    ("lem", "(sigma v ~sigma)"),
    ("bc1", "(sigma0 v (sigma0 -> sigma1))"),
    ("bc2", "(sigma0 v ((sigma0 -> sigma1) v ((sigma0 & sigma1) -> sigma2)))"),
])
def test_associated_axioms(name, axiom):
    assert associated_axiom(hr_to_nd(library.rule(name))) == parse_formula(axiom)


@pytest.mark.parametrize("name", ["comstar", "lq", "lemn"])
def test_unsupported_shapes(name):
    with pytest.raises(UnsupportedShape):
        hr_to_nd(library.rule(name))


def test_rule_blocks():
    r = hr_to_nd(library.rule("bc2"))
    assert r.k == 3
    assert [b.hyps for b in r.blocks] == [(), ("sigma0",), ("sigma0", "sigma1")]
    assert [b.discharges for b in r.blocks] == [("sigma0",), ("sigma1",), ("sigma2",)]


@pytest.mark.parametrize("name", ["lin", "com", "lem", "bc1", "bc2", "bc3"])
def test_derive_axiom_checks(name):
    h = hr_to_nd(library.rule(name))
    d = derive_axiom(h)
    assert check_nd(d, nd_calculus(h)).ok
    assert open_assumptions(d) == []
    assert d.formula == associated_axiom(h)


@given(st.integers(0, 1_000_000))
def test_derive_axiom_random(seed):
    h = hr_to_nd(random_nd_schema(seed, k=3, n=2, m=2))
    d = derive_axiom(h)
    assert check_nd(d, nd_calculus(h)).ok
    nj = eliminate_nd_rules(d, nd_calculus(h))
    assert check_nd(nj).ok
    assert nj.formula == d.formula
    assert {fmt(f) for f in open_assumptions(nj)} <= {fmt(associated_axiom(h))}


@pytest.mark.parametrize("name", ["lin_axiom.nd", "lem_axiom.nd"])
def test_fixtures_check(name):
    d, c = read_nd_file(FIX / name)
    assert check_nd(d, c).ok
    assert open_assumptions(d) == []


def test_write_parse_roundtrip():
    h = hr_to_nd(library.rule("bc2"))
    d = derive_axiom(h)
    back = parse_nd(write_nd(d))
    assert write_nd(back) == write_nd(d)
    assert check_nd(back, nd_calculus(h)).ok


# -- rejections -------------------------------------------------------------------

def _lem():
    h = hr_to_nd(library.rule("lem"))
    return derive_axiom(h), nd_calculus(h)


def _find(d, pred):
    return next(n for n in nd_nodes(d) if pred(n))


def test_nj_rule_mismatch():
    d, c = _lem()
    d = copy_nd(d)
    n = _find(d, lambda n: n.rule == "orI1")
    n.rule = "orI2"
    assert "nj-rule" in check_nd(d, c).constraints()


def test_upper_without_lower():
    d, c = _lem()
    up = copy_nd(_find(d, lambda n: n.block == 1))
    assert not check_nd(up, c).ok


def test_upper_block_wrong():
    d, c = _lem()
    d = copy_nd(d)
    _find(d, lambda n: n.block == 1).block = 2
    assert not check_nd(d, c).ok


def test_undischarged_hypothesis_is_open():
    d = NDNode(parse_formula("(p -> q)"), "impI", [hyp(Atom("q"), None)], label="1")
    assert check_nd(d).ok
    assert open_assumptions(d) == [Atom("q")]


def test_wrong_discharge():
    d = NDNode(parse_formula("(p -> p)"), "impI", [hyp(Atom("p"), "2")], label="1")
    assert not check_nd(d).ok


def test_plain_nj():
    p = Atom("p")
    d = NDNode(Imp(p, p), "impI", [hyp(p, "1")], label="1")
    assert check_nd(d).ok and open_assumptions(d) == []
    e = NDNode(Or(p, Imp(p, BOT)), "orI1", [hyp(p)])
    assert check_nd(e).ok
