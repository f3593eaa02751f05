"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""
import time
from contextlib import contextmanager

from hypsys import hypnorm, library
from hypsys import sysnorm as sn
from hypsys.fileio import read_derivation_file
from hypsys.generate import random_derivation as gen, random_nd_schema, random_schema, with_contractions
from hypsys.h2s import sys_calculus, translate_h2s
from hypsys.kernel import check_hyp, check_sys, count_rules, end_sequent, nodes
from hypsys.natded import check_nd, classify, derive_axiom, hr_to_nd, nd_calculus, read_nd_file
from hypsys.prover import SearchConfig, prove, random_derivation
from hypsys.s2h import hyp_calculus, translate_s2h
from hypsys.syntax import parse_formula, parse_hypersequent
from hypsys.translate import roundtrip_check

from conftest import ACCEPTANCE, FIX



@contextmanager
def criterion(name, limit=None):
    t = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t
        if ok and limit is not None and dt >= limit:
            line = f"FAIL {name}: {dt:.2f}s exceeds {limit}s"
        else:
            line = f"{'PASS' if ok else 'FAIL'} {name} ({dt:.2f}s)"
        print(line)
        ACCEPTANCE.append(line)
    assert dt < (limit or float("inf")), f"{name}: {dt:.2f}s"


def test_1_s2h_godel_fixture():
    with criterion("s2h on the LJ+Sys(com) fixture", 1.0):
        d, c = read_derivation_file(FIX / "linearity_sys.drv")
        out = translate_s2h(d, c)
        assert check_hyp(out, hyp_calculus(c)).ok
        assert count_rules(out, "com") == 2 and count_rules(out, "EC") == 1
        assert end_sequent(out) == end_sequent(d)


def test_2_h2s_mixed_split():
    with criterion("h2s splits the mixed system", 1.0):
        d, c = read_derivation_file(FIX / "mixed_split_hyp.drv")
        out = translate_h2s(d, c)
        assert check_sys(out, sys_calculus(c)).ok
        bottoms = [n for n in nodes(out) if n.sys and n.sys[1] == "bottom"]
        assert len(bottoms) == 2 and all(n.rule == "comB" for n in bottoms)
        assert len({n.sys[0] for n in bottoms}) == 2
        assert not any(n.rule == "dummy-bottom" for n in nodes(out))


def test_3_random_translation_suite():
    cfg = SearchConfig(max_depth=5, max_components=3)
    with criterion("random derivations translate both ways", 60.0):
        for name in ("com", "lem", "lq"):
            sc, hc = library.calculus("LJ", name), library.calculus("HLJ", name)
            for seed in range(200):
                d = random_derivation(sc, cfg, seed)
                out = translate_s2h(d, sc)
                assert check_hyp(out, hyp_calculus(sc)).ok, (name, "s2h", seed)
                assert end_sequent(out) == end_sequent(d), (name, "s2h", seed)
                d = random_derivation(hc, cfg, seed)
                out = translate_h2s(d, hc)
                assert check_sys(out, sys_calculus(hc)).ok, (name, "h2s", seed)
                assert end_sequent(out) == end_sequent(d), (name, "h2s", seed)


def test_4_normal_forms():
    with criterion("normal forms"):
        for name in ("com", "lem", "lq", "comstar"):
            sc, hc = library.calculus("LJ", name), library.calculus("HLJ", name)
            for seed in range(25):
                h = with_contractions(gen(hc, seed, size=15), seed)
                trace = []
                r = hypnorm.reduce_ec(h, hc, trace)
                assert all(b < a for a, b in trace)
                assert all(hypnorm.ec_rank(r, n.id) == 0 for n in nodes(r) if n.rule == "EC")
                s = hypnorm.structure_ew(r, hc)
                for x in (r, s):
                    assert check_hyp(x, hc).ok and end_sequent(x) == end_sequent(h)
                assert hypnorm.is_structured_form(s, hc)

                d = gen(sc, seed, mode="sys", size=15)
                _sys_normal(d, sc)
        d, c = read_derivation_file(FIX / "entangled_sys.drv")
        _sys_normal(d, c)
        d, c = read_derivation_file(FIX / "same_path_sys.drv")
        _sys_normal(d, c)


def _sys_normal(d, c):
    cur = d
    while (found := sn._closest_pair(cur, c)) is not None:
        k = len(sn.same_path_violations(cur, c))
        cur = sn.eliminate_one(cur, c, *found)
        assert len(sn.same_path_violations(cur, c)) < k
    trace = []
    out = sn.disentangle(cur, c, trace)
    assert all(m2 < m for _, m, m2 in trace)
    assert sn.entangled_pairs(out, c) == []
    for x in (cur, out):
        assert check_sys(x, c).ok and end_sequent(x) == end_sequent(d)


def test_5_rule_roundtrip():
    with criterion("rule translation round trip", 5.0):
        assert roundtrip_check(library.system("comstar"))
        for name in ("com", "lem", "lq", "bc1", "bc2"):
            assert roundtrip_check(library.rule(name)), name
            assert roundtrip_check(library.system(name)), name
        for seed in range(100):
            assert roundtrip_check(random_schema(seed)), seed


def test_6_natural_deduction():
    with criterion("polarity classes and natural deduction", 10.0):
        for text in ("((p -> q) v (q -> p))", "(~a v ~~a)", "(s v ~s)", "(p0 v (p0 -> p1))"):
            assert classify(parse_formula(text)).in_P(3), text
        for name in ("com", "lem", "bc1", "bc2"):
            h = hr_to_nd(library.rule(name))
            assert check_nd(derive_axiom(h), nd_calculus(h)).ok, name
        for seed in range(100):
            h = hr_to_nd(random_nd_schema(seed, k=3, n=2, m=2))
            assert check_nd(derive_axiom(h), nd_calculus(h)).ok, seed
        for f in ("lin_axiom.nd", "lem_axiom.nd"):
            d, c = read_nd_file(FIX / f)
            assert check_nd(d, c).ok, f


def test_7_prover_sanity():
    with criterion("prover sanity", 10.0):
        res = prove(parse_hypersequent("=> ((p -> q) v (q -> p))"), library.calculus("HLJ", "com"),
                    SearchConfig(max_depth=8))
        assert res.proved
        res = prove(parse_hypersequent("=> (p v ~p)"), library.calculus("HLJ"), SearchConfig(max_depth=10))
        assert not res.proved and res.status in ("depth-exceeded", "refuted")
