"""Schema-level translations between 2-systems and hypersequent rules."""
from __future__ import annotations

import itertools

from .report import InvalidSchema, InvalidSystem
from .schemas import HypRule, TopRule, TwoSystem, rule_vars, validate_schema, validate_system
from .syntax import And, Imp, Or, Var


def sys_to_hyp(s):
    report = validate_system(s)
    if not report.ok:
        raise InvalidSystem(str(report))
    prems, link = [], []
    for i, t in enumerate(s.tops):
        for p in t.premisses:
            prems.append([p])
            link.append(i)
    return HypRule(s.name, dict(s.metavars), prems, [t.conclusion for t in s.tops], link)


def hyp_to_sys(h):
    report = validate_schema(h)
    if not report.ok:
        raise InvalidSchema(str(report))
    tops = []
    for i, c in enumerate(h.conclusion):
        tops.append(TopRule(f"{h.name}{i + 1}", [h.premisses[j][0] for j in h.group(i)], c))
    return TwoSystem(h.name, dict(h.metavars), tops, shared_metavars(tops))


def shared_metavars(tops):
    seen = {}
    for t in tops:
        for v in rule_vars(t):
            seen[v] = seen.get(v, 0) + 1
    return frozenset(v for v, n in seen.items() if n >= 2)


def roundtrip_check(x):
    if isinstance(x, TwoSystem):
        return systems_equivalent(x, hyp_to_sys(sys_to_hyp(x)))
    return rules_equivalent(x, sys_to_hyp(hyp_to_sys(x)))


# -- equivalence up to metavariable renaming and reordering ---------------------

def _unify_f(a, b, ren, kinds_a, kinds_b):
    match a, b:
        case Var(x), Var(y):
            if kinds_a.get(x) != kinds_b.get(y):
                return None
            if x in ren:
                return ren if ren[x] == y else None
            if y in ren.values():
                return None
            return {**ren, x: y}
        case (And(), And()) | (Or(), Or()) | (Imp(), Imp()):
            ren = _unify_f(a.left, b.left, ren, kinds_a, kinds_b)
            return None if ren is None else _unify_f(a.right, b.right, ren, kinds_a, kinds_b)
        case _:
            if isinstance(a, Var) or isinstance(b, Var):
                return None
            return ren if a == b else None


def _unify_seq(pa, pb, ren, ka, kb):
    if (pa.succ is None) != (pb.succ is None) or len(pa.ant) != len(pb.ant):
        return
    if pa.succ is not None:
        ren = _unify_f(pa.succ, pb.succ, ren, ka, kb)
        if ren is None:
            return

    def rec(i, used, ren):
        if i == len(pa.ant):
            yield ren
            return
        for j, g in enumerate(pb.ant):
            if j in used:
                continue
            r2 = _unify_f(pa.ant[i], g, ren, ka, kb)
            if r2 is not None:
                yield from rec(i + 1, used | {j}, r2)
    yield from rec(0, frozenset(), ren)


def _unify_lists(xs, ys, ren, ka, kb, ordered=False):
    """Unify two lists of sequent patterns as multisets (or in order)."""
    if len(xs) != len(ys):
        return

    def rec(i, used, ren):
        if i == len(xs):
            yield ren
            return
        cands = [i] if ordered else range(len(ys))
        for j in cands:
            if j in used:
                continue
            for r2 in _unify_seq(xs[i], ys[j], ren, ka, kb):
                yield from rec(i + 1, used | {j}, r2)
    yield from rec(0, frozenset(), ren)


def _tops_equivalent(ta, tb, ka, kb, extra=None):
    """ta, tb: lists of (conclusion, premisses); try every pairing of tops."""
    if len(ta) != len(tb):
        return False
    for perm in itertools.permutations(range(len(tb))):
        def rec(i, ren):
            if i == len(ta):
                yield ren
                return
            ca, pa = ta[i]
            cb, pb = tb[perm[i]]
            for r1 in _unify_seq(ca, cb, ren, ka, kb):
                for r2 in _unify_lists(pa, pb, r1, ka, kb):
                    yield from rec(i + 1, r2)
        for ren in rec(0, {}):
            if extra is None or extra(ren):
                return True
    return False


def rules_equivalent(a, b):
    if sorted(a.metavars.values()) != sorted(b.metavars.values()):
        return False
    ta = [(c, [a.premisses[j][0] for j in a.group(i)]) for i, c in enumerate(a.conclusion)]
    tb = [(c, [b.premisses[j][0] for j in b.group(i)]) for i, c in enumerate(b.conclusion)]
    return _tops_equivalent(ta, tb, a.metavars, b.metavars)


def systems_equivalent(a, b):
    if sorted(a.metavars.values()) != sorted(b.metavars.values()):
        return False
    ta = [(t.conclusion, list(t.premisses)) for t in a.tops]
    tb = [(t.conclusion, list(t.premisses)) for t in b.tops]

    def shared_ok(ren):
        return {ren.get(v, v) for v in a.shared} == set(b.shared)
    return _tops_equivalent(ta, tb, a.metavars, b.metavars, shared_ok)
