"""Derivation trees and the checking kernel for HLJ + rules and LJ + 2-systems."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .report import CheckReport, IncompleteSubstitution, NotASequent
from .schemas import instantiate, instantiate_top, match_active, match_top
from .syntax import BOT, And, Hypersequent, Imp, Or, Sequent, msub

LOGICAL = ("ax", "bot-ax", "∧l", "∧r", "∨l", "∨r", "→l", "→r", "IW", "IC", "cut")
BUILTINS = LOGICAL + ("EW", "EC", "dummy-bottom")
ASCII_NAMES = {"andl": "∧l", "andr": "∧r", "orl": "∨l", "orr": "∨r", "impl": "→l", "impr": "→r",
               "&l": "∧l", "&r": "∧r", "vl": "∨l", "vr": "∨r", "->l": "→l", "->r": "→r",
               "dummy": "dummy-bottom"}

_node_ids = itertools.count(1)


def fresh_node_id():
    return f"n{next(_node_ids)}"


@dataclass(eq=False)
class Node:
    conclusion: Hypersequent
    rule: str
    premisses: list = field(default_factory=list)
    subst: dict = field(default_factory=dict)
    sys: Optional[tuple] = None          # (instance id, "top" | "bottom")
    id: str = field(default_factory=fresh_node_id)
    tag: Optional[str] = None            # provenance of translated nodes

    def __repr__(self):
        return f"Node({self.id}, {self.rule}, {self.conclusion})"

    @property
    def seq(self):
        return self.conclusion.seqs[0]


Derivation = Node


def mk(conclusion, rule, premisses=(), subst=None, sys=None, tag=None):
    if isinstance(conclusion, Sequent):
        conclusion = Hypersequent([conclusion])
    return Node(conclusion, ASCII_NAMES.get(rule, rule), list(premisses), dict(subst or {}), sys, tag=tag)


def nodes(d):
    """Pre-order traversal."""
    stack = [d]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.premisses))


def postorder(d):
    out = []
    stack = [(d, False)]
    while stack:
        n, done = stack.pop()
        if done:
            out.append(n)
        else:
            stack.append((n, True))
            stack.extend((p, False) for p in reversed(n.premisses))
    return out


def parents_map(d):
    out = {d.id: None}
    for n in nodes(d):
        for p in n.premisses:
            out[p.id] = n
    return out


def count_rules(d, rule):
    return sum(1 for n in nodes(d) if n.rule == rule)


def size(d):
    return sum(1 for _ in nodes(d))


def height(d):
    h = {}
    for n in postorder(d):
        h[n.id] = 1 + max((h[p.id] for p in n.premisses), default=0)
    return h[d.id]


def copy_tree(d, fresh=True, keep_sys=True):
    out = {}
    for n in postorder(d):
        out[n.id] = Node(Hypersequent(n.conclusion.seqs), n.rule, [out[p.id] for p in n.premisses],
                         dict(n.subst), n.sys if keep_sys else None,
                         fresh_node_id() if fresh else n.id, n.tag)
    return out[d.id]


def renumber(d, prefix="n"):
    for i, n in enumerate(nodes(d), 1):
        n.id = f"{prefix}{i}"
    return d


def end_sequent(d):
    if not d.conclusion.is_sequent():
        raise NotASequent(f"root concludes {d.conclusion}")
    return d.conclusion.seqs[0]


# -- local rule checks on single sequents ------------------------------------------

def _rm(ant, f):
    return msub(ant, [f])


def lj_ok(rule, prems, c):
    """Does `c` follow from sequents `prems` by the logical/internal rule?"""
    n = len(prems)
    ant = list(c.ant)
    if rule == "ax":
        return n == 0 and len(ant) == 1 and c.succ == ant[0]
    if rule == "bot-ax":
        return n == 0 and ant == [BOT]
    if rule == "dummy-bottom":
        return n >= 1 and all(p == c for p in prems)
    if rule in ("∧l", "∨l", "→l"):
        kind = {"∧l": And, "∨l": Or, "→l": Imp}[rule]
        if n != (1 if rule == "∧l" else 2):
            return False
        for f in set(ant):
            if not isinstance(f, kind):
                continue
            rest = _rm(ant, f)
            if rule == "∧l":
                if prems[0] == Sequent(rest + [f.left, f.right], c.succ):
                    return True
            elif rule == "∨l":
                if prems[0] == Sequent(rest + [f.left], c.succ) and prems[1] == Sequent(rest + [f.right], c.succ):
                    return True
            else:
                if prems[0] == Sequent(rest, f.left) and prems[1] == Sequent(rest + [f.right], c.succ):
                    return True
        return False
    if rule == "∧r":
        return (n == 2 and isinstance(c.succ, And) and prems[0] == Sequent(ant, c.succ.left)
                and prems[1] == Sequent(ant, c.succ.right))
    if rule == "∨r":
        return (n == 1 and isinstance(c.succ, Or)
                and prems[0] in (Sequent(ant, c.succ.left), Sequent(ant, c.succ.right)))
    if rule == "→r":
        return n == 1 and isinstance(c.succ, Imp) and prems[0] == Sequent(ant + [c.succ.left], c.succ.right)
    if rule == "IW":
        if n != 1 or prems[0].succ != c.succ or len(prems[0].ant) + 1 != len(ant):
            return False
        return msub(ant, prems[0].ant) is not None
    if rule == "IC":
        if n != 1 or prems[0].succ != c.succ:
            return False
        extra = msub(prems[0].ant, ant)
        return extra is not None and len(extra) == 1 and extra[0] in ant
    if rule == "cut":
        if n != 2 or prems[0].succ is None or prems[1].succ != c.succ:
            return False
        rest = _rm(list(prems[1].ant), prems[0].succ)
        return rest is not None and Sequent(list(prems[0].ant) + rest, c.succ) == c
    return False


# -- witnesses: which components are active / context ----------------------------

@dataclass
class Witness:
    active: list               # conclusion positions of active components, in rule order
    prem_active: list          # per premiss: list of premiss positions that are active
    ctx: list                  # per premiss: {conclusion position: premiss position}
    parents: dict              # conclusion active position -> [(premiss index, premiss position)]


def _embed(g_pos, conc, prem):
    """Map conclusion positions g_pos injectively onto equal components of prem."""
    used = set()
    out = {}
    for i in g_pos:
        for j, s in enumerate(prem.seqs):
            if j not in used and s == conc.seqs[i]:
                used.add(j)
                out[i] = j
                break
        else:
            return None
    rest = [j for j in range(len(prem.seqs)) if j not in used]
    return out, rest


def _distinct_positions(h):
    seen = {}
    for i, s in enumerate(h.seqs):
        seen.setdefault(s, i)
    return list(seen.values())


def _split(conc, prems, active, n_active):
    g_pos = [i for i in range(len(conc.seqs)) if i not in active]
    ctx, rests = [], []
    for p in prems:
        r = _embed(g_pos, conc, p)
        if r is None or len(r[1]) != n_active:
            return None
        ctx.append(r[0])
        rests.append(r[1])
    return ctx, rests


def explain(node, calc, sequent_mode=False):
    """Witness for a correct inference at `node`, or a string saying what is wrong."""
    c = node.conclusion
    prems = [p.conclusion for p in node.premisses]
    rule = node.rule
    if sequent_mode and (not c.is_sequent() or any(not p.is_sequent() for p in prems)):
        return "sequent-mode derivations have single-component conclusions"
    if rule in ("ax", "bot-ax"):
        if prems:
            return "axioms have no premisses"
        if len(c.seqs) != 1:
            return "axioms carry no hypersequent context"
        return Witness([0], [], [], {0: []}) if lj_ok(rule, [], c.seqs[0]) else f"not an instance of {rule}"
    if rule in LOGICAL or rule == "dummy-bottom":
        if not prems:
            return f"{rule} needs premisses"
        for a in _distinct_positions(c):
            sp = _split(c, prems, [a], 1)
            if sp is None:
                continue
            ctx, rests = sp
            if lj_ok(rule, [p.seqs[r[0]] for p, r in zip(prems, rests)], c.seqs[a]):
                return Witness([a], rests, ctx, {a: [(i, r[0]) for i, r in enumerate(rests)]})
        return f"not an instance of {rule}"
    if rule == "EW":
        if len(prems) != 1:
            return "EW has one premiss"
        for a in _distinct_positions(c):
            sp = _split(c, prems, [a], 0)
            if sp is not None:
                return Witness([a], [[]], sp[0], {a: []})
        return "not an instance of EW"
    if rule == "EC":
        if len(prems) != 1:
            return "EC has one premiss"
        for a in _distinct_positions(c):
            sp = _split(c, prems, [a], 2)
            if sp is None:
                continue
            ctx, rests = sp
            p = prems[0]
            if all(p.seqs[j] == c.seqs[a] for j in rests[0]):
                return Witness([a], rests, ctx, {a: [(0, j) for j in rests[0]]})
        return "not an instance of EC"
    if rule in calc.hyp_rules:
        if sequent_mode:
            return f"hypersequent rule {rule} in a sequent derivation"
        return _explain_schema(node, calc.hyp_rules[rule], c, prems)
    top = calc.top_rule(rule)
    if top is not None:
        system, i = top
        try:
            want_p, want_c = instantiate_top(system, system.tops[i], node.subst)
        except IncompleteSubstitution as e:
            return f"incomplete substitution: {e}"
        if len(prems) != len(want_p) or not c.is_sequent():
            return f"wrong arity for {rule}"
        if c.seqs[0] != want_c or any(p.seqs[0] != w for p, w in zip(prems, want_p)) \
                or any(not p.is_sequent() for p in prems):
            return f"not an instance of {rule} under the given substitution"
        return Witness([0], [[0] for _ in prems], [{} for _ in prems], {0: [(j, 0) for j in range(len(prems))]})
    if calc.bottom_rule(rule) is not None:
        system = calc.bottom_rule(rule)
        if len(prems) != system.k:
            return f"{rule} needs {system.k} premisses"
        if not c.is_sequent() or any(p != c for p in prems):
            return f"premisses of {rule} must equal its conclusion"
        return Witness([0], [[0] for _ in prems], [{} for _ in prems], {0: [(j, 0) for j in range(len(prems))]})
    return f"unknown rule {rule}"


def _explain_schema(node, rule, c, prems):
    s = {k: v for k, v in node.subst.items() if k != "G"}
    try:
        want_p, want_c = instantiate(rule, s)
    except IncompleteSubstitution as e:
        return f"incomplete substitution: {e}"
    if len(prems) != len(rule.premisses):
        return f"{rule.name} needs {len(rule.premisses)} premisses"
    # choose conclusion positions for the active components
    used = set()
    active = []
    for seq in want_c.seqs:
        for j, t in enumerate(c.seqs):
            if j not in used and t == seq:
                used.add(j)
                active.append(j)
                break
        else:
            return f"conclusion is not an instance of {rule.name}"
    sp = _split(c, prems, active, 1)
    if sp is None:
        return f"premisses do not share the context of the conclusion ({rule.name})"
    ctx, rests = sp
    for p, r, w in zip(prems, rests, want_p):
        if p.seqs[r[0]] != w.seqs[0]:
            return f"premiss {p} is not an instance of {rule.name}"
    parents = {a: [] for a in active}
    for i, ci in enumerate(rule.link):
        parents[active[ci]].append((i, rests[i][0]))
    return Witness(active, rests, ctx, parents)


# -- full checks -----------------------------------------------------------------

def _ids_unique(d, report):
    seen = set()
    for n in nodes(d):
        if n.id in seen:
            report.add(n.id, "duplicate-id", "node ids must be unique")
        seen.add(n.id)


def check_hyp(d, calc):
    report = CheckReport()
    _ids_unique(d, report)
    for n in nodes(d):
        if calc.top_rule(n.rule) or calc.bottom_rule(n.rule):
            report.add(n.id, "rule-kind", f"{n.rule} belongs to a 2-system, not to HLJ")
            continue
        w = explain(n, calc)
        if isinstance(w, str):
            report.add(n.id, "inference", w)
    return report


def check_sys(d, calc, partial=False):
    """Check an LJ + 2-systems derivation; `partial` suspends the system conditions."""
    report = CheckReport()
    _ids_unique(d, report)
    for n in nodes(d):
        if n.rule in calc.hyp_rules or n.rule in ("EW", "EC"):
            report.add(n.id, "rule-kind", f"{n.rule} is not a sequent rule")
            continue
        w = explain(n, calc, sequent_mode=True)
        if isinstance(w, str):
            report.add(n.id, "inference", w)
    if partial:
        return report
    instances = {}
    for n in nodes(d):
        top = calc.top_rule(n.rule)
        bot = calc.bottom_rule(n.rule)
        if top is None and bot is None:
            if n.sys is not None:
                report.add(n.id, "sys-tag", f"{n.rule} is not part of a 2-system")
            continue
        if n.sys is None:
            report.add(n.id, "sys-tag", f"{n.rule} needs a system instance id")
            continue
        inst, role = n.sys
        system = top[0] if top else bot
        want_role = "top" if top else "bottom"
        if role != want_role:
            report.add(n.id, "sys-tag", f"{n.rule} is a {want_role} rule, tagged {role}")
            continue
        entry = instances.setdefault(inst, {"system": system, "bottoms": [], "tops": []})
        if entry["system"] is not system:
            report.add(n.id, "sys-tag", f"instance {inst} mixes systems {entry['system'].name} and {system.name}")
            continue
        entry[want_role + "s"].append(n)
    below = _premiss_index_map(d)
    for inst, e in sorted(instances.items()):
        system = e["system"]
        if len(e["bottoms"]) != 1:
            where = e["bottoms"][1].id if len(e["bottoms"]) > 1 else (e["tops"][0].id if e["tops"] else None)
            report.add(where, "bottom-count", f"instance {inst} has {len(e['bottoms'])} bottom rules")
            continue
        b = e["bottoms"][0]
        shared_seen = {}
        for t in e["tops"]:
            idx = below.get(t.id, {}).get(b.id)
            if idx is None:
                report.add(t.id, "top-above-bottom", f"top rule of {inst} is not above a premiss of its bottom rule")
                continue
            want = system.tops[idx].name
            if t.rule != want:
                report.add(t.id, "top-index", f"above premiss {idx + 1} of {inst} only {want} may be applied")
            for m in sorted(system.shared):
                if m not in t.subst:
                    continue
                v = _norm(t.subst[m])
                if m in shared_seen and shared_seen[m][0] != v:
                    report.add(t.id, "shared-metavar",
                               f"{m} differs from its value at {shared_seen[m][1]} in instance {inst}")
                else:
                    shared_seen.setdefault(m, (v, t.id))
        if not e["tops"]:
            report.warn(b.id, "redundant-system", f"instance {inst} has no top rule applications")
    return report


def _norm(v):
    from collections import Counter
    return frozenset(Counter(v).items()) if isinstance(v, tuple) else v


def _premiss_index_map(d):
    """node id -> {ancestor id: index of the premiss of that ancestor above which node lies}."""
    out = {d.id: {}}
    stack = [d]
    while stack:
        n = stack.pop()
        for i, p in enumerate(n.premisses):
            out[p.id] = {**out[n.id], n.id: i}
            stack.append(p)
    return out


def instances(d, calc):
    """instance id -> {"system", "bottom", "tops"} for every tagged 2-system node."""
    out = {}
    for n in nodes(d):
        if n.sys is None:
            continue
        inst, role = n.sys
        e = out.setdefault(inst, {"system": None, "bottom": None, "tops": []})
        if role == "bottom":
            e["bottom"] = n
            e["system"] = calc.bottom_rule(n.rule)
        else:
            e["tops"].append(n)
            if e["system"] is None and calc.top_rule(n.rule):
                e["system"] = calc.top_rule(n.rule)[0]
    return out


# -- substitution completion (used by loaders and generators) -------------------

def complete_subst(node, calc):
    """Fill in missing metavariables of a schema-rule node by matching; True on success."""
    for s in match_node(node, calc):
        node.subst = s
        return True
    return calc.hyp_rules.get(node.rule) is None and calc.top_rule(node.rule) is None


def match_node(node, calc):
    """Substitutions (extending node.subst) under which the node is a correct inference."""
    rule = calc.hyp_rules.get(node.rule)
    prems = [p.conclusion for p in node.premisses]
    if rule is not None:
        if len(prems) != len(rule.premisses):
            return
        seed = {k: v for k, v in node.subst.items() if k != "G"}
        for s, _ in match_active(rule, node.conclusion, seed):
            g = s.pop("G")
            yield from _match_prems(rule.metavars, [p[0] for p in rule.premisses],
                                    prems, g, s, node, calc, False)
        return
    top = calc.top_rule(node.rule)
    if top is not None:
        system, i = top
        t = system.tops[i]
        if not node.conclusion.is_sequent() or len(prems) != len(t.premisses):
            return
        for s in match_top(system, t, node.conclusion.seqs[0], node.subst):
            yield from _match_prems(system.metavars, t.premisses, prems, (), s, node, calc, True)


def _match_prems(kinds, pats, prems, g, s, node, calc, seq_mode):
    from .schemas import match_sequent

    def rec(i, s):
        if i == len(pats):
            trial = Node(node.conclusion, node.rule, node.premisses, s)
            if not isinstance(explain(trial, calc, sequent_mode=seq_mode), str):
                yield s
            return
        rest = msub(list(prems[i].seqs), list(g))
        if rest is None or len(rest) != 1:
            return
        for s2 in match_sequent(pats[i], rest[0], s, kinds):
            yield from rec(i + 1, s2)
    yield from rec(0, dict(s))
