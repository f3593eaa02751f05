"""Translate HLJ + hypersequent-rule derivations of sequents into LJ + 2-system derivations.

Every component of the hypersequent above the root (EC) queue gets a partial
derivation (top rules without their bottoms, dummy bottoms where the context
of a multi-premiss rule is duplicated).  Bottom rules are then attached per
hypersequent-rule application; dummy bottoms are split so that no bottom rule
serves top rules of two different applications.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .construct import seq_node
from .hypnorm import is_structured_form, reduce_ec, structure_ew
from .kernel import Node, check_hyp, check_sys, explain, nodes, postorder
from .report import InvalidInput, MixedUnresolvable, NotStructured, SizeLimitExceeded, UnknownComponent
from .schemas import Calculus, rule_vars
from .syntax import Hypersequent
from .translate import hyp_to_sys

_inst_ids = itertools.count(1)


def sys_calculus(calc):
    """LJ extended with the 2-system of every hypersequent rule of `calc`."""
    systems = {name: hyp_to_sys(r) for name, r in calc.hyp_rules.items()}
    return Calculus(base="LJ", systems=systems, name=(calc.name or "HLJ") + ":sys")


# -- ancestor trees -----------------------------------------------------------------

@dataclass
class AncestorTree:
    node: str                    # id of the rule application whose conclusion holds the component
    pos: int                     # position of the component in that conclusion
    rule: str
    children: list = field(default_factory=list)    # (kind, AncestorTree)

    def rules(self):
        """Ids of the applications acting on a component of the tree, (EW) excluded."""
        out = []
        if self.children or self.rule in ("ax", "bot-ax"):
            if not all(kind == "context" for kind, _ in self.children):
                out.append(self.node)
        for _, c in self.children:
            out += c.rules()
        return out


def _hat(d):
    ok, _ = is_structured_form(d)
    if not ok:
        raise NotStructured("the derivation is not in structured form")
    hat = d
    while hat.rule == "EC":
        hat = hat.premisses[0]
    return hat


def ancestor_tree(d, comp, calc):
    """Ancestor tree of component `comp` (a position) of the hypersequent above the (EC) queue."""
    hat = _hat(d)
    if not 0 <= comp < len(hat.conclusion):
        raise UnknownComponent(f"no component {comp} in {hat.conclusion}")

    def build(n, p):
        t = AncestorTree(n.id, p, n.rule)
        if not n.premisses:
            return t
        w = explain(n, calc)
        if p in w.active:
            if n.rule == "EW":
                return t
            kind = "active-linked" if n.rule in calc.hyp_rules else "active-hlj"
            for i, q in w.parents[p]:
                t.children.append((kind, build(n.premisses[i], q)))
        else:
            for i, m in enumerate(w.ctx):
                t.children.append(("context", build(n.premisses[i], m[p])))
        return t

    return build(hat, comp)


# -- partial derivations ------------------------------------------------------------

def partial_derivations(d, calc):
    """One partial derivation per component of the hypersequent above the (EC) queue.

    Top rule nodes carry the id of the hypersequent-rule application they translate as tag."""
    hat = _hat(d)
    systems = {name: hyp_to_sys(r) for name, r in calc.hyp_rules.items()}
    out = {}
    for n in postorder(hat):
        if not n.premisses:
            out[n.id] = [seq_node(n.seq, n.rule, tag=n.id)]
            continue
        w = explain(n, calc)
        if n.rule == "EC":
            raise NotStructured(f"(EC) at {n.id} is not in the root queue")
        comps = [None] * len(n.conclusion)
        for p in range(len(n.conclusion)):
            if p in w.active:
                continue
            parts = [out[q.id][m[p]] for q, m in zip(n.premisses, w.ctx) if out[q.id][m[p]] is not None]
            if len(parts) > 1:
                comps[p] = seq_node(n.conclusion.seqs[p], "dummy-bottom", parts)
            elif parts:
                comps[p] = parts[0]
        if n.rule != "EW":
            for j, a in enumerate(w.active):
                prems = [out[n.premisses[i].id][q] for i, q in w.parents[a]]
                if any(x is None for x in prems):
                    raise NotStructured(f"active premiss of {n.id} is introduced by (EW)")
                if n.rule in calc.hyp_rules:
                    system = systems[n.rule]
                    top = system.tops[j]
                    own = set(rule_vars(top))
                    subst = {k: v for k, v in n.subst.items() if k in own}
                    comps[a] = seq_node(n.conclusion.seqs[a], top.name, prems, subst, tag=n.id)
                else:
                    comps[a] = seq_node(n.conclusion.seqs[a], n.rule, prems, n.subst, tag=n.id)
        out[n.id] = comps
    parts = out[hat.id]
    if any(p is None for p in parts):
        raise NotStructured("a component of the hypersequent above the (EC) queue comes from (EW)")
    top_names = {t.name for s in systems.values() for t in s.tops}
    for p in parts:
        _assert_one_level(p, top_names)
    return parts


def _assert_one_level(part, top_names):
    """Two top rules translating one application never lie on a common path."""
    def walk(n, seen):
        if n.rule in top_names:
            assert n.tag not in seen, f"two tops of application {n.tag} on one path"
            seen = seen | {n.tag}
        for p in n.premisses:
            walk(p, seen)
    walk(part, frozenset())


# -- bottom rules and splitting -----------------------------------------------------

class _Attacher:
    def __init__(self, partials, calc, order, limit):
        self.parts, self.calc = partials, calc
        self.limit, self.calls = limit, 0
        self.memo = {}
        self.apps = {}
        for p in partials:
            for n in nodes(p):
                t = calc.top_rule(n.rule)
                if t is not None:
                    self.apps[n.tag] = t[0]
        self.order = sorted(self.apps, key=lambda a: order.get(a, 0))

    def allowed_top(self, n, allowed):
        t = self.calc.top_rule(n.rule)
        return t is None or allowed.get(n.tag) == t[1]

    def select(self, n, allowed, build=False, inst=None):
        """A dummy-free copy of partial n using only allowed tops (None if impossible)."""
        if not self.allowed_top(n, allowed):
            return None
        if n.rule == "dummy-bottom":
            for p in n.premisses:
                s = self.select(p, allowed, build, inst)
                if s is not None:
                    return s
            return None
        prems = []
        for p in n.premisses:
            s = self.select(p, allowed, build, inst)
            if s is None:
                return None
            prems.append(s)
        if not build:
            return True
        t = self.calc.top_rule(n.rule)
        sys = (inst[n.tag], "top") if t is not None else None
        return Node(Hypersequent(n.conclusion.seqs), n.rule, prems, dict(n.subst), sys, tag=n.tag)

    def solve(self, allowed):
        key = frozenset(allowed.items())
        if key in self.memo:
            return self.memo[key]
        self.calls += 1
        if self.calls > self.limit:
            raise SizeLimitExceeded("bottom-rule placement search exceeded its budget")
        plan = None
        for j, p in enumerate(self.parts):
            if self.select(p, allowed):
                plan = ("leaf", j)
                break
        if plan is None:
            for a in self.order:
                if a in allowed:
                    continue
                subs = []
                for i in range(self.apps[a].k):
                    sub = self.solve({**allowed, a: i})
                    if sub is None:
                        break
                    subs.append(sub)
                else:
                    plan = ("bottom", a, subs)
                    break
        self.memo[key] = plan
        return plan

    def build(self, plan, allowed, inst):
        if plan[0] == "leaf":
            return self.select(self.parts[plan[1]], allowed, True, inst)
        _, a, subs = plan
        iid = f"{a}_{next(_inst_ids)}"
        prems = [self.build(sub, {**allowed, a: i}, {**inst, a: iid}) for i, sub in enumerate(subs)]
        seq = prems[0].conclusion
        return Node(Hypersequent(seq.seqs), self.apps[a].bottom, prems, {}, (iid, "bottom"), tag=a)


def attach_and_split(partials, calc, order=None, limit=200000):
    """LJ + 2-system derivation of the common end sequent of `partials`.

    Applications are taken in ascending `order` (application id -> index); every
    bottom rule serves the top rules of a single application."""
    a = _Attacher(partials, calc, order or {}, limit)
    plan = a.solve({})
    if plan is None:
        raise MixedUnresolvable("no placement of bottom rules separates the applications")
    return a.build(plan, {}, {})


def translate_h2s(d, calc, check=True):
    """LJ + 2-system derivation of the end sequent of the HLJ + rules derivation d."""
    rep = check_hyp(d, calc)
    if not rep.ok:
        raise InvalidInput(f"input is not a correct derivation:\n{rep}")
    if not d.conclusion.is_sequent():
        raise InvalidInput("the end hypersequent must be a sequent")
    s = structure_ew(reduce_ec(d, calc), calc)
    order = {n.id: i for i, n in enumerate(nodes(s))}
    scalc = sys_calculus(calc)
    out = attach_and_split(partial_derivations(s, calc), scalc, order)
    if check:
        rep = check_sys(out, scalc)
        assert rep.ok, f"translation produced an incorrect derivation:\n{rep}"
        assert out.conclusion == d.conclusion
    return out
