"""Translate LJ + 2-system derivations into HLJ + hypersequent-rule derivations.

The translation marks the LJ derivation bottom-up.  Every marked node is a
component ("label") of one or more hypersequents in a pool; one-premiss rules
act on the labelled component, two-premiss rules join hypersequents whose
contexts are aligned by (EW), all tops of one instance become applications of
the instance's hypersequent rule, and bottoms become (EC) steps.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .construct import above, ew_add, paths
from .kernel import Node, check_hyp, check_sys, copy_tree, instances, nodes, size
from .report import InvalidInput
from .schemas import Calculus, rule_vars
from .syntax import Hypersequent
from .sysnorm import normalize_sys
from .translate import sys_to_hyp


def hyp_calculus(calc):
    """HLJ extended with the hypersequent rule of every 2-system of `calc`."""
    rules = {name: sys_to_hyp(s) for name, s in calc.systems.items()}
    return Calculus("HLJ", rules, name=(calc.name or "LJ") + ":hyp")


@dataclass
class _Elem:
    d: Node
    labels: list                 # LJ node id of each conclusion component
    combo: dict = field(default_factory=dict)   # instance -> tuple of frozensets of top ids


def _merge_combos(elems):
    merged = {}
    for e in elems:
        for inst, sets in e.combo.items():
            old = merged.get(inst)
            merged[inst] = tuple(sets) if old is None else tuple(a | b for a, b in zip(old, sets))
    return merged


def combination_plan(d, calc, inst):
    """Tuples of top ids (one per top index) in the order the rule is applied."""
    order = {n.id: i for i, n in enumerate(nodes(d))}
    e = instances(d, calc)[inst]
    by_index = [[] for _ in range(e["system"].k)]
    for t in e["tops"]:
        by_index[calc.top_rule(t.rule)[1]].append(t)
    for ts in by_index:
        ts.sort(key=lambda t: order[t.id])
    return [tuple(t.id for t in c) for c in itertools.product(*by_index)]


class _Translator:
    def __init__(self, d, calc):
        self.d, self.calc = d, calc
        self.pos = paths(d)
        self.order = {n.id: i for i, n in enumerate(nodes(d))}
        self.by_id = {n.id: n for n in nodes(d)}
        self.at = {self.pos[n.id]: n for n in nodes(d)}
        self.insts = instances(d, calc)
        self.top_inst = {t.id: i for i, e in self.insts.items() for t in e["tops"]}
        self.pool = []

    def seq(self, label):
        return self.by_id[label].seq

    # -- which components may share a hypersequent ---------------------------------

    def coexist(self, a, b):
        """Two marked nodes may be components of one hypersequent only when they
        meet at a bottom rule, from different premisses."""
        pa, pb = self.pos[a], self.pos[b]
        n = 0
        while n < min(len(pa), len(pb)) and pa[n] == pb[n]:
            n += 1
        if n == len(pa) or n == len(pb):
            return False
        return self.calc.bottom_rule(self.at[pa[:n]].rule) is not None

    def valid(self, labels, new=None):
        new = labels if new is None else new
        return all(a == b or self.coexist(a, b) for a in new for b in labels)

    def agree(self, elems, anchors):
        """Do the elements use the same top applications of every instance they share
        (outside the subtrees they are about to be joined from)?"""
        merged, anchor_of = {}, {}
        for e, a in zip(elems, anchors):
            for inst, sets in e.combo.items():
                if inst not in merged:
                    merged[inst], anchor_of[inst] = list(sets), a
                    continue
                for x, s in enumerate(sets):
                    old = merged[inst][x]
                    if old != s and not (all(self.under(t, anchor_of[inst]) for t in old)
                                         and all(self.under(t, a) for t in s)):
                        return False
                    merged[inst][x] = old | s
        return True

    def under(self, t, anchor):
        return anchor is not None and (t == anchor or above(self.pos[t], self.pos[anchor]))

    # -- pool handling ---------------------------------------------------------------

    def take(self, label):
        return [e for e in self.pool if label in e.labels]

    def add(self, elems):
        seen = {frozenset(e.labels) for e in self.pool}
        for e in elems:
            key = frozenset(e.labels)
            if key not in seen:
                seen.add(key)
                self.pool.append(e)

    def join(self, elems, wanted):
        """Context labels of the joined elements and their (EW)-aligned derivations."""
        ctx = []
        for e, w in zip(elems, wanted):
            for lab in e.labels:
                if lab != w and lab not in ctx:
                    ctx.append(lab)
        derivs = []
        for e, w in zip(elems, wanted):
            have = [lab for lab in e.labels if lab != w]
            missing = [lab for lab in ctx if lab not in have]
            derivs.append(ew_add(copy_tree(e.d), [self.seq(lab) for lab in missing]))
        return ctx, derivs

    def dedupe(self, el):
        """Contract components carrying the same label (they are equal sequents)."""
        d, labels = el.d, list(el.labels)
        while len(set(labels)) < len(labels):
            i = next(i for i in range(len(labels)) if labels[i] in labels[:i])
            labels.pop(i)
            seqs = list(d.conclusion.seqs)
            seqs.pop(i)
            d = Node(Hypersequent(seqs), "EC", [d], tag=d.tag)
        el.d, el.labels = d, labels
        return el

    # -- per-rule steps -----------------------------------------------------------

    def leaf(self, n):
        self.pool.append(_Elem(Node(Hypersequent([n.seq]), n.rule, tag=n.id), [n.id]))

    def one(self, n):
        p = n.premisses[0].id
        for e in self.take(p):
            i = e.labels.index(p)
            seqs = list(e.d.conclusion.seqs)
            seqs[i] = n.seq
            e.d = Node(Hypersequent(seqs), n.rule, [e.d], dict(n.subst), tag=n.id)
            e.labels[i] = n.id

    def multi(self, n):
        wanted = [p.id for p in n.premisses]
        groups = [self.take(w) for w in wanted]
        self.pool = [e for e in self.pool if not set(e.labels) & set(wanted)]
        good, fallback = [], []
        for tup in itertools.product(*groups):
            labels = [lab for e, w in zip(tup, wanted) for lab in e.labels if lab != w]
            if len(set(map(id, tup))) < len(tup) or not self.valid(labels + [n.id], [n.id] + labels):
                continue
            (good if self.agree(tup, wanted) else fallback).append(tup)
        covered = {id(e) for tup in good for e in tup}
        tuples = good + [tup for tup in fallback if any(id(e) not in covered for e in tup)]
        assert tuples, f"no hypersequents to join at {n.id}"
        out = []
        for tup in tuples:
            ctx, derivs = self.join(tup, wanted)
            seqs = [self.seq(lab) for lab in ctx] + [n.seq]
            node = Node(Hypersequent(seqs), n.rule, derivs, dict(n.subst), tag=n.id)
            out.append(_Elem(node, ctx + [n.id], _merge_combos(tup)))
        self.add(out)

    def bottom(self, n):
        inst = n.sys[0]
        bids = [p.id for p in n.premisses]
        keep = []
        for e in self.pool:
            if not any(b in e.labels for b in bids):
                keep.append(e)
                continue
            if not all(b in e.labels for b in bids):
                continue
            d, labels = e.d, list(e.labels)
            for b in bids[1:]:
                i = labels.index(b)
                labels.pop(i)
                seqs = list(d.conclusion.seqs)
                seqs.pop(i)
                d = Node(Hypersequent(seqs), "EC", [d], tag=n.id)
            labels[labels.index(bids[0])] = n.id
            e.d, e.labels = d, labels
            e.combo.pop(inst, None)
            keep.append(e)
        self.pool = []
        self.add(keep)
        assert self.take(n.id), f"no hypersequent reaches the bottom {n.id}"

    def tops(self, inst):
        """One rule application per combination of top applications, repeated inside a
        hypersequent until none of its components is a premiss of a top of `inst`."""
        e = self.insts[inst]
        k = e["system"].k
        by_index = [[] for _ in range(k)]
        for t in sorted(e["tops"], key=lambda t: self.order[t.id]):
            by_index[self.calc.top_rule(t.rule)[1]].append(t)
        prem_of = {c.id: (t, x) for x, ts in enumerate(by_index) for t in ts for c in t.premisses}
        work = [el for el in self.pool if set(el.labels) & prem_of.keys()]
        self.pool = [el for el in self.pool if not set(el.labels) & prem_of.keys()]
        sources = {c: [el for el in work if c in el.labels] for c in prem_of}
        queue = [x for combo in itertools.product(*by_index)
                 for x in self.apply_tops(inst, list(combo), None, None, sources)] + work
        seen, out = set(), []
        while queue:
            el = queue.pop(0)
            key = frozenset(el.labels)
            if key in seen:
                continue
            seen.add(key)
            stale = [lab for lab in el.labels if lab in prem_of]
            if not stale:
                out.append(el)
                continue
            c = min(stale, key=lambda lab: self.order[lab])
            t, x = prem_of[c]
            present = set(el.labels)
            options = []
            for y in range(k):
                here = [u for u in by_index[y] if u.id in present]
                options.append([t] if y == x else here[:1] or by_index[y])
            for chosen in itertools.product(*options):
                queue.extend(self.apply_tops(inst, list(chosen), el, c, sources))
        self.add(out)

    def apply_tops(self, inst, chosen, el, c, sources):
        """Every application of the rule to the tops `chosen` (premiss c taken from el)
        whose conclusion keeps the coexistence invariant."""
        e = self.insts[inst]
        system = e["system"]
        wanted = [p.id for t in chosen for p in t.premisses]
        subst = {}
        for t in chosen:
            own = set(rule_vars(system.tops[self.calc.top_rule(t.rule)[1]]))
            subst.update({k: v for k, v in t.subst.items() if k in own})
        used = set(wanted) | ({c} if c else set())
        out = []

        def rec(i, prems):
            if i == len(wanted):
                ctx, derivs = self.join(prems, wanted)
                labels = ctx + [t.id for t in chosen]
                if not self.valid(labels):
                    return
                combo = _merge_combos(prems)
                combo[inst] = tuple(frozenset({t.id}) for t in chosen)
                seqs = [self.seq(lab) for lab in ctx] + [t.seq for t in chosen]
                node = Node(Hypersequent(seqs), system.name, derivs, subst, tag=e["bottom"].id)
                out.append(self.dedupe(_Elem(node, labels, combo)))
                return
            p = wanted[i]
            if p == c:
                rec(i + 1, prems + [el])
                return
            fixed = prems + ([el] if el is not None and all(x is not el for x in prems) else [])
            labels = [lab for x in fixed for lab in x.labels if lab not in used]
            cands = [x for x in sources[p]
                     if self.valid(labels + [lab for lab in x.labels if lab not in used])]
            pref = [x for x in cands if self.agree(fixed + [x], [None] * len(fixed) + [p])]
            for x in pref or cands:
                rec(i + 1, prems + [x])

        rec(0, [])
        return out

    def run(self):
        marked = set()
        for n in nodes(self.d):
            if not n.premisses and n.id not in self.top_inst:
                self.leaf(n)
                marked.add(n.id)
        pending = [n for n in nodes(self.d) if n.id not in marked]
        while self.d.id not in marked:
            ready = [n for n in pending if n.id not in marked and n.id not in self.top_inst
                     and all(p.id in marked for p in n.premisses)]
            if ready:
                n = min(ready, key=lambda n: (-len(self.pos[n.id]), len(n.premisses) > 1, self.order[n.id]))
                if self.calc.bottom_rule(n.rule) is not None:
                    self.bottom(n)
                elif len(n.premisses) == 1:
                    self.one(n)
                else:
                    self.multi(n)
                marked.add(n.id)
                continue
            cands = [i for i, e in self.insts.items()
                     if e["tops"] and not any(t.id in marked for t in e["tops"])
                     and all(c.id in marked for t in e["tops"] for c in t.premisses)]
            assert cands, "translation stalled"
            inst = min(cands, key=lambda i: min(self.order[t.id] for t in self.insts[i]["tops"]))
            self.tops(inst)
            marked |= {t.id for t in self.insts[inst]["tops"]}
        final = [e for e in self.take(self.d.id) if e.labels == [self.d.id]]
        assert final, "translation did not end in a sequent"
        return min(final, key=lambda e: size(e.d)).d


def translate_s2h(d, calc, normalize=True, check=True):
    """HLJ derivation of the end sequent of `d`, with one hypersequent rule per 2-system."""
    report = check_sys(d, calc)
    if not report.ok:
        raise InvalidInput(f"input is not a correct derivation:\n{report}")
    if any(n.rule == "dummy-bottom" for n in nodes(d)):
        raise InvalidInput("dummy-bottom does not belong to LJ + 2-systems")
    if normalize:
        d = normalize_sys(d, calc)
    out = _Translator(d, calc).run()
    if check:
        rep = check_hyp(out, hyp_calculus(calc))
        assert rep.ok, f"translation produced an incorrect derivation:\n{rep}"
    return out
