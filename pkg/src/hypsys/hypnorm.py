"""Structured form for HLJ derivations: (EC) pushed to the root, (EW) placed where needed."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .construct import ec_to, ew_add
from .kernel import Node, check_hyp, copy_tree, explain, nodes, parents_map, postorder
from .report import IndexOutOfRange, NotAnEC, PreconditionViolated
from .syntax import Hypersequent


def _ms_minus(big, small):
    return list((Counter(big) - Counter(small)).elements())


# -- ec-rank ----------------------------------------------------------------------

def _ranks(d):
    """node id -> number of non-(EC) rule applications strictly below the node."""
    out = {d.id: 0}
    for n in nodes(d):
        below = out[n.id] + (n.rule != "EC")
        for p in n.premisses:
            out[p.id] = below
    return out


def ec_rank(d, node):
    n = next((x for x in nodes(d) if x.id == node), None)
    if n is None or n.rule != "EC":
        raise NotAnEC(f"{node} is not an (EC) application")
    return _ranks(d)[node]


def ec_measure(d):
    """(highest ec-rank, number of (EC) applications with that rank)."""
    ranks = _ranks(d)
    rs = [ranks[n.id] for n in nodes(d) if n.rule == "EC"]
    if not rs:
        return (0, 0)
    mu = max(rs)
    return (mu, rs.count(mu))


# -- the L_d construction ---------------------------------------------------------

@dataclass
class LdIndex:
    """Members G | (H)^c | (C_1)^x_1 | ... | (C_n)^x_n of L_d for one application of `rule`."""
    rule: str
    G: list
    H: list
    C: list
    c: int = 0
    d: int = 0
    e: int = 0
    subst: dict = field(default_factory=dict)

    def member(self, xs, copies):
        seqs = list(self.G) + list(self.H) * copies
        for ci, x in zip(self.C, xs):
            seqs += [ci] * x
        return Hypersequent(seqs)

    def vectors(self, total):
        n = len(self.C)
        return [xs for xs in itertools.product(range(total + 1), repeat=n) if sum(xs) == total]


def derive_Ld(idx, targets, sources=None):
    """Derive members of L_(d-e) (given by their x-vectors) from members of L_d with (r) only.

    `sources` maps x-vectors of L_d to derivations; missing ones become open leaves."""
    if not 0 <= idx.e <= idx.d:
        raise IndexOutOfRange(f"e={idx.e} must lie between 0 and d={idx.d}")
    want = idx.d - idx.e
    for xs in targets:
        if len(xs) != len(idx.C) or sum(xs) != want or min(xs, default=0) < 0:
            raise IndexOutOfRange(f"{xs} is not the index of a member of L_{want}")
    sources = sources or {}
    memo = {}

    def build(xs, level):
        # level = number of (r) layers still to apply
        key = (xs, level)
        if key in memo:
            return copy_tree(memo[key])
        copies = idx.c + level
        if level == 0:
            src = sources.get(xs)
            out = copy_tree(src) if src is not None else Node(idx.member(xs, copies), "open")
        else:
            prems = [build(tuple(x + (j == i) for j, x in enumerate(xs)), level - 1)
                     for i in range(len(idx.C))]
            out = Node(idx.member(xs, copies), idx.rule, prems, dict(idx.subst))
        memo[key] = out
        return out

    return {tuple(xs): build(tuple(xs), idx.e) for xs in targets}


# -- (EC) reduction ---------------------------------------------------------------

def _queue_top(n):
    while n.rule == "EC":
        n = n.premisses[0]
    return n


def _pick_queue(d):
    """Lowest (EC) of a maximal-rank queue (uppermost-leftmost) and the rule below it."""
    ranks = _ranks(d)
    par = parents_map(d)
    ecs = [n for n in nodes(d) if n.rule == "EC"]
    if not ecs:
        return None
    mu = max(ranks[n.id] for n in ecs)
    if mu == 0:
        return None
    top = next(n for n in ecs if ranks[n.id] == mu and n.premisses[0].rule != "EC")
    low = top
    while par[low.id] is not None and par[low.id].rule == "EC":
        low = par[low.id]
    return low, par[low.id]


def _commute_one(r, calc):
    """(r) has one premiss, inferred by a queue of (EC): apply (r) above the queue."""
    prem = r.premisses[0]
    top = _queue_top(prem)
    w = explain(r, calc)
    if r.rule == "EW":
        new = ew_add(copy_tree(top), [r.conclusion.seqs[w.active[0]]])
        return ec_to(new, r.conclusion)
    C = prem.conclusion.seqs[w.prem_active[0][0]]
    H = [r.conclusion.seqs[a] for a in w.active]
    G = _ms_minus(prem.conclusion.seqs, [C])
    m = list(top.conclusion.seqs).count(C) - G.count(C)
    new = copy_tree(top)
    for _ in range(m):
        seqs = list(new.conclusion.seqs)
        seqs.remove(C)
        new = Node(Hypersequent(seqs + H), r.rule, [new], dict(r.subst))
    return ec_to(new, r.conclusion)


def _commute_many(r, calc):
    """(r) has several premisses, some inferred by (EC) queues: rebuild with derive_Ld."""
    w = explain(r, calc)
    H = [r.conclusion.seqs[a] for a in w.active]
    G = _ms_minus(r.conclusion.seqs, H)
    tops = [_queue_top(p) for p in r.premisses]
    C = [p.conclusion.seqs[pa[0]] for p, pa in zip(r.premisses, w.prem_active)]
    ms, extra = [], []
    for t, ci in zip(tops, C):
        seqs = list(t.conclusion.seqs)
        m = seqs.count(ci) - G.count(ci)
        ms.append(m)
        extra += _ms_minus(_ms_minus(seqs, G), [ci] * m)
    q = sum(m - 1 for m in ms) + 1
    idx = LdIndex(r.rule, G + extra, H, C, 0, q, q, dict(r.subst))
    sources = {}
    for xs in idx.vectors(q):
        i = next(i for i, (x, m) in enumerate(zip(xs, ms)) if x >= m)
        target = idx.member(xs, 0)
        missing = _ms_minus(target.seqs, tops[i].conclusion.seqs)
        sources[xs] = ew_add(copy_tree(tops[i]), missing)
    frag = derive_Ld(idx, [(0,) * len(C)], sources)[(0,) * len(C)]
    return ec_to(frag, r.conclusion)


def _replace(d, old, new):
    if d is old:
        return new
    for n in nodes(d):
        for i, p in enumerate(n.premisses):
            if p is old:
                n.premisses[i] = new
                return d
    raise AssertionError("node not found")


def reduce_ec(d, calc, trace=None):
    """Equivalent derivation whose (EC) applications all have ec-rank 0."""
    d = copy_tree(d, fresh=False)
    m = ec_measure(d)
    while True:
        found = _pick_queue(d)
        if found is None:
            return d
        _, r = found
        new = _commute_one(r, calc) if len(r.premisses) == 1 else _commute_many(r, calc)
        d = _replace(d, r, new)
        m2 = ec_measure(d)
        if trace is not None:
            trace.append((m, m2))
        assert m2 < m, f"ec measure did not decrease: {m} -> {m2}"
        m = m2


# -- (EW) restructuring -----------------------------------------------------------

def structure_ew(d, calc):
    """Move every (EW) down to where its component is needed (pre: (EC) only at the root)."""
    if not d.conclusion.is_sequent():
        raise PreconditionViolated("the end hypersequent must be a sequent")
    par = parents_map(d)
    for n in nodes(d):
        if n.rule == "EC" and par[n.id] is not None and par[n.id].rule != "EC":
            raise PreconditionViolated("(EC) applications must form a queue at the root (run reduce_ec)")
    out = {}
    for n in postorder(d):
        out[n.id] = _rebuild(n, [out[p.id] for p in n.premisses], calc)
    node, present = out[d.id]
    assert len(present) == 1, "the end sequent was lost"
    return node


def _rebuild(n, prems, calc):
    """(derivation, conclusion positions of n it derives) for a weakening-free rebuild."""
    if not n.premisses:
        return copy_tree(n, fresh=False), list(range(len(n.conclusion.seqs)))
    w = explain(n, calc)
    assert not isinstance(w, str), w

    def mapped(i, present):
        back = {v: k for k, v in w.ctx[i].items()}
        return sorted(back[p] for p in present if p in back)

    if n.rule == "EW":
        return prems[0][0], mapped(0, prems[0][1])
    if n.rule == "EC":
        node, present = prems[0]
        pa = w.prem_active[0]
        kept = [p for p in pa if p in present]
        ctx = mapped(0, present)
        if len(kept) == 2:
            seqs = [n.conclusion.seqs[i] for i in ctx] + [n.conclusion.seqs[w.active[0]]]
            return Node(Hypersequent(seqs), "EC", [node], tag=n.tag), sorted(ctx + w.active)
        return node, sorted(ctx + (w.active if kept else []))
    for i, (node, present) in enumerate(prems):
        if any(a not in present for a in w.prem_active[i]):
            # an active premiss component only comes from (EW): weaken instead
            return node, mapped(i, present)
    ctxs = [mapped(i, present) for i, (_, present) in enumerate(prems)]
    union = sorted(set().union(*ctxs))
    new_prems = []
    for (node, _), ctx in zip(prems, ctxs):
        missing = [n.conclusion.seqs[i] for i in union if i not in ctx]
        new_prems.append(ew_add(node, missing))
    seqs = [n.conclusion.seqs[i] for i in union] + [n.conclusion.seqs[a] for a in w.active]
    node = Node(Hypersequent(seqs), n.rule, new_prems, dict(n.subst), n.sys, n.id, n.tag)
    return node, sorted(union + list(w.active))


def is_structured_form(d, calc=None):
    """(structured?, H_D) where H_D is the premiss of the uppermost (EC), or the root conclusion."""
    par = parents_map(d)
    ok = True
    hat = d
    while hat.rule == "EC":
        hat = hat.premisses[0]
    for n in nodes(hat):
        if n.rule == "EC":
            ok = False
        if n.rule != "EW":
            continue
        below = par[n.id]
        while below is not None and below.rule == "EW":
            below = par[below.id]
        if below is None or len(below.premisses) < 2:
            ok = False
    if ok and calc is not None:
        ok = _ew_blocks_ok(hat, calc, par)
    return ok, hat.conclusion


def _ew_blocks_ok(d, calc, par):
    for n in nodes(d):
        if len(n.premisses) < 2 or all(p.rule != "EW" for p in n.premisses):
            continue
        w = explain(n, calc)
        if isinstance(w, str):
            return False
        covered = set()
        for i, p in enumerate(n.premisses):
            # follow context and active positions up through the (EW) queue above premiss i
            pos = dict(w.ctx[i])
            act = list(w.prem_active[i])
            q = p
            while q.rule == "EW":
                wq = explain(q, calc)
                if wq.active[0] in act:
                    return False
                pos = {k: wq.ctx[0][v] for k, v in pos.items() if v in wq.ctx[0]}
                act = [wq.ctx[0][v] for v in act]
                q = q.premisses[0]
            covered |= set(pos)
        if set(w.ctx[0]) - covered:
            return False
    return True


def normalize_hyp(d, calc):
    """reduce_ec followed by structure_ew, checked."""
    rep = check_hyp(d, calc)
    if not rep.ok:
        raise PreconditionViolated(f"input is not a correct derivation:\n{rep}")
    return structure_ew(reduce_ec(d, calc), calc)
