"""Normal forms for LJ + 2-system derivations: same-path elimination and disentangling."""
from __future__ import annotations

import itertools
from collections import Counter

from .construct import above, ic_to, iw_to, paths, replace_node
from .kernel import Node, copy_tree, explain, instances, match_node, nodes
from .report import PreconditionViolated
from .schemas import SequentPattern, instantiate_pattern
from .syntax import Hypersequent, Sequent, msub

_inst_ids = itertools.count(1)


def fresh_instance(prefix="s"):
    return f"{prefix}~{next(_inst_ids)}"


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _premiss_side(path_top, path_bottom):
    """Index of the premiss of the bottom above which the top lies (or None)."""
    if not above(path_top, path_bottom):
        return None
    return path_top[len(path_bottom)]


# -- same-path violations -----------------------------------------------------------

def same_path_violations(d, calc):
    """(instance, lower top id, upper top id) for tops of one instance on a common path."""
    pos = paths(d)
    out = []
    for inst, e in sorted(instances(d, calc).items()):
        for a in e["tops"]:
            for b in e["tops"]:
                if above(pos[b.id], pos[a.id]):
                    out.append((inst, a.id, b.id))
    return out


def _closest_pair(d, calc):
    pos = paths(d)
    for inst, e in sorted(instances(d, calc).items()):
        for a in sorted(e["tops"], key=lambda t: pos[t.id]):
            ups = [b for b in e["tops"] if above(pos[b.id], pos[a.id])]
            if ups:
                b = min(ups, key=lambda t: len(pos[t.id]))
                return e["system"], a, b, pos
    return None


def _extra_items(top, i, subst, kinds):
    """Instantiated antecedent items of premiss i of `top` that its conclusion lacks."""
    extra = list((Counter(top.premisses[i].ant) - Counter(top.conclusion.ant)).elements())
    return list(instantiate_pattern(SequentPattern(tuple(extra), None), subst, kinds).ant)


def _lift(node, idx, child, X, calc):
    """Rebuild `node` with premiss idx replaced by `child` and X added to its antecedent."""
    c = node.seq
    conc = Hypersequent([Sequent(tuple(X) + c.ant, c.succ)])
    padded = [iw_to(p, Sequent(tuple(X) + p.seq.ant, p.seq.succ)) if j != idx else child
              for j, p in enumerate(node.premisses)]
    plain = [p if j != idx else child for j, p in enumerate(node.premisses)]
    top = calc.top_rule(node.rule)
    for prems in (plain, padded) if len(node.premisses) > 1 else (plain,):
        trial = Node(conc, node.rule, prems, dict(node.subst), node.sys, node.id, node.tag)
        if top is not None:
            system = top[0]
            trial.subst = {k: v for k, v in node.subst.items() if k in system.shared}
            for s in match_node(trial, calc):
                trial.subst = s
                return trial
            continue
        if not isinstance(explain(trial, calc, sequent_mode=True), str):
            return trial
    raise PreconditionViolated(f"cannot add {list(map(str, X))} along the path at {node.id} ({node.rule})")


def eliminate_one(d, calc, system, outer, inner, pos):
    i = pos[inner.id][len(pos[outer.id])]
    t = next(x for x in system.tops if x.name == outer.rule)
    X = _extra_items(t, i, outer.subst, system.metavars)
    if msub(outer.premisses[i].seq.ant, X) is None:
        raise PreconditionViolated("extra items are not in the premiss of the outer top rule")
    ic = inner.seq
    src = inner.premisses[i]
    target = Sequent(tuple(X) + ic.ant, ic.succ)
    if msub(target.ant, src.seq.ant) is None or src.seq.succ != ic.succ:
        raise PreconditionViolated(f"premiss of {inner.id} is not contained in the weakened conclusion")
    new = iw_to(src, target)
    # walk down from the inner top to the premiss of the outer one
    chain = []
    n = outer.premisses[i]
    rel = pos[inner.id][len(pos[outer.id]) + 1:]
    for k in rel:
        chain.append((n, k))
        n = n.premisses[k]
    for node, k in reversed(chain):
        new = _lift(node, k, new, X, calc)
    outer.premisses[i] = ic_to(new, outer.premisses[i].seq)
    return d


def eliminate_same_path(d, calc, trace=None):
    d = copy_tree(d, fresh=False)
    while True:
        found = _closest_pair(d, calc)
        if found is None:
            return d
        system, outer, inner, pos = found
        if trace is not None:
            trace.append((outer.sys[0], outer.id, inner.id))
        d = eliminate_one(d, calc, system, outer, inner, pos)


# -- entanglement ---------------------------------------------------------------------

def _tops_by_inst(d, calc):
    return {k: e for k, e in instances(d, calc).items() if e["bottom"] is not None}


def entangled(e1, e2, pos):
    up = any(above(pos[a.id], pos[b.id]) for a in e1["tops"] for b in e2["tops"])
    down = any(above(pos[b.id], pos[a.id]) for a in e1["tops"] for b in e2["tops"])
    return up and down


def entangled_pairs(d, calc):
    pos = paths(d)
    inst = _tops_by_inst(d, calc)
    keys = sorted(inst)
    return [(a, b) for x, a in enumerate(keys) for b in keys[x + 1:] if entangled(inst[a], inst[b], pos)]


def e_number(d, calc, s, uf=None, _cache=None):
    uf = uf or UnionFind()
    pos = paths(d) if _cache is None else _cache[0]
    inst = _tops_by_inst(d, calc) if _cache is None else _cache[1]
    e = inst[s]
    bpath = pos[e["bottom"].id]
    total = 0
    for j in range(len(e["bottom"].premisses)):
        classes = set()
        for o, eo in inst.items():
            if o == s or not entangled(e, eo, pos):
                continue
            if any(_premiss_side(pos[t.id], bpath) == j for t in eo["tops"]):
                classes.add(uf.find(o))
        total += len(classes)
    return total


def e_reduce(d, calc, s, uf=None):
    """Split instance s around the instances it is entangled with; returns (d, S', S'')."""
    uf = uf or UnionFind()
    pos = paths(d)
    inst = _tops_by_inst(d, calc)
    e = inst[s]
    b = e["bottom"]
    bpath = pos[b.id]
    ents = [o for o in inst if o != s and entangled(e, inst[o], pos)]
    if not ents:
        raise PreconditionViolated(f"instance {s} is not entangled")
    side = None
    for j in range(len(b.premisses)):
        if any(_premiss_side(pos[t.id], bpath) == j for o in ents for t in inst[o]["tops"]):
            side = j
            break
    ent_tops = [t for o in ents for t in inst[o]["tops"] if _premiss_side(pos[t.id], bpath) == side]
    s1, s2 = fresh_instance(s.split("~")[0]), fresh_instance(s.split("~")[0])
    uf.union(s, s1)
    uf.union(s, s2)
    for t in e["tops"]:
        if _premiss_side(pos[t.id], bpath) != side:
            continue
        if any(above(pos[t.id], pos[u.id]) for u in ent_tops):
            t.sys = (s1, "top")
        elif any(above(pos[u.id], pos[t.id]) for u in ent_tops):
            t.sys = (s2, "top")
        else:
            t.sys = (s1, "top")

    def copy_for(sub, label, fresh_others):
        c = copy_tree(sub)
        renamed = {}
        inner = {n.sys[0] for n in nodes(c) if n.sys is not None and n.sys[1] == "bottom"}
        for n in nodes(c):
            if n.sys is None:
                continue
            if n.sys[0] == s:
                n.sys = (label, n.sys[1])
            elif fresh_others and n.sys[0] in inner:
                if n.sys[0] not in renamed:
                    renamed[n.sys[0]] = fresh_instance(n.sys[0].split("~")[0])
                    uf.union(n.sys[0], renamed[n.sys[0]])
                n.sys = (renamed[n.sys[0]], n.sys[1])
        return c

    upper_prems = [b.premisses[side] if j == side else copy_for(p, s1, False)
                   for j, p in enumerate(b.premisses)]
    upper = Node(Hypersequent(b.conclusion.seqs), b.rule, upper_prems, dict(b.subst), (s1, "bottom"), tag=b.tag)
    lower_prems = [upper if j == side else copy_for(p, s2, True) for j, p in enumerate(b.premisses)]
    lower = Node(Hypersequent(b.conclusion.seqs), b.rule, lower_prems, dict(b.subst), (s2, "bottom"),
                 b.id, b.tag)
    return replace_node(d, b, lower), s1, s2


def measure(d, calc, uf=None):
    """(kappa, mu, nu) together with the instance to reduce next (None when disentangled)."""
    uf = uf or UnionFind()
    pos = paths(d)
    inst = _tops_by_inst(d, calc)
    ent = set()
    for a, b in entangled_pairs(d, calc):
        ent |= {a, b}
    if not ent:
        return (0, 0, 0), None
    kappa = len({uf.find(x) for x in ent})
    low = min(ent, key=lambda x: (len(pos[inst[x]["bottom"].id]), pos[inst[x]["bottom"].id]))
    cls = [x for x in ent if uf.find(x) == uf.find(low)]
    nums = {x: e_number(d, calc, x, uf, (pos, inst)) for x in cls}
    mu = max(nums.values())
    best = [x for x in cls if nums[x] == mu]
    nu = len(best)
    pick = max(best, key=lambda x: (len(pos[inst[x]["bottom"].id]),
                                    tuple(-k for k in pos[inst[x]["bottom"].id])))
    return (kappa, mu, nu), pick


def disentangle(d, calc, trace=None, max_steps=10000):
    d = copy_tree(d, fresh=False)
    uf = UnionFind()
    m, pick = measure(d, calc, uf)
    steps = 0
    while pick is not None:
        d, s1, s2 = e_reduce(d, calc, pick, uf)
        m2, pick2 = measure(d, calc, uf)
        if trace is not None:
            trace.append((pick, m, m2))
        assert m2 < m, f"measure did not decrease: {m} -> {m2}"
        m, pick = m2, pick2
        steps += 1
        assert steps < max_steps
    return d


def remark_violations(d, calc):
    """Pairs of instances where neither lies wholly above one premiss of the other's bottom."""
    pos = paths(d)
    inst = _tops_by_inst(d, calc)
    keys = sorted(inst)
    out = []
    for x, a in enumerate(keys):
        for b in keys[x + 1:]:
            ea, eb = inst[a], inst[b]
            ok = False
            for u, v in ((ea, eb), (eb, ea)):
                bp = pos[v["bottom"].id]
                sides = {_premiss_side(pos[t.id], bp) for t in u["tops"]}
                if len(sides) == 1 and None not in sides:
                    ok = True
            nested = any(above(pos[t.id], pos[ea["bottom"].id]) for t in eb["tops"]) or \
                any(above(pos[t.id], pos[eb["bottom"].id]) for t in ea["tops"])
            if nested and not ok and entangled(ea, eb, pos):
                out.append((a, b))
    return out


def remove_redundant(d, calc):
    """Replace the bottom of an instance with an unused top index by that premiss's subtree."""
    d = copy_tree(d, fresh=False)
    changed = True
    while changed:
        changed = False
        pos = paths(d)
        for inst, e in sorted(instances(d, calc).items()):
            b = e["bottom"]
            if b is None:
                continue
            bp = pos[b.id]
            used = {_premiss_side(pos[t.id], bp) for t in e["tops"]}
            for j in range(len(b.premisses)):
                if j not in used:
                    sub = b.premisses[j]
                    for n in nodes(sub):
                        if n.sys is not None and n.sys[0] == inst:
                            n.sys = None
                    d = replace_node(d, b, sub)
                    changed = True
                    break
            if changed:
                break
    return d


def normalize_sys(d, calc):
    """Same-path-free, disentangled and redundancy-free form."""
    d = eliminate_same_path(remove_redundant(d, calc), calc)
    d = disentangle(d, calc)
    return remove_redundant(d, calc)
