"""Small builders for structural-rule chains and tree positions."""
from __future__ import annotations

from collections import Counter

from .kernel import Node, nodes
from .report import HypsysError
from .syntax import Hypersequent, Sequent, msub


def seq_node(seq, rule, premisses=(), subst=None, sys=None, tag=None):
    return Node(Hypersequent([seq]), rule, list(premisses), dict(subst or {}), sys, tag=tag)


def iw_to(d, target):
    """Extend sequent derivation `d` by (IW) steps until it concludes `target`."""
    cur = d.conclusion.seqs[0]
    extra = msub(target.ant, cur.ant)
    if extra is None or cur.succ != target.succ:
        raise HypsysError(f"cannot weaken {cur} to {target}")
    for f in extra:
        cur = Sequent(cur.ant + (f,), cur.succ)
        d = seq_node(cur, "IW", [d])
    return d


def ic_to(d, target):
    """Contract duplicated antecedent formulas of `d` down to `target`."""
    cur = d.conclusion.seqs[0]
    extra = msub(cur.ant, target.ant)
    if extra is None or cur.succ != target.succ:
        raise HypsysError(f"cannot contract {cur} to {target}")
    for f in extra:
        ant = list(cur.ant)
        ant.remove(f)
        if f not in ant:
            raise HypsysError(f"{f} is not duplicated in {cur}")
        cur = Sequent(tuple(ant), cur.succ)
        d = seq_node(cur, "IC", [d])
    return d


def ew_add(d, seqs):
    """Add components `seqs` to the end of d's conclusion by (EW)."""
    for s in seqs:
        d = Node(Hypersequent(d.conclusion.seqs + (s,)), "EW", [d])
    return d


def ew_to(d, target):
    extra = msub(target.seqs, d.conclusion.seqs)
    if extra is None:
        raise HypsysError(f"cannot weaken {d.conclusion} to {target}")
    return ew_add(d, extra)


def ec_to(d, target):
    """Contract duplicated components of d's conclusion down to the multiset `target`."""
    have, want = Counter(d.conclusion.seqs), Counter(target.seqs)
    if set(have) != set(want) or any(have[s] < n for s, n in want.items()):
        raise HypsysError(f"cannot contract {d.conclusion} to {target}")
    seqs = list(d.conclusion.seqs)
    for s, n in have.items():
        for _ in range(n - want[s]):
            i = len(seqs) - 1 - seqs[::-1].index(s)
            seqs.pop(i)
            d = Node(Hypersequent(seqs), "EC", [d])
    return d


def replace_seq(h, pos, seq):
    seqs = list(h.seqs)
    seqs[pos] = seq
    return Hypersequent(seqs)


# -- positions in a tree ----------------------------------------------------------

def paths(d):
    """node id -> tuple of premiss indices leading from the root to the node."""
    out = {d.id: ()}
    for n in nodes(d):
        for i, p in enumerate(n.premisses):
            out[p.id] = out[n.id] + (i,)
    return out


def above(path_a, path_b):
    """Is the node at path_a strictly above the node at path_b?"""
    return len(path_a) > len(path_b) and path_a[:len(path_b)] == path_b


def replace_node(root, old, new):
    """Put `new` where `old` sits in `root`; returns the new root."""
    if root is old:
        return new
    for n in nodes(root):
        for i, p in enumerate(n.premisses):
            if p is old:
                n.premisses[i] = new
                return root
    raise HypsysError(f"node {old.id} not found")
