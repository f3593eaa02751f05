"""Natural deduction: polarity classes, higher-level rules from hypersequent rules, NJ + rules checker.

An upper inference of a higher-level rule carries `block` (1-based) and a `ref` token;
the lower inference carries `links`, the refs of the upper inferences it discharges.
Copies of an upper inference keep its ref.

Derivation lines (children indented below their conclusion)::

    <formula> ; rule=<name> ; label=<l> ; block=<i> ; ref=<r> ; links=<r1>,<r2> ; subst={...}
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .report import CheckReport, UnsupportedShape
from .schemas import MULTISET, SUCCEDENT, Calculus, HypRule
from .syntax import (BOT, TOP, And, Atom, Bottom, Formula, Imp, Or, ParseError, Top, Var, conj, disj,
                     fmt, parse_formula)

# -- polarity classes ----------------------------------------------------------------


@lru_cache(maxsize=None)
def in_P(f, n):
    """f belongs to P_n (atoms and schematic variables count as atomic)."""
    if isinstance(f, (Atom, Var)):
        return True
    if n == 0:
        return False
    if isinstance(f, (Bottom, Top)) or in_N(f, n - 1):
        return True
    if isinstance(f, (And, Or)):
        return in_P(f.left, n) and in_P(f.right, n)
    return False


@lru_cache(maxsize=None)
def in_N(f, n):
    if isinstance(f, (Atom, Var)):
        return True
    if n == 0:
        return False
    if isinstance(f, (Bottom, Top)) or in_P(f, n - 1):
        return True
    if isinstance(f, And):
        return in_N(f.left, n) and in_N(f.right, n)
    if isinstance(f, Imp):
        return in_P(f.left, n) and in_N(f.right, n)
    return False


@dataclass(frozen=True)
class PolarityClass:
    p: int      # least n with the formula in P_n
    n: int      # least n with the formula in N_n

    @property
    def polarity(self):
        return "P" if self.p < self.n else "N" if self.n < self.p else "P/N"

    @property
    def level(self):
        return min(self.p, self.n)

    def in_P(self, k):
        return k >= self.p

    def in_N(self, k):
        return k >= self.n

    def report(self):
        yn = lambda b: "yes" if b else "no"
        lines = [f"least P level: P{self.p}", f"least N level: N{self.n}"]
        lines += [f"in P{k}: {yn(self.in_P(k))}" for k in range(4)]
        return "\n".join(lines)


def classify(f):
    n = 0
    while not in_P(f, n):
        n += 1
    m = 0
    while not in_N(f, m):
        m += 1
    return PolarityClass(n, m)


# -- higher-level rules ----------------------------------------------------------------

@dataclass
class NDBlock:
    hyps: tuple           # sigma names, hypotheses of the upper inference
    discharges: tuple     # delta names; empty means the upper inference concludes bot


@dataclass
class NDRule:
    name: str
    blocks: list
    conclusion: str = "phi"

    @property
    def k(self):
        return len(self.blocks)

    def names(self):
        out = []
        for b in self.blocks:
            for x in b.hyps + b.discharges:
                if x not in out:
                    out.append(x)
        return out


def _mv(x):
    return x.name if isinstance(x, Var) else None


def hr_to_nd(h):
    """Higher-level natural deduction rule of a hypersequent rule of the shape

    G | S11..S1n1, Gamma1 => Pi1 | ... from premisses G | D, Gammai => Pii (D one of the S)."""
    kinds = h.metavars
    if not h.conclusion_ctx or not all(h.premiss_ctx):
        raise UnsupportedShape(f"{h.name}: every component must carry the context G")
    gammas = []
    blocks = []
    for i, comp in enumerate(h.conclusion):
        names = [_mv(f) for f in comp.ant]
        if not names or None in names or any(kinds.get(x) != MULTISET for x in names):
            raise UnsupportedShape(f"{h.name}: component {i + 1} must consist of multiset variables")
        if _mv(comp.succ) is None or kinds.get(_mv(comp.succ)) != SUCCEDENT:
            raise UnsupportedShape(f"{h.name}: component {i + 1} needs a succedent variable")
        gammas.append((names[-1], _mv(comp.succ)))
        blocks.append(NDBlock(tuple(names[:-1]), ()))
    for j, prem in enumerate(h.premisses):
        if len(prem) != 1:
            raise UnsupportedShape(f"{h.name}: premiss {j + 1} must have one active component")
        i = h.link[j]
        gamma, pi = gammas[i]
        p = prem[0]
        names = [_mv(f) for f in p.ant]
        if None in names or _mv(p.succ) != pi or gamma not in names or len(names) != 2:
            raise UnsupportedShape(f"{h.name}: premiss {j + 1} is not D, Gamma => Pi with one D")
        names.remove(gamma)
        d = names[0]
        if kinds.get(d) != MULTISET:
            raise UnsupportedShape(f"{h.name}: premiss {j + 1} has a non-multiset variable {d}")
        blocks[i].discharges += (d,)
    own = [g for g, _ in gammas]
    if len(set(own)) != len(own):
        raise UnsupportedShape(f"{h.name}: components share their context variable")
    for b in blocks:
        if set(b.hyps + b.discharges) & set(own):
            raise UnsupportedShape(f"{h.name}: a context variable occurs in another component")
    return NDRule(h.name, blocks)


def _rule(r):
    return hr_to_nd(r) if isinstance(r, HypRule) else r


def _disjunct(b, s):
    d = disj([s[x] for x in b.discharges])
    if not b.hyps:
        return d
    return Imp(conj([s[x] for x in b.hyps]), d)


def identity_subst(r):
    return {x: Atom(x) for x in r.names()}


def associated_axiom(r, subst=None):
    """Disjunction over the blocks of (conjunction of sigmas -> disjunction of deltas).

    A block without hypotheses contributes just its disjunction of deltas."""
    r = _rule(r)
    s = subst or identity_subst(r)
    return disj([_disjunct(b, s) for b in r.blocks])


# -- derivations ------------------------------------------------------------------------

_node_ids = itertools.count(1)


@dataclass
class NDNode:
    formula: Formula
    rule: str
    premisses: list = field(default_factory=list)
    label: str | None = None
    block: int | None = None
    ref: str | None = None
    links: list = field(default_factory=list)
    subst: dict = field(default_factory=dict)
    id: str = ""

    def __post_init__(self):
        if not self.id:
            self.id = f"d{next(_node_ids)}"

    def __repr__(self):
        return f"NDNode({self.id}, {fmt(self.formula)}, {self.rule})"


def nd_nodes(d):
    stack = [d]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.premisses))


def copy_nd(d):
    return NDNode(d.formula, d.rule, [copy_nd(p) for p in d.premisses], d.label, d.block, d.ref,
                  list(d.links), dict(d.subst))


def hyp(f, label=None):
    return NDNode(f, "hyp", label=label)


def open_assumptions(d):
    return [n.formula for n in nd_nodes(d) if n.rule == "hyp" and n.label is None]


NJ_RULES = {"hyp", "topI", "botE", "andI", "andE1", "andE2", "orI1", "orI2", "orE", "impI", "impE"}


def _nj_ok(n):
    f, ps = n.formula, [p.formula for p in n.premisses]
    match n.rule, ps:
        case "hyp", []:
            return True
        case "topI", []:
            return f == TOP
        case "botE", [Bottom()]:
            return True
        case "andI", [a, b]:
            return f == And(a, b)
        case "andE1", [And(a, _)]:
            return f == a
        case "andE2", [And(_, b)]:
            return f == b
        case "orI1", [a]:
            return isinstance(f, Or) and f.left == a
        case "orI2", [b]:
            return isinstance(f, Or) and f.right == b
        case "orE", [Or(), c1, c2]:
            return c1 == f and c2 == f and n.label is not None
        case "impI", [b]:
            return isinstance(f, Imp) and f.right == b
        case "impE", [Imp(a, b), a2]:
            return a == a2 and f == b
    return False


def _discharged(n, i, s=None):
    """Formulas that premiss i of n may use as [.]^label."""
    if n.rule == "impI":
        return {n.formula.left}
    if n.rule == "orE" and i > 0:
        major = n.premisses[0].formula
        return {major.left if i == 1 else major.right}
    if n.block is not None and s is not None:
        return set(s.get(("delta", i), ()))
    return set()


def _upper_ok(n, r, s, report):
    b = r.blocks[n.block - 1]
    nh = len(b.hyps)
    ps = n.premisses
    if len(ps) < nh:
        report.add(n.id, "upper-arity", f"needs {nh} hypotheses")
        return {}
    for x, p in zip(b.hyps, ps):
        if p.formula != s[x]:
            report.add(n.id, "upper-hypothesis", f"expected {fmt(s[x])}, found {fmt(p.formula)}")
    rest = ps[nh:]
    deltas = [s[x] for x in b.discharges] or [BOT]
    if not rest:
        if len(deltas) != 1 or n.formula != deltas[0]:
            report.add(n.id, "upper-conclusion", "short form needs a single delta as conclusion")
        return {}
    if len(rest) != len(deltas):
        report.add(n.id, "upper-arity", f"needs {len(deltas)} subderivations")
        return {}
    for p in rest:
        if p.formula != n.formula:
            report.add(n.id, "upper-subderivation", f"{fmt(p.formula)} is not {fmt(n.formula)}")
    if n.label is None:
        report.add(n.id, "upper-label", "an upper inference with subderivations needs a label")
    return {("delta", nh + j): {d} for j, d in enumerate(deltas)}


def check_nd(d, calc=None):
    """Check an NJ + higher-level-rule derivation."""
    rules = dict(calc.nd_rules) if calc is not None else {}
    report = CheckReport()
    ids = [n.id for n in nd_nodes(d)]
    if len(set(ids)) != len(ids):
        report.add(None, "ids-unique", "node ids repeat")
    parent = {d.id: None}
    for n in nd_nodes(d):
        for i, p in enumerate(n.premisses):
            parent[p.id] = (n, i)
    binders = {}
    for n in nd_nodes(d):
        if n.rule != "hyp" and n.label is not None:
            if n.label in binders:
                report.add(n.id, "label-unique", f"label {n.label} is bound twice")
            binders[n.label] = n
    # lower inferences: premisses and links
    owner = {}
    for n in nd_nodes(d):
        if n.rule in NJ_RULES or n.block is not None:
            continue
        r = rules.get(n.rule)
        if r is None:
            report.add(n.id, "unknown-rule", n.rule)
            continue
        missing = [x for x in r.names() if x not in n.subst]
        if missing:
            report.add(n.id, "subst", f"no value for {', '.join(missing)}")
            continue
        if len(n.premisses) != r.k or any(p.formula != n.formula for p in n.premisses):
            report.add(n.id, "lower-premisses", f"needs {r.k} derivations of {fmt(n.formula)}")
            continue
        for ref in n.links:
            if ref in owner:
                report.add(n.id, "link-unique", f"{ref} is discharged twice")
            owner[ref] = n
    used = {}
    for n in nd_nodes(d):
        if n.block is None:
            continue
        lower = owner.get(n.ref)
        if lower is None or lower.rule != n.rule:
            report.add(n.id, "undischarged-upper", f"upper inference {n.ref} has no lower inference")
            continue
        # scope: n lies in the subtree of a premiss of `lower`
        m, side = n, None
        while parent.get(m.id) is not None:
            q, i = parent[m.id]
            if q is lower:
                side = i
                break
            m = q
        if side is None:
            report.add(n.id, "upper-scope", f"{n.ref} is not above its lower inference {lower.id}")
            continue
        if not 1 <= n.block <= rules[n.rule].k:
            report.add(n.id, "upper-block", f"no block {n.block}")
            continue
        seen = used.setdefault(lower.id, {})
        if seen.setdefault(side, n.block) != n.block:
            report.add(n.id, "upper-block", "one premiss uses two blocks")
    for lid, sides in used.items():
        blocks = list(sides.values())
        if len(set(blocks)) != len(blocks):
            report.add(lid, "upper-block", "two premisses use the same block")
    # local rule shapes and discharges
    allowed = {}
    for n in nd_nodes(d):
        if n.block is not None:
            lower = owner.get(n.ref)
            if lower is None or n.rule not in rules or not 1 <= n.block <= rules[n.rule].k:
                continue
            allowed[n.id] = _upper_ok(n, rules[n.rule], lower.subst, report)
        elif n.rule in NJ_RULES and not _nj_ok(n):
            report.add(n.id, "nj-rule", f"{n.rule} does not fit {fmt(n.formula)}")
    for n in nd_nodes(d):
        if n.rule != "hyp" or n.label is None:
            continue
        b = binders.get(n.label)
        m, ok = n, False
        while b is not None and parent.get(m.id) is not None:
            q, i = parent[m.id]
            if q is b:
                ok = n.formula in (allowed.get(q.id, {}).get(("delta", i), set()) if q.block is not None
                                   else _discharged(q, i))
                break
            m = q
        if not ok:
            report.add(n.id, "discharge", f"[{fmt(n.formula)}]^{n.label} is not discharged")
    return report


# -- constructions ------------------------------------------------------------------------

def inject(fs, i, d):
    """Derivation of disj(fs) from a derivation d of fs[i] by (orI)."""
    if len(fs) == 1:
        return d
    if i == 0:
        return NDNode(disj(fs), "orI1", [d])
    return NDNode(disj(fs), "orI2", [inject(fs[1:], i - 1, d)])


def project(fs, i, d):
    """Derivation of fs[i] from a derivation d of conj(fs) by (andE)."""
    if len(fs) == 1:
        return d
    if i == 0:
        return NDNode(fs[0], "andE1", [d])
    return project(fs[1:], i - 1, NDNode(conj(fs[1:]), "andE2", [d]))


def derive_axiom(r):
    """Closed NJ + r derivation of the axiom associated to r."""
    r = _rule(r)
    s = identity_subst(r)
    alpha = associated_axiom(r, s)
    disjuncts = [_disjunct(b, s) for b in r.blocks]
    branches, refs = [], []
    for i, b in enumerate(r.blocks):
        l1, l2 = str(2 * i + 1), str(2 * i + 2)
        sig = [s[x] for x in b.hyps]
        dl = [s[x] for x in b.discharges] or [BOT]
        D = disj([s[x] for x in b.discharges])
        prems = [project(sig, j, hyp(conj(sig), l1)) for j in range(len(sig))]
        prems += [inject(dl, j, hyp(dl[j], l2)) for j in range(len(dl))]
        ref = f"u{i + 1}"
        up = NDNode(D, r.name, prems, label=l2, block=i + 1, ref=ref)
        refs.append(ref)
        impl = NDNode(disjuncts[i], "impI", [up], label=l1) if sig else up
        branches.append(inject(disjuncts, i, impl))
    return NDNode(alpha, r.name, branches, links=refs, subst=s)


class _Labels:
    def __init__(self, d):
        self.used = {n.label for n in nd_nodes(d) if n.label is not None}
        self.counter = itertools.count(1)

    def fresh(self):
        while True:
            x = f"e{next(self.counter)}"
            if x not in self.used:
                self.used.add(x)
                return x


def _relabel(d, old, new):
    """Copy of d whose [.]^old hypotheses read [.]^new."""
    return NDNode(d.formula, d.rule, [_relabel(p, old, new) for p in d.premisses],
                  new if d.rule == "hyp" and d.label == old else d.label,
                  d.block, d.ref, list(d.links), dict(d.subst), d.id if d.rule != "hyp" else "")


def _plug(d, label, f, e):
    """Copy of d with every [f]^label hypothesis replaced by a fresh copy of e."""
    if d.rule == "hyp" and d.label == label and d.formula == f:
        return copy_nd(e)
    return NDNode(d.formula, d.rule, [_plug(p, label, f, e) for p in d.premisses], d.label,
                  d.block, d.ref, list(d.links), dict(d.subst), d.id)


def _or_cases(major, deltas, subs, label, labels, goal):
    """(orE) nest concluding goal from a derivation of disj(deltas); subs[j] uses [deltas[j]]^label."""
    if len(deltas) == 1:
        return _plug(subs[0], label, deltas[0], major)
    lab = labels.fresh()
    first = _relabel(subs[0], label, lab)
    rest_f = disj(deltas[1:])
    rest = _or_cases(hyp(rest_f, lab), deltas[1:], subs[1:], label, labels, goal)
    return NDNode(goal, "orE", [major, first, rest], label=lab)


def eliminate_nd_rules(d, calc):
    """NJ derivation of the same formula: every lower inference of a higher-level rule becomes an
    (orE) nest on an instance of the associated axiom, left as an open assumption."""
    labels = _Labels(d)
    rules = calc.nd_rules

    def swap_uppers(n, refs, block_hyp):
        prems = [swap_uppers(p, refs, block_hyp) for p in n.premisses]
        if n.block is None or n.ref not in refs:
            return NDNode(n.formula, n.rule, prems, n.label, n.block, n.ref, list(n.links),
                          dict(n.subst), n.id)
        r, s, hyp_of = block_hyp
        b = r.blocks[n.block - 1]
        sig = prems[:len(b.hyps)]
        subs = prems[len(b.hyps):]
        deltas = [s[x] for x in b.discharges] or [BOT]
        h = hyp_of(n.block)
        e = h if not b.hyps else NDNode(disj(deltas) if b.discharges else BOT, "impE",
                                        [h, _conj_intro(sig)])
        if not subs:
            return e
        return _or_cases(e, deltas, subs, n.label, labels, n.formula)

    def elim(n):
        prems = [elim(p) for p in n.premisses]
        if n.rule in NJ_RULES or n.block is not None:
            return NDNode(n.formula, n.rule, prems, n.label, n.block, n.ref, list(n.links),
                          dict(n.subst), n.id)
        r, s = rules[n.rule], n.subst
        refs = set(n.links)
        disjuncts = [_disjunct(b, s) for b in r.blocks]
        # which premiss serves which block
        by_block, free = {}, []
        for i, p in enumerate(prems):
            bs = {m.block for m in nd_nodes(p) if m.block is not None and m.ref in refs}
            if bs:
                by_block[bs.pop()] = i
            else:
                free.append(i)
        for blk in range(1, r.k + 1):
            if blk not in by_block:
                by_block[blk] = free.pop(0)
        hyp_labels = {}

        def hyp_of(blk):
            return hyp(disjuncts[blk - 1], hyp_labels[blk])

        def cases(major, first):
            # nest over disjuncts[first-1:]
            if first == r.k:
                hyp_labels[first] = major.label
                return swap_uppers(prems[by_block[first]], refs, (r, s, hyp_of))
            lab = labels.fresh()
            hyp_labels[first] = lab
            left = swap_uppers(prems[by_block[first]], refs, (r, s, hyp_of))
            rest = cases(hyp(disj(disjuncts[first:]), lab), first + 1)
            return NDNode(n.formula, "orE", [major, left, rest], label=lab)

        if r.k == 1:
            # the axiom is the single disjunct itself: an open assumption
            hyp_labels[1] = None
            return swap_uppers(prems[0], refs, (r, s, lambda blk: hyp(disjuncts[0])))
        return cases(hyp(associated_axiom(r, s)), 1)

    return elim(d)


def _conj_intro(ds):
    if len(ds) == 1:
        return ds[0]
    return NDNode(And(ds[0].formula, conj([x.formula for x in ds[1:]])), "andI",
                  [ds[0], _conj_intro(ds[1:])])


# -- text format ---------------------------------------------------------------------------

def _fmt_nd_subst(s):
    return "{" + ", ".join(f"{k}={fmt(v)}" for k, v in sorted(s.items())) + "}"


def write_nd(d, header=()):
    from .fileio import _deep
    lines = list(header)

    def rec(n, depth):
        parts = [fmt(n.formula), f"rule={n.rule}"]
        if n.label is not None:
            parts.append(f"label={n.label}")
        if n.block is not None:
            parts.append(f"block={n.block}")
        if n.ref is not None:
            parts.append(f"ref={n.ref}")
        if n.links:
            parts.append("links=" + ",".join(n.links))
        if n.subst:
            parts.append("subst=" + _fmt_nd_subst(n.subst))
        lines.append("  " * depth + " ; ".join(parts))
        for p in n.premisses:
            rec(p, depth + 1)
    _deep(rec, d, 0)
    return "\n".join(lines) + "\n"


def parse_nd(text):
    from .fileio import _lines, _split_top, _wrap, parse_subst, split_header
    text = split_header(text)[1]
    stack, root = [], None
    for no, line in _lines(text):
        indent = len(line) - len(line.lstrip(" "))
        fields = [f.strip() for f in _split_top(line.strip(), ";")]
        try:
            node = NDNode(parse_formula(fields[0]), "?")
            for f in fields[1:]:
                key, _, val = f.partition("=")
                key, val = key.strip(), val.strip()
                if key == "rule":
                    node.rule = val
                elif key == "label":
                    node.label = val
                elif key == "block":
                    node.block = int(val)
                elif key == "ref":
                    node.ref = val
                elif key == "links":
                    node.links = [x.strip() for x in val.split(",") if x.strip()]
                elif key == "subst":
                    node.subst = parse_subst(val)
                elif key == "id":
                    node.id = val
                else:
                    raise ParseError(f"unknown field {key!r}")
        except ParseError as e:
            raise _wrap(e, no) from None
        except ValueError:
            raise ParseError("block must be a number", 0, line=no) from None
        if node.rule == "?":
            raise ParseError("every line needs rule=<name>", 0, line=no)
        while stack and stack[-1][0] >= indent:
            stack.pop()
        if stack:
            stack[-1][1].premisses.append(node)
        elif root is not None:
            raise ParseError("more than one root", 0, line=no)
        else:
            root = node
        stack.append((indent, node))
    if root is None:
        raise ParseError("empty derivation")
    return root


def read_nd_file(path):
    """(derivation, calculus) from a .nd file.

    The header names library rules (`use: lin`) or a file of hypersequent rules (`calculus: x.cal`)."""
    from .fileio import calculus_from_header, split_header
    text = Path(path).read_text()
    headers = split_header(text)[0]
    hyp = calculus_from_header(headers, Path(path).parent) if headers else None
    calc = nd_calculus(*hyp.hyp_rules.values()) if hyp is not None else nd_calculus()
    return parse_nd(text), calc


def nd_calculus(*rules):
    c = Calculus(base="NJ", name="+".join(("NJ",) + tuple(_rule(r).name for r in rules)))
    for r in rules:
        r = _rule(r)
        c.nd_rules[r.name] = r
    return c
