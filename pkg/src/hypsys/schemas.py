"""Rule schemas over metavariables, 2-systems, substitutions and calculi."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .report import CheckReport, IncompleteSubstitution
from .syntax import And, Atom, Bottom, Formula, Hypersequent, Imp, Or, Sequent, Top, Var, fmt, msub

FORMULA, MULTISET, SUCCEDENT = "formula", "multiset", "succedent"
KINDS = (FORMULA, MULTISET, SUCCEDENT)


@dataclass(frozen=True)
class SequentPattern:
    ant: tuple = ()
    succ: Optional[Formula] = None

    def __str__(self):
        return fmt(Sequent(self.ant, self.succ))


@dataclass
class HypRule:
    name: str
    metavars: dict
    premisses: list            # each premiss: list of SequentPattern (valid rules have exactly one)
    conclusion: list           # active conclusion components
    link: list                 # premiss index -> conclusion index (0-based)
    premiss_ctx: list = None   # whether each premiss carries the context G
    conclusion_ctx: bool = True

    def __post_init__(self):
        if self.premiss_ctx is None:
            self.premiss_ctx = [True] * len(self.premisses)

    @property
    def k(self):
        return len(self.conclusion)

    def active_premisses(self):
        return [p[0] for p in self.premisses]

    def group(self, i):
        return [j for j, c in enumerate(self.link) if c == i]


@dataclass
class TopRule:
    name: str
    premisses: list
    conclusion: SequentPattern


@dataclass
class TwoSystem:
    name: str
    metavars: dict
    tops: list
    shared: frozenset = frozenset()
    bottom: str = ""

    def __post_init__(self):
        if not self.bottom:
            self.bottom = self.name + "B"
        self.shared = frozenset(self.shared)

    @property
    def k(self):
        return len(self.tops)


@dataclass
class Calculus:
    base: str = "HLJ"
    hyp_rules: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)
    nd_rules: dict = field(default_factory=dict)
    name: str = ""

    def top_rule(self, rule):
        """(system, index) when `rule` names a top rule, else None."""
        for s in self.systems.values():
            for i, t in enumerate(s.tops):
                if t.name == rule:
                    return s, i
        return None

    def bottom_rule(self, rule):
        for s in self.systems.values():
            if s.bottom == rule:
                return s
        return None

    def names(self):
        out = list(self.hyp_rules) + list(self.nd_rules)
        for s in self.systems.values():
            out += [s.bottom] + [t.name for t in s.tops]
        return out


# -- metavariables in patterns ---------------------------------------------------

def pattern_vars(f):
    match f:
        case Var(name):
            yield name
        case And(a, b) | Or(a, b) | Imp(a, b):
            yield from pattern_vars(a)
            yield from pattern_vars(b)


def sequent_pattern_vars(p):
    out = []
    for f in p.ant:
        out += pattern_vars(f)
    if p.succ is not None:
        out += pattern_vars(p.succ)
    return out


def rule_vars(rule):
    pats = []
    if isinstance(rule, HypRule):
        pats = [c for prem in rule.premisses for c in prem] + list(rule.conclusion)
    elif isinstance(rule, TopRule):
        pats = list(rule.premisses) + [rule.conclusion]
    out = []
    for p in pats:
        for v in sequent_pattern_vars(p):
            if v not in out:
                out.append(v)
    return out


# -- instantiation ------------------------------------------------------------------

def subst_formula(f, s):
    match f:
        case Var(name):
            if name not in s:
                raise IncompleteSubstitution(f"no value for {name}")
            v = s[name]
            if not isinstance(v, Formula):
                raise IncompleteSubstitution(f"{name} is not bound to a formula")
            return v
        case And(a, b):
            return And(subst_formula(a, s), subst_formula(b, s))
        case Or(a, b):
            return Or(subst_formula(a, s), subst_formula(b, s))
        case Imp(a, b):
            return Imp(subst_formula(a, s), subst_formula(b, s))
    return f


def instantiate_pattern(p, s, kinds):
    ant = []
    for f in p.ant:
        if isinstance(f, Var) and kinds.get(f.name) == MULTISET:
            if f.name not in s:
                raise IncompleteSubstitution(f"no value for {f.name}")
            ant.extend(s[f.name])
        else:
            ant.append(subst_formula(f, s))
    succ = p.succ
    if isinstance(succ, Var) and kinds.get(succ.name) == SUCCEDENT:
        if succ.name not in s:
            raise IncompleteSubstitution(f"no value for {succ.name}")
        succ = s[succ.name]
    elif succ is not None:
        succ = subst_formula(succ, s)
    return Sequent(tuple(ant), succ)


def instantiate(rule, s, system=None):
    """Concrete premisses and conclusion of a rule under substitution `s`.

    Hypersequent rules take the context from s["G"] (a tuple of sequents,
    empty by default) and return hypersequents.  Top rules need their
    `system` for metavariable kinds and return sequents.
    """
    if isinstance(rule, TopRule):
        return instantiate_top(system, rule, s)
    kinds = rule.metavars
    g = tuple(s.get("G", ()))
    prems = [Hypersequent(g + tuple(instantiate_pattern(c, s, kinds) for c in prem))
             for prem in rule.premisses]
    concl = Hypersequent(g + tuple(instantiate_pattern(c, s, kinds) for c in rule.conclusion))
    return prems, concl


def instantiate_top(system, top, s):
    kinds = system.metavars
    return ([instantiate_pattern(p, s, kinds) for p in top.premisses],
            instantiate_pattern(top.conclusion, s, kinds))


# -- matching ------------------------------------------------------------------------

def match_formula(pat, f, s, kinds):
    match pat:
        case Var(name):
            if kinds.get(name, FORMULA) != FORMULA:
                return None
            if name in s:
                return s if s[name] == f else None
            return {**s, name: f}
        case Atom() | Bottom() | Top():
            return s if pat == f else None
        case And(a, b) | Or(a, b) | Imp(a, b):
            if type(f) is not type(pat):
                return None
            s = match_formula(a, f.left, s, kinds)
            return None if s is None else match_formula(b, f.right, s, kinds)
    return None


def _splits(items, nvars):
    """All ways to distribute a multiset over `nvars` ordered bins."""
    counts = list(Counter(items).items())

    def rec(i):
        if i == len(counts):
            yield [[] for _ in range(nvars)]
            return
        x, n = counts[i]
        for rest in rec(i + 1):
            for parts in _compositions(n, nvars):
                yield [r + [x] * c for r, c in zip(rest, parts)]
    yield from rec(0)


def _compositions(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def match_sequent(p, seq, s, kinds):
    """Yield every extension of `s` instantiating pattern `p` to `seq`."""
    succ = p.succ
    if succ is None:
        if seq.succ is not None:
            return
    elif isinstance(succ, Var) and kinds.get(succ.name) == SUCCEDENT:
        if succ.name in s:
            if s[succ.name] != seq.succ:
                return
        else:
            s = {**s, succ.name: seq.succ}
    else:
        if seq.succ is None:
            return
        s = match_formula(succ, seq.succ, s, kinds)
        if s is None:
            return
    fpats, mvars = [], []
    for f in p.ant:
        if isinstance(f, Var) and kinds.get(f.name) == MULTISET:
            mvars.append(f.name)
        else:
            fpats.append(f)
    rest = list(seq.ant)
    free = []
    for m in mvars:
        if m in s:
            rest = msub(rest, s[m])
            if rest is None:
                return
        else:
            free.append(m)
    yield from _match_ant(fpats, rest, free, s, kinds)


def _match_ant(fpats, rest, free, s, kinds):
    if fpats:
        seen = set()
        for i, f in enumerate(rest):
            if f in seen:
                continue
            seen.add(f)
            s2 = match_formula(fpats[0], f, s, kinds)
            if s2 is not None:
                yield from _match_ant(fpats[1:], rest[:i] + rest[i + 1:], free, s2, kinds)
        return
    if not free:
        if not rest:
            yield s
        return
    names = list(dict.fromkeys(free))
    mult = [free.count(n) for n in names]
    for parts in _splits(rest, len(names)):
        ok = True
        s2 = dict(s)
        for n, m, part in zip(names, mult, parts):
            if m > 1:
                c = Counter(part)
                if any(v % m for v in c.values()):
                    ok = False
                    break
                part = [x for x, v in c.items() for _ in range(v // m)]
            s2[n] = tuple(part)
        if ok:
            yield s2


def subst_key(s):
    out = []
    for k, v in s.items():
        if k.startswith("__"):
            continue
        if isinstance(v, tuple):
            v = frozenset(Counter(v).items())
        out.append((k, v))
    return frozenset(out)


def match_active(rule, goal, seed=None):
    """Stream (substitution, selected positions) making `rule`'s conclusion equal `goal`."""
    k = len(rule.conclusion)
    seen = set()
    if k > len(goal.seqs):
        return
    for sel in itertools.permutations(range(len(goal.seqs)), k):
        picked = tuple(goal.seqs[i] for i in sel)

        def rec(j, s):
            if j == k:
                yield s
                return
            for s2 in match_sequent(rule.conclusion[j], picked[j], s, rule.metavars):
                yield from rec(j + 1, s2)
        for s in rec(0, dict(seed or {})):
            g = tuple(goal.seqs[i] for i in range(len(goal.seqs)) if i not in sel)
            s = {**s, "G": g}
            key = (subst_key({x: y for x, y in s.items() if x != "G"}), picked, frozenset(Counter(g).items()))
            if key in seen:
                continue
            seen.add(key)
            yield s, sel


def match_top(system, top, seq, seed=None):
    yield from match_sequent(top.conclusion, seq, dict(seed or {}), system.metavars)


# -- validation ----------------------------------------------------------------------

def _check_kinds(report, name, metavars, pats, where):
    for p in pats:
        for f in p.ant:
            for v in pattern_vars(f):
                if v not in metavars:
                    report.add(None, "metavar-kind", f"{name}: undeclared metavariable {v} in {where}")
                elif metavars[v] == SUCCEDENT or (metavars[v] == MULTISET and f != Var(v)):
                    report.add(None, "metavar-kind", f"{name}: {v} used with the wrong kind in {where}")
        if p.succ is not None:
            for v in pattern_vars(p.succ):
                if v not in metavars:
                    report.add(None, "metavar-kind", f"{name}: undeclared metavariable {v} in {where}")
                elif metavars[v] == MULTISET or (metavars[v] == SUCCEDENT and p.succ != Var(v)):
                    report.add(None, "metavar-kind", f"{name}: {v} used with the wrong kind in {where}")


def validate_schema(rule):
    report = CheckReport()
    if not rule.conclusion:
        report.add(None, "conclusion", f"{rule.name}: no active conclusion component")
    if not rule.conclusion_ctx or not all(rule.premiss_ctx):
        report.add(None, "context-sharing", f"{rule.name}: every premiss and the conclusion must carry G")
    for i, prem in enumerate(rule.premisses):
        if len(prem) != 1:
            report.add(None, "one-active", f"{rule.name}: premiss {i + 1} has {len(prem)} active components")
    if len(rule.link) != len(rule.premisses):
        report.add(None, "linkage", f"{rule.name}: linkage must be total on premisses")
    elif any(not 0 <= c < len(rule.conclusion) for c in rule.link):
        report.add(None, "linkage", f"{rule.name}: linkage points outside the conclusion")
    if "G" in rule.metavars:
        report.add(None, "metavar-kind", f"{rule.name}: G is reserved for the context")
    for v, kind in rule.metavars.items():
        if kind not in KINDS:
            report.add(None, "metavar-kind", f"{rule.name}: unknown kind {kind} for {v}")
    _check_kinds(report, rule.name, rule.metavars, [c for p in rule.premisses for c in p], "premisses")
    _check_kinds(report, rule.name, rule.metavars, rule.conclusion, "conclusion")
    return report


def validate_system(system):
    report = CheckReport()
    if not system.tops:
        report.add(None, "arity", f"{system.name}: a 2-system needs at least one top rule")
    names = [t.name for t in system.tops] + [system.bottom]
    if len(set(names)) != len(names):
        report.add(None, "names", f"{system.name}: rule names must be distinct")
    for t in system.tops:
        _check_kinds(report, t.name, system.metavars, list(t.premisses) + [t.conclusion], "top rule")
    used = set()
    for t in system.tops:
        used |= set(rule_vars(t))
    if not system.shared <= used:
        report.add(None, "shared", f"{system.name}: shared metavariables not used by any top rule")
    return report
