"""Bounded backward proof search in HLJ + hypersequent rules, and random derivations."""
from __future__ import annotations

from dataclasses import dataclass

from .construct import ew_to, iw_to, seq_node
from .generate import random_derivation as _random
from .kernel import Node, check_hyp
from .schemas import instantiate, match_active, rule_vars, sequent_pattern_vars
from .syntax import And, Bottom, Hypersequent, Imp, Or, Sequent, fmt


@dataclass
class SearchConfig:
    max_depth: int = 8
    max_components: int = 3
    allow_cut: bool = False
    rule_order: tuple = ()       # non-invertible rules tried first, in this order
    max_nodes: int = 2_000_000

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.allow_cut:
            raise ValueError("proof search with cut is not supported")


@dataclass
class SearchResult:
    derivation: Node | None
    status: str                  # proved | refuted | depth-exceeded
    explored: int = 0

    @property
    def proved(self):
        return self.derivation is not None


def _key(seqs):
    return tuple(sorted((tuple(sorted(fmt(f) for f in s.ant)), fmt(s.succ) if s.succ else "")
                        for s in seqs))


def _drop(ant, f):
    ant = list(ant)
    ant.remove(f)
    return ant


class _Search:
    def __init__(self, calc, cfg):
        self.calc, self.cfg = calc, cfg
        self.explored = 0
        self.cut_off = False
        self.failed = {}         # goal key -> largest depth budget that failed
        order = list(cfg.rule_order)
        self.hyp_rules = sorted(calc.hyp_rules.values(),
                                key=lambda r: order.index(r.name) if r.name in order else len(order))

    def close(self, seqs):
        for i, s in enumerate(seqs):
            if s.succ is not None and s.succ in s.ant:
                d = seq_node(Sequent((s.succ,), s.succ), "ax")
            elif any(isinstance(f, Bottom) for f in s.ant):
                d = seq_node(Sequent((next(f for f in s.ant if isinstance(f, Bottom)),), s.succ), "bot-ax")
            else:
                continue
            return ew_to(iw_to(d, s), Hypersequent(seqs))
        return None

    def invertible(self, seqs):
        """(rule, list of premiss hypersequents) for the first invertible step, or None."""
        for i, s in enumerate(seqs):
            rest = seqs[:i] + seqs[i + 1:]
            for f in s.ant:
                if isinstance(f, And):
                    return "∧l", [rest + [Sequent(_drop(s.ant, f) + [f.left, f.right], s.succ)]]
                if isinstance(f, Or):
                    a = _drop(s.ant, f)
                    return "∨l", [rest + [Sequent(a + [f.left], s.succ)], rest + [Sequent(a + [f.right], s.succ)]]
            if isinstance(s.succ, And):
                return "∧r", [rest + [Sequent(s.ant, s.succ.left)], rest + [Sequent(s.ant, s.succ.right)]]
            if isinstance(s.succ, Imp):
                return "→r", [rest + [Sequent(tuple(s.ant) + (s.succ.left,), s.succ.right)]]
        return None

    def steps(self, seqs):
        """Non-invertible backward steps: (rule, premisses, subst, wrap)."""
        out = []
        for i, s in enumerate(seqs):
            rest = seqs[:i] + seqs[i + 1:]
            if isinstance(s.succ, Or):
                for side in (s.succ.left, s.succ.right):
                    out.append(("∨r", [rest + [Sequent(s.ant, side)]], {}, None))
            for f in dict.fromkeys(s.ant):
                if not isinstance(f, Imp):
                    continue
                a = _drop(s.ant, f)
                out.append(("→l", [rest + [Sequent(a, f.left)], rest + [Sequent(a + [f.right], s.succ)]], {}, None))
                # keep a copy of the implication: (IC) below the step
                a2 = list(s.ant)
                out.append(("→l", [rest + [Sequent(a2, f.left)], rest + [Sequent(a2 + [f.right], s.succ)]], {},
                            ("IC", rest, s, f)))
        goal = Hypersequent(seqs)
        for r in self.hyp_rules:
            free = set(rule_vars(r)) - {v for c in r.conclusion for v in sequent_pattern_vars(c)}
            if free:
                continue
            for sub, _ in match_active(r, goal):
                prems, _ = instantiate(r, sub)
                out.append((r.name, [list(p.seqs) for p in prems], sub, None))
        if len(seqs) < self.cfg.max_components:
            for s in dict.fromkeys(seqs):
                out.append(("EC", [seqs + [s]], {}, None))
        return out

    def search(self, seqs, depth, path):
        self.explored += 1
        if self.explored > self.cfg.max_nodes:
            self.cut_off = True
            return None
        closed = self.close(seqs)
        if closed is not None:
            return closed
        key = _key(seqs)
        if key in path:
            return None
        if depth == 0:
            self.cut_off = True
            return None
        if self.failed.get(key, -1) >= depth:
            self.cut_off = True
            return None
        path = path | {key}
        inv = self.invertible(seqs)
        options = [(inv[0], inv[1], {}, None)] if inv else self.steps(seqs)
        for rule, prems, sub, wrap in options:
            subs = []
            for p in prems:
                d = self.search(p, depth - 1, path)
                if d is None:
                    break
                subs.append(d)
            else:
                return self.build(seqs, rule, prems, subs, sub, wrap)
        self.failed[key] = max(self.failed.get(key, -1), depth)
        return None

    def build(self, seqs, rule, prems, subs, sub, wrap):
        subst = {k: v for k, v in sub.items() if k != "G"}
        if wrap is None:
            return Node(Hypersequent(seqs), rule, subs, subst)
        _, rest, s, f = wrap
        wide = Sequent(tuple(s.ant) + (f,), s.succ)
        mid = Node(Hypersequent(rest + [wide]), rule, subs, subst)
        return Node(Hypersequent(seqs), "IC", [mid])


def prove(goal, calc, cfg=None):
    """Backward search for a derivation of `goal` with at most cfg.max_depth rule layers."""
    cfg = cfg or SearchConfig()
    if isinstance(goal, Sequent):
        goal = Hypersequent([goal])
    s = _Search(calc, cfg)
    d = s.search(list(goal.seqs), cfg.max_depth, frozenset())
    if d is not None:
        rep = check_hyp(d, calc)
        assert rep.ok, f"search produced an incorrect derivation:\n{rep}"
        return SearchResult(d, "proved", s.explored)
    return SearchResult(None, "depth-exceeded" if s.cut_off else "refuted", s.explored)


def random_derivation(calc, cfg=None, seed=0):
    """Deterministic random derivation; LJ calculi yield LJ + 2-system derivations."""
    cfg = cfg or SearchConfig(max_depth=4)
    mode = "sys" if calc.base == "LJ" else "hyp"
    return _random(calc, seed, mode=mode, size=3 * cfg.max_depth, max_components=cfg.max_components)
