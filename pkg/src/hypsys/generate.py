"""Random derivations for testing: HLJ + rules (hyp mode) and LJ + 2-systems (sys mode)."""
from __future__ import annotations

import random
from collections import Counter

from .construct import ec_to, ew_add, iw_to, seq_node
from .kernel import Node, copy_tree, nodes
from .schemas import FORMULA, MULTISET, SUCCEDENT, instantiate_pattern
from .syntax import BOT, And, Atom, Hypersequent, Imp, Or, Sequent, msub

ATOMS = [Atom(x) for x in ("p", "q", "r", "s")]


def _union(xs, ys):
    """Multiset union (max of multiplicities)."""
    c = Counter(xs) | Counter(ys)
    return tuple(c.elements())


class _Gen:
    def __init__(self, calc, rng, max_components=3):
        self.calc, self.rng = calc, rng
        self.max_components = max_components
        self.insts = 0

    def atom(self):
        return self.rng.choice(ATOMS)

    def formula(self, depth=1):
        if depth <= 0 or self.rng.random() < 0.5:
            return self.atom()
        op = self.rng.choice((And, Or, Imp))
        return op(self.formula(depth - 1), self.formula(depth - 1))

    # -- single-component steps -------------------------------------------------------

    def leaf_seq(self):
        if self.rng.random() < 0.15:
            return Sequent((BOT,), self.atom() if self.rng.random() < 0.7 else None), "bot-ax"
        a = self.atom() if self.rng.random() < 0.8 else self.formula(1)
        return Sequent((a,), a), "ax"

    def one_step(self, s):
        """A random one-premiss logical rule: (new sequent, rule) or None."""
        r = self.rng.random()
        ant = list(s.ant)
        if r < 0.3 and s.succ is not None and ant:
            a = self.rng.choice(ant)
            ant.remove(a)
            return Sequent(ant, Imp(a, s.succ)), "→r"
        if r < 0.5 and s.succ is not None:
            o = self.formula(1)
            return Sequent(ant, Or(s.succ, o) if self.rng.random() < 0.5 else Or(o, s.succ)), "∨r"
        if r < 0.7:
            return Sequent(ant + [self.formula(1)], s.succ), "IW"
        if r < 0.85 and len(ant) >= 2:
            a, b = self.rng.sample(ant, 2)
            ant.remove(a)
            ant.remove(b)
            return Sequent(ant + [And(a, b)], s.succ), "∧l"
        dup = [f for f, n in Counter(ant).items() if n > 1]
        if dup:
            ant.remove(dup[0])
            return Sequent(ant, s.succ), "IC"
        return None

    # -- hyp mode -------------------------------------------------------------------------

    def hyp_leaf(self):
        s, rule = self.leaf_seq()
        return seq_node(s, rule)

    def hyp(self, budget):
        if budget <= 1:
            return self.hyp_leaf()
        r = self.rng.random()
        rules = list(self.calc.hyp_rules.values())
        if r < 0.25 and rules:
            out = self.hyp_rule(self.rng.choice(rules), budget)
            if out is not None:
                return out
        if r < 0.45:
            d1 = self.hyp(budget // 2)
            # a copy of the same derivation gives duplicated contexts, hence (EC) later
            same = self.rng.random() < 0.3
            out = self.two(d1, copy_tree(d1) if same else self.hyp(budget // 2), same)
            if out is not None:
                return out
        d = self.hyp(budget - 1)
        h = d.conclusion
        r = self.rng.random()
        if r < 0.12 and len(h) < self.max_components:
            return ew_add(d, [Sequent((self.atom(),), self.atom())])
        if r < 0.6:
            c = Counter(h.seqs)
            dup = [s for s, n in c.items() if n > 1]
            if dup:
                return ec_to(d, Hypersequent(_drop(h.seqs, dup[0])))
        i = self.rng.randrange(len(h))
        step = self.one_step(h.seqs[i])
        if step is None:
            return d
        seqs = list(h.seqs)
        seqs[i] = step[0]
        return Node(Hypersequent(seqs), step[1], [d])

    def align(self, ds, actives):
        """Weaken every d (active component at actives[i]) to a common context."""
        ctx = ()
        for d, a in zip(ds, actives):
            rest = [s for j, s in enumerate(d.conclusion.seqs) if j != a]
            ctx = _union(ctx, rest)
        out = []
        for d, a in zip(ds, actives):
            rest = [s for j, s in enumerate(d.conclusion.seqs) if j != a]
            out.append(ew_add(d, msub(ctx, rest)))
        return out, list(ctx)

    def merge(self, c1, c2):
        """Common context of two premisses; sometimes keeps both copies (for later EC)."""
        if self.rng.random() < 0.3:
            return tuple(c1) + tuple(c2)
        return _union(c1, c2)

    def iw_comp(self, d, pos, target):
        """IW the component at `pos` of d up to sequent `target`; the active part moves last."""
        h = d.conclusion
        cur = h.seqs[pos]
        ctx = [s for j, s in enumerate(h.seqs) if j != pos]
        extra = msub(target.ant, cur.ant)
        if extra is None or cur.succ != target.succ:
            return None
        if pos != len(h.seqs) - 1 and not extra:
            return d, ctx
        for f in extra or [None]:
            if f is None:
                break
            cur = Sequent(cur.ant + (f,), cur.succ)
            d = Node(Hypersequent(ctx + [cur]), "IW", [d])
        return d, ctx

    def two(self, d1, d2, concat=False):
        h1, h2 = d1.conclusion, d2.conclusion
        i1, i2 = self.rng.randrange(len(h1)), self.rng.randrange(len(h2))
        s1, s2 = h1.seqs[i1], h2.seqs[i2]
        if s1.succ is None or s2.succ is None:
            return None
        if len(h1) + len(h2) - 1 > self.max_components + 1:
            return None
        if self.rng.random() < 0.5 or not s2.ant:
            gam = _union(s1.ant, s2.ant)
            p1, p2 = Sequent(gam, s1.succ), Sequent(gam, s2.succ)
            conc = Sequent(gam, And(s1.succ, s2.succ))
            rule = "∧r"
        else:
            b = self.rng.choice(s2.ant)
            rest2 = msub(s2.ant, [b])
            gam = _union(s1.ant, rest2)
            p1, p2 = Sequent(gam, s1.succ), Sequent(gam + (b,), s2.succ)
            conc = Sequent(gam + (Imp(s1.succ, b),), s2.succ)
            rule = "→l"
        r1 = self.iw_comp(d1, i1, p1)
        r2 = self.iw_comp(d2, i2, p2)
        if r1 is None or r2 is None:
            return None
        (d1, c1), (d2, c2) = r1, r2
        ctx = list(c1) + list(c2) if concat else list(self.merge(c1, c2))
        if len(ctx) + 1 > self.max_components:
            return None
        e1 = ew_add(d1, msub(ctx, c1)) if msub(ctx, c1) else d1
        e2 = ew_add(d2, msub(ctx, c2)) if msub(ctx, c2) else d2
        return Node(Hypersequent(ctx + [conc]), rule, [e1, e2])

    def close_comp(self, d, pos):
        """Turn the component Γ ⇒ C at pos into Γ, C→⊥ ⇒ (left as the last component)."""
        h = d.conclusion
        s = h.seqs[pos]
        ctx = [x for j, x in enumerate(h.seqs) if j != pos]
        if s.succ is None:
            return d, ctx, s
        gam = s.ant
        right = seq_node(Sequent((BOT,), None), "bot-ax")
        right = iw_to(right, Sequent((BOT,) + gam, None))
        right = ew_add(right, ctx)
        conc = Sequent(gam + (Imp(s.succ, BOT),), None)
        return Node(Hypersequent(ctx + [conc]), "→l", [d, right]), ctx, conc

    def hyp_rule(self, rule, budget):
        k = len(rule.premisses)
        if k == 0:
            return None
        subs = [self.hyp(max(1, budget // (k + 1))) for _ in range(k)]
        s = {}
        # shared variables (those in more than one premiss or not chosen as a context) get random values
        ctxvar = []
        for j, prem in enumerate(rule.premisses):
            p = prem[0]
            mvars = [f.name for f in p.ant if _is_var(f) and rule.metavars.get(f.name) == MULTISET]
            cands = [v for v in mvars if v not in ctxvar and sum(v in _names(q[0]) for q in rule.premisses) == 1]
            ctxvar.append(cands[-1] if cands else None)
        for v, kind in rule.metavars.items():
            if v in ctxvar:
                continue
            if kind == FORMULA:
                s[v] = self.atom()
            elif kind == MULTISET:
                s[v] = (self.atom(),) if self.rng.random() < 0.7 else ()
        ready = []
        for j, (prem, d) in enumerate(zip(rule.premisses, subs)):
            p = prem[0]
            pos = self.rng.randrange(len(d.conclusion))
            if p.succ is None:
                d, ctx, c = self.close_comp(d, pos)
                pos = len(d.conclusion) - 1
            c = d.conclusion.seqs[pos]
            if _is_var(p.succ) and rule.metavars.get(p.succ.name) == SUCCEDENT:
                if p.succ.name in s and s[p.succ.name] != c.succ:
                    return None
                s[p.succ.name] = c.succ
            elif p.succ is not None:
                return None
            if ctxvar[j] is None:
                return None
            s[ctxvar[j]] = c.ant
            ready.append((d, pos))
        for v, kind in rule.metavars.items():
            if v not in s:
                s[v] = self.atom() if kind != MULTISET else ()
        built = []
        for (d, pos), prem in zip(ready, rule.premisses):
            target = instantiate_pattern(prem[0], s, rule.metavars)
            r = self.iw_comp(d, pos, target)
            if r is None:
                return None
            built.append(r)
        ctx = ()
        for d, c in built:
            ctx = self.merge(ctx, c)
        if len(ctx) + rule.k > self.max_components + 1:
            return None
        prems = [ew_add(d, msub(ctx, c)) for d, c in built]
        concl = [instantiate_pattern(c, s, rule.metavars) for c in rule.conclusion]
        return Node(Hypersequent(list(ctx) + concl), rule.name, prems, dict(s))

    def close_hyp(self, d):
        """Bring d down to a single sequent: empty succedents, a common antecedent, then EC."""
        while len(d.conclusion) > 1:
            h = d.conclusion
            for pos in range(len(h)):
                if h.seqs[pos].succ is not None:
                    d, _, _ = self.close_comp(d, pos)
                    break
            else:
                break
        h = d.conclusion
        if len(h) == 1:
            return d
        u = ()
        for s in h.seqs:
            u = _union(u, s.ant)
        target = Sequent(u, None)
        while True:
            h = d.conclusion
            todo = [j for j, s in enumerate(h.seqs) if s != target]
            if not todo:
                break
            r = self.iw_comp(d, todo[0], target)
            d = r[0]
        return ec_to(d, Hypersequent([target]))

    # -- sys mode -------------------------------------------------------------------------

    def sys(self, budget, env):
        if budget <= 1:
            s, rule = self.leaf_seq()
            return self.maybe_top(seq_node(s, rule), env)
        r = self.rng.random()
        if r < 0.2 and self.calc.systems and len(env) < 3:
            return self.maybe_top(self.new_instance(budget, env), env)
        if r < 0.3 and len(env) >= 2:
            out = self.crossed(budget, env)
            if out is not None:
                return out
        if r < 0.35:
            d1, d2 = self.sys(budget // 2, env), self.sys(budget // 2, env)
            out = self.two(d1, d2)
            if out is not None:
                return self.maybe_top(out, env)
        d = self.sys(budget - 1, env)
        step = self.one_step(d.seq)
        if step is not None:
            d = seq_node(step[0], step[1], [d])
        return self.maybe_top(d, env)

    def crossed(self, budget, env):
        """Two branches applying tops of two open instances in opposite orders."""
        f1, f2 = self.rng.sample(env, 2)
        sides = []
        for a, b in ((f1, f2), (f2, f1)):
            d = self.sys(max(1, budget // 3), [])
            for f in (a, b):
                out = self.apply_top(d, *f)
                if out is None:
                    return None
                d = out
            sides.append(d)
        return self.two(*sides)

    def maybe_top(self, d, env, force=None):
        if force is None:
            if not env or self.rng.random() > 0.3:
                return d
            force = self.rng.choice(env)
        out = self.apply_top(d, *force)
        return d if out is None else out

    def apply_top(self, d, inst, system, x, shared):
        t = system.tops[x]
        if len(t.premisses) > 1:
            return None
        s = dict(shared)
        kinds = system.metavars
        if not t.premisses:
            for v, kind in kinds.items():
                if v not in s:
                    s[v] = self.atom() if kind != MULTISET else ((self.atom(),) if self.rng.random() < 0.5 else ())
            c = instantiate_pattern(t.conclusion, s, kinds)
            return seq_node(c, t.name, [], _own(s, t), (inst, "top"))
        p = t.premisses[0]
        if p.succ is None and d.seq.succ is not None:
            d = self.close_comp(d, 0)[0]
        seq = d.seq
        conc_names = _names(t.conclusion)
        ctx = [f.name for f in p.ant if _is_var(f) and kinds.get(f.name) == MULTISET
               and f.name not in s and f.name in conc_names]
        if ctx:
            s[ctx[0]] = seq.ant
        if _is_var(p.succ) and kinds.get(p.succ.name) == SUCCEDENT:
            s[p.succ.name] = seq.succ
        for v, kind in kinds.items():
            if v not in s:
                s[v] = () if kind == MULTISET else self.atom()
        want = instantiate_pattern(p, s, kinds)
        if want.succ != seq.succ or msub(want.ant, seq.ant) is None:
            return None
        d = iw_to(d, want)
        c = instantiate_pattern(t.conclusion, s, kinds)
        return seq_node(c, t.name, [d], _own(s, t), (inst, "top"))

    def new_instance(self, budget, env):
        system = self.rng.choice(list(self.calc.systems.values()))
        self.insts += 1
        inst = f"s{self.insts}"
        shared = {}
        for v in sorted(system.shared):
            kind = system.metavars[v]
            shared[v] = (self.atom(),) if kind == MULTISET else self.atom()
        branches = []
        for x in range(system.k):
            fr = (inst, system, x, shared)
            sub = self.sys(max(1, budget // (system.k + 1)), env + [fr])
            if any(n.sys == (inst, "top") for n in nodes(sub)):
                branches.append(sub)
                continue
            forced = self.apply_top(sub, *fr)
            if forced is None:
                # fall back on a fresh leaf so the branch still uses its top rule
                s, rule = self.leaf_seq()
                forced = self.apply_top(seq_node(s, rule), *fr)
            if forced is None:
                return self.sys(budget - 1, env)
            branches.append(forced)
        closed = [self.close_comp(b, 0)[0] for b in branches]
        u = ()
        for b in closed:
            u = _union(u, b.seq.ant)
        target = Sequent(u, None)
        closed = [iw_to(b, target) for b in closed]
        return seq_node(target, system.bottom, closed, {}, (inst, "bottom"))


def _own(s, top):
    from .schemas import rule_vars
    names = set(rule_vars(top))
    return {k: v for k, v in s.items() if k in names}


def _drop(seqs, s):
    out = list(seqs)
    out.remove(s)
    return out


def _is_var(f):
    from .syntax import Var
    return isinstance(f, Var)


def _names(p):
    from .schemas import sequent_pattern_vars
    return set(sequent_pattern_vars(p))


def random_derivation(calc, seed=0, mode="hyp", size=12, closed=True, max_components=3):
    """A random correct derivation in `calc`; hyp mode ends in a sequent when `closed`."""
    rng = random.Random(seed)
    g = _Gen(calc, rng, max_components)
    if mode == "sys":
        return g.sys(size, [])
    d = g.hyp(size)
    return g.close_hyp(d) if closed else d


def with_contractions(d, seed=0, k=3):
    """Copy of d with k (EW)+(EC) detours inserted at random non-root nodes."""
    rng = random.Random(seed)
    d = copy_tree(d)
    for _ in range(k):
        inner = [(n, i) for n in nodes(d) for i in range(len(n.premisses))]
        if not inner:
            break
        n, i = rng.choice(inner)
        p = n.premisses[i]
        dup = rng.choice(p.conclusion.seqs)
        n.premisses[i] = ec_to(ew_add(p, [dup]), p.conclusion)
    return d


def random_schema(seed=0, max_components=3, max_premisses=2, name=None):
    """A random valid hypersequent rule: at most `max_components` active conclusion
    components and at most `max_premisses` premisses linked to each of them."""
    from .fileio import parse_rule
    rng = random.Random(seed)
    k = rng.randint(1, max_components)
    ms = [f"M{j}" for j in range(4)]
    fs = [f"f{j}" for j in range(2)]
    used = set()

    def side():
        xs = rng.sample(ms + fs, rng.randint(0, 3))
        used.update(xs)
        return ", ".join(xs)

    def succ(i):
        if rng.random() < 0.25:
            return ""
        if rng.random() < 0.5:
            used.add(f"f{i % 2}")
            return f"f{i % 2}"
        used.add(f"P{i}")
        return f"P{i}"

    comps, prems, links = [], [], []
    for i in range(k):
        s = succ(i)
        comps.append(f"active: {side()} => {s}")
        for _ in range(rng.randint(0, max_premisses)):
            ps = s if rng.random() < 0.7 else succ(i + k)
            prems.append(f"premiss: G | {side()} => {ps}")
            links.append(f"link: {len(prems)} -> {i + 1}")
    lines = [f"rule {name or f'r{seed}'}"]
    mv = sorted(v for v in used if v[0] == "M")
    fv = sorted(v for v in used if v[0] == "f")
    sv = sorted(v for v in used if v[0] == "P")
    lines += [f"multiset: {' '.join(mv)}"] * bool(mv) + [f"formula: {' '.join(fv)}"] * bool(fv)
    lines += [f"succedent: {' '.join(sv)}"] * bool(sv)
    lines += prems + ["conclusion: G | " + " | ".join(comps)] + links
    return parse_rule("\n".join(lines) + "\n")


def random_nd_schema(seed=0, k=3, n=2, m=2, name=None):
    """A random rule of the natural-deduction shape: component i is
    S_i1..S_in, Gamma_i => Pi_i and its premisses are D, Gamma_i => Pi_i."""
    from .fileio import parse_rule
    rng = random.Random(seed)
    k = rng.randint(1, k)
    pool = [f"sigma{j}" for j in range(2 * k + 1)]
    used, comps, prems, links = set(), [], [], []
    for i in range(k):
        hyps = rng.sample(pool, rng.randint(0, n))
        used.update(hyps)
        comps.append("active: " + ", ".join(hyps + [f"Gamma{i}"]) + f" => Pi{i}")
        for _ in range(rng.randint(0, m)):
            d = rng.choice(pool)
            used.add(d)
            prems.append(f"premiss: G | {d}, Gamma{i} => Pi{i}")
            links.append(f"link: {len(prems)} -> {i + 1}")
    mv = sorted(used) + [f"Gamma{i}" for i in range(k)]
    lines = [f"rule {name or f'nd{seed}'}", "multiset: " + " ".join(mv),
             "succedent: " + " ".join(f"Pi{i}" for i in range(k))]
    lines += prems + ["conclusion: G | " + " | ".join(comps)] + links
    return parse_rule("\n".join(lines) + "\n")
