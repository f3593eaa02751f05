"""Formulas, sequents and hypersequents: data model, parser and renderer."""
from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional


class ParseError(ValueError):
    def __init__(self, msg, offset=0, line=None):
        self.offset = offset
        self.line = line
        where = f"offset {offset}" if line is None else f"line {line}, offset {offset}"
        super().__init__(f"{msg} ({where})")


class Formula:
    __slots__ = ()

    def __str__(self):
        return fmt(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Var(Formula):
    """Schematic variable inside a rule pattern; its kind lives in the schema."""
    name: str


BOT = Bottom()
TOP = Top()


def neg(f):
    return Imp(f, BOT)


def conj(fs):
    fs = list(fs)
    if not fs:
        return TOP
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(fs):
    fs = list(fs)
    if not fs:
        return BOT
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def subformulas(f):
    yield f
    if isinstance(f, (And, Or, Imp)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def atoms(f):
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def size(f):
    return sum(1 for _ in subformulas(f))


# -- sequents and hypersequents ------------------------------------------------

_ids = itertools.count(1)


def fresh_id(prefix="c"):
    return f"{prefix}{next(_ids)}"


def msub(big, small):
    """Multiset difference big - small, or None when small is not contained."""
    rest = list(big)
    for x in small:
        try:
            rest.remove(x)
        except ValueError:
            return None
    return rest


@dataclass(frozen=True, eq=False)
class Sequent:
    ant: tuple = ()
    succ: Optional[Formula] = None
    _key: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ant", tuple(self.ant))
        object.__setattr__(self, "_key", (frozenset(Counter(self.ant).items()), self.succ))

    def __eq__(self, other):
        return isinstance(other, Sequent) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __str__(self):
        return fmt(self)

    def add(self, *fs):
        return Sequent(tuple(fs) + self.ant, self.succ)


class Hypersequent:
    """Components with ids; equality is multiset equality of the sequents."""
    __slots__ = ("seqs", "ids", "_key")

    def __init__(self, seqs, ids=None):
        self.seqs = tuple(seqs)
        if not self.seqs:
            raise ValueError("a hypersequent needs at least one component")
        if ids is None:
            ids = tuple(fresh_id() for _ in self.seqs)
        self.ids = tuple(ids)
        if len(set(self.ids)) != len(self.ids) or len(self.ids) != len(self.seqs):
            raise ValueError("component ids must be unique")
        self._key = frozenset(Counter(self.seqs).items())

    def __eq__(self, other):
        return isinstance(other, Hypersequent) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __len__(self):
        return len(self.seqs)

    def __iter__(self):
        return iter(self.seqs)

    def __getitem__(self, i):
        return self.seqs[i]

    def __str__(self):
        return fmt(self)

    __repr__ = __str__

    def is_sequent(self):
        return len(self.seqs) == 1

    def items(self):
        return zip(self.ids, self.seqs)


def hyp(*seqs):
    return Hypersequent(seqs)


def hyp_equal(a, b):
    return Counter(a.seqs) == Counter(b.seqs)


# -- text rendering ------------------------------------------------------------

def fmt(x):
    match x:
        case Atom(name) | Var(name):
            return name
        case Bottom():
            return "bot"
        case Top():
            return "top"
        case Imp(a, Bottom()):
            return "~" + fmt(a)
        case And(a, b):
            return f"({fmt(a)} & {fmt(b)})"
        case Or(a, b):
            return f"({fmt(a)} v {fmt(b)})"
        case Imp(a, b):
            return f"({fmt(a)} -> {fmt(b)})"
        case Sequent():
            left = ", ".join(fmt(f) for f in x.ant)
            right = "" if x.succ is None else fmt(x.succ)
            return f"{left} => {right}".strip()
        case Hypersequent():
            return " | ".join(fmt(s) for s in x.seqs)
    raise TypeError(f"cannot render {type(x).__name__}")


_LATEX_OPS = {And: r"\wedge", Or: r"\vee", Imp: r"\rightarrow"}


def latex(x):
    match x:
        case Atom(name) | Var(name):
            return _latex_name(name)
        case Bottom():
            return r"\bot"
        case Top():
            return r"\top"
        case Imp(a, Bottom()):
            return r"\neg " + latex(a)
        case And(a, b) | Or(a, b) | Imp(a, b):
            return f"({latex(a)} {_LATEX_OPS[type(x)]} {latex(b)})"
        case Sequent():
            left = ", ".join(latex(f) for f in x.ant)
            right = "" if x.succ is None else latex(x.succ)
            return f"{left} \\Rightarrow {right}".strip()
        case Hypersequent():
            return r" \mid ".join(latex(s) for s in x.seqs)
    raise TypeError(f"cannot render {type(x).__name__}")


_GREEK = {"phi": r"\varphi", "psi": r"\psi", "theta": r"\theta", "sigma": r"\sigma",
          "delta": r"\delta", "alpha": r"\alpha", "Gamma": r"\Gamma", "Sigma": r"\Sigma",
          "Delta": r"\Delta", "Pi": r"\Pi", "Phi": r"\Phi", "Psi": r"\Psi"}


def _latex_name(name):
    m = re.fullmatch(r"([A-Za-z]+?)(\d*)('*)", name)
    if not m:
        return name.replace("_", r"\_")
    base, idx, primes = m.groups()
    out = _GREEK.get(base, base)
    if idx:
        out += "_{%s}" % idx
    return out + primes


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|(=>)|([A-Za-z_][A-Za-z0-9_]*'*)|([()&~,|]))")
RESERVED = {"bot", "top", "v"}


def _byte_offset(text, i):
    return len(text[:i].encode("utf-8"))


class _Parser:
    def __init__(self, text, metavars=()):
        self.text = text
        self.pos = 0
        self.metavars = set(metavars)

    def error(self, msg, at=None):
        at = self.pos if at is None else at
        raise ParseError(msg, _byte_offset(self.text, at))

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            rest = self.text[self.pos:]
            if rest.strip() == "":
                return None, self.pos
            self.error("unexpected character", self.pos + len(rest) - len(rest.lstrip()))
        return m.group(m.lastindex), m.end()

    def take(self, expected=None):
        tok, end = self.peek()
        if tok is None or (expected is not None and tok != expected):
            self.error(f"expected {expected or 'token'}, found {tok or 'end of input'}")
        self.pos = end
        return tok

    def formula(self):
        tok, end = self.peek()
        if tok is None:
            self.error("expected formula, found end of input")
        if tok == "~":
            self.pos = end
            return Imp(self.formula(), BOT)
        if tok == "(":
            self.pos = end
            left = self.formula()
            op, end = self.peek()
            ctor = {"&": And, "v": Or, "->": Imp}.get(op)
            if ctor is None:
                self.error(f"expected '&', 'v' or '->', found {op or 'end of input'}")
            self.pos = end
            right = self.formula()
            self.take(")")
            return ctor(left, right)
        if tok == "bot":
            self.pos = end
            return BOT
        if tok == "top":
            self.pos = end
            return TOP
        if re.fullmatch(r"[A-Za-z_]\w*'*", tok) and tok not in RESERVED:
            self.pos = end
            return Var(tok) if tok in self.metavars else Atom(tok)
        self.error(f"unexpected token {tok!r}")

    def sequent(self):
        ant = []
        tok, _ = self.peek()
        if tok != "=>":
            ant.append(self.formula())
            while self.peek()[0] == ",":
                self.take(",")
                ant.append(self.formula())
        self.take("=>")
        succ = None
        tok, _ = self.peek()
        if tok is not None and tok != "|":
            succ = self.formula()
        return Sequent(tuple(ant), succ)

    def done(self):
        tok, _ = self.peek()
        if tok is not None:
            self.error(f"trailing input {tok!r}")


def parse_formula(text, metavars=()):
    p = _Parser(text, metavars)
    f = p.formula()
    p.done()
    return f


def parse_sequent(text, metavars=()):
    p = _Parser(text, metavars)
    s = p.sequent()
    p.done()
    return s


def parse_hypersequent(text, metavars=()):
    p = _Parser(text, metavars)
    seqs = [p.sequent()]
    while p.peek()[0] == "|":
        p.take("|")
        seqs.append(p.sequent())
    p.done()
    return Hypersequent(seqs)
