"""Text and LaTeX (bussproofs) rendering of formulas, sequents, hypersequents and derivations."""
from __future__ import annotations

from .fileio import _deep, write_derivation
from .kernel import Node
from .natded import NDNode, write_nd
from .syntax import Formula, Hypersequent, Sequent, fmt, latex

_INFER = {1: "UnaryInfC", 2: "BinaryInfC", 3: "TrinaryInfC", 4: "QuaternaryInfC", 5: "QuinaryInfC"}

_RULE_TEX = {"∧l": r"\wedge l", "∧r": r"\wedge r", "∨l": r"\vee l", "∨r": r"\vee r",
             "→l": r"\rightarrow l", "→r": r"\rightarrow r", "andI": r"\wedge I", "andE1": r"\wedge E",
             "andE2": r"\wedge E", "orI1": r"\vee I", "orI2": r"\vee I", "orE": r"\vee E",
             "impI": r"\rightarrow I", "impE": r"\rightarrow E", "botE": r"\bot E", "topI": r"\top I"}


def _rule_tex(name):
    if name in _RULE_TEX:
        return "$" + _RULE_TEX[name] + "$"
    return name.replace("_", r"\_").replace("#", r"\#")


def _tree_tex(root, line_of, label_of, leaf_of=None):
    out = []

    def rec(n):
        if leaf_of is not None and leaf_of(n) is not None:
            out.append(r"\AxiomC{%s}" % leaf_of(n))
            return
        for p in n.premisses:
            rec(p)
        k = len(n.premisses)
        if k == 0:
            out.append(r"\AxiomC{}")
            k = 1
        if k not in _INFER:
            raise ValueError(f"bussproofs supports at most 5 premisses, {n.id} has {k}")
        out.append(r"\RightLabel{\scriptsize %s}" % label_of(n))
        out.append(r"\%s{%s}" % (_INFER[k], line_of(n)))
    _deep(rec, root)
    return "\\begin{prooftree}\n" + "\n".join(out) + "\n\\end{prooftree}\n"


def derivation_latex(d):
    def label(n):
        s = _rule_tex(n.rule)
        if n.sys:
            s += r" ${}^{%s}$" % n.sys[0].replace("_", r"\_")
        return s
    return _tree_tex(d, lambda n: "$" + latex(n.conclusion) + "$", label)


def nd_latex(d):
    def leaf(n):
        if n.rule != "hyp":
            return None
        f = latex(n.formula)
        return "$[%s]^{%s}$" % (f, n.label) if n.label is not None else "$%s$" % f

    def label(n):
        s = _rule_tex(n.rule)
        if n.label is not None:
            s += r" ${}^{%s}$" % n.label
        if n.block is not None or n.links:
            s += r" ${}^{*}$"
        return s
    return _tree_tex(d, lambda n: "$" + latex(n.formula) + "$", label, leaf)


def render(x, format="text"):
    if format not in ("text", "latex"):
        raise ValueError(f"unknown format {format!r}")
    if isinstance(x, Node):
        return write_derivation(x) if format == "text" else derivation_latex(x)
    if isinstance(x, NDNode):
        return write_nd(x) if format == "text" else nd_latex(x)
    if isinstance(x, (Formula, Sequent, Hypersequent)):
        return fmt(x) if format == "text" else latex(x)
    raise TypeError(f"cannot render {type(x).__name__}")
