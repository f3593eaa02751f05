import pytest
from hypothesis import given

from hypsys import library
from hypsys.fileio import parse_derivation
from hypsys.kernel import Node
from hypsys.natded import derive_axiom, hr_to_nd, parse_nd
from hypsys.render import render
from hypsys.syntax import parse_formula, parse_hypersequent

from conftest import fixture, formulas


def test_text_is_the_file_format():
    d, c = fixture("linearity_sys.drv")
    assert parse_derivation(render(d), c).conclusion == d.conclusion


def test_latex_derivation():
    d, _ = fixture("linearity_sys.drv")
    tex = render(d, "latex")
    assert tex.startswith("\\begin{prooftree}") and tex.rstrip().endswith("\\end{prooftree}")
    assert "BinaryInfC" in tex and "comB" in tex
    assert tex.count("InfC") == sum(1 for _ in _nodes(d))


def _nodes(d):
    yield d
    for p in d.premisses:
        yield from _nodes(p)


def test_latex_nd():
    d = derive_axiom(hr_to_nd(library.rule("lem")))
    tex = render(d, "latex")
    assert "\\AxiomC{$[\\sigma]^{2}$}" in tex
    assert "\\vee I" in tex
    assert parse_nd(render(d)).formula == d.formula


@given(formulas)
def test_formula_render(f):
    assert parse_formula(render(f)) == f
    assert render(f, "latex")


def test_too_many_premisses():
    leaves = [Node(parse_hypersequent("p => p"), "ax") for _ in range(6)]
    with pytest.raises(ValueError):
        render(Node(parse_hypersequent("p => p"), "wide", leaves), "latex")


def test_bad_format():
    with pytest.raises(ValueError):
        render(parse_formula("p"), "html")
    with pytest.raises(TypeError):
        render(42)
