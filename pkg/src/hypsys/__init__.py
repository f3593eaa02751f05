"""Hypersequent calculi, 2-systems and natural deduction for intermediate logics."""
from .syntax import (And, Atom, Bottom, Formula, Hypersequent, Imp, Or, ParseError, Sequent, Top,
                     fmt, hyp_equal, latex, parse_formula, parse_hypersequent, parse_sequent)
from .report import CheckReport, HypsysError

__all__ = ["And", "Atom", "Bottom", "Formula", "Hypersequent", "Imp", "Or", "ParseError", "Sequent", "Top",
           "fmt", "hyp_equal", "latex", "parse_formula", "parse_hypersequent", "parse_sequent",
           "CheckReport", "HypsysError"]
__version__ = "0.1.0"
