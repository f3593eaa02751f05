"""Command-line front end.

Exit codes: 0 success, 1 check failure, 2 parse error, 3 not proved at the given depth,
4 internal assertion (for instance an unresolvable mixed system).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import library
from .fileio import (load_calculus, parse_blocks, read_derivation_file, write_calculus,
                     write_derivation, write_rule, write_system)
from .kernel import check_hyp, check_sys
from .report import HypsysError, MixedUnresolvable, SizeLimitExceeded
from .syntax import ParseError, parse_formula, parse_hypersequent

OK, FAILED, PARSE, NOT_PROVED, INTERNAL = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _err(msg):
    print(msg, file=sys.stderr)


def _load(path, calc_path=None):
    calc = load_calculus(calc_path) if calc_path else None
    return read_derivation_file(path, calc)


def _need_calc(calc, path):
    if calc is None:
        raise _Fail(PARSE, f"{path}: no calculus (add a `calculus:` header or pass --calc)")
    return calc


def _check(d, calc):
    return check_sys(d, calc) if calc.base == "LJ" else check_hyp(d, calc)


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_with_calc(d, calc, out):
    """Derivation text; with an output path the calculus goes next to it and the header names it."""
    if not out:
        return write_derivation(d)
    cal = Path(out).with_suffix(".cal")
    cal.write_text(write_calculus(calc))
    return f"calculus: {cal.name}\n" + write_derivation(d)


# -- commands -------------------------------------------------------------------------

def cmd_check(a):
    if a.file.endswith(".nd"):
        from .natded import check_nd, read_nd_file
        d, calc = read_nd_file(a.file)
        rep = check_nd(d, calc)
    else:
        d, calc = _load(a.file, a.calc)
        rep = _check(d, _need_calc(calc, a.file))
    print(f"{a.file}: {rep}")
    return OK if rep.ok else FAILED


def cmd_translate_rule(a):
    from .translate import hyp_to_sys, sys_to_hyp
    if Path(a.source).exists():
        blocks = parse_blocks(Path(a.source).read_text())
        items = blocks["rules"] + blocks["systems"]
    else:
        items = [library.rule(a.source) if a.to == "sys" else library.system(a.source)]
    out = []
    for x in items:
        if a.to == "sys":
            x = x if hasattr(x, "tops") else hyp_to_sys(x)
            out.append(write_system(x))
        else:
            x = x if hasattr(x, "premisses") else sys_to_hyp(x)
            out.append(write_rule(x))
    _emit("\n".join(out), a.output)
    return OK


def cmd_translate_deriv(a):
    d, calc = _load(a.file, a.calc)
    calc = _need_calc(calc, a.file)
    if a.to == "hyp":
        if calc.base != "LJ":
            raise _Fail(FAILED, f"{a.file}: --to hyp expects an LJ + 2-system derivation")
        from .s2h import hyp_calculus, translate_s2h
        out, target = translate_s2h(d, calc), hyp_calculus(calc)
    else:
        if calc.base == "LJ":
            raise _Fail(FAILED, f"{a.file}: --to sys expects an HLJ derivation")
        from .h2s import sys_calculus, translate_h2s
        out, target = translate_h2s(d, calc), sys_calculus(calc)
    _emit(_write_with_calc(out, target, a.output), a.output)
    return OK


def cmd_normalize(a):
    d, calc = _load(a.file, a.calc)
    calc = _need_calc(calc, a.file)
    if a.form == "structured":
        from .hypnorm import normalize_hyp
        out = normalize_hyp(d, calc)
    else:
        from .sysnorm import disentangle, eliminate_same_path
        rep = check_sys(d, calc)
        if not rep.ok:
            raise _Fail(FAILED, f"{a.file}: {rep}")
        out = eliminate_same_path(d, calc)
        if a.form == "disentangled":
            out = disentangle(out, calc)
    _emit(_write_with_calc(out, calc, a.output), a.output)
    return OK


def cmd_nd(a):
    from .natded import check_nd, derive_axiom, hr_to_nd, read_nd_file, write_nd
    if a.action == "check":
        d, calc = read_nd_file(a.target)
        rep = check_nd(d, calc)
        print(f"{a.target}: {rep}")
        return OK if rep.ok else FAILED
    if Path(a.target).exists():
        rules = parse_blocks(Path(a.target).read_text())["rules"]
        if len(rules) != 1:
            raise _Fail(PARSE, f"{a.target}: expected one rule block")
        r, header = rules[0], f"calculus: {Path(a.target).resolve()}"
    else:
        r = library.rule(a.target)
        header = f"use: {r.name}"
    d = derive_axiom(hr_to_nd(r))
    _emit(write_nd(d, [header]), a.output)
    return OK


def cmd_classify(a):
    from .natded import classify
    f = parse_formula(a.formula)
    print(classify(f).report())
    return OK


def cmd_prove(a):
    from .prover import SearchConfig, prove
    from .schemas import Calculus
    calc = load_calculus(a.calc) if a.calc else Calculus(base="HLJ", name="HLJ")
    for name in (a.use or "").replace(",", " ").split():
        library.load(name, calc)
    res = prove(parse_hypersequent(a.goal), calc, SearchConfig(max_depth=a.depth))
    if not res.proved:
        print(f"not proved: {res.status} (depth {a.depth}, {res.explored} goals explored)")
        return NOT_PROVED
    _emit(write_derivation(res.derivation), a.output)
    return OK


def cmd_render(a):
    from .render import render
    if a.file.endswith(".nd"):
        from .natded import read_nd_file
        d, _ = read_nd_file(a.file)
    else:
        d, _ = _load(a.file, a.calc)
    _emit(render(d, a.format), a.output)
    return OK


def build_parser():
    p = argparse.ArgumentParser(prog="hypsys", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(fn=fn)
        return s

    s = add("check", cmd_check, "check a derivation (.drv or .nd)")
    s.add_argument("file")
    s.add_argument("--calc")

    s = add("translate-rule", cmd_translate_rule, "translate rules and 2-systems")
    s.add_argument("--to", choices=("hyp", "sys"), required=True)
    s.add_argument("source", help="rule/system file or library name")
    s.add_argument("-o", "--output")

    s = add("translate-deriv", cmd_translate_deriv, "translate a derivation")
    s.add_argument("--to", choices=("hyp", "sys"), required=True)
    s.add_argument("file")
    s.add_argument("--calc")
    s.add_argument("-o", "--output")

    s = add("normalize", cmd_normalize, "normal forms of derivations")
    s.add_argument("--form", choices=("structured", "disentangled", "no-same-path"), required=True)
    s.add_argument("file")
    s.add_argument("--calc")
    s.add_argument("-o", "--output")

    s = add("nd", cmd_nd, "natural deduction: derive an axiom (gen) or check a derivation")
    s.add_argument("action", choices=("gen", "check"))
    s.add_argument("target", help="rule file or library name (gen), .nd file (check)")
    s.add_argument("-o", "--output")

    s = add("classify", cmd_classify, "polarity classes of a formula")
    s.add_argument("formula")

    s = add("prove", cmd_prove, "bounded proof search in HLJ + rules")
    s.add_argument("goal")
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--use", help="library rules, comma separated")
    s.add_argument("--calc")
    s.add_argument("-o", "--output")

    s = add("render", cmd_render, "render a derivation")
    s.add_argument("file")
    s.add_argument("--format", choices=("text", "latex"), default="text")
    s.add_argument("--calc")
    s.add_argument("-o", "--output")
    return p


def run(argv=None):
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as e:
        return PARSE if e.code else OK
    try:
        return a.fn(a)
    except _Fail as e:
        _err(str(e))
        return e.code
    except ParseError as e:
        where = getattr(a, "file", None) or getattr(a, "target", None) or getattr(a, "source", None) or "input"
        _err(f"{where}: parse error: {e}")
        return PARSE
    except (FileNotFoundError, IsADirectoryError) as e:
        _err(f"cannot read {e.filename}")
        return PARSE
    except (AssertionError, MixedUnresolvable, SizeLimitExceeded) as e:
        _err(f"internal assertion: {e}")
        return INTERNAL
    except (HypsysError, ValueError) as e:
        _err(f"error: {e}")
        return FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
