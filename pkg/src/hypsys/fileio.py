"""Text formats for rules, 2-systems, calculi and derivations, plus a JSON tree form.

Rule block::

    rule com
    multiset: Phi Psi Gamma1 Gamma2
    succedent: Pi1 Pi2
    premiss: G | Phi, Gamma1 => Pi1
    premiss: G | Psi, Gamma2 => Pi2
    conclusion: G | active: Psi, Gamma1 => Pi1 | active: Phi, Gamma2 => Pi2
    link: 1 -> 1
    link: 2 -> 2

2-system block::

    system com
    multiset: Phi Psi Gamma1 Gamma2
    succedent: Pi1 Pi2
    bottom: comB
    top[1]: com1 : Phi, Gamma1 => Pi1 / Psi, Gamma1 => Pi1
    top[2]: com2 : Psi, Gamma2 => Pi2 / Phi, Gamma2 => Pi2
    shared: Phi Psi

Derivation lines (children indented below their conclusion)::

    <hypersequent> ; rule=<name> ; subst={mv=val,...} ; sys=<id>:<role>
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from .kernel import ASCII_NAMES, Node, complete_subst, fresh_node_id, nodes
from .schemas import KINDS, Calculus, HypRule, SequentPattern, TopRule, TwoSystem
from .syntax import Hypersequent, ParseError, fmt, parse_formula, parse_hypersequent, parse_sequent


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield no, line


def _wrap(err, no):
    return ParseError(str(err).rsplit(" (", 1)[0], getattr(err, "offset", 0), line=no)


def _pattern(text, metavars, no):
    try:
        s = parse_sequent(text, metavars)
    except ParseError as e:
        raise _wrap(e, no) from None
    return SequentPattern(s.ant, s.succ)


# -- rules and systems -----------------------------------------------------------

def parse_blocks(text):
    """Parse rule/system blocks and calculus headers from one text."""
    out = {"rules": [], "systems": [], "base": None, "name": "", "use": []}
    block = None
    for no, line in _lines(text):
        head = line.strip()
        m = re.fullmatch(r"(rule|system|calculus)\s+(\S+)", head)
        if m:
            if block:
                _finish(block, out)
            kind, name = m.groups()
            if kind == "calculus":
                out["name"] = name
                block = None
            else:
                block = {"kind": kind, "name": name, "metavars": {}, "lines": [], "no": no}
            continue
        key, sep, val = head.partition(":")
        if key == "top" or key.startswith("top["):
            m = re.fullmatch(r"top\[(\d+)\]:\s*(.*)", head)
            if not m:
                raise ParseError("malformed top rule line", 0, line=no)
            key, val = f"top[{m.group(1)}]", m.group(2)
            sep = ":"
        if not sep:
            raise ParseError(f"expected 'key: value', got {head!r}", 0, line=no)
        key, val = key.strip(), val.strip()
        if key == "base" and block is None:
            out["base"] = val
        elif key == "use" and block is None:
            out["use"] += val.split()
        elif block is None:
            raise ParseError(f"{key!r} outside a rule or system block", 0, line=no)
        elif key in KINDS:
            for v in val.split():
                block["metavars"][v] = key
        else:
            block["lines"].append((no, key, val))
    if block:
        _finish(block, out)
    return out


def _finish(block, out):
    if block["kind"] == "rule":
        out["rules"].append(_rule(block))
    else:
        out["systems"].append(_system(block))


def _components(val, mv, no, conclusion):
    parts = [p.strip() for p in val.split("|")]
    ctx = False
    if parts and parts[0] == "G":
        ctx = True
        parts = parts[1:]
    pats = []
    for p in parts:
        if conclusion:
            if not p.startswith("active:"):
                raise ParseError("conclusion components need an 'active:' marker", 0, line=no)
            p = p[len("active:"):]
        pats.append(_pattern(p.strip(), mv, no))
    return ctx, pats


def _rule(block):
    mv = block["metavars"]
    prems, pctx, concl, cctx, link = [], [], [], True, {}
    for no, key, val in block["lines"]:
        if key == "premiss":
            ctx, pats = _components(val, mv, no, False)
            prems.append(pats)
            pctx.append(ctx)
        elif key == "conclusion":
            cctx, concl = _components(val, mv, no, True)
        elif key == "link":
            m = re.fullmatch(r"(\d+)\s*->\s*(\d+)", val)
            if not m:
                raise ParseError("link must read 'i -> j'", 0, line=no)
            link[int(m.group(1)) - 1] = int(m.group(2)) - 1
        else:
            raise ParseError(f"unknown rule key {key!r}", 0, line=no)
    if len(prems) == 1 and len(concl) == 1 and not link:
        link = {0: 0}
    missing = [i + 1 for i in range(len(prems)) if i not in link]
    if missing:
        raise ParseError(f"rule {block['name']}: premisses {missing} need a link annotation", 0, line=block["no"])
    return HypRule(block["name"], dict(mv), prems, concl, [link[i] for i in range(len(prems))], pctx, cctx)


def _system(block):
    mv = block["metavars"]
    tops, shared, bottom = {}, [], ""
    for no, key, val in block["lines"]:
        if key == "bottom":
            bottom = val
        elif key == "shared":
            shared = val.split()
        elif key.startswith("top["):
            idx = int(key[4:-1])
            name, sep, body = val.partition(":")
            if not sep or "/" not in body:
                raise ParseError("top rule reads 'name : premisses / conclusion'", 0, line=no)
            lhs, rhs = body.rsplit("/", 1)
            prem = [_pattern(p.strip(), mv, no) for p in lhs.split(";") if p.strip()]
            tops[idx] = TopRule(name.strip(), prem, _pattern(rhs.strip(), mv, no))
        else:
            raise ParseError(f"unknown system key {key!r}", 0, line=no)
    if sorted(tops) != list(range(1, len(tops) + 1)):
        raise ParseError(f"system {block['name']}: top indices must be 1..k", 0, line=block["no"])
    return TwoSystem(block["name"], dict(mv), [tops[i] for i in sorted(tops)], frozenset(shared), bottom)


def parse_rule(text):
    b = parse_blocks(text)
    if len(b["rules"]) != 1:
        raise ParseError("expected exactly one rule block")
    return b["rules"][0]


def parse_system(text):
    b = parse_blocks(text)
    if len(b["systems"]) != 1:
        raise ParseError("expected exactly one system block")
    return b["systems"][0]


def parse_calculus(text, base_dir=None):
    from .library import load as lib_load
    b = parse_blocks(text)
    base = b["base"] or ("LJ" if b["systems"] and not b["rules"] else "HLJ")
    calc = Calculus(base=base, name=b["name"])
    for name in b["use"]:
        lib_load(name, calc)
    for r in b["rules"]:
        calc.hyp_rules[r.name] = r
    for s in b["systems"]:
        calc.systems[s.name] = s
    return calc


def load_calculus(path):
    return parse_calculus(Path(path).read_text(), Path(path).parent)


def _mv_line(metavars):
    out = []
    for kind in KINDS:
        names = [v for v, k in metavars.items() if k == kind]
        if names:
            out.append(f"{kind}: {' '.join(names)}")
    return out


def write_rule(rule):
    lines = [f"rule {rule.name}"] + _mv_line(rule.metavars)
    for prem, ctx in zip(rule.premisses, rule.premiss_ctx):
        comps = ([("G")] if ctx else []) + [str(c) for c in prem]
        lines.append("premiss: " + " | ".join(comps))
    comps = (["G"] if rule.conclusion_ctx else []) + [f"active: {c}" for c in rule.conclusion]
    lines.append("conclusion: " + " | ".join(comps))
    for i, j in enumerate(rule.link):
        lines.append(f"link: {i + 1} -> {j + 1}")
    return "\n".join(lines) + "\n"


def write_system(system):
    lines = [f"system {system.name}"] + _mv_line(system.metavars) + [f"bottom: {system.bottom}"]
    for i, t in enumerate(system.tops, 1):
        prem = " ; ".join(str(p) for p in t.premisses)
        lines.append(f"top[{i}]: {t.name} : {prem} / {t.conclusion}".replace(":  /", ": /"))
    lines.append("shared: " + " ".join(sorted(system.shared)))
    return "\n".join(lines) + "\n"


def write_calculus(calc):
    lines = [f"calculus {calc.name or 'anonymous'}", f"base: {calc.base}", ""]
    for r in calc.hyp_rules.values():
        lines.append(write_rule(r))
    for s in calc.systems.values():
        lines.append(write_system(s))
    return "\n".join(lines)


# -- substitutions ---------------------------------------------------------------

def _split_top(text, sep=","):
    depth, cur, out = 0, [], []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip() or out:
        out.append("".join(cur))
    return out


def parse_subst(text):
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError("substitution must be enclosed in braces")
    out = {}
    for item in _split_top(text[1:-1]):
        if not item.strip():
            continue
        name, sep, val = item.partition("=")
        if not sep:
            raise ParseError(f"substitution entry {item.strip()!r} lacks '='")
        name, val = name.strip(), val.strip()
        if val.startswith("{"):
            inner = val[1:-1]
            out[name] = tuple(parse_formula(f.strip()) for f in _split_top(inner) if f.strip())
        elif val == "":
            out[name] = None
        else:
            out[name] = parse_formula(val)
    return out


def fmt_subst(s):
    parts = []
    for k in sorted(s):
        v = s[k]
        if k == "G" or k.startswith("__"):
            continue
        if isinstance(v, tuple):
            parts.append(f"{k}={{{', '.join(fmt(f) for f in v)}}}")
        elif v is None:
            parts.append(f"{k}=")
        else:
            parts.append(f"{k}={fmt(v)}")
    return "{" + ", ".join(parts) + "}"


# -- derivations -------------------------------------------------------------------

_HEADER = re.compile(r"^(calculus|base|use)\s*:\s*(.*)$")


def split_header(text):
    """Leading `calculus:`, `base:` and `use:` lines, and the text with them blanked out."""
    headers, lines, body = [], text.splitlines(), False
    for i, raw in enumerate(lines):
        line = raw.split("#", 1)[0].strip()
        if body or not line:
            continue
        m = _HEADER.match(line)
        if m is None:
            body = True
            continue
        headers.append((m.group(1), m.group(2).strip()))
        lines[i] = ""
    return headers, "\n".join(lines)


def calculus_from_header(headers, base_dir=None):
    from .library import load as lib_load
    calc = None
    for key, val in headers:
        if key == "calculus":
            p = Path(val)
            if base_dir is not None and not p.is_absolute():
                p = Path(base_dir) / p
            calc = load_calculus(p)
        elif key == "base":
            calc = Calculus(base=val, name=val)
        elif key == "use":
            calc = calc or Calculus(base="HLJ", name="HLJ")
            for name in val.replace(",", " ").split():
                lib_load(name, calc)
    return calc


def parse_derivation(text, calc=None):
    """Parse the indented derivation format; missing substitutions are completed by matching."""
    text = split_header(text)[1]
    stack = []
    root = None
    for no, line in _lines(text):
        indent = len(line) - len(line.lstrip(" "))
        fields = [f.strip() for f in _split_top(line.strip(), ";")]
        try:
            conc = parse_hypersequent(fields[0])
        except ParseError as e:
            raise _wrap(e, no) from None
        node = Node(conc, "?", [], {}, None, fresh_node_id())
        for f in fields[1:]:
            key, sep, val = f.partition("=")
            key, val = key.strip(), val.strip()
            if key == "rule":
                node.rule = ASCII_NAMES.get(val, val)
            elif key == "subst":
                try:
                    node.subst = parse_subst(val)
                except ParseError as e:
                    raise _wrap(e, no) from None
            elif key == "sys":
                inst, _, role = val.rpartition(":")
                if role not in ("top", "bottom") or not inst:
                    raise ParseError("sys must read <id>:top or <id>:bottom", 0, line=no)
                node.sys = (inst, role)
            elif key == "id":
                node.id = val
            elif key == "tag":
                node.tag = val
            else:
                raise ParseError(f"unknown field {key!r}", 0, line=no)
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
    if calc is not None:
        for n in nodes(root):
            complete_subst(n, calc)
    return root


def load_derivation(path, calc=None):
    return parse_derivation(Path(path).read_text(), calc)


def read_derivation_file(path, calc=None):
    """(derivation, calculus); the calculus comes from the file header unless given."""
    text = Path(path).read_text()
    if calc is None:
        calc = calculus_from_header(split_header(text)[0], Path(path).parent)
    return parse_derivation(text, calc), calc


def write_derivation(d, with_ids=False):
    lines = []

    def rec(n, depth):
        parts = [str(n.conclusion), f"rule={n.rule}"]
        if n.subst:
            parts.append("subst=" + fmt_subst(n.subst))
        if n.sys:
            parts.append(f"sys={n.sys[0]}:{n.sys[1]}")
        if with_ids:
            parts.append(f"id={n.id}")
        if n.tag:
            parts.append(f"tag={n.tag}")
        lines.append("  " * depth + " ; ".join(parts))
        for p in n.premisses:
            rec(p, depth + 1)
    _deep(rec, d, 0)
    return "\n".join(lines) + "\n"


def _deep(fn, *args):
    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        return fn(*args)
    finally:
        sys.setrecursionlimit(old)


def _val_json(v):
    if isinstance(v, tuple):
        return {"multiset": [fmt(f) for f in v]}
    return None if v is None else fmt(v)


def _val_from_json(v):
    if isinstance(v, dict):
        return tuple(parse_formula(f) for f in v["multiset"])
    return None if v is None else parse_formula(v)


def to_json(d):
    def rec(n):
        out = {"id": n.id, "conclusion": [str(s) for s in n.conclusion.seqs], "rule": n.rule,
               "premisses": [rec(p) for p in n.premisses]}
        if n.subst:
            out["subst"] = {k: _val_json(v) for k, v in n.subst.items() if k != "G"}
        if n.sys:
            out["sys"] = list(n.sys)
        if n.tag:
            out["tag"] = n.tag
        return out
    return json.dumps(_deep(rec, d), indent=1, ensure_ascii=False)


def from_json(text):
    def rec(o):
        return Node(Hypersequent([parse_sequent(s) for s in o["conclusion"]]), o["rule"],
                    [rec(p) for p in o["premisses"]],
                    {k: _val_from_json(v) for k, v in o.get("subst", {}).items()},
                    tuple(o["sys"]) if o.get("sys") else None, o["id"], o.get("tag"))
    return _deep(rec, json.loads(text))
