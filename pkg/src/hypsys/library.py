"""Named rules and 2-systems shipped with the package."""
from __future__ import annotations

from .report import HypsysError

RULES = """
rule com
multiset: Phi Psi Gamma1 Gamma2
succedent: Pi1 Pi2
premiss: G | Phi, Gamma1 => Pi1
premiss: G | Psi, Gamma2 => Pi2
conclusion: G | active: Psi, Gamma1 => Pi1 | active: Phi, Gamma2 => Pi2
link: 1 -> 1
link: 2 -> 2

rule comstar
formula: phi psi
multiset: Gamma1 Gamma2
succedent: Pi1 Pi2
premiss: G | phi, psi, Gamma1 => Pi1
premiss: G | phi, psi, Gamma2 => Pi2
conclusion: G | active: psi, Gamma1 => Pi1 | active: phi, Gamma2 => Pi2
link: 1 -> 1
link: 2 -> 2

# linearity in the shape used for natural deduction: (delta -> sigma) v (sigma -> delta)
rule lin
multiset: delta sigma Gamma1 Gamma2
succedent: Pi1 Pi2
premiss: G | sigma, Gamma1 => Pi1
premiss: G | delta, Gamma2 => Pi2
conclusion: G | active: delta, Gamma1 => Pi1 | active: sigma, Gamma2 => Pi2
link: 1 -> 1
link: 2 -> 2

rule lq
multiset: Sigma1 Sigma2
premiss: G | Sigma1, Sigma2 =>
conclusion: G | active: Sigma1 => | active: Sigma2 =>
link: 1 -> 2

# excluded middle as obtained from the geometric 2-system
rule lemn
formula: phi
multiset: Gamma1 Gamma2
succedent: Delta1 Delta2
premiss: G | phi, Gamma1 => Delta1
premiss: G | bot, Gamma2 => Delta2
conclusion: G | active: Gamma1 => Delta1 | active: phi, Gamma2 => Delta2
link: 1 -> 1
link: 2 -> 2

# excluded middle, analytic form
rule lem
multiset: sigma Gamma1 Gamma2
succedent: Pi1 Pi2
premiss: G | sigma, Gamma1 => Pi1
conclusion: G | active: Gamma1 => Pi1 | active: sigma, Gamma2 => Pi2
link: 1 -> 1
"""

SYSTEMS = """
system com
multiset: Phi Psi Gamma1 Gamma2
succedent: Pi1 Pi2
bottom: comB
top[1]: com1 : Phi, Gamma1 => Pi1 / Psi, Gamma1 => Pi1
top[2]: com2 : Psi, Gamma2 => Pi2 / Phi, Gamma2 => Pi2
shared: Phi Psi

system comstar
formula: phi psi
multiset: Gamma1 Gamma2
succedent: Pi1 Pi2
bottom: comstarB
top[1]: comstar1 : phi, psi, Gamma1 => Pi1 / psi, Gamma1 => Pi1
top[2]: comstar2 : phi, psi, Gamma2 => Pi2 / phi, Gamma2 => Pi2
shared: phi psi

system lq
multiset: Sigma1 Sigma2
bottom: lqB
top[1]: lq1 : / Sigma1 =>
top[2]: lq2 : Sigma1, Sigma2 => / Sigma2 =>
shared: Sigma1

system lemn
formula: phi
multiset: Gamma1 Gamma2
succedent: Delta1 Delta2
bottom: lemnB
top[1]: lemn1 : phi, Gamma1 => Delta1 / Gamma1 => Delta1
top[2]: lemn2 : bot, Gamma2 => Delta2 / phi, Gamma2 => Delta2
shared: phi

system lem
multiset: sigma Gamma1 Gamma2
succedent: Pi1 Pi2
bottom: lemB
top[1]: lem1 : sigma, Gamma1 => Pi1 / Gamma1 => Pi1
top[2]: lem2 : / sigma, Gamma2 => Pi2
shared: sigma
"""


def bck_rule_text(k):
    """Hypersequent rule for phi0 v (phi0 -> phi1) v ... v (phi0 & ... & phi(k-1) -> phik)."""
    sig = [f"sigma{j}" for j in range(k + 1)]
    gam = [f"Gamma{i}" for i in range(k + 1)]
    pis = [f"Pi{i}" for i in range(k + 1)]
    lines = [f"rule bc{k}", "multiset: " + " ".join(sig + gam), "succedent: " + " ".join(pis)]
    for i in range(k + 1):
        lines.append(f"premiss: G | {sig[i]}, {gam[i]} => {pis[i]}")
    comps = []
    for i in range(k + 1):
        ant = ", ".join(sig[:i] + [gam[i]])
        comps.append(f"active: {ant} => {pis[i]}")
    lines.append("conclusion: G | " + " | ".join(comps))
    lines += [f"link: {i + 1} -> {i + 1}" for i in range(k + 1)]
    return "\n".join(lines) + "\n"


_cache = {}


def _parsed():
    if not _cache:
        from .fileio import parse_blocks
        b = parse_blocks(RULES + SYSTEMS + bck_rule_text(1) + bck_rule_text(2) + bck_rule_text(3))
        _cache["rules"] = {r.name: r for r in b["rules"]}
        _cache["systems"] = {s.name: s for s in b["systems"]}
    return _cache


def rule(name):
    import copy
    p = _parsed()
    if name in p["rules"]:
        return copy.deepcopy(p["rules"][name])
    if name in p["systems"]:
        from .translate import sys_to_hyp
        return sys_to_hyp(system(name))
    raise HypsysError(f"unknown library rule {name!r}")


def system(name):
    import copy
    p = _parsed()
    if name in p["systems"]:
        return copy.deepcopy(p["systems"][name])
    if name in p["rules"]:
        from .translate import hyp_to_sys
        return hyp_to_sys(rule(name))
    raise HypsysError(f"unknown library system {name!r}")


def names():
    p = _parsed()
    return sorted(set(p["rules"]) | set(p["systems"]))


def load(name, calc):
    """Add library entry `name` to `calc` in the form its base expects."""
    if calc.base == "LJ":
        s = system(name)
        calc.systems[s.name] = s
    elif calc.base == "NJ":
        from .natded import hr_to_nd
        r = rule(name)
        calc.nd_rules[r.name] = hr_to_nd(r)
    else:
        r = rule(name)
        calc.hyp_rules[r.name] = r
    return calc


def calculus(base, *names_):
    from .schemas import Calculus
    c = Calculus(base=base, name="+".join((base,) + names_))
    for n in names_:
        load(n, c)
    return c
