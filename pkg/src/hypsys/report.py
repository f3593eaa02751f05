from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    node: str | None
    constraint: str
    message: str = ""

    def __str__(self):
        where = f"[{self.node}] " if self.node else ""
        return f"{where}{self.constraint}: {self.message}"


@dataclass
class CheckReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def add(self, node, constraint, message=""):
        self.violations.append(Violation(node, constraint, message))

    def warn(self, node, constraint, message=""):
        self.warnings.append(Violation(node, constraint, message))

    def constraints(self):
        return {v.constraint for v in self.violations}

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            lines = ["ok"]
        else:
            lines = [f"{len(self.violations)} violation(s)"] + [f"  {v}" for v in self.violations]
        lines += [f"  warning {w}" for w in self.warnings]
        return "\n".join(lines)


class HypsysError(Exception):
    pass


class IncompleteSubstitution(HypsysError):
    pass


class InvalidSystem(HypsysError):
    pass


class InvalidSchema(HypsysError):
    pass


class InvalidInput(HypsysError):
    pass


class NotASequent(HypsysError):
    pass


class PreconditionViolated(HypsysError):
    pass


class UnsupportedShape(HypsysError):
    pass


class MixedUnresolvable(HypsysError):
    pass


class UnknownInstance(HypsysError):
    pass


class UnknownComponent(HypsysError):
    pass


class NotAnEC(HypsysError):
    pass


class NotStructured(HypsysError):
    pass


class IndexOutOfRange(HypsysError):
    pass


class SizeLimitExceeded(HypsysError):
    pass
