"""Pass/fail reports returned by the check functions."""

from dataclasses import dataclass, field


@dataclass
class Report:
    check: str
    passed: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self):
        out = {"check": self.check, "pass": bool(self.passed), "violations": list(self.violations)}
        out.update(self.details)
        return out
