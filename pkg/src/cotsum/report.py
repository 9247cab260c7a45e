"""Pass/fail/finding records shared by the checks and the ``audit`` command."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

PASS = "pass"
FAIL = "fail"
FINDING = "finding"


@dataclass
class Check:
    check: str
    status: str
    p: int | None = None
    k: int | None = None
    detail: str = ""
    measured: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def as_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "p": self.p,
            "k": self.k,
            "status": self.status,
            "detail": self.detail,
            "measured": self.measured,
        }


@dataclass
class AuditReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks: Iterable[Check]) -> None:
        self.checks.extend(checks)

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def findings(self) -> list[Check]:
        return [c for c in self.checks if c.status == FINDING]

    def by_name(self, name: str) -> list[Check]:
        return [c for c in self.checks if c.check == name]
