"""Report-style results shared by the validators."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Failure:
    where: str
    message: str

    def __str__(self):
        return f"{self.where}: {self.message}"


@dataclass
class CheckReport:
    check: str
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, where, message):
        self.failures.append(Failure(str(where), message))

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "ok": self.ok,
            "checked": self.checked,
            "failures": [{"where": f.where, "message": f.message} for f in self.failures],
        }

    def __str__(self):
        status = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        return f"{self.check}: {status} ({self.checked} checked)"
