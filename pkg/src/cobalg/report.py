"""Verification reports returned by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    findings: list[str] = field(default_factory=list)
    checked: int = 0
    notes: list[str] = field(default_factory=list)
    max_findings: int = 50

    @property
    def passed(self) -> bool:
        return not self.findings

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self) -> bool:
        return self.passed

    def fail(self, msg: str) -> None:
        if len(self.findings) < self.max_findings:
            self.findings.append(msg)
        elif len(self.findings) == self.max_findings:
            self.findings.append("further violations truncated")

    def merge(self, other: "Report", prefix: str = "") -> "Report":
        for f in other.findings:
            self.fail(prefix + f)
        self.checked += other.checked
        self.notes.extend(other.notes)
        return self

    def detail(self) -> str:
        if self.passed:
            return f"checked={self.checked}"
        return f"violations={len(self.findings)} first={self.findings[0]}"

    def line(self) -> str:
        return f"CHECK {self.name} {self.status} {self.detail()}"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "checked": self.checked,
            "findings": list(self.findings),
            "notes": list(self.notes),
        }
