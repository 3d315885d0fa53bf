"""Check results and deterministic reports."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional


def is_zero(value) -> bool:
    if isinstance(value, (list, tuple)):
        return all(is_zero(v) for v in value)
    if hasattr(value, "is_zero"):
        return value.is_zero()
    return not value


def witness_string(value) -> str:
    if isinstance(value, (list, tuple)):
        return "; ".join(witness_string(v) for v in value if not is_zero(v))
    return str(value).replace("\n", " ")


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    witness: Optional[str] = None

    @classmethod
    def from_difference(cls, check_id: str, difference) -> "CheckResult":
        if is_zero(difference):
            return cls(check_id, True)
        return cls(check_id, False, witness_string(difference))

    from_differences = from_difference

    @classmethod
    def from_bool(cls, check_id: str, ok: bool, witness: str | None = None) -> "CheckResult":
        return cls(check_id, bool(ok), None if ok else (witness or "false"))

    def line(self) -> str:
        if self.passed:
            return f"CHECK {self.check_id} PASS"
        w = f" {self.witness}" if self.witness else ""
        return f"CHECK {self.check_id} FAIL{w}"


@dataclass
class Report:
    """Ordered collection of check results; output order is sorted by check id."""

    results: List[CheckResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, result: CheckResult) -> CheckResult:
        self.results.append(result)
        return result

    def extend(self, results: Iterable[CheckResult]) -> None:
        for r in results:
            self.add(r)

    def merge(self, other: "Report") -> None:
        self.results.extend(other.results)
        self.notes.extend(other.notes)

    def sorted_results(self) -> List[CheckResult]:
        return sorted(self.results, key=lambda r: r.check_id)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if not r.passed)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def lines(self) -> List[str]:
        out = [r.line() for r in self.sorted_results()]
        out.extend(f"NOTE {n}" for n in self.notes)
        out.append(f"SUMMARY pass={self.passed} fail={self.failed}")
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_dict(self) -> dict:
        return {
            "checks": [{"id": r.check_id, "status": "PASS" if r.passed else "FAIL",
                        "witness": r.witness} for r in self.sorted_results()],
            "notes": list(self.notes),
            "summary": {"pass": self.passed, "fail": self.failed},
        }
