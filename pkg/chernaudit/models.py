"""
Data models for verification results
"""

from dataclasses import dataclass, field
from typing import Dict, List


@dataclass
class CheckRecord:
    """Represents the outcome of a single named check"""
    id: str
    citation: str
    expected: str
    computed: str
    passed: bool
    runtime_ms: int = 0

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "id": self.id,
            "citation": self.citation,
            "expected": self.expected,
            "computed": self.computed,
            "pass": self.passed,
            "runtime_ms": self.runtime_ms
        }


@dataclass
class Report:
    """Represents the complete result of a verification run"""
    records: List[CheckRecord] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def passed(self) -> int:
        return sum(1 for record in self.records if record.passed)

    @property
    def failed(self) -> int:
        return self.total - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> Dict[str, int]:
        return {"total": self.total, "passed": self.passed, "failed": self.failed}

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "summary": self.summary(),
            "records": [record.to_dict() for record in self.records]
        }
