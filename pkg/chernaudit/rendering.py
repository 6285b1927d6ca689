"""
Canonical text rendering of values and reports
"""

import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

import sympy as sp
from tabulate import tabulate

from .models import Report
from .ring import GradedClass, render_scalar


def render_value(value: Any) -> str:
    """Byte-stable text for anything a check can return"""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, GradedClass):
        return value.render()
    if isinstance(value, (int, Fraction, sp.Basic)):
        return render_scalar(value)
    if isinstance(value, Mapping):
        return "{" + ", ".join(f"{k}: {render_value(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=render_value) if isinstance(value, (set, frozenset)) else value
        return "[" + ", ".join(render_value(v) for v in items) + "]"
    if hasattr(value, "render"):
        return value.render()
    return str(value)


def report_to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False)


def report_to_text(report: Report, width: int = 60) -> str:
    """Grid table of records followed by a summary line"""
    rows = [["Check", "Status", "Expected", "Computed", "ms"]]
    for record in report.records:
        rows.append([
            record.id,
            "PASS" if record.passed else "FAIL",
            _clip(record.expected, width),
            _clip(record.computed, width),
            record.runtime_ms,
        ])
    table = tabulate(rows, headers="firstrow", tablefmt="grid")
    summary = report.summary()
    lines = [table, f"Total: {summary['total']}  Passed: {summary['passed']}  Failed: {summary['failed']}"]

    failures = [r for r in report.records if not r.passed]
    if failures:
        lines.append("")
        lines.append("Failed checks:")
        for record in failures:
            lines.append(f"  {record.id} [{record.citation}]")
            lines.append(f"    expected: {record.expected}")
            lines.append(f"    computed: {record.computed}")
    return "\n".join(lines)


def render_listing(entries: Sequence[Sequence[str]]) -> str:
    return tabulate([["Check", "Citation"]] + [list(e) for e in entries],
                    headers="firstrow", tablefmt="grid")


def _clip(text: str, width: int) -> str:
    return text if len(text) <= width else text[: width - 3] + "..."
