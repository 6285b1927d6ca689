"""
Orchestrator that selects, runs and collects checks into a Report
"""

import fnmatch
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from .checks import DEFAULT_SAMPLE_RANGE, Check, CheckContext, registered_checks
from .models import CheckRecord, Report
from .rendering import render_value
from .varieties import Presentations, builtin_presentations


logger = logging.getLogger(__name__)


class NoMatchingChecks(LookupError):
    """A selection pattern matched no registered check"""


def select_checks(pattern: str, context: Optional[CheckContext] = None) -> List[Check]:
    """Checks whose id matches the glob, in registration order"""
    selected = [check for check in registered_checks(context) if fnmatch.fnmatchcase(check.id, pattern)]
    if not selected:
        raise NoMatchingChecks(f"no check matches '{pattern}'")
    return selected


def run_check(check: Check, context: CheckContext) -> CheckRecord:
    """Run one check; an exception becomes a failing record"""
    start = time.perf_counter()
    try:
        computed = render_value(check.compute(context))
    except Exception as exc:
        logger.warning(f"Check {check.id} raised {type(exc).__name__}: {exc}")
        computed = f"error: {exc}"
    elapsed = int((time.perf_counter() - start) * 1000)

    passed = computed == check.expected
    if not passed:
        logger.debug(f"Check {check.id} expected {check.expected}, computed {computed}")
    return CheckRecord(check.id, check.citation, check.expected, computed, passed, elapsed)


class VerificationRunner:
    """Runs selected checks, in parallel when max_workers > 1"""

    def __init__(self, presentations: Optional[Presentations] = None, sample_range=None,
                 configured_curves=(), max_workers: int = 4):
        self.context = CheckContext(
            presentations or builtin_presentations(),
            sample_range=sample_range or DEFAULT_SAMPLE_RANGE,
            configured_curves=tuple(configured_curves),
        )
        self.max_workers = max(1, max_workers)

    def run(self, pattern: str = "*") -> Report:
        checks = select_checks(pattern, self.context)
        logger.info(f"Running {len(checks)} checks with {self.max_workers} workers")

        if self.max_workers == 1:
            records = [run_check(check, self.context) for check in checks]
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                # map yields results in submission order
                records = list(executor.map(lambda check: run_check(check, self.context), checks))

        report = Report(records)
        logger.info(f"Verification completed: {report.passed}/{report.total} passed")
        return report
