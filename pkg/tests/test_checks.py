import pytest

from chernaudit.checks import Check, CheckContext, register, registered_checks
from chernaudit.rendering import render_value, report_to_json
from chernaudit.runner import NoMatchingChecks, VerificationRunner, run_check, select_checks


@pytest.mark.parametrize("check", registered_checks(), ids=lambda check: check.id)
def test_builtin_check_passes(check, context):
    record = run_check(check, context)
    assert record.passed, f"{check.id}: expected {record.expected}, computed {record.computed}"


def test_check_ids_are_unique():
    ids = [check.id for check in registered_checks()]
    assert len(ids) == len(set(ids))


def test_every_check_has_a_citation():
    assert all(check.citation for check in registered_checks())


def test_duplicate_registration_rejected():
    with pytest.raises(ValueError, match="registered twice"):
        register("kummer.16_6", "again", "true")(lambda ctx: True)


def test_raising_check_becomes_failure(context):
    def explode(ctx):
        raise ZeroDivisionError("boom")

    record = run_check(Check("test.explode", "nowhere", "1", explode), context)
    assert not record.passed
    assert record.computed == "error: boom"


def test_select_checks_by_glob(context):
    ids = [check.id for check in select_checks("kummer.*", context)]
    assert ids == ["kummer.16_6", "kummer.lines", "kummer.shared_nodes", "kummer.translation", "kummer.group"]
    with pytest.raises(NoMatchingChecks):
        select_checks("nothing.*", context)


def test_sample_window(presentations):
    assert list(CheckContext(presentations, sample_range=(-1, 1)).samples()) == [-1, 0, 1]


def test_report_is_deterministic(presentations):
    first = VerificationRunner(presentations, max_workers=4).run("deg1.*")
    second = VerificationRunner(presentations, max_workers=1).run("deg1.*")
    strip = [(r.id, r.expected, r.computed, r.passed) for r in first.records]
    assert strip == [(r.id, r.expected, r.computed, r.passed) for r in second.records]
    assert report_to_json(first).count('"id"') == first.total


@pytest.mark.parametrize("value, text", [
    (True, "true"),
    ([1, 2], "[1, 2]"),
    ({"a": 1}, "{a: 1}"),
    ({3, 1}, "[1, 3]"),
    ("already", "already"),
])
def test_render_value(value, text):
    assert render_value(value) == text
