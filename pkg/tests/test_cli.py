import json

import pytest
from click.testing import CliRunner

from chernaudit.cli import main


PERTURBED = """[variety Y1] dim=3
gen E F
pair E^3 = -128
pair E^2F = 32
pair EF^2 = 64
pair F^3 = 33
c1 = -E
c2 = 1/3 E^2 + 4/3 EF
"""


@pytest.fixture
def runner():
    return CliRunner()


def test_kummer_checks_pass(runner):
    result = runner.invoke(main, ["kummer.*"])
    assert result.exit_code == 0, result.output
    assert "kummer.16_6" in result.output
    assert "Failed: 0" in result.output


def test_json_report_schema(runner):
    result = runner.invoke(main, ["curves.genus.*", "--format", "json"])
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["summary"] == {"total": 6, "passed": 6, "failed": 0}
    record = data["records"][0]
    assert set(record) == {"id", "citation", "expected", "computed", "pass", "runtime_ms"}
    assert record["id"] == "curves.genus.spectral"
    assert record["computed"] == "5"


def test_unknown_pattern_is_a_usage_error(runner):
    result = runner.invoke(main, ["no.such.check"])
    assert result.exit_code == 2
    assert "no check matches" in result.output


def test_list(runner):
    result = runner.invoke(main, ["--list"])
    assert result.exit_code == 0
    assert "deg1.ch_Vab" in result.output
    assert "localforms.unframed_du" in result.output


def test_dump_incidence_as_json(runner):
    result = runner.invoke(main, ["--dump-incidence", "--format", "json"])
    assert result.exit_code == 0
    matrix = json.loads(result.output)
    assert len(matrix) == 16
    assert all(sum(row) == 6 for row in matrix)


def test_dump_matrices(runner):
    result = runner.invoke(main, ["--dump-matrices"])
    assert result.exit_code == 0
    for name in ("u_f", "v_f", "du_f", "dv_f"):
        assert f"== {name} ==" in result.output


def test_bad_config_exits_with_two(runner, tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("[variety Y] dim=3\ngen E F\npair E^3 = 1\n", encoding="utf-8")
    result = runner.invoke(main, ["--config", str(path)])
    assert result.exit_code == 2
    assert "missing top table entry" in result.output


def test_perturbed_config_fails_checks(runner, tmp_path):
    path = tmp_path / "perturbed.cfg"
    path.write_text(PERTURBED, encoding="utf-8")
    result = runner.invoke(main, ["deg1.ch_Vab", "--config", str(path), "--max-workers", "1"])
    assert result.exit_code == 1
    assert "Failed checks:" in result.output


def test_dump_config(runner, tmp_path):
    path = tmp_path / "out.cfg"
    result = runner.invoke(main, ["--dump-config", str(path)])
    assert result.exit_code == 0
    text = path.read_text(encoding="utf-8")
    assert "[variety X1] dim=3" in text
    assert "[cover deg1] source=Y1 target=X1 degree=8 pullback=F" in text


@pytest.mark.parametrize("value", ["1", "a:b", "3:-3"])
def test_bad_sample_range(runner, value):
    result = runner.invoke(main, ["kummer.translation", "--sample-range", value])
    assert result.exit_code == 2


def test_sample_range_is_used(runner):
    result = runner.invoke(main, ["deg1.delta_scan", "--sample-range=-3:3"])
    assert result.exit_code == 0, result.output


def test_output_file(runner, tmp_path):
    path = tmp_path / "report.txt"
    result = runner.invoke(main, ["kummer.shared_nodes", "-o", str(path)])
    assert result.exit_code == 0
    assert "kummer.shared_nodes" in path.read_text(encoding="utf-8")
