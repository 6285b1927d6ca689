import pytest

from chernaudit.config import (
    apply_config,
    dump_config,
    dumps_config,
    load_config,
    loads_config,
    parse_ramification,
    render_ramification,
)
from chernaudit.exceptions import ConfigError
from chernaudit.runner import VerificationRunner


PERTURBED_Y1 = """
# F^3 off by one
[variety Y1] dim=3
gen E F
pair E^3 = -128
pair E^2F = 32
pair EF^2 = 64
pair F^3 = 33
c1 = -E
c2 = 1/3 E^2 + 4/3 EF
"""


def test_round_trip_of_builtin_presentations(presentations):
    loaded = loads_config(dumps_config(presentations))
    assert sorted(loaded.varieties) == sorted(presentations.varieties)
    for name, variety in presentations.varieties.items():
        assert loaded.variety(name).to_dict() == variety.to_dict()
    for name, cover in presentations.covers.items():
        assert loaded.cover(name).to_dict() == cover.to_dict()
    assert loaded.curves == presentations.curves


def test_dump_config_writes_file(presentations, tmp_path):
    path = tmp_path / "builtin.cfg"
    dump_config(presentations, path)
    assert load_config(path).cover("deg0").degree == 8


def test_missing_top_table_entry():
    text = "[variety Y] dim=3\ngen E F\npair E^3 = 1\npair EF^2 = 1\npair F^3 = 1\nc1 = E\nc2 = 0\n"
    with pytest.raises(ConfigError, match="E\\^2F") as info:
        loads_config(text)
    assert info.value.line == 1


def test_bad_option_value_reports_line_and_column():
    with pytest.raises(ConfigError) as info:
        loads_config("\n[curve bad] base_genus=x degree=2\n")
    assert info.value.line == 2
    assert info.value.column == 24
    assert "line 2, column 24" in str(info.value)


def test_unknown_option():
    with pytest.raises(ConfigError, match="unknown cover option 'colour'"):
        loads_config("[cover c] source=X1 target=X1 degree=1 pullback=H colour=red")


def test_unknown_variety_reference(presentations):
    with pytest.raises(ConfigError, match="unknown variety 'Z'"):
        loads_config("[cover c] source=Z target=X1 degree=1 pullback=H", presentations)


def test_entry_outside_section():
    with pytest.raises(ConfigError, match="outside of any section"):
        loads_config("gen H\n")


def test_duplicate_section():
    text = "[curve c] base_genus=0 degree=2\n[curve c] base_genus=1 degree=2\n"
    with pytest.raises(ConfigError, match="defined twice"):
        loads_config(text)


def test_declared_todd_must_match():
    text = "[variety P] dim=3\ngen H\npair H^3 = 1\nc1 = 4H\nc2 = 6H^2\ntodd = 1 + 2H\n"
    with pytest.raises(ConfigError) as info:
        loads_config(text)
    assert info.value.line == 6


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.cfg")


@pytest.mark.parametrize("text, indices", [
    ("", ()),
    ("2*4", (2, 2, 2, 2)),
    ("2*4,3", (2, 2, 2, 2, 3)),
    ("3, 2", (3, 2)),
])
def test_parse_ramification(text, indices):
    assert parse_ramification(text) == indices


def test_render_ramification():
    assert render_ramification((2, 2, 2, 2, 3)) == "2*4,3"
    assert render_ramification((3,)) == "3"
    assert render_ramification(()) == ""


def test_bad_ramification_entry():
    with pytest.raises(ConfigError, match="bad ramification"):
        parse_ramification("two*4")


def test_perturbed_variety_breaks_degree_one_checks(presentations):
    merged = apply_config(presentations, loads_config(PERTURBED_Y1, presentations))
    assert merged.cover("deg1").source.ring.name == "Y1"
    assert merged.cover("deg1").degree_consistency() == (33, 32)

    report = VerificationRunner(merged, max_workers=1).run("deg1.ch_Vab")
    assert not report.ok
    assert report.records[0].computed != report.records[0].expected


def test_unperturbed_variety_keeps_checks_passing(presentations):
    text = dumps_config(presentations)
    merged = apply_config(presentations, loads_config(text, presentations))
    assert VerificationRunner(merged, max_workers=1).run("deg1.ch_Vab").ok


def test_configured_curves_become_checks(presentations):
    text = "[curve good] base_genus=0 degree=2 ram=2*6 genus=2\n[curve wrong] base_genus=0 degree=2 ram=2*6 genus=3\n"
    loaded = loads_config(text)
    merged = apply_config(presentations, loaded)
    runner = VerificationRunner(merged, configured_curves=loaded.curves, max_workers=1)
    report = runner.run("config.curve.*")
    assert [(r.id, r.passed) for r in report.records] == [
        ("config.curve.good", True),
        ("config.curve.wrong", False),
    ]


@pytest.mark.parametrize("value", ["0.5", "1e3", "1/0"])
def test_pairing_values_must_be_exact(value):
    text = f"[variety P] dim=1\ngen H\npair H = {value}\nc1 = 2H\nc2 = 0\n"
    with pytest.raises(ConfigError, match="not an exact rational") as info:
        loads_config(text)
    assert info.value.line == 3


def test_todd_with_coefficient_before_generator():
    text = "[variety P] dim=1\ngen H\npair H = 1\nc1 = 2H\nc2 = 0\ntodd = 1+1H\n"
    variety = loads_config(text).variety("P")
    assert variety.todd.render() == "1+H"
