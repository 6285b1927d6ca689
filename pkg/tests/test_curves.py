import pytest

from chernaudit import curves
from chernaudit.curves import CoverSpec
from chernaudit.exceptions import GenusError, ParityError


@pytest.mark.parametrize("label, genus", [
    ("spectral", 5),
    ("cbar", 17),
    ("chat", 65),
    ("chat_over_cbar", 65),
    ("trigonal", 2),
    ("spectral_line", 25),
])
def test_builtin_genera(label, genus):
    spec = curves.builtin_covers()[label]
    assert spec.expected_genus == genus
    assert curves.riemann_hurwitz(spec) == genus


def test_odd_euler_term():
    with pytest.raises(ParityError):
        curves.riemann_hurwitz(CoverSpec(0, 2, (2,)))


def test_negative_genus():
    with pytest.raises(GenusError):
        curves.riemann_hurwitz(CoverSpec(0, 2))


@pytest.mark.parametrize("kwargs", [
    {"base_genus": -1, "degree": 2},
    {"base_genus": 0, "degree": 0},
    {"base_genus": 0, "degree": 2, "ram_indices": (3,)},
    {"base_genus": 0, "degree": 2, "ram_indices": (1,)},
])
def test_invalid_cover_spec(kwargs):
    with pytest.raises(ValueError):
        CoverSpec(**kwargs)


def test_trigonal_branch_points():
    assert curves.ramification_points_required(0, 3, 2) == 8
    with pytest.raises(GenusError):
        curves.ramification_points_required(2, 3, 2)


def test_wobbly_hyperplane_section(presentations):
    h = presentations.variety("X1").ring.gen("H")
    section = curves.wobbly_section(h)
    assert section.canonical_degree() == 224
    assert curves.adjunction_genus(section) == 113


def test_nodes_and_cusps_agree():
    assert curves.node_count_on_section() == 48
    assert curves.cusp_count_on_section() == 48
    assert curves.cusp_count_from_genus_deficit() == 48
    assert curves.normalization_genus(113, 48, 48) == 17


def test_odd_number_of_glued_points():
    with pytest.raises(GenusError):
        curves.node_count_on_section(curves=3, points_per_curve=5)


def test_normalization_genus_cannot_go_negative():
    with pytest.raises(GenusError):
        curves.normalization_genus(10, 6, 6)


def test_spectral_curve_over_line(deg0):
    result = curves.spectral_curve_over_line_genus(deg0)
    assert result == {"canonical_degree": 48, "genus_adjunction": 25, "genus_hurwitz": 25, "branch_points": 64}
    assert curves.spectral_branch_points() == 64


def test_fiber_product_consistency():
    assert curves.fiber_product_consistency() == {"via_ctilde": 65, "via_cbar": 65}
