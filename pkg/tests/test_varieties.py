import logging

import pytest
import sympy as sp

from chernaudit.exceptions import RingConstructionError, RingMismatchError
from chernaudit.ring import integrate, make_ring, mul
from chernaudit.varieties import (
    CoverPresentation,
    VarietyPresentation,
    complete_intersection,
    derive_degree1_tangent_c2,
    fibre_class_pairing,
    normal_bundle_degree,
    projective_space,
    pushforward,
    verify_e3_from_ruled_surface,
    wobbly_class,
)


def test_builtin_names(presentations):
    assert sorted(presentations.varieties) == ["X0", "X1", "Y0", "Y1"]
    assert sorted(presentations.covers) == ["deg0", "deg1"]
    assert [(v.name, c.name) for v, c in presentations.pairs()] == [("Y1", "deg1"), ("Y0", "deg0")]


def test_unknown_names_raise(presentations):
    with pytest.raises(KeyError, match="no variety"):
        presentations.variety("Y2")
    with pytest.raises(KeyError, match="no cover"):
        presentations.cover("deg2")


def test_complete_intersection_of_two_quadrics():
    x1 = complete_intersection(5, (2, 2), name="X1")
    assert x1.dimension == 3
    assert integrate(x1.ring.gen("H") ** 3) == 4
    assert x1.tangent_c1.render() == "2H"
    assert x1.tangent_c2.render() == "3H^2"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_projective_space_todd(n):
    pn = projective_space(n)
    expected = sp.Rational(3 * n ** 2 + 5 * n + 2, 24)
    assert pn.todd.coefficient("H") == sp.Rational(n + 1, 2)
    assert pn.todd.coefficient("H^2") == expected


def test_declared_todd_must_agree():
    ring = make_ring(["H"], 3, {"H^3": 1}, name="P3")
    h = ring.gen("H")
    with pytest.raises(RingConstructionError, match="Todd"):
        VarietyPresentation.from_chern("P3", ring, h * 4, mul(h, h) * 6, todd=ring.parse("1 + 2H + H^2"))


def test_degree_one_tangent_classes(presentations):
    y1 = presentations.variety("Y1")
    assert y1.tangent_c1.render() == "-E"
    assert derive_degree1_tangent_c2().render() == "1/3E^2+4/3EF"
    assert y1.todd.truncate(2).render() == "1-1/2E+1/9E^2+1/9EF"


def test_degree_zero_tangent_classes(presentations):
    y0 = presentations.variety("Y0")
    assert y0.tangent_c1.render() == "-2E"
    assert y0.tangent_c2.is_zero()


def test_relative_todd(deg1, deg0):
    assert deg1.relative_todd.truncate(2).render() == "1-1/2E-F+1/9E^2+11/18EF+5/12F^2"
    assert deg0.relative_todd.truncate(2).render() == "1-E-2F+1/3E^2+2EF+13/6F^2"


def test_degree_consistency(deg1, deg0):
    assert deg1.degree_consistency() == (32, 32)
    assert deg0.degree_consistency() == (8, 8)


def test_pushforward_of_one_is_the_degree(deg1):
    assert pushforward(deg1, deg1.source.ring.one()).render() == "8"


def test_pushforward_rejects_foreign_classes(deg1, deg0):
    with pytest.raises(RingMismatchError):
        pushforward(deg1, deg0.source.ring.gen("E"))


def test_normal_bundle_and_fibres(deg1):
    assert normal_bundle_degree() == {"from_genus": 128, "from_E3": 128}
    assert fibre_class_pairing(deg1.source.ring) == 96


def test_e3_from_ruled_surface():
    assert verify_e3_from_ruled_surface() == {"E3": -128, "section_square": 64}


def test_wobbly_class(deg1):
    wob = wobbly_class(deg1)
    h = deg1.hyperplane()
    assert wob.render() == "8H"
    assert integrate(mul(h * h, wob)) == 32


def test_inconsistent_cover_logs_warning(presentations, caplog):
    x1 = presentations.variety("X1")
    y1 = presentations.variety("Y1")
    ring = make_ring(["E", "F"], 3, {"F^3": 33, "EF^2": 64, "E^2F": 32, "E^3": -128}, name="Y1")
    source = VarietyPresentation.from_chern("Y1", ring, -ring.gen("E"), ring.parse(y1.tangent_c2.render()))
    with caplog.at_level(logging.WARNING, logger="chernaudit.varieties"):
        CoverPresentation.build("deg1", source, x1, 8, ring.gen("F"))
    assert "F^3 = 33" in caplog.text


def test_to_dict(presentations):
    data = presentations.variety("X1").to_dict()
    assert data["pairings"] == {"H^3": "4"}
    assert presentations.cover("deg1").to_dict()["pullback"] == "F"
