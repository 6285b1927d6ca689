from fractions import Fraction

import pytest
import sympy as sp

from chernaudit.exceptions import DegreeError, NotAUnitError, RingConstructionError, RingMismatchError
from chernaudit.ring import (
    A,
    B,
    LocalSurfaceLattice,
    Monomial,
    chern_character,
    chern_from_ch,
    exp_class,
    integrate,
    inverse_unit,
    make_ring,
    mul,
    pullback_map,
    render_scalar,
    to_coefficient,
    todd_from_chern,
)


@pytest.fixture
def y1():
    return make_ring(["E", "F"], 3, {"F^3": 32, "EF^2": 64, "E^2F": 32, "E^3": -128}, name="Y1")


@pytest.fixture
def p3():
    return make_ring(["H"], 3, {"H^3": 1}, name="P3")


def test_missing_top_entry_is_named():
    with pytest.raises(RingConstructionError, match="E\\^2F"):
        make_ring(["E", "F"], 3, {"F^3": 32, "EF^2": 64, "E^3": -128}, name="Y1")


def test_top_entry_of_wrong_degree():
    with pytest.raises(RingConstructionError, match="degree 2"):
        make_ring(["H"], 3, {"H^3": 1, "H^2": 4})


def test_repeated_generator():
    with pytest.raises(RingConstructionError):
        make_ring(["H", "H"], 1, {"H": 1})


def test_monomial_parse_and_render():
    m = Monomial.parse("E^2F", ["E", "F"])
    assert m.degree == 3
    assert m.power("E") == 2
    assert m.render(["E", "F"]) == "E^2F"
    assert Monomial.of("E", "E", "F") == m
    assert Monomial.parse("E*E*F", ["E", "F"]) == m


def test_monomial_parse_rejects_unknown():
    with pytest.raises(ValueError):
        Monomial.parse("G^2", ["E", "F"])


def test_triple_intersection_relation(y1):
    e, f = y1.gens()
    assert integrate(e ** 3 + mul(e, e) * f * 2 + mul(e, f * f)) == 0


def test_truncation_discards_high_degree(p3):
    h = p3.gen("H")
    assert (h ** 4).is_zero()
    assert integrate(h ** 3) == 1


def test_todd_inverse_degree_one():
    x1 = make_ring(["H"], 3, {"H^3": 4}, name="X1")
    h = x1.gen("H")
    todd = todd_from_chern(h * 2, mul(h, h) * 3)
    assert todd.truncate(2).render() == "1+H+7/12H^2"
    inverse = inverse_unit(todd)
    assert inverse.truncate(2).render() == "1-H+5/12H^2"
    assert mul(todd, inverse).render() == "1"


def test_todd_inverse_degree_zero(p3):
    h = p3.gen("H")
    todd = todd_from_chern(h * 4, mul(h, h) * 6)
    assert todd.truncate(2).render() == "1+2H+11/6H^2"
    assert inverse_unit(todd).truncate(2).render() == "1-2H+13/6H^2"


def test_inverse_unit_needs_constant_one(p3):
    with pytest.raises(NotAUnitError):
        inverse_unit(p3.scalar(2) + p3.gen("H"))


def test_exp_class(p3):
    assert exp_class(p3.gen("H")).render() == "1+H+1/2H^2+1/6H^3"
    assert exp_class(-p3.gen("H")).truncate(2).render() == "1-H+1/2H^2"


def test_exp_class_needs_a_divisor(p3):
    with pytest.raises(DegreeError):
        exp_class(p3.one() + p3.gen("H"))


def test_mixing_rings_fails(y1, p3):
    with pytest.raises(RingMismatchError):
        y1.gen("E") + p3.gen("H")


def test_canonical_rendering_is_stable():
    x1 = make_ring(["H"], 3, {"H^3": 4}, name="X1")
    text = "8+(8a+16b)H+(4a^2+16ab+4b^2-12b-2)H^2"
    parsed = x1.parse(text)
    assert parsed.render() == text
    assert x1.parse("8 + (8*a + 16*b)*H + (4*a**2 + 16*a*b + 4*b**2 - 12*b - 2)*H**2") == parsed


def test_render_scalar_orders_parameters():
    assert render_scalar(sp.Rational(7, 12)) == "7/12"
    assert render_scalar(16 * B + 8 * A - 2) == "8a+16b-2"
    assert render_scalar(0) == "0"


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        to_coefficient(0.5)
    assert to_coefficient(Fraction(1, 3)) == sp.Rational(1, 3)


def test_parse_rational_coefficients(y1):
    cls = y1.parse("1/3E^2+4/3EF")
    assert cls.coefficient("E^2") == sp.Rational(1, 3)
    assert cls.coefficient("EF") == sp.Rational(4, 3)


@pytest.mark.parametrize("text, expected", [
    ("1-1/2E+1/12E^2", {"": 1, "E": sp.Rational(-1, 2), "E^2": sp.Rational(1, 12)}),
    ("2E+1", {"": 1, "E": 2}),
    ("1/3E+1/3F^3", {"E": sp.Rational(1, 3), "F^3": sp.Rational(1, 3)}),
    ("3E^2F+2", {"": 2, "E^2F": 3}),
])
def test_coefficient_before_generator_then_digit(y1, text, expected):
    cls = y1.parse(text)
    assert {y1.render_monomial(m) if m.degree else "": c for m, c in cls} == expected


def test_todd_class_parses_back_from_its_rendering(y1):
    e = y1.gen("E")
    c2 = y1.parse("1/3E^2+4/3EF")
    todd = todd_from_chern(-e, c2)
    assert y1.parse(todd.render()) == todd


def test_decimal_coefficients_are_rejected_by_parse(y1):
    with pytest.raises(TypeError):
        y1.parse("0.5E")


def test_substitute(y1):
    cls = y1.gen("F") * A + y1.gen("E") * (B + 1)
    assert cls.substitute({A: 2, B: 0}).render() == "E+2F"
    assert cls.free_parameters == {A, B}


def test_chern_character_roundtrip(y1):
    e = y1.gen("E")
    ch = y1.scalar(3) - e * 2 + mul(e, e) * 2
    c1, c2 = chern_from_ch(ch)
    assert c1.render() == "-2E"
    assert c2.is_zero()
    assert chern_character(3, c1, c2) == ch


def test_pullback_map(y1, p3):
    f_star = pullback_map(p3, y1, {"H": y1.gen("F")})
    assert f_star(p3.parse("1 + 2H + 3H^2")).render() == "1+2F+3F^2"


def test_pullback_map_needs_every_generator(y1):
    x = make_ring(["H", "K"], 1, {"H": 1, "K": 1})
    with pytest.raises(RingConstructionError):
        pullback_map(x, y1, {"H": y1.gen("F")})


def test_local_surface_lattice():
    lattice = LocalSurfaceLattice.build(("A", "B"), ((-2, 1), (1, -1)))
    p = lattice.element({"A": sp.Rational(1, 4), "B": sp.Rational(1, 2)})
    assert lattice.square(p) == sp.Rational(-1, 8)


def test_local_surface_lattice_must_be_symmetric():
    with pytest.raises(RingConstructionError, match="symmetric"):
        LocalSurfaceLattice.build(("A", "B"), ((-2, 1), (0, -1)))
