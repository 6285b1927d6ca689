"""
Property-based tests of the ring, the pushforward and the local form operations.
"""

from fractions import Fraction

import sympy as sp
from hypothesis import given, settings, strategies as st

from chernaudit import localforms as lf
from chernaudit.kummer import WeierstrassSet
from chernaudit.ring import add, exp_class, inverse_unit, make_ring, mul
from chernaudit.varieties import builtin_presentations, pushforward


PROPERTY_SETTINGS = settings(max_examples=1000, deadline=None)

_PRESENTATIONS = builtin_presentations()
DEG1 = _PRESENTATIONS.cover("deg1")
Y1 = DEG1.source.ring
X1 = DEG1.target.ring
Y0 = make_ring(["E", "F"], 3, {"E^3": 16, "E^2F": -16, "EF^2": 16, "F^3": 8}, name="Y0")

coefficients = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def classes(ring, min_degree=0, max_degree=None):
    top = ring.dimension if max_degree is None else max_degree
    monomials = [m for k in range(min_degree, top + 1) for m in ring.monomials_of_degree(k)]
    return st.lists(coefficients, min_size=len(monomials), max_size=len(monomials)).map(
        lambda values: ring.element(dict(zip(monomials, values)))
    )


@PROPERTY_SETTINGS
@given(classes(Y1), classes(Y1), classes(Y1))
def test_multiplication_is_associative_and_distributive(p, q, r):
    assert mul(mul(p, q), r) == mul(p, mul(q, r))
    assert mul(p, add(q, r)) == add(mul(p, q), mul(p, r))
    assert mul(p, q) == mul(q, p)


@PROPERTY_SETTINGS
@given(classes(Y0, 1, 1), classes(Y0, 1, 1))
def test_exp_is_a_homomorphism(d1, d2):
    assert exp_class(add(d1, d2)) == mul(exp_class(d1), exp_class(d2))


@PROPERTY_SETTINGS
@given(classes(Y1, 1))
def test_inverse_of_a_unit(nilpotent):
    unit = add(Y1.one(), nilpotent)
    assert mul(unit, inverse_unit(unit)) == Y1.one()


@PROPERTY_SETTINGS
@given(classes(Y1), classes(X1))
def test_projection_formula(a, b):
    assert pushforward(DEG1, mul(a, DEG1.pullback(b))) == mul(pushforward(DEG1, a), b)


@PROPERTY_SETTINGS
@given(classes(Y1), st.integers(min_value=-4, max_value=4))
def test_parse_of_render(p, k):
    shifted = p * Fraction(k, 3)
    assert Y1.parse(shifted.render()) == shifted


polynomials = st.lists(st.integers(min_value=-5, max_value=5), min_size=6, max_size=6).map(
    lambda c: c[0] + c[1] * lf.x + c[2] * lf.y + c[3] * lf.x * lf.y + c[4] * lf.x ** 2 + c[5] * lf.y ** 2
)


@PROPERTY_SETTINGS
@given(polynomials, polynomials, st.sampled_from(["xa", "ab", "alpha_beta"]))
def test_substitution_is_multiplicative(p, q, chart):
    sub = lf.chart_substitutions()[chart]
    product = lf.substitute_function(p * q, sub)
    assert sp.expand(product - lf.substitute_function(p, sub) * lf.substitute_function(q, sub)) == 0


integer_matrices = st.lists(st.integers(min_value=-3, max_value=3), min_size=16, max_size=16).map(
    lambda entries: sp.Matrix(4, 4, entries)
)


@PROPERTY_SETTINGS
@given(integer_matrices, integer_matrices)
def test_frame_conjugation_is_multiplicative(m1, m2):
    frame = lf.root_cover_frame()
    lhs = lf.frame_conjugate(m1 * m2, frame)
    rhs = lf.frame_conjugate(m1, frame) * lf.frame_conjugate(m2, frame)
    assert (lhs - rhs).applyfunc(sp.cancel) == sp.zeros(4, 4)


subsets = st.frozensets(st.integers(min_value=1, max_value=6))


@PROPERTY_SETTINGS
@given(subsets, subsets, subsets)
def test_weierstrass_classes_form_a_group(s, t, u):
    a, b, c = WeierstrassSet.of(s), WeierstrassSet.of(t), WeierstrassSet.of(u)
    assert (a ^ b) ^ c == a ^ (b ^ c)
    assert a ^ a == WeierstrassSet.of(())
    assert (a ^ b).is_even == (a.is_even == b.is_even)


exponents = st.integers(min_value=-8, max_value=8).map(lambda k: sp.Rational(k, 4))
monomials = st.builds(
    lambda p, q, r: lf.PuiseuxMonomial.of(alpha=p, beta=q, x=r),
    exponents, exponents, exponents,
)


@PROPERTY_SETTINGS
@given(monomials, monomials)
def test_dlog_of_a_product_is_the_sum(m1, m2):
    variables = set(m1.variables) | set(m2.variables)
    expected = {v: m1.power(v) + m2.power(v) for v in variables}
    assert (m1 * m2).dlog() == {v: e for v, e in expected.items() if e != 0}


_FRAMED = lf.root_cover_matrices()
_DIVISORS = (lf.alpha, lf.beta)


@PROPERTY_SETTINGS
@given(st.integers(min_value=-5, max_value=5), st.integers(min_value=-5, max_value=5))
def test_logarithmic_forms_are_closed_under_combination(s, t):
    combined = _FRAMED["du_f"].scale(s) + _FRAMED["dv_f"].scale(t)
    assert lf.is_logarithmic(combined, _DIVISORS).passed


small_matrices = st.lists(polynomials, min_size=4, max_size=4).map(lambda entries: sp.Matrix(2, 2, entries))


@PROPERTY_SETTINGS
@given(small_matrices, small_matrices, st.sampled_from(["xa", "ab", "alpha_beta"]))
def test_matrix_substitution_is_a_homomorphism(m1, m2, chart):
    sub = lf.chart_substitutions()[chart]
    lhs = lf.substitute(m1 * m2, sub)
    rhs = lf.substitute(m1, sub) * lf.substitute(m2, sub)
    assert (lhs - rhs).applyfunc(sp.cancel) == sp.zeros(2, 2)

    form = lf.FormMatrix.from_dict({lf.x: m1, lf.y: m2})
    pulled = lf.substitute(lf.multiply(m1, form), sub)
    assert pulled.equals(lf.multiply(lf.substitute(m1, sub), lf.substitute(form, sub)))
