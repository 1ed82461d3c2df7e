import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twodigit import intpoly
from twodigit.errors import ValidationError
from twodigit.intpoly import IntPolynomial

coeff_lists = st.lists(st.integers(-6, 6), min_size=1, max_size=7)


def numeric_expanding(coeffs):
    roots = np.roots(list(reversed(coeffs)))
    return bool(np.all(np.abs(roots) > 1 + 1e-9))


def near_circle(coeffs):
    roots = np.roots(list(reversed(coeffs)))
    return bool(np.any(np.abs(np.abs(roots) - 1) < 1e-6))


def test_parse_and_format():
    p = intpoly.parse_poly("2, 0, 1, 1")
    assert p.coeffs == (2, 0, 1, 1)
    assert intpoly.format_poly(p) == "z^3+z^2+2"
    assert intpoly.format_poly("-2,0,1") == "z^2-2"
    assert intpoly.format_poly("2,-1,0,1") == "z^3-z+2"
    assert p.to_text() == "2,0,1,1"


def test_trailing_zeros_stripped():
    assert IntPolynomial((2, 1, 0, 0)).degree == 1


@pytest.mark.parametrize("text", ["", "a,b", "1,,2", "0"])
def test_parse_rejects(text):
    with pytest.raises(ValidationError):
        intpoly.parse_poly(text)


@pytest.mark.parametrize("coeffs, expected", [
    ((2, 1), True), ((-2, 1), True), ((1, 1), False),
    ((2, 2, 1), True), ((2, 1, 1), True), ((2, 0, 1), True), ((2, 3, 1), False),
    ((2, 0, 0, 1), True), ((2, -2, 0, 1), True), ((2, 3, 0, 1), False),
    ((2, 0, 1, 0, 1), True), ((1, 0, 1), False),
])
def test_is_expanding_examples(coeffs, expected):
    assert intpoly.is_expanding(IntPolynomial(coeffs)) is expected


@settings(max_examples=300, deadline=None)
@given(coeff_lists, st.sampled_from([1, -1, 2, 3]))
def test_is_expanding_matches_roots(coeffs, lead):
    coeffs = coeffs + [lead]
    if near_circle(coeffs):
        return
    assert intpoly.is_expanding(IntPolynomial(tuple(coeffs))) == numeric_expanding(coeffs)


def test_unit_circle_root_is_not_expanding():
    # (z^2 - z + 1)(z + 3) has roots on the unit circle
    assert not intpoly.is_expanding(IntPolynomial((3, -2, 2, 1)))


def test_evaluate_and_spectrum():
    p = IntPolynomial((2, 2, 1))
    assert intpoly.evaluate(p, -1 + 1j) == 0
    sp = intpoly.root_spectrum(p)
    assert sp.lo == pytest.approx(abs(cmath.sqrt(2)), abs=1e-9)
    assert sp.hi == pytest.approx(sp.lo)


@settings(max_examples=100, deadline=None)
@given(coeff_lists)
def test_mahler_measure_of_expanding(coeffs):
    p = IntPolynomial(tuple(coeffs) + (1,))
    if intpoly.is_expanding(p):
        assert intpoly.mahler_measure(p) == pytest.approx(abs(p.coeffs[0]))


@settings(max_examples=200, deadline=None)
@given(coeff_lists)
def test_opposite_is_involution(coeffs):
    p = IntPolynomial(tuple(coeffs) + (1,))
    q = intpoly.opposite(p)
    assert intpoly.opposite(q) == p
    assert intpoly.class_key(p) == intpoly.class_key(q)
    assert intpoly.is_expanding(p) == intpoly.is_expanding(q)
    for z in (0.5, 2.0, -1.5 + 0.5j):
        assert intpoly.evaluate(q, -z) == pytest.approx((-1) ** p.degree * intpoly.evaluate(p, z))


def test_substitute_power():
    assert intpoly.substitute_power(IntPolynomial((2, 2, 1)), 2).coeffs == (2, 0, 2, 0, 1)


@pytest.mark.parametrize("coeffs, iso", [
    ((2, 0, 1), True), ((2, 2, 1), True), ((2, -1, 1), True), ((2, 0, 0, 1), True),
    ((2, 0, 1, 0, 1), True), ((2, 0, 2, 0, 1), True), ((2, 1, 1, 1), False),
    ((2, 1, 0, 1), False),
])
def test_is_isotropic(coeffs, iso):
    assert intpoly.is_isotropic(IntPolynomial(coeffs)) is iso


def test_isotropic_quadratic_factor():
    q, k = intpoly.isotropic_quadratic_factor(IntPolynomial((2, 0, 2, 0, 1)))
    assert (q.coeffs, k) == ((2, 2, 1), 2)
    assert intpoly.isotropic_quadratic_factor(IntPolynomial((2, 0, 0, 1))) is None
    with pytest.raises(ValidationError):
        intpoly.isotropic_quadratic_factor(IntPolynomial((2, 1, 1, 1)))
