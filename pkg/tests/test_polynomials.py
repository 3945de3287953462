"""Polynomial parsing and monomial bookkeeping."""
from fractions import Fraction

import pytest

from idealtangent.errors import ValidationError
from idealtangent.polynomials import (count_monomials, monomials_of_degree,
                                      parse_homogeneous, parse_poly)


def test_monomial_counts():
    for nvars in (1, 2, 3, 4):
        for d in range(6):
            assert len(monomials_of_degree(nvars, d)) == count_monomials(nvars, d)


def test_monomials_descending_lex():
    ms = monomials_of_degree(3, 2)
    assert ms[0] == (2, 0, 0)
    assert ms[-1] == (0, 0, 2)
    assert list(ms) == sorted(ms, reverse=True)


def test_parse_simple():
    p = parse_poly("x0^2 - x1*x2", 3)
    assert p.coeffs == {(2, 0, 0): Fraction(1), (0, 1, 1): Fraction(-1)}
    assert p.homogeneous_degree() == 2


def test_parse_coefficients():
    p = parse_poly("2*x0 + 1/3*x1 - x0", 2)
    assert p.coeffs == {(1, 0): Fraction(1), (0, 1): Fraction(1, 3)}


def test_parse_repeated_factors():
    p = parse_poly("x0*x0*x1^2", 2)
    assert p.coeffs == {(2, 2): Fraction(1)}


def test_parse_constant():
    p = parse_poly("3", 2)
    assert p.coeffs == {(0, 0): Fraction(3)}


def test_inhomogeneous_rejected_with_position():
    with pytest.raises(ValidationError) as exc:
        parse_homogeneous("x0^2 + x1", 2)
    assert "inhomogeneous" in str(exc.value)


def test_parse_error_has_line_and_column():
    with pytest.raises(ValidationError) as exc:
        parse_poly("x0 + @", 2)
    assert "line 1" in str(exc.value) and "column" in str(exc.value)


def test_variable_out_of_range():
    with pytest.raises(ValidationError):
        parse_poly("x5", 2)


def test_zero_generator_rejected():
    with pytest.raises(ValidationError):
        parse_homogeneous("x0 - x0", 2)


def test_product_and_degree():
    p = parse_poly("x0 + x1", 2)
    q = p.mul(p)
    assert q.coeffs == {(2, 0): Fraction(1), (1, 1): Fraction(2), (0, 2): Fraction(1)}
