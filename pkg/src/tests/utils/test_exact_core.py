import random
from fractions import Fraction

import pytest
import sympy

from utils.exact_core import (
    BivariatePolynomial,
    RationalMatrix,
    alternating_binomial_sum,
    binomial,
    format_rational,
    gaussian_solve,
    hypergeom_terminating,
    matrix_inverse,
    parse_rational,
    pochhammer,
    poly_add,
    poly_coefficient,
    poly_evaluate,
    poly_mul,
    to_rational,
)


def test_parse_and_format_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == Fraction(-4)
    assert parse_rational(" 7 / 21 ") == Fraction(1, 3)
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-3, 9)) == "-1/3"
    assert to_rational("21/2") == Fraction(21, 2)


@pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "", "2/-3"])
def test_parse_rational_rejects_malformed_text(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_to_rational_rejects_floats_and_bools():
    with pytest.raises(ValueError):
        to_rational(0.5)
    with pytest.raises(ValueError):
        to_rational(True)


def test_binomial_out_of_range_is_zero():
    assert binomial(5, 2) == 10
    assert binomial(5, 6) == 0
    assert binomial(5, -1) == 0
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_binomial_satisfies_pascal():
    for n in range(2, 61):
        for k in range(1, n):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)
        assert binomial(n, 0) == binomial(n, n) == 1


def test_alternating_binomial_sum_is_a_delta():
    for n in range(0, 21):
        for k in range(0, n + 1):
            expected = (-1) ** n if k == n else 0
            assert alternating_binomial_sum(n, k) == expected


def test_pochhammer():
    assert pochhammer(3, 0) == 1
    assert pochhammer(-2, 2) == 2
    assert pochhammer(Fraction(1, 2), 2) == Fraction(3, 4)


def test_hypergeom_terminating_worked_value():
    assert hypergeom_terminating(-2, -2, 1, Fraction(-1, 2)) == Fraction(-3, 4)


def test_hypergeom_terminating_matches_sympy():
    z = sympy.Rational(-1, 3)
    expected = sum(sympy.rf(-3, j) * sympy.rf(-2, j) / (sympy.rf(1, j) * sympy.factorial(j)) * z ** j
                   for j in range(4))
    assert hypergeom_terminating(-3, -2, 1, Fraction(-1, 3)) == Fraction(int(expected.p), int(expected.q))


def test_hypergeom_terminating_rejects_bad_parameters():
    with pytest.raises(ValueError):
        hypergeom_terminating(1, -2, 1, 1)
    with pytest.raises(ValueError):
        hypergeom_terminating(-1, -2, 0, 1)


def test_bivariate_polynomial_arithmetic():
    a, b = BivariatePolynomial.a(), BivariatePolynomial.b()
    p = (a + b) ** 2
    assert p.coefficient(1, 1) == 2
    assert poly_coefficient(p, 2, 0) == 1
    assert p.total_degree == 2
    assert p.is_homogeneous()
    assert not (p + 1).is_homogeneous()
    assert poly_evaluate(p, 1, 2) == 9
    assert poly_mul(a, b) == BivariatePolynomial({(1, 1): 1})
    assert poly_add(a, -a).is_zero()
    assert (a - a) == 0


def test_bivariate_polynomial_rejects_negative_exponents():
    with pytest.raises(ValueError):
        BivariatePolynomial({(-1, 0): 1})


def test_rational_matrix_basics():
    m = RationalMatrix([[1, 2], [3, 4]])
    assert m.rows == 2 and m.cols == 2
    assert m[1, 0] == 3
    assert m.matvec([1, 1]) == [3, 7]
    assert m.matmul(RationalMatrix.identity(2)) == m
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2], [3]])


def test_gaussian_solve_singular_returns_none():
    assert gaussian_solve(RationalMatrix([[1, 2], [2, 4]]), [1, 2]) is None
    with pytest.raises(ValueError):
        gaussian_solve(RationalMatrix([[1, 2, 3], [4, 5, 6]]), [1, 2])


def test_gaussian_solve_matches_sympy_on_random_systems():
    rng = random.Random(11)
    for size in range(1, 6):
        for _ in range(5):
            entries = [[rng.randint(-5, 5) for _ in range(size)] for _ in range(size)]
            rhs = [rng.randint(-9, 9) for _ in range(size)]
            oracle = sympy.Matrix(entries)
            solution = gaussian_solve(RationalMatrix(entries), rhs)
            if oracle.det() == 0:
                assert solution is None
                continue
            expected = oracle.LUsolve(sympy.Matrix(rhs))
            assert solution == [Fraction(int(x.p), int(x.q)) for x in expected]


def test_matrix_inverse_matches_sympy():
    entries = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inverse = matrix_inverse(RationalMatrix(entries))
    expected = sympy.Matrix(entries).inv()
    assert inverse.to_lists() == [[Fraction(int(x.p), int(x.q)) for x in expected.row(i)] for i in range(3)]
    assert matrix_inverse(RationalMatrix([[1, 1], [1, 1]])) is None
