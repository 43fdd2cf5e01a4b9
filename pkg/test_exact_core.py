"""
Тесты точной арифметики и многочленов
"""
from fractions import Fraction
from math import prod

import numpy as np
import pytest

from config import Config
from errors import DimensionMismatchError, InputFormatError
from exact_core import (
    RatMatrix, affine_rank, det, format_rat, linear_solve, nullspace, parse_rat,
    primitive_integer_vector, rank,
)
from polynomial import IntLinear, IntPoly, LinForm, Poly, poly_eval, poly_exact_div, poly_mul


def test_parse_and_format_rat():
    assert parse_rat("3/6") == Fraction(1, 2)
    assert parse_rat(" -4 ") == Fraction(-4)
    assert parse_rat(7) == Fraction(7)
    assert format_rat(Fraction(4, 2)) == "2"
    assert format_rat(Fraction(-2, 6)) == "-1/3"


@pytest.mark.parametrize("bad", ["1/0", "abc", 0.5, True, None])
def test_parse_rat_rejects(bad):
    with pytest.raises(InputFormatError):
        parse_rat(bad)


def test_primitive_integer_vector_keeps_direction():
    assert primitive_integer_vector([Fraction(-2, 3), Fraction(4, 3), 0]) == (-1, 2, 0)
    assert primitive_integer_vector([0, 0]) == (0, 0)


def test_det_matches_known_values():
    assert det(RatMatrix.from_rows([[1, 2], [3, 4]])) == -2
    assert det(RatMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert det(RatMatrix.from_rows([[Fraction(1, 2), 1], [1, 4]])) == 1
    assert det(RatMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])) == 0
    # Столбцы из примера двойственного конуса: |det| = 6
    columns = [(1, 1, -1), (4, -2, -1), (0, 0, 1)]
    assert abs(det(RatMatrix.from_columns(columns))) == 6


def test_det_rejects_non_square():
    with pytest.raises(DimensionMismatchError):
        det(RatMatrix.from_rows([[1, 2, 3], [4, 5, 6]]))


def test_linear_solve():
    m = RatMatrix.from_rows([[2, 1], [1, 3]])
    assert linear_solve(m, [3, 5]) == (Fraction(4, 5), Fraction(7, 5))
    assert linear_solve(RatMatrix.from_rows([[1, 2], [2, 4]]), [1, 2]) is None


def test_rank_nullspace_affine_rank():
    rows = [[1, 1, 0], [0, 1, 1]]
    assert rank(rows) == 2
    basis = nullspace(rows)
    assert len(basis) == 1
    assert all(sum(a * b for a, b in zip(r, basis[0])) == 0 for r in rows)
    assert len(nullspace([], width=3)) == 3
    assert affine_rank([(0, 0), (1, 1), (2, 2)]) == 1
    assert affine_rank([(0, 0), (1, 0), (0, 1)]) == 2


def test_poly_arithmetic_and_pretty():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    p = 4 + 4 * x - y
    assert p.pretty() == "4+4x-y"
    assert (p * p).degree() == 2
    assert (p - p).is_zero()
    assert p.evaluate([Fraction(-1), Fraction(0)]) == 0
    assert (x * y - 1).pretty(["a", "b"]) == "-1+a*b"


def test_poly_homogenize_and_substitute():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    p = 4 + 4 * x - y
    h = p.homogenize()
    assert h.is_homogeneous() and h.nvars == 3
    assert h.pretty(["X0", "X1", "X2"]) == "4X0+4X1-X2"
    # y = 1 + x
    s = p.substitute(1, 1 + x)
    assert s.nvars == 1
    assert s.pretty() == "3+3x"


def test_exact_division_by_linear_form():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    ell = LinForm(1, (1, -1))
    product = (3 + x * y) * ell.to_poly()
    assert poly_exact_div(product, ell) == 3 + x * y
    assert poly_exact_div(product + 1, ell) is None
    assert poly_exact_div(Poly.constant(2, 5), ell) is None


def test_linform_normalization():
    f = LinForm(Fraction(-8), (Fraction(4), Fraction(2)))
    assert f.normalized() == LinForm(4, (-2, -1))
    assert f.normalization_factor() == -2
    assert f.pivot() == 1
    assert LinForm(0, (1, 0)).pivot() == 0
    with pytest.raises(InputFormatError):
        LinForm(0, (0, 0))


def test_poly_mul_and_eval():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    product = poly_mul(x + 1, y - x)
    assert product == (x + 1) * (y - x)
    assert poly_eval(product, [Fraction(1, 2), 3]) == Fraction(15, 4)
    with pytest.raises(DimensionMismatchError):
        poly_mul(x, Poly.variable(1, 0))


# ---- случайные многочлены и матрицы ----

SEEDS = range(12)


def random_fraction(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))


def random_poly(rng: np.random.Generator, nvars: int, terms: int = 6, degree: int = 3) -> Poly:
    return Poly(nvars, {
        tuple(int(e) for e in rng.integers(0, degree + 1, size=nvars)): random_fraction(rng)
        for _ in range(terms)
    })


def random_linform(rng: np.random.Generator, nvars: int) -> LinForm:
    while True:
        coeffs = tuple(random_fraction(rng) for _ in range(nvars))
        if any(coeffs):
            return LinForm(random_fraction(rng), coeffs)


def random_point(rng: np.random.Generator, nvars: int):
    return [random_fraction(rng) for _ in range(nvars)]


def cofactor_det(rows) -> Fraction:
    """Разложение по первой строке"""
    if not rows:
        return Fraction(1)
    total = Fraction(0)
    for j, a in enumerate(rows[0]):
        if a:
            minor = [row[:j] + row[j + 1:] for row in rows[1:]]
            total += (-1) ** j * a * cofactor_det(minor)
    return total


@pytest.mark.parametrize("seed", SEEDS)
def test_exact_division_recovers_quotient(seed):
    rng = np.random.default_rng(Config.SEED + seed)
    q = random_poly(rng, 3)
    ell = random_linform(rng, 3)
    product = q * ell.to_poly()
    assert poly_exact_div(product, ell) == q
    assert poly_exact_div(product + 1, ell) is None


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_det_agrees_with_cofactor_expansion(n):
    rng = np.random.default_rng(Config.SEED + n)
    rows = [[random_fraction(rng) for _ in range(n)] for _ in range(n)]
    m = RatMatrix.from_rows(rows)
    assert det(m) == det(m.transpose()) == cofactor_det(rows)


@pytest.mark.parametrize("seed", SEEDS)
def test_fraction_field_laws(seed):
    rng = np.random.default_rng(Config.SEED + seed)
    a, b, c = (random_fraction(rng) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * (1 / a) == 1
    assert parse_rat(format_rat(a)) == a


@pytest.mark.parametrize("seed", SEEDS)
def test_poly_ring_laws_and_evaluation(seed):
    rng = np.random.default_rng(Config.SEED + seed)
    p, q, r = (random_poly(rng, 3) for _ in range(3))
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert (p - p).is_zero()
    x = random_point(rng, 3)
    assert (p * q + r).evaluate(x) == p.evaluate(x) * q.evaluate(x) + r.evaluate(x)
    assert p.evaluate([complex(v) for v in x]) == pytest.approx(complex(p.evaluate(x)))


# ---- целочисленное ядро ----

@pytest.mark.parametrize("seed", SEEDS)
def test_int_poly_keeps_value(seed):
    rng = np.random.default_rng(Config.SEED + seed)
    p = random_poly(rng, 4)
    packed, den = IntPoly.from_poly(p)
    assert den > 0
    assert all(isinstance(c, int) for c in packed.terms.values())
    assert packed.to_poly(Fraction(1, den)) == p
    x = random_point(rng, 4)
    assert packed.evaluate(x) / den == sum(
        (c * prod((v ** k for v, k in zip(x, e)), start=Fraction(1)) for e, c in p.terms()), Fraction(0)
    )


@pytest.mark.parametrize("seed", SEEDS)
def test_int_poly_linear_factor(seed):
    rng = np.random.default_rng(Config.SEED + seed)
    ell = random_linform(rng, 3).normalized()
    form = IntLinear(ell)
    q, _ = IntPoly.from_poly(random_poly(rng, 3))
    product = q.mul_linear(form)
    assert product.to_poly() == q.to_poly() * ell.to_poly()
    assert product.vanishes_on(form)
    assert product.div_linear(form).terms == q.terms

    shifted = product.combine(1, IntPoly(3, {0: 1}), 1)
    assert not shifted.vanishes_on(form)
    assert shifted.div_linear(form) is None


def test_int_linear_rejects_constant_and_fractional_forms():
    with pytest.raises(ValueError):
        IntLinear(LinForm(3, (0, 0)))
    with pytest.raises(ValueError):
        IntLinear(LinForm(1, (Fraction(1, 2), 1)))


@pytest.mark.parametrize("seed", SEEDS)
def test_substitution_matches_evaluation(seed):
    rng = np.random.default_rng(Config.SEED + seed)
    p = random_poly(rng, 3)
    x = random_point(rng, 3)
    affine = Poly.constant(3, random_fraction(rng)) + random_fraction(rng) * Poly.variable(3, 0)
    quadratic = affine * Poly.variable(3, 2) + random_fraction(rng)
    for expression in (affine, quadratic):
        value = expression.evaluate(x)
        substituted = p.substitute(1, expression)
        assert substituted.nvars == 2
        assert substituted.evaluate([x[0], x[2]]) == p.evaluate([x[0], value, x[2]])
