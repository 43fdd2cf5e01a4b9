"""
Тесты трех методов вычисления канонической формы и однородной записи
"""
from fractions import Fraction

import numpy as np
import pytest
import sympy

from canonical_form import CanonicalForm, homogenize, sum_forms
from checks import interior_samples
from conftest import random_polytope, unit_simplex
from errors import (
    DegeneratePolytopeError, DegreeBalanceError, InputFormatError, NotASimplexError, SubdivisionError,
)
from form_engines import (
    canon_dual_cone, canon_dual_volume, canon_triangulation, canon_union, canonical_form,
    dual_volume_terms, interval_form, interval_union_form, laplace_terms, simplex_form,
)
from models import CanonicalFormModel
from polynomial import LinForm, Poly
from polytope import hull_from_vertices, normalized_volume, polar_at, pulling_triangulation

QUAD_FORM = "(4+4x-y)/(x*y*(1+x-y)*(4-2x-y)) dx^dy"


def as_sympy(form: CanonicalForm):
    """Рациональная функция формы в sympy: независимая проверка сокращения"""
    symbols = sympy.symbols(list(form.varnames))
    if not isinstance(symbols, (list, tuple)):
        symbols = [symbols]

    def poly(p: Poly):
        return sum(
            sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** e for s, e in zip(symbols, exp)])
            for exp, c in p.terms()
        )

    return form.sign * poly(form.numerator) / poly(form.denominator()), symbols


def test_interval_form():
    f = interval_form(0, 1)
    assert f.pretty() == "1/(x*(1-x)) dx"
    g = interval_form(-1, 1)
    assert g.evaluate([0]) == 2
    assert g.pretty() == "2/((1+x)*(1-x)) dx"
    with pytest.raises(DegeneratePolytopeError):
        interval_form(1, 1)


def test_interval_form_is_difference_of_dlogs():
    a, b = Fraction(1, 3), Fraction(5, 2)
    f = interval_form(a, b)
    left = CanonicalForm.build(1, Poly.one(1), [LinForm(-a, (1,))])
    right = CanonicalForm.build(1, Poly.one(1), [LinForm(-b, (1,))])
    assert f.equivalent(left - right)


def test_interval_union_form():
    f = interval_union_form([(2, 3), (0, 1)])
    assert len(f.poles) == 4
    assert f.evaluate([Fraction(3, 2)]) == Fraction(-8, 3)
    # Числитель пропорционален x²−3x+3: нули только комплексные
    a, b, c = (f.numerator.coefficient((k,)) for k in (2, 1, 0))
    assert b == -3 * a and c == 3 * a
    with pytest.raises(SubdivisionError):
        interval_union_form([(0, 1), (1, 2)])


def test_simplex_forms_of_triangulation_pieces(t1, t2):
    assert simplex_form(t1).pretty() == "2/(x*y*(2-x-2y)) dx^dy"
    # Положительна внутри T₂: полюс 2−x−2y там отрицателен, знак уходит в числитель
    assert simplex_form(t2).pretty() == "-9/((1+x-y)*(2-x-2y)*(4-2x-y)) dx^dy"
    assert simplex_form(t2).evaluate(t2.centroid) > 0
    assert (simplex_form(t1) + simplex_form(t2)).pretty() == QUAD_FORM


def test_unit_triangle_form(unit_triangle):
    assert simplex_form(unit_triangle).pretty() == "1/(x*y*(1-x-y)) dx^dy"


def test_simplex_form_rejects_non_simplex(quad):
    with pytest.raises(NotASimplexError):
        simplex_form(quad)


@pytest.mark.parametrize("method", ["triangulation", "dualvol", "laplace"])
def test_quad_golden_all_methods(quad, method):
    form = canonical_form(quad, method)
    assert form.pretty() == QUAD_FORM
    assert form.evaluate([Fraction(1, 2), Fraction(1, 2)]) == Fraction(44, 5)


def test_quad_golden_sympy_oracle(quad):
    expr, (x, y) = as_sympy(canon_triangulation(quad))
    expected = (4 + 4 * x - y) / (x * y * (1 + x - y) * (4 - 2 * x - y))
    assert sympy.cancel(expr - expected) == 0


def test_triangulation_independent_of_pulling_order(quad):
    assert canon_triangulation(quad, order=[2, 3, 0, 1]) == canon_triangulation(quad)


def test_unit_square_is_product_of_interval_forms(unit_square):
    product = interval_form(0, 1).wedge(interval_form(0, 1).with_varnames(["y"]))
    for method in ("triangulation", "dualvol", "laplace"):
        assert canonical_form(unit_square, method) == product
    assert product.pretty() == "1/(x*y*(1-x)*(1-y)) dx^dy"


def test_dual_volume_terms_quad(quad):
    terms = sorted(t.pretty() for t in dual_volume_terms(quad))
    assert terms == sorted([
        "1/(x*y) dx^dy",
        "1/(x*(1+x-y)) dx^dy",
        "3/((1+x-y)*(4-2x-y)) dx^dy",
        "2/(y*(4-2x-y)) dx^dy",
    ])


def test_dual_volume_small_cases(unit_interval, unit_triangle):
    assert canon_dual_volume(unit_interval).pretty() == "1/(x*(1-x)) dx"
    assert len(dual_volume_terms(unit_triangle)) == 3
    assert canon_dual_volume(unit_triangle) == simplex_form(unit_triangle)


def test_laplace_terms_quad(quad):
    terms = [t.pretty() for t in laplace_terms(quad)]
    assert sorted(terms) == sorted([
        "1/(X1*X2*(X0+X1-X2))",
        "6/(X2*(X0+X1-X2)*(4X0-2X1-X2))",
    ])
    assert all(t.degree == -3 for t in laplace_terms(quad))
    assert canon_dual_cone(quad).pretty() == QUAD_FORM


def test_dual_volume_equals_polar_area(quad):
    form = canon_dual_volume(quad)
    for point in [(Fraction(1, 2), Fraction(1, 2)), (Fraction(1), Fraction(1, 3)), quad.centroid]:
        assert form.evaluate(point) == normalized_volume(polar_at(quad, point))


def test_homogenize_degree_balance(quad, unit_square, unit_triangle):
    h = homogenize(canon_triangulation(quad))
    assert h.degree == -3
    assert h.numerator.pretty(["X0", "X1", "X2"]) == "4X0+4X1-X2"
    square = homogenize(canon_triangulation(unit_square))
    assert square.numerator.pretty(["X0", "X1", "X2"]) == "X0"
    assert square.degree == -3
    simplex = homogenize(simplex_form(unit_triangle))
    assert simplex.numerator.is_constant()
    assert len(simplex.poles) == 3
    assert simplex.specialize() == simplex_form(unit_triangle)


def test_homogenize_rejects_unbalanced():
    x = Poly.variable(1, 0)
    f = CanonicalForm.build(1, x * x, [LinForm(0, (1,))])
    with pytest.raises(DegreeBalanceError):
        homogenize(f)


def test_build_cancels_common_factors():
    x = Poly.variable(2, 0)
    ell = LinForm(1, (1, -1))
    f = CanonicalForm.build(2, (x + 2) * ell.to_poly() * -2, [ell, LinForm(0, (2, 0)), LinForm(0, (0, -1))])
    assert f.poles == (LinForm(0, (1, 0)), LinForm(0, (0, 1)))
    assert f.sign == 1
    assert f.pretty() == "(2+x)/(x*y) dx^dy"


def test_canon_union_of_non_convex_region():
    left = hull_from_vertices(2, [(0, 0), (1, 0), (1, 1), (0, 1)])
    right = hull_from_vertices(2, [(1, 0), (2, 0), (2, 2), (1, 2)])
    region = canon_union([left, right])
    point = [Fraction(1, 2), Fraction(1, 2)]
    assert region.evaluate(point) == canon_triangulation(left).evaluate(point) + canon_triangulation(right).evaluate(point)
    with pytest.raises(SubdivisionError):
        canon_union([left, hull_from_vertices(2, [(0, 0), (2, 0), (0, 2)])])


def test_form_json_round_trip(quad):
    form = canon_triangulation(quad)
    model = CanonicalFormModel.from_form(form)
    text = model.model_dump_json()
    again = CanonicalFormModel.model_validate_json(text)
    assert again.to_form() == form
    assert again.model_dump_json() == text
    assert model.poles[0].c0 == 0 and model.poles[0].coeffs == [1, 0]


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_simplex_methods_agree(dim):
    s = unit_simplex(dim)
    reference = simplex_form(s)
    assert canon_triangulation(s) == reference
    assert canon_dual_volume(s) == reference
    assert canon_dual_cone(s) == reference
    assert reference.numerator == Poly.one(dim)


def test_unknown_method_rejected(quad):
    with pytest.raises(InputFormatError):
        canonical_form(quad, "bogus")


# ---- суммирование больших форм ----

def test_ten_points_in_dimension_four():
    p = random_polytope(np.random.default_rng(99), 4, 10)
    form = canon_triangulation(p)
    assert {p.facet_index(pole) for pole in form.poles} == set(range(len(p.facets)))
    assert canon_dual_volume(p) == form
    assert canon_dual_cone(p) == form


@pytest.mark.parametrize("seed", [3, 11])
def test_tree_sum_matches_pointwise_sum(seed):
    p = random_polytope(np.random.default_rng(seed), 3, 10)
    forms = [simplex_form(hull_from_vertices(3, s)) for s in pulling_triangulation(p).simplices(p)]
    total = sum_forms(forms, 3)
    sequential = CanonicalForm.zero(3)
    for f in reversed(forms):
        sequential = sequential + f
    assert total == sequential == canon_triangulation(p)
    for point in interior_samples(p, 5, seed=seed):
        assert total.evaluate(point) == sum((f.evaluate(point) for f in forms), Fraction(0))


def test_sum_of_opposite_forms_is_zero(quad):
    form = canon_triangulation(quad)
    assert sum_forms([form, -form], 2).is_zero()
    assert (form - form).poles == ()
