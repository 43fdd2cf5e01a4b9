"""
Тесты вычетов и рекурсии вычетов
"""
from fractions import Fraction

import pytest

from conftest import unit_simplex
from errors import NonSimplePoleError
from form_engines import canon_dual_cone, canon_triangulation, interval_form
from polynomial import LinForm
from polytope import hull_from_vertices
from residues import interval_residues, recursion_verify, residue, residue_signs


def test_residue_along_x_equals_unit_interval(quad):
    form = canon_triangulation(quad)
    res = residue(form, quad.facets[0], quad)
    assert res.pretty() == "1/(y*(1-y)) dy"
    assert res.chart.pretty() == "x = 0"
    assert res == interval_form(0, 1)


def test_residue_along_slanted_facet(quad):
    form = canon_triangulation(quad)
    res = residue(form, quad.facets[2], quad)
    assert res.pretty() == "1/(x*(1-x)) dx"
    assert res.chart.pretty() == "y = 1+x"
    assert res.chart.kept == (0,)


def test_residue_does_not_depend_on_facet_scale(quad):
    form = canon_triangulation(quad)
    scaled = LinForm(-3, (-3, 3))
    assert residue(form, scaled) == residue(form, quad.facets[2])


def test_interval_endpoint_residues():
    assert interval_residues(interval_form(0, 1)) == {"0": 1, "1": -1}
    assert interval_residues(interval_form(-2, Fraction(1, 3))) == {"-2": 1, "1/3": -1}


def test_residue_rejects_non_poles(quad):
    form = canon_triangulation(quad)
    with pytest.raises(NonSimplePoleError):
        residue(form, LinForm(1, (1, 1)))
    with pytest.raises(NonSimplePoleError):
        residue(form, LinForm(1, (0, 0)))


def test_recursion_quad(quad):
    report = recursion_verify(quad)
    assert report.passed
    signs = residue_signs(report)
    # 4 грани и по 2 вершины на каждой
    assert len([flag for flag in signs if len(flag) == 1]) == 4
    assert len([flag for flag in signs if len(flag) == 2]) == 8
    leaves = [w["leaf"] for w in report.witnesses if "leaf" in w]
    assert len(leaves) == 8 and set(leaves) <= {1, -1}
    assert signs[(0,)] == 1 and signs[(2,)] == 1


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_recursion_unit_simplex(dim):
    report = recursion_verify(unit_simplex(dim))
    assert report.passed
    leaves = [w for w in report.witnesses if "leaf" in w]
    # Полных флагов у симплекса (d+1)!
    expected = 1
    for k in range(2, dim + 2):
        expected *= k
    assert len(leaves) == expected


def test_recursion_random_hull_3d():
    points = [(0, 0, 0), (3, 0, 0), (0, 3, 0), (0, 0, 3), (2, 2, 1), (1, 2, 2), (2, 1, 2), (-1, 1, 1)]
    p = hull_from_vertices(3, points)
    assert recursion_verify(p).passed
    assert recursion_verify(p, engine=canon_dual_cone).passed
