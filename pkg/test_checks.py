"""
Тесты проверок свойств: совпадение методов, рекурсия, аддитивность,
положительная выпуклость, двойственный смешанный объем
"""
from fractions import Fraction

import numpy as np
import pytest

from adjoint import adjoint
from checks import filliman_check, interior_samples, positive_convexity_check, subdivision_verify
from config import Config
from errors import InputFormatError, SubdivisionError
from form_engines import canon_dual_volume, canon_triangulation, dual_mixed_volume
from polynomial import LinForm
from polytope import hull_from_vertices, split_by_hyperplane
from residues import recursion_verify
from verification_service import VerificationService


# ---- свойства на случайных многогранниках ----

def test_three_methods_agree(property_polytopes):
    for p in property_polytopes:
        report = filliman_check(p)
        assert report.passed, report.mismatches


def test_residue_recursion(property_polytopes):
    for p in property_polytopes:
        assert recursion_verify(p).passed


def test_poles_are_exactly_facets(property_polytopes):
    for p in property_polytopes:
        form = canon_triangulation(p)
        assert len(form.poles) == len(p.facets)
        assert {p.facet_index(pole) for pole in form.poles} == set(range(len(p.facets)))


def test_positive_convexity(property_polytopes):
    for p in property_polytopes:
        report = positive_convexity_check(p, samples=100)
        assert report.passed
        assert report.witnesses[0]["positive"] == 100


def test_adjoint_degree(property_polytopes):
    for p in property_polytopes:
        assert adjoint(p).degree() == len(p.facets) - p.dim - 1


def test_interior_samples_are_interior(quad):
    points = interior_samples(quad, 20, seed=7)
    assert len(points) == 20
    assert all(quad.is_interior(x) for x in points)
    assert points == interior_samples(quad, 20, seed=7)


# ---- аддитивность по разбиениям ----

def test_subdivision_quad_into_triangles(quad, t1, t2):
    report = subdivision_verify(quad, [t1, t2])
    assert report.passed
    assert report.witnesses[0]["volume"] == "5"
    assert report.witnesses[0]["sum"] == report.witnesses[0]["parent"]


def test_subdivision_trivial(quad):
    assert subdivision_verify(quad, [quad]).passed


def test_subdivision_square_diagonal(unit_square):
    parts = split_by_hyperplane(unit_square, LinForm(0, (-1, 1)))
    assert subdivision_verify(unit_square, list(parts)).passed


def test_subdivision_random_slices(property_polytopes):
    rng = np.random.default_rng(Config.SEED)
    for p in property_polytopes[:10]:
        normal = tuple(int(c) for c in rng.integers(1, 5, size=p.dim) * rng.choice([-1, 1], size=p.dim))
        c0 = -sum((a * x for a, x in zip(normal, p.centroid)), Fraction(0))
        parts = split_by_hyperplane(p, LinForm(c0, normal))
        assert subdivision_verify(p, list(parts)).passed


def test_subdivision_errors(quad, t1):
    with pytest.raises(SubdivisionError):
        subdivision_verify(quad, [t1])
    with pytest.raises(SubdivisionError):
        subdivision_verify(quad, [quad, t1])
    with pytest.raises(SubdivisionError):
        subdivision_verify(quad, [hull_from_vertices(2, [(0, 0), (3, 0), (0, 3)])])
    with pytest.raises(SubdivisionError):
        subdivision_verify(quad, [])


# ---- невыпуклая область ----

def test_convexity_fails_for_l_shape():
    bottom = hull_from_vertices(2, [(0, 0), (2, 0), (2, 1), (0, 1)])
    top = hull_from_vertices(2, [(0, 1), (1, 1), (1, 2), (0, 2)])
    report = positive_convexity_check([bottom, top], samples=100)
    assert not report.passed
    assert report.mismatches


def test_convexity_rejects_zero_samples(quad):
    with pytest.raises(InputFormatError):
        positive_convexity_check(quad, samples=0)


# ---- двойственный смешанный объем ----

def test_mixed_volume_of_square():
    square = hull_from_vertices(2, [(-1, -1), (1, -1), (1, 1), (-1, 1)])
    v = dual_mixed_volume([square])
    assert v.evaluate([1]) == 4
    assert v.evaluate([2]) == 1
    assert v.evaluate([Fraction(1, 3)]) == 36


@pytest.mark.parametrize("vertices", [
    [(0, 0), (2, 0), (1, 2), (0, 1)],
    [(0, 0), (2, 0), (2, 2), (0, 2)],
    [(0, 0), (3, 0), (0, 3)],
    [(a, b, c) for a in (0, 2) for b in (0, 2) for c in (0, 2)],
    [(0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4)],
])
def test_mixed_volume_specializes_to_dual_volume(vertices):
    p = hull_from_vertices(len(vertices[0]), vertices)
    d = p.dim
    shifts = [[tuple(-int(i == j) for j in range(d))] for i in range(d)]
    v = dual_mixed_volume(shifts + [p])
    assert v.nvars == d + 1
    assert v.restrict(d, 1) == canon_dual_volume(p)


def test_mixed_volume_is_homogeneous(quad):
    shifts = [[(-1, 0)], [(0, -1)]]
    v = dual_mixed_volume(shifts + [quad])
    assert all(pole.c0 == 0 for pole in v.poles)
    assert v.numerator.is_homogeneous()
    assert v.numerator.degree() - len(v.poles) == -quad.dim


# ---- сервис ----

def test_service_property_table(property_polytopes):
    table = VerificationService(threads=2).property_table(property_polytopes[:4], samples=20)
    assert list(table.columns) == ["dim", "vertices", "facets", "filliman", "recursion", "convexity"]
    assert len(table) == 4
    assert table[["filliman", "recursion", "convexity"]].all().all()


def test_service_check_many(quad, unit_square):
    service = VerificationService(threads=2)
    reports = service.check_many("residual", [quad, unit_square])
    assert [r.name for r in reports] == [
        "adjoint-vanishing", "adjoint-interpolation", "adjoint-vanishing", "adjoint-interpolation",
    ]
    assert all(r.passed for r in reports)
    with pytest.raises(InputFormatError):
        service.check("unknown", quad)


def test_service_canonical_form_all(quad):
    form, report = VerificationService().canonical_form(quad, "all")
    assert report.passed
    assert form == canon_triangulation(quad)
    form, report = VerificationService().canonical_form(quad, "laplace")
    assert report is None
