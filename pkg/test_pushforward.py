"""
Тесты мономиального отображения и численной проверки прямого образа
"""
import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
import sympy

from errors import (
    DimensionMismatchError, InputFormatError, OrientedMatroidError, UnsupportedDimensionError,
)
from polynomial import Poly
from pushforward import (
    build_map, factorization_check, oriented_matroid_check, preimages, pushforward_check,
    resultant, summarize_pushforward,
)

# Вершины четырехугольника в однородных координатах и единичный квадрат решетки
W = [(1, 0, 0), (1, 2, 0), (1, 1, 2), (1, 0, 1)]
V = [(1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)]

W_1D = [(1, 0), (1, 1)]
V_1D = [(1, 0), (1, 1)]


def test_oriented_matroid_matches():
    report = oriented_matroid_check(W, V)
    assert report.passed
    assert report.witnesses[0]["subsets"] == 4


def test_oriented_matroid_mismatch():
    swapped = [V[1], V[0], V[2], V[3]]
    report = oriented_matroid_check(W, swapped)
    assert not report.passed
    assert report.mismatches[0]["subset"] == [0, 1, 2]
    with pytest.raises(OrientedMatroidError):
        build_map(W, swapped)


def test_configuration_errors():
    with pytest.raises(DimensionMismatchError):
        oriented_matroid_check(W, V[:3])
    with pytest.raises(InputFormatError):
        oriented_matroid_check(W, [(1, 0, 0), (1, Fraction(1, 2), 0), (1, 1, 1), (1, 0, 1)])
    with pytest.raises(InputFormatError):
        oriented_matroid_check(W, [(2, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)])


def test_build_map_components():
    m = build_map(W, V)
    assert m.d == 2
    assert m.shift == (0, 0)
    assert m.components[0] == Poly(2, {(0, 0): 1, (1, 0): 1, (1, 1): 1, (0, 1): 1})
    assert m.components[1] == Poly(2, {(1, 0): 2, (1, 1): 1})
    assert m.components[2] == Poly(2, {(1, 1): 2, (0, 1): 1})
    # Положительный тор переходит внутрь многогранника
    x = m.evaluate([Fraction(1), Fraction(1)])
    assert x == (Fraction(3, 4), Fraction(3, 4))


def test_build_map_shifts_negative_exponents():
    m = build_map([(1, 1), (1, 0)], [(1, 0), (1, -1)])
    assert m.shift == (1,)
    assert m.evaluate([Fraction(1, 2)]) == (Fraction(1, 3),)


def test_one_dimensional_preimage():
    m = build_map(W_1D, V_1D)
    assert m.evaluate([Fraction(1, 2)]) == (Fraction(1, 3),)
    assert preimages(m, [Fraction(1, 3)]) == [(0.5 + 0j,)]


def test_two_dimensional_preimages_against_sympy():
    m = build_map(W, V)
    zs = sorted(preimages(m, [Fraction(1, 2), Fraction(1, 2)]), key=lambda z: z[0].real)
    assert len(zs) == 2
    root = 1 / math.sqrt(5)
    assert zs[0][0].real == pytest.approx(-root)
    assert zs[1][0].real == pytest.approx(root)

    z1, z2 = sympy.symbols("z1 z2")
    n0 = 1 + z1 + z1 * z2 + z2
    solutions = sympy.solve(
        [2 * z1 + z1 * z2 - n0 / 2, 2 * z1 * z2 + z2 - n0 / 2], [z1, z2], dict=True
    )
    expected = [
        (complex(s[z1]), complex(s[z2])) for s in solutions if s[z1] != 0 and s[z2] != 0
    ]
    expected.sort(key=lambda z: z[0].real)
    assert len(expected) == 2
    for got, want in zip(zs, expected):
        assert got[0] == pytest.approx(want[0], abs=1e-10)
        assert got[1] == pytest.approx(want[1], abs=1e-10)


def test_resultant_eliminating_z2():
    m = build_map(W, V)
    half = Fraction(1, 2)
    e1 = m.components[1] - m.components[0] * half
    e2 = m.components[2] - m.components[0] * half
    assert resultant(e1, e2, 1) == [Fraction(1, 2), 0, Fraction(-5, 2)]


def test_pushforward_quad():
    reports = pushforward_check(W, V, nsamples=10, seed=3)
    assert len(reports) == 10
    for r in reports:
        assert r.degree_found == 2
        assert r.rel_err < 1e-9
        assert abs(r.lhs_imag) < 1e-9
        assert r.passed
    summary = summarize_pushforward(reports, V)
    assert summary.passed
    assert summary.witnesses[0]["degrees"] == [2]
    assert summary.witnesses[0]["normalized_volume"] == "2"


def test_pushforward_threads_keep_order():
    single = pushforward_check(W, V, nsamples=4, seed=5, threads=1)
    many = pushforward_check(W, V, nsamples=4, seed=5, threads=3)
    assert [r.sample for r in single] == [r.sample for r in many]


def test_pushforward_interval_is_exact():
    reports = pushforward_check(W_1D, V_1D, nsamples=5)
    for r in reports:
        assert r.degree_found == 1
        x = r.sample[0]
        assert r.exact_lhs == 1 / (x * (1 - x))
        assert r.abs_err == 0
    assert summarize_pushforward(reports, V_1D).passed


def test_summary_flags_failed_sample():
    reports = pushforward_check(W_1D, V_1D, nsamples=2)
    broken = [reports[0], reports[1].model_copy(update={"passed": False, "rel_err": 0.5})]
    summary = summarize_pushforward(broken)
    assert not summary.passed
    assert summary.mismatches[0]["sample"] == 1


def test_factorization():
    assert factorization_check(build_map(W, V)).passed
    assert factorization_check(build_map([(1, 1), (1, 0)], [(1, 0), (1, -1)])).passed


def test_pushforward_dimension_limit():
    simplex = [(1, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1)]
    with pytest.raises(UnsupportedDimensionError):
        pushforward_check(simplex, simplex, nsamples=1)


def test_derivatives_ready_and_shared_between_threads():
    m = build_map(W, V)
    for k in range(3):
        for j in range(2):
            assert m.derivative(k, j) == m.components[k].derivative(j)
    points = [(Fraction(1, n), Fraction(n, 3)) for n in range(1, 9)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(m.jacobian, points))
    assert parallel == [m.jacobian(z) for z in points]
    with pytest.raises(dataclasses.FrozenInstanceError):
        m.derivatives = ()
