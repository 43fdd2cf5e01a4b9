"""
Три независимых способа вычисления канонической формы многогранника

1. Триангуляция: сумма форм симплексов (|det M| / ∏ℓᵢ).
2. Двойственный объем: Vol((P−x)^∨) как сумма по вершинам и симплициальным
   подконусам нормального конуса.
3. Двойственный конус: преобразование Лапласа конуса C^∨, замкнутая форма
   по симплициальным конусам, затем X = (1, x).
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from canonical_form import CanonicalForm, HomogeneousForm, sum_forms
from errors import (
    DegeneratePolytopeError, DimensionMismatchError, InputFormatError, NonInteriorPointError,
    NotASimplexError, SubdivisionError,
)
from exact_core import RatMatrix, det, format_rat, parse_rat, primitive_integer_vector
from polynomial import LinForm, Poly
from polytope import (
    Polytope, cone_triangulation, dual_cone, hull_from_vertices, interior_intersection,
    minkowski_sum, normal_fan, pulling_triangulation,
)

logger = logging.getLogger(__name__)

METHODS = ("triangulation", "dualvol", "laplace")


def interval_form(a, b) -> CanonicalForm:
    """
    Форма отрезка [a, b]: (b−a)/((x−a)(b−x)) dx

    Вычет +1 в точке a и −1 в точке b.
    """
    a, b = parse_rat(a), parse_rat(b)
    if a >= b:
        raise DegeneratePolytopeError(f"Отрезок [{format_rat(a)}, {format_rat(b)}] пуст или вырожден")
    return CanonicalForm.build(1, Poly.constant(1, b - a), [LinForm(-a, (1,)), LinForm(b, (-1,))])


def interval_union_form(intervals: Sequence[Tuple]) -> CanonicalForm:
    """Форма объединения попарно непересекающихся замкнутых отрезков"""
    parsed = sorted((parse_rat(a), parse_rat(b)) for a, b in intervals)
    for (a1, b1), (a2, b2) in zip(parsed, parsed[1:]):
        if b1 >= a2:
            raise SubdivisionError(
                f"Отрезки [{format_rat(a1)}, {format_rat(b1)}] и [{format_rat(a2)}, {format_rat(b2)}] пересекаются"
            )
    return sum_forms((interval_form(a, b) for a, b in parsed), 1)


def simplex_form(t: Polytope) -> CanonicalForm:
    """
    Каноническая форма симплекса

    Args:
        t: d-симплекс

    Returns:
        |det M| / ∏ℓᵢ, где столбцы M - однородные векторы (c0, a) граней
    """
    if not t.is_simplex:
        raise NotASimplexError(f"Ожидался симплекс: {len(t.vertices)} вершин в размерности {t.dim}")
    if t.dim == 0:
        return CanonicalForm.constant(0, 1)
    value = abs(det(RatMatrix.from_columns([f.vector() for f in t.facets])))
    return CanonicalForm.build(t.dim, Poly.constant(t.dim, value), t.facets)


def canon_triangulation(p: Polytope, order: Optional[Sequence[int]] = None) -> CanonicalForm:
    """
    Ω(P) как сумма форм симплексов вытягивающей триангуляции

    Args:
        p: многогранник
        order: приоритет вершин для вытягивания (по умолчанию порядок входа)
    """
    if p.dim == 0:
        return CanonicalForm.constant(0, 1)
    triangulation = pulling_triangulation(p, order)
    forms = [simplex_form(hull_from_vertices(p.dim, s)) for s in triangulation.simplices(p)]
    logger.debug(f"Триангуляция: {len(forms)} симплексов")
    return sum_forms(forms, p.dim)


def _vertex_cone_terms(p: Polytope, offsets: Sequence[LinForm], varnames: Optional[Sequence[str]] = None) -> List[CanonicalForm]:
    """
    Слагаемые |det(a_{i₁},…,a_{i_d})| / ∏ offsets_{iₖ} по вершинам и подконусам нормального веера

    offsets[i] - знаменатель, сопоставленный грани i (ℓᵢ(x) для двойственного объема,
    линейная комбинация опорных значений для смешанного объема).
    """
    nvars = offsets[0].nvars
    terms = []
    fan = normal_fan(p)
    for v, cone in enumerate(fan.maxcones):
        by_ray = {primitive_integer_vector(p.facets[i].coeffs): i for i in p.facets_at(v)}
        for piece in cone_triangulation(cone):
            ids = [by_ray[r] for r in piece.rays]
            value = abs(det(RatMatrix.from_columns([p.facets[i].coeffs for i in ids])))
            terms.append(CanonicalForm.build(nvars, Poly.constant(nvars, value), [offsets[i] for i in ids], varnames))
    return terms


def dual_volume_terms(p: Polytope) -> List[CanonicalForm]:
    """Несокращенные слагаемые двойственного объема (по одному на симплициальный подконус)"""
    return _vertex_cone_terms(p, p.facets)


def canon_dual_volume(p: Polytope) -> CanonicalForm:
    """Ω(P)(x) = Vol((P−x)^∨) в нормировке, где единичный симплекс имеет объем 1"""
    if p.dim == 0:
        return CanonicalForm.constant(0, 1)
    return sum_forms(dual_volume_terms(p), p.dim)


def laplace_terms(p: Polytope) -> List[HomogeneousForm]:
    """
    Слагаемые |det(r₁…r_{d+1})| / ∏(X·rₖ) по симплициальным конусам триангуляции C^∨

    Лучи C^∨ - однородные векторы граней; масштаб каждого луча берется от формы грани.
    """
    by_ray: Dict[Tuple[int, ...], int] = {
        primitive_integer_vector(f.vector()): i for i, f in enumerate(p.facets)
    }
    terms = []
    for piece in cone_triangulation(dual_cone(p)):
        # Множители в порядке граней многогранника
        facets = [p.facets[i] for i in sorted(by_ray[r] for r in piece.rays)]
        value = abs(det(RatMatrix.from_columns([f.vector() for f in facets])))
        terms.append(HomogeneousForm(
            p.dim + 1, Poly.constant(p.dim + 1, value), tuple(f.homogenized() for f in facets)
        ))
    return terms


def canon_dual_cone(p: Polytope) -> CanonicalForm:
    """Сумма слагаемых Лапласа, специализированная в X = (1, x₁, …, x_d)"""
    if p.dim == 0:
        return CanonicalForm.constant(0, 1)
    return sum_forms((term.specialize() for term in laplace_terms(p)), p.dim)


def canonical_form(p: Polytope, method: str = "triangulation") -> CanonicalForm:
    """Ω(P) выбранным методом: triangulation, dualvol или laplace"""
    engines = {
        "triangulation": canon_triangulation,
        "dualvol": canon_dual_volume,
        "laplace": canon_dual_cone,
    }
    if method not in engines:
        raise InputFormatError(f"Неизвестный метод {method!r}, доступны: {', '.join(METHODS)}")
    return engines[method](p)


def dual_mixed_volume(ps: Sequence[Union[Polytope, Sequence[Sequence]]], check_generic: bool = True) -> CanonicalForm:
    """
    Двойственный смешанный объем V^∨(x) = Vol((x₁P₁+⋯+x_rP_r)^∨)

    Комбинаторика суммы берется при весах (1, …, 1); знаменатели граней -
    ℓᵢ(x) = −Σⱼ xⱼ·hⱼ(aᵢ) с опорными значениями hⱼ(a) = min_{v∈Pⱼ} a·v.

    Args:
        ps: слагаемые (многогранники или наборы точек)
        check_generic: проверять независимость комбинаторики от весов

    Returns:
        Рациональная функция от x₁…x_r (как CanonicalForm без смысла дифференциала)
    """
    r = len(ps)
    ms = minkowski_sum(ps, [Fraction(1)] * r, check_generic=check_generic)
    q = ms.polytope
    origin = (Fraction(0),) * q.dim
    for i, f in enumerate(q.facets):
        if f(origin) <= 0:
            raise NonInteriorPointError(f"0 не лежит строго внутри суммы: грань {i} ({f.pretty()}) равна {f(origin)}")
    offsets = [LinForm(0, tuple(-h for h in support)) for support in ms.support]
    varnames = [f"x{j + 1}" for j in range(r)]
    total = sum_forms(_vertex_cone_terms(q, offsets, varnames), r, varnames)
    logger.info(f"Двойственный смешанный объем {r} слагаемых в размерности {q.dim}: {total.pretty()}")
    return total


def canon_union(parts: Sequence[Polytope]) -> CanonicalForm:
    """
    Форма невыпуклой многогранной области, заданной явным разбиением на выпуклые части

    Части должны быть одной размерности и иметь попарно непересекающиеся внутренности.
    """
    if not parts:
        raise SubdivisionError("Пустой список частей")
    dims = {part.dim for part in parts}
    if len(dims) != 1:
        raise DimensionMismatchError(f"Части разных размерностей: {sorted(dims)}")
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            overlap = interior_intersection(parts[i], parts[j])
            if overlap is not None:
                witness = [format_rat(x) for x in overlap.centroid]
                raise SubdivisionError(f"Внутренности частей {i} и {j} пересекаются, например в точке {witness}")
    dim = dims.pop()
    return sum_forms((canon_triangulation(part) for part in parts), dim)
