"""
Сопряженный многочлен (adjoint) и остаточное расположение
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from canonical_form import homogenize
from config import Config
from errors import DegreeBalanceError, UnsupportedDimensionError
from exact_core import RatVector, format_rat, nullspace, primitive_integer_vector, rank
from form_engines import canon_triangulation
from models import CheckReport
from polynomial import LinForm, Poly
from polytope import Polytope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidualFlat:
    """
    Пересечение гиперплоскостей граней в однородных координатах

    facets - все грани, гиперплоскости которых содержат плоскость;
    basis - базис соответствующего линейного подпространства R^{d+1}.
    """

    facets: FrozenSet[int]
    equations: Tuple[LinForm, ...]
    basis: Tuple[RatVector, ...]

    @property
    def dimension(self) -> int:
        """Проективная размерность"""
        return len(self.basis) - 1

    def point(self) -> Optional[Tuple[int, ...]]:
        """Однородные координаты (примитивные целые) для нульмерной плоскости"""
        if self.dimension != 0:
            return None
        vector = primitive_integer_vector(self.basis[0])
        first = next(x for x in vector if x != 0)
        return tuple(-x for x in vector) if first < 0 else vector

    def affine_point(self) -> Optional[RatVector]:
        """Аффинная точка (None для точки на бесконечности или плоскости большей размерности)"""
        if self.dimension != 0 or self.basis[0][0] == 0:
            return None
        x0 = self.basis[0][0]
        return tuple(x / x0 for x in self.basis[0][1:])

    def describe(self) -> Dict[str, Any]:
        entry: Dict[str, Any] = {"facets": sorted(self.facets), "dimension": self.dimension}
        if self.point() is not None:
            entry["point"] = list(self.point())
        if self.affine_point() is not None:
            entry["affine"] = [format_rat(x) for x in self.affine_point()]
        return entry


@dataclass(frozen=True)
class ResidualArrangement:
    flats: Tuple[ResidualFlat, ...]

    def points(self) -> List[Tuple[int, ...]]:
        return [f.point() for f in self.flats if f.point() is not None]


def adjoint(p: Polytope) -> Poly:
    """
    Сопряженный многочлен A_P: однородный числитель Ω(P)

    Args:
        p: многогранник с f гранями

    Returns:
        Однородный многочлен от X₀…X_d степени f−d−1, примитивный, со старшим
        (grevlex) коэффициентом > 0
    """
    form = canon_triangulation(p)
    if len(form.poles) != len(p.facets):
        raise DegreeBalanceError(
            f"У формы {len(form.poles)} полюсов, а у многогранника {len(p.facets)} граней"
        )
    numerator = homogenize(form).numerator.primitive()
    expected = len(p.facets) - p.dim - 1
    if numerator.degree() != expected:
        raise DegreeBalanceError(f"Степень сопряженного многочлена {numerator.degree()} вместо {expected}")
    return numerator


def _check_dimension(p: Polytope):
    if p.dim > Config.MAX_RESIDUAL_DIM:
        raise UnsupportedDimensionError(
            f"Остаточное расположение строится для d ≤ {Config.MAX_RESIDUAL_DIM}, получено d = {p.dim}"
        )


def residual_arrangement(p: Polytope) -> ResidualArrangement:
    """
    Максимальные пересечения гиперплоскостей граней, не пересекающие P

    Плоскость определяется множеством всех граней, ее содержащих; она не
    пересекает P ровно тогда, когда ни одна вершина не лежит на всех этих гранях.
    """
    _check_dimension(p)
    vectors = [f.vector() for f in p.facets]
    flats: Dict[FrozenSet[int], ResidualFlat] = {}
    seen = set()
    for size in range(1, p.dim + 1):
        for subset in itertools.combinations(range(len(vectors)), size):
            basis = nullspace([vectors[i] for i in subset], width=p.dim + 1)
            if not basis:
                continue
            closure = frozenset(
                i for i, v in enumerate(vectors)
                if all(sum((a * b for a, b in zip(v, u)), Fraction(0)) == 0 for u in basis)
            )
            if closure in seen:
                continue
            seen.add(closure)
            touching = frozenset.intersection(*(p.incidence[i] for i in closure))
            if touching:
                continue
            flats[closure] = ResidualFlat(
                closure, tuple(p.facets[i].homogenized() for i in sorted(closure)), tuple(basis)
            )

    # Максимальные плоскости: меньшее множество граней - большая плоскость
    maximal = [
        flat for key, flat in flats.items()
        if not any(other < key for other in flats)
    ]
    maximal.sort(key=lambda flat: (-flat.dimension, sorted(flat.facets)))
    logger.info(f"Остаточное расположение: {len(maximal)} плоскостей")
    return ResidualArrangement(tuple(maximal))


def _restrict_to_flat(poly: Poly, flat: ResidualFlat) -> Poly:
    """Ограничение однородного многочлена на плоскость: X = Σ tⱼ·basisⱼ"""
    k = len(flat.basis)
    images = []
    for i in range(poly.nvars):
        image = Poly.zero(k)
        for j, b in enumerate(flat.basis):
            if b[i]:
                image = image + Poly.variable(k, j) * b[i]
        images.append(image)
    return poly.compose_linear(images)


def adjoint_vanishing_check(p: Polytope) -> CheckReport:
    """Сопряженный многочлен тождественно обращается в нуль на каждой остаточной плоскости"""
    _check_dimension(p)
    a = adjoint(p)
    witnesses: List[Dict[str, Any]] = [{"adjoint": a.pretty([f"X{i}" for i in range(p.dim + 1)])}]
    for flat in residual_arrangement(p).flats:
        entry = flat.describe()
        if not _restrict_to_flat(a, flat).is_zero():
            entry["mismatch"] = True
        witnesses.append(entry)
    report = CheckReport.from_witnesses("adjoint-vanishing", witnesses)
    logger.info(f"Обращение adjoint в нуль: {'✅' if report.passed else '❌'} ({len(witnesses) - 1} плоскостей)")
    return report


def _monomials(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    if nvars == 1:
        return [(degree,)]
    result = []
    for first in range(degree, -1, -1):
        for rest in _monomials(nvars - 1, degree - first):
            result.append((first,) + rest)
    return result


def adjoint_interpolation_probe(p: Polytope) -> CheckReport:
    """
    Размерность пространства однородных многочленов степени f−d−1, обращающихся
    в нуль на остаточном расположении

    Интерполяция единственна, если эта размерность равна 1. Проверка проходит,
    если adjoint лежит в этом пространстве.
    """
    _check_dimension(p)
    degree = len(p.facets) - p.dim - 1
    monomials = _monomials(p.dim + 1, degree)
    arrangement = residual_arrangement(p)

    rows: List[List[Fraction]] = []
    for flat in arrangement.flats:
        restricted = [_restrict_to_flat(Poly.monomial(m), flat) for m in monomials]
        exponents = sorted({e for poly in restricted for e, _ in poly.terms()})
        for e in exponents:
            rows.append([poly.coefficient(e) for poly in restricted])

    solution_dim = len(monomials) - (rank(rows) if rows else 0)
    a = adjoint(p)
    in_space = all(_restrict_to_flat(a, flat).is_zero() for flat in arrangement.flats)
    witness: Dict[str, Any] = {
        "degree": degree,
        "monomials": len(monomials),
        "conditions": len(rows),
        "solution_dim": solution_dim,
        "unique": solution_dim == 1,
        "adjoint_in_space": in_space,
    }
    if not in_space:
        witness["mismatch"] = True
    return CheckReport.from_witnesses("adjoint-interpolation", [witness])
