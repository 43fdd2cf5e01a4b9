"""
Точная геометрия выпуклых многогранников

Выпуклая оболочка, решетка граней, вытягивающая (pulling) триангуляция,
нормальный веер, конусы над многогранником и двойственные конусы, поляры,
суммы Минковского. Все вычисления в рациональных числах.
"""
import itertools
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import Config
from errors import (
    CanformError, DegeneratePolytopeError, DimensionMismatchError, EmptyInteriorError,
    NonGenericWeightsError, NonInteriorPointError, NonPointedConeError, SubdivisionError,
    UnboundedPolyhedronError,
)
from exact_core import (
    RatMatrix, RatVector, affine_rank, det, dot, linear_solve, nullspace,
    primitive_integer_vector, rank, rat_vector, sign,
)
from polynomial import LinForm

logger = logging.getLogger(__name__)

IntVector = Tuple[int, ...]


@dataclass(frozen=True)
class Polytope:
    """
    Полноразмерный многогранник в R^d

    facets - внутренние примитивные целочисленные формы (≥ 0 на многограннике),
    incidence[i] - номера вершин на грани i.
    """

    dim: int
    vertices: Tuple[RatVector, ...]
    facets: Tuple[LinForm, ...]
    incidence: Tuple[FrozenSet[int], ...]
    centroid: RatVector

    @property
    def is_simplex(self) -> bool:
        return len(self.vertices) == self.dim + 1

    def facets_at(self, vertex: int) -> List[int]:
        """Номера граней, содержащих вершину"""
        return [i for i, inc in enumerate(self.incidence) if vertex in inc]

    def contains(self, point: Sequence[Fraction]) -> bool:
        return all(f(point) >= 0 for f in self.facets)

    def is_interior(self, point: Sequence[Fraction]) -> bool:
        return all(f(point) > 0 for f in self.facets)

    def facet_index(self, form: LinForm) -> Optional[int]:
        """Номер грани с той же гиперплоскостью (с точностью до масштаба)"""
        target = form.normalized()
        for i, f in enumerate(self.facets):
            if f.normalized() == target:
                return i
        return None


@dataclass(frozen=True)
class Cone:
    """
    Полиэдральный конус, порожденный лучами

    Лучи - примитивные целые векторы в каноническом (лексикографическом)
    порядке, попарно непараллельные.
    """

    ambient: int
    rays: Tuple[IntVector, ...]
    # (внутренняя нормаль, номера лучей) опорных гиперплоскостей, если они известны заранее
    facet_hint: Optional[Tuple[Tuple[IntVector, FrozenSet[int]], ...]] = field(default=None, compare=False)

    @classmethod
    def from_rays(cls, ambient: int, rays: Sequence[Sequence]) -> "Cone":
        primitive = set()
        for r in rays:
            if len(r) != ambient:
                raise DimensionMismatchError(f"Луч {tuple(r)} не лежит в R^{ambient}")
            vector = primitive_integer_vector(r)
            if not any(vector):
                raise CanformError("Нулевой луч конуса")
            primitive.add(vector)
        return cls(ambient, tuple(sorted(primitive)))

    def contains(self, vector: Sequence[Fraction]) -> bool:
        """Точная проверка принадлежности через симплициальное разбиение"""
        for piece in _simplicial_pieces(self):
            solution = linear_solve(RatMatrix.from_columns(piece.rays), rat_vector(vector))
            if solution is not None and all(c >= 0 for c in solution):
                return True
        return False

    def __repr__(self) -> str:
        return f"Cone({', '.join(str(r) for r in self.rays)})"


@dataclass(frozen=True)
class Triangulation:
    """Куски - (d+1)-элементные множества номеров вершин родительского многогранника"""

    pieces: Tuple[Tuple[int, ...], ...]

    def simplices(self, parent: Polytope) -> List[List[RatVector]]:
        return [[parent.vertices[i] for i in piece] for piece in self.pieces]


@dataclass(frozen=True)
class Fan:
    """Нормальный веер: один максимальный конус на вершину"""

    maxcones: Tuple[Cone, ...]

    def cones_containing(self, direction: Sequence[Fraction]) -> List[int]:
        return [i for i, cone in enumerate(self.maxcones) if cone.contains(direction)]

    def cone_of(self, direction: Sequence[Fraction]) -> Optional[int]:
        """Номер единственного максимального конуса с направлением (None на стыке конусов)"""
        found = self.cones_containing(direction)
        return found[0] if len(found) == 1 else None


@dataclass(frozen=True)
class MinkowskiSum:
    """
    Сумма Минковского Σ wⱼPⱼ и опорные значения слагаемых

    support[i][j] = min по точкам Pⱼ от aᵢ·v, где aᵢ - внутренняя нормаль грани i
    суммы; грань i суммы равна Σ wⱼ·support[i][j] ≤ aᵢ·y.
    """

    polytope: Polytope
    weights: Tuple[Fraction, ...]
    support: Tuple[Tuple[Fraction, ...], ...]


# ---- выпуклая оболочка ----

def _normalize_points(dim: int, points: Sequence[Sequence]) -> List[RatVector]:
    unique: List[RatVector] = []
    seen = set()
    for k, p in enumerate(points):
        if len(p) != dim:
            raise DimensionMismatchError(f"Точка {k} имеет {len(p)} координат, ожидалось {dim}")
        v = rat_vector(p)
        if v not in seen:
            seen.add(v)
            unique.append(v)
    return unique


def _hyperplane_through(points: Sequence[RatVector]) -> Optional[LinForm]:
    """Аффинная гиперплоскость через d точек (None, если они вырождены)"""
    basis = nullspace([(Fraction(1),) + p for p in points], width=len(points[0]) + 1)
    if len(basis) != 1:
        return None
    return LinForm.from_vector(basis[0])


def _facets_1d(points: List[RatVector]) -> List[LinForm]:
    low = min(p[0] for p in points)
    high = max(p[0] for p in points)
    return [LinForm(-low, (1,)).primitive(), LinForm(high, (-1,)).primitive()]


def _cross(o: RatVector, a: RatVector, b: RatVector) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _facets_2d(points: List[RatVector]) -> List[LinForm]:
    """Монотонная цепь Эндрю с точными предикатами ориентации"""
    ordered = sorted(points)
    lower: List[RatVector] = []
    for p in ordered:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[RatVector] = []
    for p in reversed(ordered):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    facets = []
    for a, b in zip(hull, hull[1:] + hull[:1]):
        # Обход против часовой стрелки: внутренность слева от ребра a→b
        facets.append(LinForm(a[0] * b[1] - a[1] * b[0], (a[1] - b[1], b[0] - a[0])).primitive())
    return facets


def _facets_by_candidacy(dim: int, points: List[RatVector], interior: RatVector) -> List[LinForm]:
    """Перебор d-подмножеств точек с проверкой односторонности"""
    found: Dict[Tuple, LinForm] = {}
    for subset in itertools.combinations(points, dim):
        form = _hyperplane_through(subset)
        if form is None:
            continue
        signs = {sign(form(p)) for p in points}
        if 1 in signs and -1 in signs:
            continue
        oriented = form.oriented(interior)
        found.setdefault(oriented.vector(), oriented)
    return list(found.values())


def _assemble(dim: int, candidates: List[RatVector], facets: List[LinForm]) -> Polytope:
    """Отобрать крайние точки, упорядочить грани, посчитать инцидентность"""
    facets = sorted(set(facets), key=lambda f: f.sort_key())
    vertices = []
    dropped = []
    for p in candidates:
        normals = [f.coeffs for f in facets if f(p) == 0]
        if len(normals) >= dim and rank(normals) == dim:
            vertices.append(p)
        else:
            dropped.append(p)
    if dropped:
        logger.warning(f"⚠️ Отброшено {len(dropped)} точек, не являющихся вершинами: {dropped}")
    incidence = tuple(
        frozenset(i for i, v in enumerate(vertices) if f(v) == 0) for f in facets
    )
    centroid = tuple(sum(coord) / len(vertices) for coord in zip(*vertices))
    return Polytope(dim, tuple(vertices), tuple(facets), incidence, centroid)


def hull_from_vertices(dim: int, points: Sequence[Sequence]) -> Polytope:
    """
    Выпуклая оболочка точек (V → H)

    Args:
        dim: размерность пространства d
        points: не менее d+1 точек, аффинно порождающих R^d

    Returns:
        Polytope с крайними точками в порядке входа и внутренними примитивными гранями
    """
    if dim == 0:
        if not points:
            raise DegeneratePolytopeError("Нульмерный многогранник требует одну точку")
        return Polytope(0, ((),), (), (), ())

    unique = _normalize_points(dim, points)
    if len(unique) < dim + 1:
        raise DegeneratePolytopeError(
            f"Нужно не менее {dim + 1} различных точек, получено {len(unique)}"
        )
    span = affine_rank(unique)
    if span < dim:
        raise DegeneratePolytopeError(
            f"Точки лежат в аффинном подпространстве размерности {span} < {dim}"
        )

    if dim == 1:
        facets = _facets_1d(unique)
    elif dim == 2:
        facets = _facets_2d(unique)
    else:
        interior = tuple(sum(c) / len(unique) for c in zip(*unique))
        facets = _facets_by_candidacy(dim, unique, interior)
    return _assemble(dim, unique, facets)


def from_halfspaces(dim: int, facets: Sequence[LinForm]) -> Polytope:
    """
    Перечисление вершин ограниченного H-представления (H → V)

    Args:
        dim: размерность d
        facets: формы ℓ с условием ℓ ≥ 0
    """
    for k, f in enumerate(facets):
        if f.nvars != dim:
            raise DimensionMismatchError(f"Грань {k} задана от {f.nvars} переменных, ожидалось {dim}")
    if dim == 0:
        return hull_from_vertices(0, [()])

    # Ограниченность: конус рецессии {r : a·r ≥ 0} тривиален
    normals = [f.coeffs for f in facets if not f.is_constant()]
    if not normals or rank(normals) < dim:
        raise UnboundedPolyhedronError("Нормали граней не порождают R^d: полиэдр неограничен")
    for subset in itertools.combinations(normals, dim - 1):
        basis = nullspace(list(subset), width=dim)
        if len(basis) != 1:
            continue
        r = basis[0]
        values = {sign(dot(a, r)) for a in normals}
        if values <= {0, 1} or values <= {0, -1}:
            raise UnboundedPolyhedronError(f"Полиэдр неограничен вдоль направления {tuple(r)}")

    points = []
    seen = set()
    for subset in itertools.combinations(facets, dim):
        matrix = RatMatrix.from_rows([f.coeffs for f in subset])
        solution = linear_solve(matrix, [-f.c0 for f in subset])
        if solution is None or solution in seen:
            continue
        if all(f(solution) >= 0 for f in facets):
            seen.add(solution)
            points.append(solution)
    if len(points) < dim + 1 or affine_rank(points) < dim:
        raise EmptyInteriorError("Система неравенств имеет пустую внутренность")
    return hull_from_vertices(dim, points)


# ---- триангуляции ----

class _FaceLattice:
    """Грани как множества номеров точек; ранг кэшируется"""

    def __init__(self, facet_sets: Sequence[FrozenSet[int]], rank_of: Callable[[FrozenSet[int]], int]):
        self.facet_sets = list(facet_sets)
        self._rank_of = rank_of
        self._cache: Dict[FrozenSet[int], int] = {}

    def dimension(self, ids: FrozenSet[int]) -> int:
        if ids not in self._cache:
            self._cache[ids] = self._rank_of(ids)
        return self._cache[ids]

    def facets_of(self, ids: FrozenSet[int], dim: int) -> List[FrozenSet[int]]:
        found = set()
        for facet in self.facet_sets:
            sub = ids & facet
            if sub != ids and len(sub) >= dim and self.dimension(sub) == dim - 1:
                found.add(sub)
        return sorted(found, key=sorted)

    def pull(self, ids: FrozenSet[int], dim: int, priority: Callable[[int], int]) -> List[FrozenSet[int]]:
        """Рекурсивно: конус из вершины с наименьшим приоритетом над гранями без нее"""
        if len(ids) == dim + 1:
            return [ids]
        apex = min(ids, key=priority)
        pieces = []
        for sub in self.facets_of(ids, dim):
            if apex in sub:
                continue
            pieces.extend(piece | {apex} for piece in self.pull(sub, dim - 1, priority))
        return pieces


def simplex_normalized_volume(points: Sequence[RatVector]) -> Fraction:
    """|det(v₁−v₀, …, v_d−v₀)|: единичный симплекс имеет объем 1"""
    base = points[0]
    if len(points) == 1:
        return Fraction(1)
    rows = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    return abs(det(RatMatrix.from_rows(rows)))


def pulling_triangulation(p: Polytope, order: Optional[Sequence[int]] = None) -> Triangulation:
    """
    Вытягивающая триангуляция

    Args:
        p: многогранник
        order: приоритет вершин (по умолчанию - порядок входа, вытягивается первая)

    Returns:
        Triangulation с кусками в детерминированном порядке
    """
    if p.dim == 0:
        return Triangulation(((0,),))
    position = {v: k for k, v in enumerate(order)} if order is not None else {}
    priority = (lambda v: position.get(v, v)) if order is not None else (lambda v: v)
    lattice = _FaceLattice(
        p.incidence, lambda ids: affine_rank([p.vertices[i] for i in sorted(ids)])
    )
    pieces = lattice.pull(frozenset(range(len(p.vertices))), p.dim, priority)
    return Triangulation(tuple(tuple(sorted(piece)) for piece in pieces))


def normalized_volume(p: Polytope) -> Fraction:
    """d! · евклидов объем"""
    return sum(
        (simplex_normalized_volume(s) for s in pulling_triangulation(p).simplices(p)),
        Fraction(0),
    )


# ---- конусы ----

def cone_facets(c: Cone) -> List[Tuple[Tuple[Fraction, ...], FrozenSet[int]]]:
    """Опорные гиперплоскости через начало координат: (внутренняя нормаль, номера лучей)"""
    if c.facet_hint is not None:
        return [(tuple(Fraction(x) for x in normal), ids) for normal, ids in c.facet_hint]
    n = c.ambient
    found: Dict[IntVector, FrozenSet[int]] = {}
    rays = [tuple(Fraction(x) for x in r) for r in c.rays]
    for subset in itertools.combinations(range(len(rays)), n - 1):
        basis = nullspace([rays[i] for i in subset], width=n)
        if len(basis) != 1:
            continue
        normal = basis[0]
        values = [sign(dot(normal, r)) for r in rays]
        if 1 in values and -1 in values:
            continue
        if 1 not in values and -1 not in values:
            continue
        if -1 in values:
            normal = tuple(-x for x in normal)
        key = primitive_integer_vector(normal)
        found[key] = frozenset(i for i, r in enumerate(rays) if dot(normal, r) == 0)
    return [(tuple(Fraction(x) for x in k), v) for k, v in sorted(found.items())]


def cone_triangulation(c: Cone) -> List[Cone]:
    """
    Разбиение острого конуса полного ранга на симплициальные

    Вытягивается луч с наименьшим номером в каноническом порядке лучей.
    """
    n = c.ambient
    if not c.rays or rank(c.rays) < n:
        raise NonPointedConeError(f"Конус {c} не полного ранга в R^{n}")
    if len(c.rays) == n:
        return [c]
    facets = cone_facets(c)
    if not facets or rank([normal for normal, _ in facets]) < n:
        raise NonPointedConeError(f"Конус {c} не острый")
    lattice = _FaceLattice(
        [ids for _, ids in facets], lambda ids: rank([c.rays[i] for i in sorted(ids)]) - 1
    )
    pieces = lattice.pull(frozenset(range(len(c.rays))), n - 1, lambda v: v)
    return [Cone(n, tuple(c.rays[i] for i in sorted(piece))) for piece in pieces]


@lru_cache(maxsize=4096)
def _simplicial_pieces(c: Cone) -> Tuple[Cone, ...]:
    return tuple(cone_triangulation(c))


def homogeneous_cone(p: Polytope) -> Cone:
    """Конус C(P) с лучами (1, v) по вершинам; его грани - однородные векторы граней P"""
    cone = Cone.from_rays(p.dim + 1, [(Fraction(1),) + v for v in p.vertices])
    position = {r: k for k, r in enumerate(cone.rays)}
    rays = [primitive_integer_vector((Fraction(1),) + v) for v in p.vertices]
    hint = sorted(
        (primitive_integer_vector(f.vector()), frozenset(position[rays[v]] for v in p.incidence[i]))
        for i, f in enumerate(p.facets)
    )
    return replace(cone, facet_hint=tuple(hint))


def dual_cone(p: Polytope) -> Cone:
    """Двойственный конус C^∨ с лучами (c0, a) по внутренним граням; его грани отвечают вершинам P"""
    cone = Cone.from_rays(p.dim + 1, [f.vector() for f in p.facets])
    position = {r: k for k, r in enumerate(cone.rays)}
    rays = [primitive_integer_vector(f.vector()) for f in p.facets]
    hint = sorted(
        (primitive_integer_vector((Fraction(1),) + vertex), frozenset(position[rays[i]] for i in p.facets_at(v)))
        for v, vertex in enumerate(p.vertices)
    )
    return replace(cone, facet_hint=tuple(hint))


def normal_fan(p: Polytope) -> Fan:
    """Внутренний нормальный веер: конус в вершине порожден нормалями инцидентных граней"""
    return Fan(tuple(
        Cone.from_rays(p.dim, [p.facets[i].coeffs for i in p.facets_at(v)])
        for v in range(len(p.vertices))
    ))


# ---- поляры, суммы, разрезы ----

def polar_at(p: Polytope, x: Sequence) -> Polytope:
    """
    Поляра (P − x)^∨ = {y : y·z ≥ −1 для всех z ∈ P − x}

    Вершины - aᵢ/ℓᵢ(x) для внутренних форм ℓᵢ = cᵢ + aᵢ·y; они лежат на лучах
    внутреннего нормального веера.
    """
    x = rat_vector(x)
    if len(x) != p.dim:
        raise DimensionMismatchError(f"Точка длины {len(x)} для многогранника размерности {p.dim}")
    values = [f(x) for f in p.facets]
    for i, value in enumerate(values):
        if value <= 0:
            raise NonInteriorPointError(f"Точка {x} не внутренняя: грань {i} равна {value}")
    return hull_from_vertices(p.dim, [tuple(a / v for a in f.coeffs) for f, v in zip(p.facets, values)])


def _generators(summand: Union[Polytope, Sequence[Sequence]]) -> List[RatVector]:
    if isinstance(summand, Polytope):
        return list(summand.vertices)
    return [rat_vector(v) for v in summand]


def _weighted_hull(dim: int, generator_sets: List[List[RatVector]], weights: Sequence[Fraction]) -> Polytope:
    points = []
    for combo in itertools.product(*generator_sets):
        points.append(tuple(
            sum((w * v[k] for w, v in zip(weights, combo)), Fraction(0)) for k in range(dim)
        ))
    return hull_from_vertices(dim, points)


def minkowski_sum(
    ps: Sequence[Union[Polytope, Sequence[Sequence]]],
    weights: Sequence,
    check_generic: bool = True,
    seed: Optional[int] = None,
) -> MinkowskiSum:
    """
    Взвешенная сумма Минковского Σ wⱼPⱼ

    Args:
        ps: слагаемые - многогранники или списки точек (слагаемые могут быть
            не полноразмерными, например точка)
        weights: положительные рациональные веса
        check_generic: пересчитать при вторых случайных весах и сравнить нормали граней
        seed: зерно для вторых весов
    """
    weights = rat_vector(weights)
    if len(weights) != len(ps):
        raise DimensionMismatchError(f"{len(ps)} слагаемых и {len(weights)} весов")
    if any(w <= 0 for w in weights):
        raise CanformError(f"Веса суммы Минковского должны быть положительны: {weights}")
    generator_sets = [_generators(s) for s in ps]
    dims = {len(v) for gens in generator_sets for v in gens}
    if len(dims) != 1:
        raise DimensionMismatchError(f"Слагаемые разных размерностей: {sorted(dims)}")
    dim = dims.pop()

    total = _weighted_hull(dim, generator_sets, weights)
    if check_generic:
        rng = np.random.default_rng(Config.SEED if seed is None else seed)
        other = tuple(Fraction(int(rng.integers(1, 50)), int(rng.integers(1, 50))) for _ in ps)
        second = _weighted_hull(dim, generator_sets, other)
        normals = {primitive_integer_vector(f.coeffs) for f in total.facets}
        if normals != {primitive_integer_vector(f.coeffs) for f in second.facets}:
            raise NonGenericWeightsError(
                f"Нормали граней суммы при весах {weights} и {other} различаются"
            )

    support = tuple(
        tuple(min(dot(f.coeffs, v) for v in gens) for gens in generator_sets)
        for f in total.facets
    )
    return MinkowskiSum(total, weights, support)


def split_by_hyperplane(p: Polytope, cut: LinForm) -> Tuple[Polytope, Polytope]:
    """
    Разрезать многогранник гиперплоскостью на две полноразмерные части

    Returns:
        Кортеж (часть cut ≥ 0, часть cut ≤ 0)
    """
    if cut.nvars != p.dim:
        raise DimensionMismatchError(f"Разрез от {cut.nvars} переменных для размерности {p.dim}")
    values = [cut(v) for v in p.vertices]
    if not any(v > 0 for v in values) or not any(v < 0 for v in values):
        raise SubdivisionError(f"Гиперплоскость {cut.pretty()} не пересекает внутренность многогранника")
    positive = from_halfspaces(p.dim, list(p.facets) + [cut])
    negative = from_halfspaces(p.dim, list(p.facets) + [-cut])
    return positive, negative


def facet_polytope(p: Polytope, index: int) -> Tuple[Polytope, int]:
    """
    Грань как (d−1)-многогранник в координатах карты вычета

    Карта отбрасывает ведущую (последнюю с ненулевым коэффициентом) переменную формы грани.

    Returns:
        Кортеж (многогранник грани, номер отброшенной переменной)
    """
    form = p.facets[index]
    pivot = form.pivot()
    points = [p.vertices[i][:pivot] + p.vertices[i][pivot + 1:] for i in sorted(p.incidence[index])]
    return hull_from_vertices(p.dim - 1, points), pivot


def interior_intersection(p: Polytope, q: Polytope) -> Optional[Polytope]:
    """Пересечение двух многогранников, если оно полноразмерно (иначе None)"""
    if p.dim != q.dim:
        raise DimensionMismatchError(f"Многогранники размерностей {p.dim} и {q.dim}")
    try:
        return from_halfspaces(p.dim, list(p.facets) + list(q.facets))
    except EmptyInteriorError:
        return None
