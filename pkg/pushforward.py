"""
Численная проверка формулы прямого образа для торического отображения

Φ: (1:z) ↦ Σᵢ z^{vᵢ}Wᵢ переводит положительный тор в многогранник P = conv(Wᵢ),
и Ω(P) = Φ_*(dz/z). В точке x прямой образ равен сумме по всем прообразам
1/(det(∂x/∂z)·∏zᵢ). Все, что выше по течению, точно; приближенный слой
(корни, якобианы) живет только здесь, d ≤ 2.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from canonical_form import CanonicalForm
from checks import interior_samples
from config import Config
from errors import (
    DimensionMismatchError, InputFormatError, OrientedMatroidError, ResampleError,
    UnsupportedDimensionError,
)
from exact_core import RatMatrix, RatVector, det, format_rat, rat_vector, sign
from form_engines import canon_triangulation
from models import CheckReport, PushforwardReport
from polynomial import Poly
from polytope import Polytope, hull_from_vertices, normalized_volume

logger = logging.getLogger(__name__)

Point = Tuple[Union[Fraction, complex], ...]


@dataclass(frozen=True)
class MonomialMap:
    """
    Мономиальное отображение x_k = N_k(z) / N_0(z)

    components[k] = z^shift · Σᵢ Wᵢ[k]·z^{vᵢ}; сдвиг делает показатели
    неотрицательными и не меняет отношений N_k / N_0.
    """

    d: int
    lattice: Tuple[Tuple[int, ...], ...]
    targets: Tuple[RatVector, ...]
    components: Tuple[Poly, ...]
    shift: Tuple[int, ...]
    # derivatives[k][j] = ∂N_k/∂z_j, заполняется при создании и дальше только читается
    derivatives: Tuple[Tuple[Poly, ...], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "derivatives", tuple(
            tuple(component.derivative(j) for j in range(self.d)) for component in self.components
        ))

    def derivative(self, k: int, j: int) -> Poly:
        """∂N_k/∂z_j"""
        return self.derivatives[k][j]

    def evaluate(self, z: Sequence) -> Tuple:
        n0 = self.components[0].evaluate(list(z))
        return tuple(self.components[k].evaluate(list(z)) / n0 for k in range(1, self.d + 1))

    def jacobian(self, z: Sequence) -> List[List]:
        """Матрица ∂x_k/∂z_j (точная для рациональных z, комплексная иначе)"""
        z = list(z)
        n0 = self.components[0].evaluate(z)
        rows = []
        for k in range(1, self.d + 1):
            nk = self.components[k].evaluate(z)
            rows.append([
                (self.derivative(k, j).evaluate(z) * n0 - nk * self.derivative(0, j).evaluate(z)) / (n0 * n0)
                for j in range(self.d)
            ])
        return rows


def _parse_configurations(W: Sequence[Sequence], V: Sequence[Sequence]) -> Tuple[List[RatVector], List[Tuple[int, ...]]]:
    if len(W) != len(V):
        raise DimensionMismatchError(f"W содержит {len(W)} векторов, а V - {len(V)}")
    if not W:
        raise InputFormatError("Пустые конфигурации W и V")
    w = [rat_vector(x) for x in W]
    v = []
    for i, x in enumerate(V):
        if any(isinstance(c, bool) or int(c) != c for c in x):
            raise InputFormatError(f"V[{i}] должен быть целочисленным: {list(x)}")
        v.append(tuple(int(c) for c in x))
    n = len(w[0])
    for i, (a, b) in enumerate(zip(w, v)):
        if len(a) != n or len(b) != n:
            raise DimensionMismatchError(f"W[{i}] и V[{i}] должны иметь длину {n}")
        if b[0] != 1:
            raise InputFormatError(f"Первая координата V[{i}] должна быть 1, получено {b[0]}")
    return w, v


def oriented_matroid_check(W: Sequence[Sequence], V: Sequence[Sequence]) -> CheckReport:
    """
    Совпадение ориентированных матроидов: знаки всех максимальных миноров W и V равны

    Args:
        W: векторы (c0, w) - вершины целевого многогранника в однородных координатах
        V: целые векторы (1, v)
    """
    w, v = _parse_configurations(W, V)
    n = len(w[0])
    witnesses: List[Dict[str, Any]] = []
    count = 0
    for subset in itertools.combinations(range(len(w)), n):
        count += 1
        sw = sign(det(RatMatrix.from_columns([w[i] for i in subset])))
        sv = sign(det(RatMatrix.from_columns([v[i] for i in subset])))
        if sw != sv:
            witnesses.append({"subset": list(subset), "sign_W": sw, "sign_V": sv, "mismatch": True})
    witnesses.insert(0, {"subsets": count})
    return CheckReport.from_witnesses("oriented-matroid", witnesses)


def build_map(W: Sequence[Sequence], V: Sequence[Sequence]) -> MonomialMap:
    """
    Собрать Φ с компонентами N_k = Σᵢ Wᵢ[k]·z^{vᵢ}

    Raises:
        OrientedMatroidError: если ориентированные матроиды W и V различны
    """
    report = oriented_matroid_check(W, V)
    if not report.passed:
        raise OrientedMatroidError(f"Ориентированные матроиды различаются: {report.mismatches[0]}")
    w, v = _parse_configurations(W, V)
    d = len(w[0]) - 1
    exponents = [x[1:] for x in v]
    shift = tuple(max(0, -min(e[j] for e in exponents)) for j in range(d))
    components = []
    for k in range(d + 1):
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for target, e in zip(w, exponents):
            shifted = tuple(a + s for a, s in zip(e, shift))
            terms[shifted] = terms.get(shifted, Fraction(0)) + target[k]
        components.append(Poly(d, terms))
    return MonomialMap(d, tuple(v), tuple(w), tuple(components), shift)


# ---- корни ----

def _scale(poly: Poly, z: Sequence[complex]) -> float:
    """Σ|c|·|z^e| - масштаб для относительной невязки"""
    total = 0.0
    for e, c in poly.terms():
        term = abs(float(c))
        for x, k in zip(z, e):
            term *= abs(x) ** k
        total += term
    return max(total, 1e-300)


def _univariate_roots(coeffs: Sequence) -> List[complex]:
    """Корни многочлена (коэффициенты от старшего) через собственные числа сопровождающей матрицы"""
    coeffs = [complex(c) for c in coeffs]
    while coeffs and abs(coeffs[0]) == 0:
        coeffs.pop(0)
    n = len(coeffs) - 1
    if n < 1:
        return []
    if n == 1:
        return [-coeffs[1] / coeffs[0]]
    companion = np.zeros((n, n), dtype=complex)
    companion[0, :] = -np.array(coeffs[1:]) / coeffs[0]
    companion[1:, :-1] = np.eye(n - 1)
    return [complex(r) for r in np.linalg.eigvals(companion)]


def _check_clusters(roots: Sequence[complex], what: str):
    for a, b in itertools.combinations(roots, 2):
        if abs(a - b) < Config.BRANCH_POINT_TOL * max(1.0, abs(a)):
            raise ResampleError(f"Кратный корень {what} около {a:.6g}: точка ветвления или совпадение")


def _strip_zero_roots(coeffs: List[Fraction]) -> List[Fraction]:
    """Коэффициенты от старшего; убрать множитель z^k (корни в нуле вне тора)"""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return coeffs


def _solve_1d(m: MonomialMap, x: RatVector) -> List[Point]:
    equation = m.components[1] - m.components[0] * x[0]
    n = equation.degree()
    coeffs = _strip_zero_roots([equation.coefficient((n - i,)) for i in range(n + 1)])
    if len(coeffs) < 2:
        raise ResampleError(f"Уравнение прообраза вырождено в точке {[format_rat(c) for c in x]}")
    if len(coeffs) == 2:
        return [(-coeffs[1] / coeffs[0],)]
    roots = _univariate_roots(coeffs)
    _check_clusters(roots, "уравнения прообраза")
    return [(r,) for r in roots]


def _coeffs_in(poly: Poly, eliminate: int, keep: int, value, degree: int) -> List:
    """Коэффициенты по переменной eliminate (от старшего) при переменной keep = value"""
    coeffs = [0] * (degree + 1)
    for e, c in poly.terms():
        coeffs[degree - e[eliminate]] += c * value ** e[keep]
    return coeffs


def _sylvester(a: List, b: List) -> RatMatrix:
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(a) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(b) + [0] * (size - n - 1 - i))
    return RatMatrix.from_rows(rows)


def _interpolate(nodes: Sequence[Fraction], values: Sequence[Fraction]) -> List[Fraction]:
    """Точная интерполяция Лагранжа; коэффициенты по возрастанию степени"""
    result = [Fraction(0)] * len(nodes)
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        if yi == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(nodes):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, c in enumerate(basis):
            result[k] += yi * c / denom
    return result


def resultant(e1: Poly, e2: Poly, eliminate: int) -> Optional[List[Fraction]]:
    """
    Результант двух многочленов от двух переменных по переменной eliminate

    Точное вычисление: определитель матрицы Сильвестра в целых узлах и интерполяция.

    Returns:
        Коэффициенты по оставшейся переменной (по возрастанию степени) или None,
        если исключение невозможно
    """
    keep = 1 - eliminate
    m, n = e1.degree_in(eliminate), e2.degree_in(eliminate)
    if m <= 0 or n <= 0:
        return None
    bound = max(e1.degree_in(keep), 0) * n + max(e2.degree_in(keep), 0) * m
    nodes = [Fraction(t) for t in range(bound + 1)]
    values = [
        det(_sylvester(_coeffs_in(e1, eliminate, keep, t, m), _coeffs_in(e2, eliminate, keep, t, n)))
        for t in nodes
    ]
    return _interpolate(nodes, values)


def _newton_polish(equations: Sequence[Poly], z: List[complex], steps: int = 3) -> List[complex]:
    grads = [[e.derivative(j) for j in range(len(z))] for e in equations]
    for _ in range(steps):
        f = np.array([complex(e.evaluate(z)) for e in equations])
        jac = np.array([[complex(g.evaluate(z)) for g in row] for row in grads])
        try:
            step = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            break
        z = [a - b for a, b in zip(z, step)]
    return [complex(c) for c in z]


def _solve_2d(m: MonomialMap, x: RatVector) -> List[Point]:
    equations = [m.components[k + 1] - m.components[0] * x[k] for k in range(2)]
    failure = "результант вырожден"
    for eliminate in (1, 0):
        keep = 1 - eliminate
        ascending = resultant(equations[0], equations[1], eliminate)
        if ascending is None:
            continue
        coeffs = _strip_zero_roots(list(reversed(ascending)))
        if len(coeffs) < 2:
            continue
        roots = _univariate_roots(coeffs)
        try:
            _check_clusters(roots, "результанта")
        except ResampleError as e:
            failure = str(e)
            continue

        solutions: List[Point] = []
        for r in roots:
            candidates = []
            for e in equations:
                degree = e.degree_in(eliminate)
                if degree > 0:
                    candidates.extend(_univariate_roots(_coeffs_in(e, eliminate, keep, r, degree)))
            best, best_residual = None, None
            for c in candidates:
                z = [0j, 0j]
                z[keep], z[eliminate] = r, c
                residual = sum(abs(complex(e.evaluate(z))) / _scale(e, z) for e in equations)
                if best_residual is None or residual < best_residual:
                    best, best_residual = z, residual
            if best is None:
                continue
            solutions.append(tuple(_newton_polish(equations, best)))
        return solutions
    raise ResampleError(f"Не удалось исключить переменную в точке {[format_rat(c) for c in x]}: {failure}")


def _preimages(m: MonomialMap, x: RatVector) -> List[Point]:
    if m.d > Config.MAX_PUSHFORWARD_DIM or m.d > 2 or m.d < 1:
        raise UnsupportedDimensionError(f"Прямой образ проверяется для 1 ≤ d ≤ 2, получено d = {m.d}")
    if len(x) != m.d:
        raise DimensionMismatchError(f"Точка длины {len(x)} для отображения размерности {m.d}")
    raw = _solve_1d(m, x) if m.d == 1 else _solve_2d(m, x)

    equations = [m.components[k + 1] - m.components[0] * x[k] for k in range(m.d)]
    accepted: List[Point] = []
    for z in raw:
        if all(isinstance(c, Fraction) for c in z):
            if all(c != 0 for c in z) and m.components[0].evaluate(list(z)) != 0:
                accepted.append(z)
            continue
        zc = [complex(c) for c in z]
        if any(abs(c) < Config.ROOT_RESIDUAL_TOL for c in zc):
            continue
        if abs(complex(m.components[0].evaluate(zc))) < Config.ROOT_RESIDUAL_TOL * _scale(m.components[0], zc):
            continue
        if any(abs(complex(e.evaluate(zc))) > Config.ROOT_RESIDUAL_TOL * _scale(e, zc) for e in equations):
            continue
        accepted.append(tuple(zc))
    numeric = [z for z in accepted if not all(isinstance(c, Fraction) for c in z)]
    for a, b in itertools.combinations(numeric, 2):
        if max(abs(p - q) for p, q in zip(a, b)) < Config.BRANCH_POINT_TOL * max(1.0, max(abs(c) for c in a)):
            raise ResampleError(f"Совпадающие прообразы около {a}: точка ветвления")
    return accepted


def preimages(m: MonomialMap, sample: Sequence) -> List[Tuple[complex, ...]]:
    """
    Все прообразы точки в торе (C*)^d

    Args:
        m: отображение, d ≤ 2
        sample: рациональная точка внутри целевого многогранника

    Raises:
        ResampleError: точка ветвления или вырожденный результант
    """
    return [tuple(complex(c) for c in z) for z in _preimages(m, rat_vector(sample))]


def _jacobian_determinant(m: MonomialMap, z: Point):
    rows = m.jacobian(z)
    if all(isinstance(c, Fraction) for row in rows for c in row):
        return det(RatMatrix.from_rows(rows))
    return complex(np.linalg.det(np.array(rows, dtype=complex)))


def _pushforward_value(m: MonomialMap, zs: List[Point]) -> Tuple[complex, Optional[Fraction]]:
    """Σ 1/(det(∂x/∂z)·∏z) и ее точное значение, если все прообразы рациональны"""
    total = 0j
    exact: Optional[Fraction] = Fraction(0) if zs and all(
        isinstance(c, Fraction) for z in zs for c in z
    ) else None
    for z in zs:
        jac = _jacobian_determinant(m, z)
        if abs(complex(jac)) < Config.ROOT_RESIDUAL_TOL:
            raise ResampleError(f"Вырожденный якобиан в прообразе {z}")
        product = 1
        for c in z:
            product = product * c
        term = 1 / (jac * product)
        if exact is not None:
            exact += term
        total += complex(term)
    return total, exact


def _compare(m: MonomialMap, form: CanonicalForm, x: RatVector, tol: float, resamples: int) -> PushforwardReport:
    zs = _preimages(m, x)
    lhs, exact = _pushforward_value(m, zs)
    rhs_exact = form.evaluate(x)
    rhs = float(rhs_exact)
    if exact is not None:
        abs_err = float(abs(abs(exact) - abs(rhs_exact)))
    else:
        abs_err = abs(abs(lhs) - abs(rhs))
    rel_err = abs_err / abs(rhs)
    orientation = 1 if lhs.real * rhs > 0 else -1
    passed = rel_err < tol and abs(lhs.imag) < tol * max(1.0, abs(rhs))
    return PushforwardReport(
        sample=list(x),
        preimages=[[[complex(c).real, complex(c).imag] for c in z] for z in zs],
        degree_found=len(zs),
        lhs=lhs.real,
        lhs_imag=lhs.imag,
        rhs=rhs,
        abs_err=abs_err,
        rel_err=rel_err,
        sign=orientation,
        exact_lhs=exact,
        resamples=resamples,
        passed=passed,
    )


def pushforward_check(
    W: Sequence[Sequence],
    V: Sequence[Sequence],
    target: Optional[Polytope] = None,
    nsamples: int = Config.PUSHFORWARD_SAMPLES,
    tol: float = Config.PUSHFORWARD_TOL,
    seed: Optional[int] = None,
    threads: int = Config.THREADS,
) -> List[PushforwardReport]:
    """
    Сравнить Φ_*(dz/z) с точной Ω(P) в nsamples внутренних точках

    Args:
        W, V: конфигурации с одинаковым ориентированным матроидом
        target: P (по умолчанию оболочка аффинных частей W)
        nsamples: число точек
        tol: допуск относительной ошибки
        seed: зерно выборки
        threads: число потоков (порядок отчетов от него не зависит)

    Returns:
        Отчеты в порядке номеров точек
    """
    m = build_map(W, V)
    if m.d > Config.MAX_PUSHFORWARD_DIM or m.d > 2:
        raise UnsupportedDimensionError(f"Прямой образ проверяется для d ≤ 2, получено d = {m.d}")
    if target is None:
        target = hull_from_vertices(m.d, [tuple(c / w[0] for c in w[1:]) for w in m.targets])
    form = canon_triangulation(target)
    attempts = Config.MAX_RESAMPLES + 1
    candidates = interior_samples(target, nsamples * attempts, seed)

    def run_sample(i: int) -> PushforwardReport:
        last_error = None
        for attempt in range(attempts):
            x = candidates[i * attempts + attempt]
            try:
                return _compare(m, form, x, tol, attempt)
            except ResampleError as e:
                last_error = e
                logger.warning(f"⚠️ Точка {i}: {e}; берем другую точку")
        raise ResampleError(f"Точка {i}: исчерпаны {attempts} попыток выборки ({last_error})")

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        reports = list(pool.map(run_sample, range(nsamples)))
    passed = sum(r.passed for r in reports)
    logger.info(f"Прямой образ: {passed}/{len(reports)} точек в пределах допуска {tol}")
    return reports


def summarize_pushforward(reports: Sequence[PushforwardReport], V: Optional[Sequence[Sequence]] = None) -> CheckReport:
    """
    Сводка по точкам: все в допуске, единый знак, постоянное число прообразов
    (не больше нормированного объема conv(vᵢ), если V задано)
    """
    witnesses: List[Dict[str, Any]] = []
    degrees = sorted({r.degree_found for r in reports})
    signs = sorted({r.sign for r in reports})
    summary: Dict[str, Any] = {"samples": len(reports), "degrees": degrees, "signs": signs}
    if V is not None:
        d = len(V[0]) - 1
        volume = normalized_volume(hull_from_vertices(d, [tuple(v[1:]) for v in V]))
        summary["normalized_volume"] = format_rat(volume)
        if degrees and degrees[-1] > volume:
            summary["mismatch"] = True
    if len(degrees) > 1 or len(signs) > 1:
        summary["mismatch"] = True
    witnesses.append(summary)
    for i, r in enumerate(reports):
        if not r.passed:
            witnesses.append({"sample": i, "rel_err": r.rel_err, "lhs_imag": r.lhs_imag, "mismatch": True})
    return CheckReport.from_witnesses("pushforward", witnesses)


def factorization_check(m: MonomialMap, npoints: int = 5, seed: Optional[int] = None) -> CheckReport:
    """
    Φ = β∘α: α(z) = (z^{v₁},…,z^{v_m}) мономиальное, β(u) = Σ uᵢWᵢ линейное

    Сравнение точное, в псевдослучайных положительных рациональных точках.
    """
    rng = np.random.default_rng(Config.SEED if seed is None else seed)
    witnesses: List[Dict[str, Any]] = []
    for _ in range(npoints):
        z = [Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20))) for _ in range(m.d)]
        alpha = []
        for v in m.lattice:
            value = Fraction(1)
            for c, e in zip(z, v[1:]):
                value *= c ** e
            alpha.append(value)
        beta = [sum((u * w[k] for u, w in zip(alpha, m.targets)), Fraction(0)) for k in range(m.d + 1)]
        factor = Fraction(1)
        for c, s in zip(z, m.shift):
            factor *= c ** s
        direct = [m.components[k].evaluate(z) for k in range(m.d + 1)]
        entry: Dict[str, Any] = {"z": [format_rat(c) for c in z]}
        if [b * factor for b in beta] != direct:
            entry["mismatch"] = True
        witnesses.append(entry)
    return CheckReport.from_witnesses("factorization", witnesses)
