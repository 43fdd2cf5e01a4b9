"""
Проверки свойств канонических форм: аддитивность по разбиениям,
совпадение трех методов, положительная выпуклость
"""
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from config import Config
from errors import DimensionMismatchError, InputFormatError, NonInteriorPointError, SubdivisionError
from exact_core import RatVector, format_rat
from form_engines import canon_dual_cone, canon_dual_volume, canon_triangulation, canon_union
from models import CheckReport
from polytope import Polytope, interior_intersection, normalized_volume

logger = logging.getLogger(__name__)


def _validate_subdivision(parent: Polytope, parts: Sequence[Polytope]):
    """Части лежат в родителе, объемы складываются, внутренности не пересекаются"""
    if not parts:
        raise SubdivisionError("Пустой список частей")
    for k, part in enumerate(parts):
        if part.dim != parent.dim:
            raise DimensionMismatchError(f"Часть {k} размерности {part.dim}, родитель {parent.dim}")
        for v in part.vertices:
            if not parent.contains(v):
                raise SubdivisionError(f"Вершина {[format_rat(x) for x in v]} части {k} вне родителя")

    total = sum((normalized_volume(part) for part in parts), Fraction(0))
    whole = normalized_volume(parent)
    if total != whole:
        raise SubdivisionError(
            f"Сумма нормированных объемов частей {format_rat(total)} не равна объему родителя {format_rat(whole)}"
        )
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            overlap = interior_intersection(parts[i], parts[j])
            if overlap is not None:
                raise SubdivisionError(
                    f"Внутренности частей {i} и {j} пересекаются в точке "
                    f"{[format_rat(x) for x in overlap.centroid]}"
                )


def subdivision_verify(parent: Polytope, parts: Sequence[Polytope]) -> CheckReport:
    """
    Аддитивность: Σ Ω(partᵢ) = Ω(parent)

    Raises:
        SubdivisionError: части не образуют разбиения (с указанием свидетеля)
    """
    _validate_subdivision(parent, parts)
    total = canon_union(parts)
    expected = canon_triangulation(parent)
    witness: Dict[str, Any] = {
        "parts": len(parts),
        "volume": format_rat(normalized_volume(parent)),
        "sum": total.pretty(),
        "parent": expected.pretty(),
    }
    if not total.equivalent(expected):
        witness["mismatch"] = True
    report = CheckReport.from_witnesses("subdivision", [witness])
    logger.info(f"Аддитивность по разбиению из {len(parts)} частей: {'✅' if report.passed else '❌'}")
    return report


def filliman_check(p: Polytope) -> CheckReport:
    """Совпадение трех методов: триангуляция, двойственный объем, двойственный конус"""
    forms = {
        "triangulation": canon_triangulation(p),
        "dualvol": canon_dual_volume(p),
        "laplace": canon_dual_cone(p),
    }
    reference = forms["triangulation"]
    witnesses: List[Dict[str, Any]] = []
    for method, form in forms.items():
        entry: Dict[str, Any] = {"method": method, "form": form.pretty()}
        if not form.equivalent(reference):
            entry["mismatch"] = True
        witnesses.append(entry)
    report = CheckReport.from_witnesses("filliman", witnesses)
    if not report.passed:
        logger.warning(f"⚠️ Методы расходятся: {[w['method'] for w in report.mismatches]}")
    return report


def interior_samples(p: Polytope, samples: int, seed: Optional[int] = None) -> List[RatVector]:
    """
    Внутренние рациональные точки: выпуклые комбинации вершин с положительными
    псевдослучайными весами (фиксированное зерно)
    """
    rng = np.random.default_rng(Config.SEED if seed is None else seed)
    points = []
    for _ in range(samples):
        weights = [Fraction(int(w)) for w in rng.integers(1, 100, size=len(p.vertices))]
        total = sum(weights)
        points.append(tuple(
            sum((w * v[k] for w, v in zip(weights, p.vertices)), Fraction(0)) / total
            for k in range(p.dim)
        ))
    return points


def positive_convexity_check(
    p: Union[Polytope, Sequence[Polytope]],
    samples: int = Config.CONVEXITY_SAMPLES,
    seed: Optional[int] = None,
) -> CheckReport:
    """
    Знак Ω во внутренних точках постоянен и отличен от нуля

    Args:
        p: многогранник или разбиение невыпуклой области на выпуклые части
        samples: число точек (не меньше 1)
        seed: зерно генератора весов
    """
    if samples < 1:
        raise InputFormatError(f"Число точек должно быть не меньше 1, получено {samples}")
    parts = [p] if isinstance(p, Polytope) else list(p)
    form = canon_triangulation(parts[0]) if len(parts) == 1 else canon_union(parts)

    # Точки распределяются по частям по кругу
    per_part = [samples // len(parts) + (1 if k < samples % len(parts) else 0) for k in range(len(parts))]
    base_seed = Config.SEED if seed is None else seed
    counts = {"positive": 0, "negative": 0}
    witnesses: List[Dict[str, Any]] = []
    first_sign = None
    for k, (part, n) in enumerate(zip(parts, per_part)):
        for point in interior_samples(part, n, base_seed + k):
            try:
                value = form.evaluate(point)
            except NonInteriorPointError:
                # Полюс формы проходит через внутренность области
                witnesses.append({"mismatch": True, "point": [format_rat(x) for x in point], "value": "pole"})
                continue
            if value == 0:
                witnesses.append({"mismatch": True, "point": [format_rat(x) for x in point], "value": "0"})
                continue
            sign = 1 if value > 0 else -1
            counts["positive" if sign > 0 else "negative"] += 1
            if first_sign is None:
                first_sign = sign
            elif sign != first_sign and not any(w.get("mismatch") for w in witnesses):
                witnesses.append({
                    "mismatch": True,
                    "point": [format_rat(x) for x in point],
                    "value": format_rat(value),
                })
    witnesses.insert(0, {"samples": samples, **counts})
    report = CheckReport.from_witnesses("convexity", witnesses)
    logger.info(
        f"Положительная выпуклость: {'✅' if report.passed else '❌'} "
        f"(+{counts['positive']} / −{counts['negative']})"
    )
    return report
