"""
Вычеты канонических форм вдоль гиперплоскостей полюсов и проверка рекурсии

Если ω = (dℓ/ℓ)∧η + η′, то Res_{ℓ=0} ω = η|_{ℓ=0}. В карте, где ведущая
переменная x_k (последняя с ненулевым коэффициентом aₖ) выражена из ℓ = 0,
вычет равен ((−1)^k / aₖ)·(ℓ·ω)|_{ℓ=0}; результат не зависит от масштаба и знака ℓ.
"""
import logging
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from canonical_form import CanonicalForm, ResidueChart
from errors import DimensionMismatchError, NonSimplePoleError
from exact_core import format_rat
from models import CheckReport
from polynomial import LinForm, Poly
from polytope import Polytope, facet_polytope
from form_engines import canon_triangulation

logger = logging.getLogger(__name__)


def residue(f: CanonicalForm, facet: LinForm, parent: Optional[Polytope] = None) -> CanonicalForm:
    """
    Вычет формы вдоль гиперплоскости facet = 0

    Args:
        f: каноническая форма от d переменных
        facet: форма гиперплоскости (простой полюс f)
        parent: многогранник, которому принадлежит грань (только для сообщений)

    Returns:
        Форма от d−1 переменных с записанной картой вычета
    """
    if facet.nvars != f.nvars:
        raise DimensionMismatchError(f"Гиперплоскость от {facet.nvars} переменных для формы от {f.nvars}")
    if facet.is_constant():
        raise NonSimplePoleError(f"Форма {facet.pretty()} имеет нулевую линейную часть")
    target = facet.normalized()
    multiplicity = f.pole_counts().get(target, 0)
    if multiplicity != 1:
        where = f" многогранника с {len(parent.facets)} гранями" if parent is not None else ""
        raise NonSimplePoleError(
            f"Гиперплоскость {target.pretty(f.varnames)}{where} - полюс кратности {multiplicity}, а не простой полюс"
        )

    k = target.pivot()
    a = target.coeffs[k]
    # x_k = −(c0 + Σ_{j≠k} a_j x_j) / a_k
    solved_c0 = -target.c0 / a
    solved = [-c / a for c in target.coeffs]
    solved[k] = Fraction(0)
    expression = Poly.constant(f.nvars, solved_c0)
    for j, c in enumerate(solved):
        if c:
            expression = expression + Poly.variable(f.nvars, j) * c

    num = f.signed_numerator().substitute(k, expression) * (Fraction((-1) ** k) / a)
    others = list(f.poles)
    others.remove(target)
    poles = []
    for pole in others:
        restricted = _restrict_form(pole, k, solved_c0, solved)
        if restricted is None:
            raise NonSimplePoleError(f"Полюс {pole.pretty(f.varnames)} совпадает с гиперплоскостью вычета")
        if restricted.is_constant():
            num = num / restricted.c0
        else:
            poles.append(restricted)

    names = tuple(f.varnames) if f.varnames else None
    chart = ResidueChart(
        names or tuple(f"x{i + 1}" for i in range(f.nvars)),
        k, solved_c0, tuple(c for j, c in enumerate(solved) if j != k),
    )
    return CanonicalForm.build(f.nvars - 1, num, poles, chart.varnames, chart)


def _restrict_form(pole: LinForm, k: int, solved_c0: Fraction, solved: List[Fraction]) -> Optional[LinForm]:
    """Подставить x_k = solved_c0 + Σ solved·x в форму; None, если она обнуляется"""
    factor = pole.coeffs[k]
    c0 = pole.c0 + factor * solved_c0
    coeffs = [c + factor * s for c, s in zip(pole.coeffs, solved)]
    del coeffs[k]
    if c0 == 0 and not any(coeffs):
        return None
    return LinForm(c0, tuple(coeffs))


def recursion_verify(
    p: Polytope,
    engine: Callable[[Polytope], CanonicalForm] = canon_triangulation,
) -> CheckReport:
    """
    Проверка рекурсии вычетов Res_F Ω(P) = ±Ω(F) вдоль всех флагов граней

    Для каждой грани вычет сравнивается с независимо вычисленной формой грани
    в той же карте; знак σ записывается. На глубине d остатки должны быть ±1.

    Args:
        p: многогранник
        engine: способ вычисления Ω для многогранника и его граней

    Returns:
        CheckReport с записью σ по каждому ребру флага и листьями ±1
    """
    witnesses: List[Dict[str, Any]] = []
    _descend(p, engine(p), [], witnesses, engine)
    report = CheckReport.from_witnesses("recursion", witnesses)
    leaves = sum(1 for w in witnesses if "leaf" in w)
    if report.passed:
        logger.info(f"✅ Рекурсия вычетов подтверждена: {leaves} полных флагов")
    else:
        logger.info(f"❌ Рекурсия вычетов нарушена: {len(report.mismatches)} расхождений")
    return report


def _descend(
    q: Polytope,
    form: CanonicalForm,
    flag: List[int],
    witnesses: List[Dict[str, Any]],
    engine: Callable[[Polytope], CanonicalForm],
):
    if q.dim == 0:
        value = form.evaluate(()) if not form.poles else None
        if value not in (Fraction(1), Fraction(-1)):
            witnesses.append({"flag": list(flag), "mismatch": True, "leaf": form.pretty()})
        else:
            witnesses.append({"flag": list(flag), "leaf": int(value)})
        return

    for i, facet in enumerate(q.facets):
        path = flag + [i]
        try:
            res = residue(form, facet, q)
        except NonSimplePoleError as e:
            witnesses.append({"flag": path, "mismatch": True, "error": str(e)})
            continue
        face, _ = facet_polytope(q, i)
        expected = engine(face).with_varnames(res.varnames)
        if res.equivalent(expected):
            sigma = 1
        elif res.equivalent(-expected):
            sigma = -1
        else:
            witnesses.append({
                "flag": path, "mismatch": True,
                "residue": res.pretty(), "expected": expected.pretty(),
            })
            continue
        witnesses.append({"flag": path, "sigma": sigma, "chart": res.chart.pretty()})
        _descend(face, res, path, witnesses, engine)


def residue_signs(report: CheckReport) -> Dict[Tuple[int, ...], int]:
    """Знаки σ по путям флагов из отчета recursion_verify"""
    return {tuple(w["flag"]): w["sigma"] for w in report.witnesses if "sigma" in w}


def interval_residues(f: CanonicalForm) -> Dict[str, Fraction]:
    """Вычеты одномерной формы во всех полюсах: {"точка": значение}"""
    if f.nvars != 1:
        raise DimensionMismatchError(f"Ожидалась форма от одной переменной, получено {f.nvars}")
    values = {}
    for pole in f.poles:
        point = -pole.c0 / pole.coeffs[0]
        values[format_rat(point)] = residue(f, pole).evaluate(())
    return values
