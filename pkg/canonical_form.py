"""
Канонические формы: рациональные формы старшей степени с линейными полюсами
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple

from errors import DegreeBalanceError, DimensionMismatchError, NonInteriorPointError
from exact_core import format_rat
from polynomial import IntLinear, IntPoly, LinForm, Poly, default_varnames

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidueChart:
    """
    Карта вычета: x_pivot = solved_c0 + Σ solved_coeffs·(оставшиеся переменные)

    kept - номера переменных родителя, ставших координатами грани (в прежнем порядке).
    """

    parent_varnames: Tuple[str, ...]
    pivot: int
    solved_c0: Fraction
    solved_coeffs: Tuple[Fraction, ...]

    @property
    def kept(self) -> Tuple[int, ...]:
        return tuple(i for i in range(len(self.parent_varnames)) if i != self.pivot)

    @property
    def varnames(self) -> Tuple[str, ...]:
        return tuple(self.parent_varnames[i] for i in self.kept)

    def pretty(self) -> str:
        rest = Poly(len(self.solved_coeffs), {(0,) * len(self.solved_coeffs): self.solved_c0})
        for i, c in enumerate(self.solved_coeffs):
            rest = rest + Poly.variable(len(self.solved_coeffs), i) * c
        return f"{self.parent_varnames[self.pivot]} = {rest.pretty(self.varnames)}"


@dataclass(frozen=True)
class CanonicalForm:
    """
    Форма sign · numerator / ∏ poles · dx₁∧…∧dx_d

    Полюса нормализованы (примитивные, первый ненулевой из (c0, coeffs) положителен)
    и отсортированы; старший коэффициент числителя положителен, знак вынесен в sign.
    После build числитель не делится ни на один полюс.
    """

    nvars: int
    numerator: Poly
    poles: Tuple[LinForm, ...]
    sign: int = 1
    varnames: Tuple[str, ...] = field(default=(), compare=False)
    chart: Optional[ResidueChart] = field(default=None, compare=False)

    @classmethod
    def build(
        cls,
        nvars: int,
        numerator: Poly,
        poles: Iterable[LinForm],
        varnames: Optional[Sequence[str]] = None,
        chart: Optional[ResidueChart] = None,
    ) -> "CanonicalForm":
        """
        Привести произвольную запись numerator / ∏ poles к каноническому виду

        Args:
            nvars: число переменных d
            numerator: числитель
            poles: линейные множители знаменателя (повторы означают кратность)
            varnames: имена переменных
            chart: карта вычета, в которой записана форма

        Returns:
            Сокращенная CanonicalForm
        """
        if numerator.nvars != nvars:
            raise DimensionMismatchError(f"Числитель от {numerator.nvars} переменных, ожидалось {nvars}")
        if varnames is None:
            varnames = default_varnames(nvars)
        factor = Fraction(1)
        normalized: List[LinForm] = []
        for pole in poles:
            if pole.nvars != nvars:
                raise DimensionMismatchError(f"Полюс {pole.pretty()} от {pole.nvars} переменных")
            if pole.is_constant():
                factor *= pole.c0
                continue
            factor *= pole.normalization_factor()
            normalized.append(pole.normalized())

        packed, den = IntPoly.from_poly(numerator)
        counts = Counter(normalized)
        packed, counts = _cancel(packed, counts, list(counts))
        return _finish(nvars, packed, 1 / (den * factor), counts, varnames, chart)

    @classmethod
    def zero(cls, nvars: int, varnames: Optional[Sequence[str]] = None) -> "CanonicalForm":
        return cls.build(nvars, Poly.zero(nvars), (), varnames)

    @classmethod
    def constant(cls, nvars: int, value, varnames: Optional[Sequence[str]] = None) -> "CanonicalForm":
        return cls.build(nvars, Poly.constant(nvars, value), (), varnames)

    # ---- свойства ----

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def signed_numerator(self) -> Poly:
        return self.numerator * self.sign

    def pole_counts(self) -> Counter:
        return Counter(self.poles)

    def denominator(self) -> Poly:
        result = Poly.one(self.nvars)
        for pole in self.poles:
            result = result * pole.to_poly()
        return result

    def with_varnames(self, varnames: Sequence[str]) -> "CanonicalForm":
        return CanonicalForm(self.nvars, self.numerator, self.poles, self.sign, tuple(varnames), self.chart)

    # ---- арифметика ----

    def _check(self, other: "CanonicalForm"):
        if self.nvars != other.nvars:
            raise DimensionMismatchError(f"Формы от {self.nvars} и {other.nvars} переменных")

    def __add__(self, other: "CanonicalForm") -> "CanonicalForm":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other.with_varnames(self.varnames or other.varnames)
        num, scale, counts = _merge(_summand(self), _summand(other))
        return _finish(self.nvars, num, scale, counts, self.varnames, self.chart)

    def __neg__(self) -> "CanonicalForm":
        if self.is_zero():
            return self
        return CanonicalForm(self.nvars, self.numerator, self.poles, -self.sign, self.varnames, self.chart)

    def __sub__(self, other: "CanonicalForm") -> "CanonicalForm":
        return self + (-other)

    def scaled(self, factor) -> "CanonicalForm":
        return CanonicalForm.build(self.nvars, self.signed_numerator() * Fraction(factor), self.poles, self.varnames)

    def wedge(self, other: "CanonicalForm") -> "CanonicalForm":
        """Внешнее произведение форм от непересекающихся наборов переменных (сначала self)"""
        n = self.nvars + other.nvars

        def lift(poly: Poly, offset: int) -> Poly:
            for _ in range(offset):
                poly = poly.insert_variable(0)
            while poly.nvars < n:
                poly = poly.insert_variable(poly.nvars)
            return poly

        def lift_form(f: LinForm, offset: int) -> LinForm:
            coeffs = [Fraction(0)] * n
            coeffs[offset:offset + f.nvars] = f.coeffs
            return LinForm(f.c0, tuple(coeffs))

        num = lift(self.signed_numerator(), 0) * lift(other.signed_numerator(), self.nvars)
        poles = [lift_form(f, 0) for f in self.poles] + [lift_form(f, self.nvars) for f in other.poles]
        return CanonicalForm.build(n, num, poles, tuple(self.varnames) + tuple(other.varnames))

    def equivalent(self, other: "CanonicalForm") -> bool:
        """
        Равенство как рациональных функций

        Сокращенная запись с нормированными полюсами и вынесенным знаком
        единственна, поэтому сравниваются сами записи.
        """
        self._check(other)
        return self == other

    # ---- подстановки ----

    def restrict(self, index: int, value) -> "CanonicalForm":
        """Зафиксировать переменную index значением value (коэффициент формы, без дифференциала)"""
        value = Fraction(value)
        constant = Poly.constant(self.nvars, value)
        num = self.signed_numerator().substitute(index, constant)
        poles = []
        for pole in self.poles:
            rest = list(pole.coeffs)
            c0 = pole.c0 + rest.pop(index) * value
            if not any(rest):
                if c0 == 0:
                    raise NonInteriorPointError(f"Подстановка {value} обнуляет полюс {pole.pretty(self.varnames)}")
                num = num / c0
                continue
            poles.append(LinForm(c0, tuple(rest)))
        names = [n for i, n in enumerate(self.varnames) if i != index]
        return CanonicalForm.build(self.nvars - 1, num, poles, names)

    def evaluate(self, point: Sequence) -> Fraction:
        """Точное значение коэффициента формы в рациональной точке"""
        point = [Fraction(x) for x in point]
        if len(point) != self.nvars:
            raise DimensionMismatchError(f"Точка длины {len(point)} для формы от {self.nvars} переменных")
        value = Fraction(self.sign) * Fraction(self.numerator.evaluate(point))
        for pole in self.poles:
            at = pole(point)
            if at == 0:
                raise NonInteriorPointError(
                    f"Точка {[format_rat(x) for x in point]} лежит на полюсе {pole.pretty(self.varnames)}"
                )
            value /= at
        return value

    def evaluate_numeric(self, point: Sequence[complex]) -> complex:
        """Значение в комплексной (или вещественной) точке в арифметике с плавающей точкой"""
        value = self.sign * complex(self.numerator.evaluate(list(point)))
        for pole in self.poles:
            value /= complex(float(pole.c0) + sum(float(c) * x for c, x in zip(pole.coeffs, point)))
        return value

    # ---- печать ----

    def pretty(self) -> str:
        """ASCII-запись вида (4+4x-y)/(x*y*(1+x-y)*(4-2x-y)) dx^dy"""
        names = self.varnames or tuple(default_varnames(self.nvars))
        num = self.numerator.pretty(names)
        if len(self.numerator) > 1:
            num = f"({num})"
        text = ("-" if self.sign < 0 else "") + num
        if self.poles:
            factors = []
            for pole, k in sorted(self.pole_counts().items(), key=lambda item: item[0].sort_key()):
                body = pole.pretty(names)
                if len(pole.to_poly()) > 1:
                    body = f"({body})"
                factors.append(body if k == 1 else f"{body}^{k}")
            den = "*".join(factors)
            if len(factors) > 1 or len(self.poles) > 1:
                den = f"({den})"
            text = f"{text}/{den}"
        if self.nvars:
            text += " " + "^".join(f"d{n}" for n in names)
        return text

    def __str__(self) -> str:
        return self.pretty()


@dataclass(frozen=True)
class HomogeneousForm:
    """
    Однородная форма (numerator / ∏ poles)·⟨X dᵈX⟩ от переменных X₀…X_d

    Полюса - линейные формы без свободного члена; степень numerator минус число
    полюсов равна −d−1.
    """

    nvars: int
    numerator: Poly
    poles: Tuple[LinForm, ...]
    sign: int = 1

    @property
    def degree(self) -> int:
        return self.numerator.degree() - len(self.poles)

    def specialize(self, varnames: Optional[Sequence[str]] = None) -> CanonicalForm:
        """Аффинная карта X₀ = 1"""
        d = self.nvars - 1
        num = self.numerator.substitute(0, Poly.one(self.nvars)) * self.sign
        poles = [LinForm(f.coeffs[0], f.coeffs[1:]) for f in self.poles]
        return CanonicalForm.build(d, num, poles, varnames)

    def pretty(self) -> str:
        names = [f"X{i}" for i in range(self.nvars)]
        num = self.numerator.pretty(names)
        if len(self.numerator) > 1:
            num = f"({num})"
        factors = []
        for pole in self.poles:
            body = pole.pretty(names)
            factors.append(f"({body})" if len(pole.to_poly()) > 1 else body)
        text = ("-" if self.sign < 0 else "") + num
        if factors:
            text += "/(" + "*".join(factors) + ")" if len(factors) > 1 else "/" + factors[0]
        return text


def homogenize(f: CanonicalForm) -> HomogeneousForm:
    """
    Однородная запись формы в переменных X₀…X_d

    Полюса гомогенизируются переменной X₀, числитель домножается на степень X₀,
    чтобы итоговая степень была ровно −d−1.

    Raises:
        DegreeBalanceError: если степень числителя слишком велика (несокращенная форма)
    """
    d = f.nvars
    if f.is_zero():
        raise DegreeBalanceError("Нулевая форма не имеет однородной записи")
    target = len(f.poles) - d - 1
    if f.numerator.degree() > target:
        raise DegreeBalanceError(
            f"Степень числителя {f.numerator.degree()} больше допустимой {target} "
            f"при {len(f.poles)} полюсах в размерности {d}"
        )
    result = HomogeneousForm(
        d + 1, f.numerator.homogenize(target), tuple(p.homogenized() for p in f.poles), f.sign
    )
    if result.degree != -d - 1:
        raise DegreeBalanceError(f"Однородная степень {result.degree} вместо {-d - 1}")
    return result


# ---- суммирование ----
#
# Слагаемое суммы - тройка (целый числитель, рациональный множитель, кратности
# полюсов). Сумма двух сокращенных форм может сократиться только на полюса,
# общие для обоих слагаемых: остальные полюса делят ровно одно из двух
# поднятых слагаемых.

Summand = Tuple[IntPoly, Fraction, Counter]


def _summand(form: CanonicalForm) -> Summand:
    num, den = IntPoly.from_poly(form.numerator)
    return num, Fraction(form.sign, den), form.pole_counts()


def _cancel(num: IntPoly, counts: Counter, candidates: Iterable[LinForm]) -> Tuple[IntPoly, Counter]:
    """Сократить num / ∏ counts на полюса из candidates: отсев по модулю простого, затем деление"""
    counts = Counter(counts)
    if num.is_zero():
        return num, Counter()
    for pole in candidates:
        form = IntLinear(pole)
        while counts[pole] > 0 and num.vanishes_on(form):
            quotient = num.div_linear(form)
            if quotient is None:
                break
            num = quotient
            counts[pole] -= 1
    return num, +counts


def _merge(left: Summand, right: Summand) -> Summand:
    """Сумма двух слагаемых над общим знаменателем с сокращением"""
    (num_l, scale_l, poles_l), (num_r, scale_r, poles_r) = left, right
    common = poles_l | poles_r
    for pole, k in (common - poles_l).items():
        form = IntLinear(pole)
        for _ in range(k):
            num_l = num_l.mul_linear(form)
    for pole, k in (common - poles_r).items():
        form = IntLinear(pole)
        for _ in range(k):
            num_r = num_r.mul_linear(form)
    scale = Fraction(
        gcd(scale_l.numerator, scale_r.numerator), lcm(scale_l.denominator, scale_r.denominator)
    )
    total = num_l.combine((scale_l / scale).numerator, num_r, (scale_r / scale).numerator)
    total, counts = _cancel(total, common, list(poles_l & poles_r))
    if total.is_zero():
        return total, Fraction(1), counts
    g = total.content()
    if g > 1:
        total, scale = total.divide_content(g), scale * g
    return total, scale, counts


def _finish(
    nvars: int,
    num: IntPoly,
    scale: Fraction,
    counts: Counter,
    varnames: Sequence[str],
    chart: Optional[ResidueChart],
) -> CanonicalForm:
    """Собрать CanonicalForm: отсортировать полюса, вынести знак старшего коэффициента"""
    if num.is_zero():
        return CanonicalForm(nvars, Poly.zero(nvars), (), 1, tuple(varnames), chart)
    poly = num.to_poly(scale)
    _, lead = poly.leading_term()
    sign = 1
    if lead < 0:
        sign, poly = -1, -poly
    poles = tuple(sorted(counts.elements(), key=lambda f: f.sort_key()))
    return CanonicalForm(nvars, poly, poles, sign, tuple(varnames), chart)


def sum_forms(forms: Iterable[CanonicalForm], nvars: int, varnames: Optional[Sequence[str]] = None) -> CanonicalForm:
    """
    Сумма форм попарными слияниями (дерево глубины log n)

    Args:
        forms: слагаемые от nvars переменных
        nvars: число переменных
        varnames: имена переменных результата

    Returns:
        Сокращенная сумма
    """
    pending: List[Summand] = []
    count = 0
    for form in forms:
        if form.nvars != nvars:
            raise DimensionMismatchError(f"Слагаемое от {form.nvars} переменных, ожидалось {nvars}")
        count += 1
        if not form.is_zero():
            pending.append(_summand(form))
    if varnames is None:
        varnames = default_varnames(nvars)
    if not pending:
        return CanonicalForm.zero(nvars, varnames)
    while len(pending) > 1:
        merged = [_merge(pending[i], pending[i + 1]) for i in range(0, len(pending) - 1, 2)]
        if len(pending) % 2:
            merged.append(pending[-1])
        pending = merged
    num, scale, counts = pending[0]
    logger.debug(f"Сумма {count} форм: {len(num)} термов, {sum(counts.values())} полюсов")
    return _finish(nvars, num, scale, counts, varnames, None)
