"""
Разреженные многочлены от нескольких переменных над Q и аффинные линейные формы

Poly хранит словарь {вектор показателей: ненулевой коэффициент}; канонический
порядок мономов - градуированный обратный лексикографический (grevlex).
LinForm - форма c0 + Σ cᵢxᵢ; служит и полупространством (внутренняя нормаль),
и гиперплоскостью полюса.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from errors import DimensionMismatchError, InputFormatError
from exact_core import format_rat, primitive_integer_vector, sign

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


def grevlex_key(exponent: Exponent) -> Tuple:
    """Ключ сортировки: больший ключ - старший моном в grevlex"""
    return (sum(exponent), tuple(-e for e in reversed(exponent)))


def _add_exponents(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Многочлен от nvars переменных с рациональными коэффициентами (неизменяемый)"""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponent, Fraction]] = None):
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(exponent)
            if len(exponent) != nvars:
                raise DimensionMismatchError(
                    f"Моном {exponent} не соответствует {nvars} переменным"
                )
            if any(e < 0 for e in exponent):
                raise DimensionMismatchError(f"Отрицательный показатель в мономе {exponent}")
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[exponent] = coeff
        self._terms = clean
        self._hash = None

    # ---- конструкторы ----

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Poly":
        exponent = tuple(int(i == index) for i in range(nvars))
        return cls(nvars, {exponent: Fraction(1)})

    @classmethod
    def monomial(cls, exponent: Exponent, coeff=1) -> "Poly":
        return cls(len(exponent), {tuple(exponent): Fraction(coeff)})

    @classmethod
    def _trusted(cls, nvars: int, terms: Dict[Exponent, Fraction]) -> "Poly":
        """Без проверок: terms уже без нулей и правильной длины"""
        poly = cls.__new__(cls)
        poly.nvars = nvars
        poly._terms = terms
        poly._hash = None
        return poly

    # ---- доступ ----

    def terms(self) -> List[Tuple[Exponent, Fraction]]:
        """Термы в каноническом порядке (по убыванию grevlex)"""
        return sorted(self._terms.items(), key=lambda item: grevlex_key(item[0]), reverse=True)

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def __iter__(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def degree(self) -> int:
        """Полная степень (-1 для нулевого многочлена)"""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def leading_term(self) -> Tuple[Exponent, Fraction]:
        if self.is_zero():
            raise ValueError("Нулевой многочлен не имеет старшего терма")
        return self.terms()[0]

    # ---- арифметика ----

    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise DimensionMismatchError(
                f"Многочлены от {self.nvars} и {other.nvars} переменных"
            )

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        result = dict(self._terms)
        for exponent, coeff in other._terms.items():
            value = result.get(exponent, 0) + coeff
            if value:
                result[exponent] = value
            else:
                result.pop(exponent, None)
        return Poly._trusted(self.nvars, result)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._trusted(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly.zero(self.nvars)
            return Poly._trusted(self.nvars, {e: c * other for e, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Poly":
        scalar = Fraction(scalar)
        return self * (1 / scalar)

    def __pow__(self, power: int) -> "Poly":
        result = Poly.one(self.nvars)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.pretty()!r})"

    # ---- подстановки ----

    def evaluate(self, point: Sequence) -> object:
        """Значение в точке (работает и с Fraction, и с complex/float)"""
        if len(point) != self.nvars:
            raise DimensionMismatchError(
                f"Точка длины {len(point)} для многочлена от {self.nvars} переменных"
            )
        if all(isinstance(x, (int, Fraction)) for x in point):
            packed, den = IntPoly.from_poly(self)
            return packed.evaluate([Fraction(x) for x in point]) / den
        total = 0
        for exponent, coeff in self._terms.items():
            term = coeff
            for x, e in zip(point, exponent):
                if e:
                    term = term * x ** e
            total = total + term
        return total if self._terms else Fraction(0)

    def substitute(self, index: int, expression: "Poly") -> "Poly":
        """
        Подставить выражение вместо переменной index и удалить эту переменную

        Args:
            index: номер подставляемой переменной
            expression: многочлен от тех же nvars переменных, не зависящий от index

        Returns:
            Многочлен от nvars - 1 переменных
        """
        self._check(expression)
        if expression.degree_in(index) > 0:
            raise ValueError(f"Выражение зависит от подставляемой переменной {index}")
        if expression.degree() <= 1:
            return self._substitute_affine(index, expression)
        # Схема Горнера по степеням x_index
        slices: Dict[int, Dict[Exponent, Fraction]] = {}
        for exponent, coeff in self._terms.items():
            rest = exponent[:index] + (0,) + exponent[index + 1:]
            slices.setdefault(exponent[index], {})[rest] = coeff
        result = Poly.zero(self.nvars)
        for k in range(max(slices, default=0), -1, -1):
            result = poly_mul(result, expression) + Poly._trusted(self.nvars, slices.get(k, {}))
        return result.drop_variable(index)

    def _substitute_affine(self, index: int, expression: "Poly") -> "Poly":
        """x_index → аффинное выражение: целочисленный Горнер с общим знаменателем"""
        scale = lcm(*(c.denominator for c in expression._terms.values()))
        steps = [(pack_exponent(e), int(c * scale)) for e, c in expression._terms.items()]
        packed, den = IntPoly.from_poly(self)
        substituted, top = packed.substitute_steps(index, steps, scale)
        return substituted.to_poly(Fraction(1, den * scale ** top)).drop_variable(index)

    def drop_variable(self, index: int) -> "Poly":
        """Удалить переменную, от которой многочлен не зависит"""
        if self.degree_in(index) > 0:
            raise ValueError(f"Многочлен зависит от удаляемой переменной {index}")
        return Poly._trusted(
            self.nvars - 1, {e[:index] + e[index + 1:]: c for e, c in self._terms.items()}
        )

    def insert_variable(self, index: int) -> "Poly":
        """Добавить фиктивную переменную на позицию index"""
        return Poly._trusted(
            self.nvars + 1, {e[:index] + (0,) + e[index:]: c for e, c in self._terms.items()}
        )

    def compose_linear(self, images: Sequence["Poly"]) -> "Poly":
        """
        Подставить xᵢ → images[i] одновременно

        Args:
            images: по одному многочлену на переменную, все от одного числа переменных
        """
        if len(images) != self.nvars:
            raise DimensionMismatchError(
                f"Нужно {self.nvars} образов переменных, получено {len(images)}"
            )
        target = images[0].nvars if images else 0
        cache: List[List[Poly]] = [[Poly.one(target)] for _ in images]
        result = Poly.zero(target)
        for exponent, coeff in self._terms.items():
            term = Poly.constant(target, coeff)
            for i, e in enumerate(exponent):
                while len(cache[i]) <= e:
                    cache[i].append(cache[i][-1] * images[i])
                if e:
                    term = term * cache[i][e]
            result = result + term
        return result

    def derivative(self, index: int) -> "Poly":
        terms = {}
        for exponent, coeff in self._terms.items():
            e = exponent[index]
            if e:
                lowered = exponent[:index] + (e - 1,) + exponent[index + 1:]
                terms[lowered] = coeff * e
        return Poly._trusted(self.nvars, terms)

    def homogenize(self, degree: Optional[int] = None) -> "Poly":
        """
        Гомогенизировать переменной X0 (новая переменная с номером 0)

        Args:
            degree: целевая степень (по умолчанию полная степень многочлена)
        """
        if degree is None:
            degree = max(self.degree(), 0)
        if self.degree() > degree:
            raise ValueError(f"Степень {self.degree()} больше целевой {degree}")
        return Poly._trusted(
            self.nvars + 1, {(degree - sum(e),) + e: c for e, c in self._terms.items()}
        )

    def primitive(self) -> "Poly":
        """Взаимно простые целые коэффициенты, старший (grevlex) коэффициент положителен"""
        if self.is_zero():
            return self
        exponents = [e for e, _ in self.terms()]
        ints = primitive_integer_vector([self._terms[e] for e in exponents])
        flip = -1 if ints[0] < 0 else 1
        return Poly._trusted(self.nvars, {e: Fraction(flip * c) for e, c in zip(exponents, ints)})

    # ---- печать ----

    def pretty(self, varnames: Optional[Sequence[str]] = None) -> str:
        """
        ASCII-запись в порядке "4+4x-y": по возрастанию степени, внутри степени x раньше y
        """
        if varnames is None:
            varnames = default_varnames(self.nvars)
        if self.is_zero():
            return "0"
        ordered = sorted(self._terms.items(), key=lambda item: (sum(item[0]), tuple(-e for e in item[0])))
        pieces = []
        for exponent, coeff in ordered:
            monomial = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(varnames, exponent) if e
            )
            magnitude = abs(coeff)
            if not monomial:
                body = format_rat(magnitude)
            elif magnitude == 1:
                body = monomial
            elif magnitude.denominator == 1:
                body = f"{magnitude.numerator}{monomial}"
            else:
                body = f"({format_rat(magnitude)}){monomial}"
            if not pieces:
                pieces.append(("-" if coeff < 0 else "") + body)
            else:
                pieces.append(("-" if coeff < 0 else "+") + body)
        return "".join(pieces)


def default_varnames(nvars: int) -> List[str]:
    if nvars <= 4:
        return ["x", "y", "z", "w"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


def poly_mul(a: Poly, b: Poly) -> Poly:
    """
    Произведение многочленов

    Args:
        a: первый множитель
        b: второй множитель (то же число переменных)
    """
    if a.nvars != b.nvars:
        raise DimensionMismatchError(f"Многочлены от {a.nvars} и {b.nvars} переменных")
    result: Dict[Exponent, Fraction] = {}
    for ea, ca in a._terms.items():
        for eb, cb in b._terms.items():
            e = _add_exponents(ea, eb)
            value = result.get(e, 0) + ca * cb
            if value:
                result[e] = value
            else:
                result.pop(e, None)
    return Poly._trusted(a.nvars, result)


def poly_eval(p: Poly, point: Sequence[Fraction]) -> Fraction:
    """Точное значение многочлена в рациональной точке"""
    return Fraction(p.evaluate([Fraction(x) for x in point]))


@dataclass(frozen=True)
class LinForm:
    """Аффинная форма c0 + Σ coeffs[i]·x_i"""

    c0: Fraction
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "c0", Fraction(self.c0))
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if self.c0 == 0 and not any(self.coeffs):
            raise InputFormatError("Линейная форма тождественно равна нулю")

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_vector(cls, homogeneous: Sequence) -> "LinForm":
        """Из вектора (c0, c1, ..., cd)"""
        return cls(homogeneous[0], tuple(homogeneous[1:]))

    def vector(self) -> Tuple[Fraction, ...]:
        """Однородный вектор коэффициентов (c0, c1, ..., cd)"""
        return (self.c0,) + self.coeffs

    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionMismatchError(
                f"Точка длины {len(point)} для формы от {self.nvars} переменных"
            )
        return self.c0 + sum((c * x for c, x in zip(self.coeffs, point) if c), Fraction(0))

    def primitive(self) -> "LinForm":
        """Взаимно простые целые коэффициенты, знак сохраняется"""
        return LinForm.from_vector(primitive_integer_vector(self.vector()))

    def normalized(self) -> "LinForm":
        """Примитивная форма со знаковым правилом: первый ненулевой из (c0, coeffs...) положителен"""
        vector = primitive_integer_vector(self.vector())
        first = next(v for v in vector if v != 0)
        if first < 0:
            vector = tuple(-v for v in vector)
        return LinForm.from_vector(vector)

    def normalization_factor(self) -> Fraction:
        """Множитель λ, для которого self = λ · self.normalized()"""
        target = self.normalized()
        for a, b in zip(self.vector(), target.vector()):
            if b != 0:
                return a / b
        raise ValueError("Недостижимо: нормализованная форма нулевая")

    def oriented(self, point: Sequence[Fraction]) -> "LinForm":
        """Примитивная форма, положительная в точке point"""
        form = self.primitive()
        value = form(point)
        if value == 0:
            raise ValueError("Точка лежит на гиперплоскости, ориентация не определена")
        return form if value > 0 else -form

    def __neg__(self) -> "LinForm":
        return LinForm(-self.c0, tuple(-c for c in self.coeffs))

    def scaled(self, factor) -> "LinForm":
        return LinForm(self.c0 * factor, tuple(c * factor for c in self.coeffs))

    def is_parallel_to(self, other: "LinForm") -> bool:
        return self.normalized() == other.normalized()

    def pivot(self) -> int:
        """Номер последней переменной с ненулевым коэффициентом (ось карты вычета)"""
        for i in range(self.nvars - 1, -1, -1):
            if self.coeffs[i] != 0:
                return i
        raise ValueError("У формы нулевая линейная часть")

    def to_poly(self) -> Poly:
        terms = {(0,) * self.nvars: self.c0}
        for i, c in enumerate(self.coeffs):
            terms[tuple(int(i == j) for j in range(self.nvars))] = c
        return Poly(self.nvars, terms)

    def homogenized(self) -> "LinForm":
        """Форма c0·X0 + Σ cᵢXᵢ от d+1 переменных (без свободного члена)"""
        return LinForm(0, self.vector())

    def substitute(self, index: int, expression: "LinForm") -> "LinForm":
        """
        Подставить x_index = expression (форма от тех же переменных без x_index)

        Returns:
            Форма от nvars - 1 переменных; может оказаться постоянной
        """
        if expression.coeffs[index] != 0:
            raise ValueError(f"Выражение зависит от подставляемой переменной {index}")
        k = self.coeffs[index]
        c0 = self.c0 + k * expression.c0
        coeffs = [c + k * e for c, e in zip(self.coeffs, expression.coeffs)]
        del coeffs[index]
        return _affine_or_constant(c0, tuple(coeffs))

    def sort_key(self) -> Tuple:
        return (self.c0, tuple(-c for c in self.coeffs))

    def pretty(self, varnames: Optional[Sequence[str]] = None) -> str:
        return self.to_poly().pretty(varnames)

    def __repr__(self) -> str:
        return f"LinForm({self.pretty()!r})"


def _affine_or_constant(c0: Fraction, coeffs: Tuple[Fraction, ...]):
    """LinForm, а если форма нулевая - None"""
    if c0 == 0 and not any(coeffs):
        return None
    return LinForm(c0, coeffs)


# ---- целочисленное ядро ----
#
# Суммы форм и сокращение на полюса работают с целыми коэффициентами:
# рациональный многочлен хранится как IntPoly / знаменатель. Показатели
# упакованы в одно целое по PACK_BITS бит на переменную, поэтому умножение
# на xᵢ - это сложение ключа с 1 << (PACK_BITS·i).

PACK_BITS = 16
_MASK = (1 << PACK_BITS) - 1
SCREEN_PRIME = 2_147_483_647
_SCREEN_BASE = 48_271


def pack_exponent(exponent: Exponent) -> int:
    key = 0
    for i, e in enumerate(exponent):
        key |= e << (PACK_BITS * i)
    return key


def unpack_exponent(key: int, nvars: int) -> Exponent:
    return tuple((key >> (PACK_BITS * i)) & _MASK for i in range(nvars))


Steps = List[Tuple[int, int]]


def _mul_steps(terms: Dict[int, int], steps: Steps) -> Dict[int, int]:
    """Произведение на многочлен, заданный парами (упакованный моном, целый коэффициент)"""
    result: Dict[int, int] = {}
    get = result.get
    for step, a in steps:
        for key, c in terms.items():
            key += step
            result[key] = get(key, 0) + a * c
    return {key: c for key, c in result.items() if c}


class IntLinear:
    """Примитивная целочисленная форма, подготовленная для IntPoly"""

    __slots__ = ("form", "steps", "pivot", "pivot_coeff", "rest")

    def __init__(self, form: LinForm):
        if form.is_constant() or any(c.denominator != 1 for c in form.vector()):
            raise ValueError(f"Ожидалась непостоянная целочисленная форма, получено {form.pretty()}")
        self.form = form
        self.steps: Steps = [(0, int(form.c0))] if form.c0 else []
        self.steps += [(1 << (PACK_BITS * i), int(c)) for i, c in enumerate(form.coeffs) if c]
        self.pivot = form.pivot()
        self.pivot_coeff = int(form.coeffs[self.pivot])
        pivot_step = 1 << (PACK_BITS * self.pivot)
        self.rest: Steps = [(s, c) for s, c in self.steps if s != pivot_step]


class IntPoly:
    """
    Многочлен с целыми коэффициентами и упакованными показателями

    Рабочее представление для сумм и сокращений; наружу отдается Poly через to_poly.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[int, int]):
        self.nvars = nvars
        self.terms = terms

    @classmethod
    def from_poly(cls, p: Poly) -> Tuple["IntPoly", int]:
        """
        Returns:
            (q, den) с p = q / den, den > 0 - общий знаменатель коэффициентов
        """
        den = lcm(*(c.denominator for c in p._terms.values()))
        terms = {pack_exponent(e): c.numerator * (den // c.denominator) for e, c in p._terms.items()}
        return cls(p.nvars, terms), den

    def to_poly(self, scale=1) -> Poly:
        scale = Fraction(scale)
        return Poly._trusted(
            self.nvars, {unpack_exponent(key, self.nvars): c * scale for key, c in self.terms.items()}
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def combine(self, k: int, other: "IntPoly", m: int) -> "IntPoly":
        """k·self + m·other"""
        result = {key: k * c for key, c in self.terms.items()}
        get = result.get
        for key, c in other.terms.items():
            value = get(key, 0) + m * c
            if value:
                result[key] = value
            else:
                result.pop(key, None)
        return IntPoly(self.nvars, result)

    def content(self) -> int:
        return gcd(*self.terms.values())

    def divide_content(self, g: int) -> "IntPoly":
        return IntPoly(self.nvars, {key: c // g for key, c in self.terms.items()})

    def mul_linear(self, form: IntLinear) -> "IntPoly":
        return IntPoly(self.nvars, _mul_steps(self.terms, form.steps))

    def _slices(self, index: int) -> Dict[int, Dict[int, int]]:
        """Разложение по степеням x_index: {j: термы без x_index}"""
        shift = PACK_BITS * index
        slices: Dict[int, Dict[int, int]] = {}
        for key, c in self.terms.items():
            j = (key >> shift) & _MASK
            slices.setdefault(j, {})[key - (j << shift)] = c
        return slices

    def div_linear(self, form: IntLinear) -> Optional["IntPoly"]:
        """
        Точное частное self / form или None

        Форма примитивна, поэтому по лемме Гаусса частное целочисленно; любой
        остаток при делении на ведущий коэффициент означает неделимость.
        """
        if not self.terms:
            return self
        shift = PACK_BITS * form.pivot
        a = form.pivot_coeff
        slices = self._slices(form.pivot)
        quotient: Dict[int, int] = {}
        carry: Dict[int, int] = {}
        for j in range(max(slices), 0, -1):
            current = dict(slices.get(j, {}))
            for key, c in carry.items():
                current[key] = current.get(key, 0) - c
            q: Dict[int, int] = {}
            for key, c in current.items():
                if c:
                    value, remainder = divmod(c, a)
                    if remainder:
                        return None
                    q[key] = value
                    quotient[key + ((j - 1) << shift)] = value
            carry = _mul_steps(q, form.rest)
        remainder = dict(slices.get(0, {}))
        for key, c in carry.items():
            remainder[key] = remainder.get(key, 0) - c
        if any(remainder.values()):
            return None
        return IntPoly(self.nvars, quotient)

    def vanishes_on(self, form: IntLinear) -> bool:
        """
        Значение по модулю SCREEN_PRIME в фиксированной точке гиперплоскости form = 0

        False доказывает, что form не делит многочлен; True требует деления.
        """
        p = SCREEN_PRIME
        a = form.pivot_coeff % p
        if a == 0:
            return True
        point = [pow(_SCREEN_BASE, i + 1, p) for i in range(self.nvars)]
        rest = sum(int(c) * point[i] for i, c in enumerate(form.form.coeffs) if i != form.pivot)
        point[form.pivot] = -(int(form.form.c0) + rest) * pow(a, -1, p) % p
        powers = [[1] for _ in point]
        total = 0
        for key, c in self.terms.items():
            value = c % p
            for i, table in enumerate(powers):
                e = (key >> (PACK_BITS * i)) & _MASK
                if e:
                    while len(table) <= e:
                        table.append(table[-1] * point[i] % p)
                    value = value * table[e] % p
            total += value
        return total % p == 0

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        """Точное значение в рациональной точке через общий знаменатель координат"""
        q = lcm(*(x.denominator for x in point))
        nums = [x.numerator * (q // x.denominator) for x in point]
        powers = [[1] for _ in point]
        by_degree: Dict[int, int] = {}
        for key, c in self.terms.items():
            total = 0
            for i, table in enumerate(powers):
                e = (key >> (PACK_BITS * i)) & _MASK
                if e:
                    while len(table) <= e:
                        table.append(table[-1] * nums[i])
                    c *= table[e]
                    total += e
            by_degree[total] = by_degree.get(total, 0) + c
        return sum((Fraction(v, q ** s) for s, v in by_degree.items()), Fraction(0))

    def substitute_steps(self, index: int, steps: Steps, scale: int) -> Tuple["IntPoly", int]:
        """
        Подстановка x_index = r / scale, r задан парами steps (без x_index)

        Returns:
            (H, top) с self(x_index = r/scale) = H / scale^top
        """
        slices = self._slices(index)
        top = max(slices, default=0)
        result: Dict[int, int] = {}
        for j in range(top, -1, -1):
            result = _mul_steps(result, steps)
            factor = scale ** (top - j)
            get = result.get
            for key, c in slices.get(j, {}).items():
                value = get(key, 0) + factor * c
                if value:
                    result[key] = value
                else:
                    result.pop(key, None)
        return IntPoly(self.nvars, result), top


def poly_exact_div(num: Poly, div: LinForm) -> Optional[Poly]:
    """
    Точное деление многочлена на линейную форму

    Деление в столбик по ведущей переменной формы над целыми числами;
    частичное частное не возвращается никогда.

    Args:
        num: делимое
        div: ненулевая линейная форма от того же числа переменных

    Returns:
        Частное q с q·div = num или None, если деление с остатком
    """
    if num.nvars != div.nvars:
        raise DimensionMismatchError(
            f"Деление многочлена от {num.nvars} переменных на форму от {div.nvars}"
        )
    if num.is_zero():
        return num
    if div.is_constant():
        return num / div.c0
    packed, den = IntPoly.from_poly(num)
    quotient = packed.div_linear(IntLinear(div.normalized()))
    if quotient is None:
        return None
    return quotient.to_poly(1 / (den * div.normalization_factor()))
