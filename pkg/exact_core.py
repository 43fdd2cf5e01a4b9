"""
Точная рациональная арифметика и линейная алгебра

Rat - рациональное число произвольной точности (fractions.Fraction).
Определитель и решение систем считаются исключением Барейса без дробей:
строки сначала приводятся к целым числам, затем все деления точные.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from errors import DimensionMismatchError, InputFormatError

logger = logging.getLogger(__name__)

Rat = Fraction
RatVector = Tuple[Fraction, ...]


def parse_rat(value: Union[str, int, Fraction]) -> Fraction:
    """
    Разобрать рациональное число

    Args:
        value: строка "p/q" или "p", целое число или Fraction

    Returns:
        Fraction в несократимом виде
    """
    if isinstance(value, bool):
        raise InputFormatError(f"Ожидалось рациональное число, получено {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputFormatError(f"Некорректное рациональное число {value!r}: {e}") from e
    # float запрещен: двоичное приближение незаметно испортит точные данные
    raise InputFormatError(f"Ожидалась строка 'p/q' или целое число, получено {value!r}")


def format_rat(value: Fraction) -> str:
    """Строка "p/q" (или "p" при q = 1)"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rat_vector(values: Iterable) -> RatVector:
    return tuple(parse_rat(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatchError(f"Скалярное произведение векторов длины {len(u)} и {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def sign(value) -> int:
    return (value > 0) - (value < 0)


def primitive_integer_vector(values: Sequence[Fraction]) -> Tuple[int, ...]:
    """
    Сократить вектор до взаимно простых целых, сохраняя направление

    Масштабирование только положительное, знак вектора не меняется.
    """
    values = [Fraction(v) for v in values]
    denominators = reduce(lcm, (v.denominator for v in values), 1)
    ints = [int(v * denominators) for v in values]
    common = reduce(gcd, (abs(i) for i in ints), 0)
    if common == 0:
        return tuple(ints)
    return tuple(i // common for i in ints)


@dataclass(frozen=True)
class RatMatrix:
    """Плотная матрица рациональных чисел (построчно)"""

    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"Матрица {self.rows}x{self.cols} требует {self.rows * self.cols} элементов, "
                f"получено {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise DimensionMismatchError(f"Строка {i} имеет длину {len(r)}, ожидалось {ncols}")
        return cls(len(rows), ncols, tuple(Fraction(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RatMatrix":
        return cls.from_rows(columns).transpose()

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> RatVector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> RatVector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols, self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[int]], int]:
    """Домножить каждую строку на НОК знаменателей; вернуть целые строки и произведение множителей"""
    int_rows = []
    scale = 1
    for r in rows:
        m = reduce(lcm, (Fraction(x).denominator for x in r), 1)
        int_rows.append([int(Fraction(x) * m) for x in r])
        scale *= m
    return int_rows, scale


def _bareiss_eliminate(a: List[List[int]], n_pivots: int) -> Tuple[int, bool]:
    """
    Прямой ход Барейса на месте по первым n_pivots столбцам

    Returns:
        Кортеж (знак перестановки строк, найдены ли все ведущие элементы)
    """
    swaps = 1
    prev = 1
    width = len(a[0]) if a else 0
    for k in range(n_pivots):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, len(a)) if a[i][k] != 0), None)
            if pivot is None:
                return swaps, False
            a[k], a[pivot] = a[pivot], a[k]
            swaps = -swaps
        for i in range(k + 1, len(a)):
            for j in range(k + 1, width):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return swaps, True


def det(m: RatMatrix) -> Fraction:
    """
    Точный определитель квадратной матрицы

    Args:
        m: квадратная матрица

    Returns:
        Определитель (Fraction)
    """
    if not m.is_square:
        raise DimensionMismatchError(f"Определитель неквадратной матрицы {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a, scale = _integer_rows(m.to_rows())
    swaps, complete = _bareiss_eliminate(a, n)
    if not complete:
        return Fraction(0)
    return Fraction(swaps * a[n - 1][n - 1], scale)


def linear_solve(m: RatMatrix, rhs: Sequence[Fraction]) -> Optional[RatVector]:
    """
    Решить систему m·x = rhs

    Args:
        m: квадратная матрица
        rhs: правая часть

    Returns:
        Единственное решение или None, если матрица вырождена
    """
    if not m.is_square:
        raise DimensionMismatchError(f"Система с неквадратной матрицей {m.rows}x{m.cols}")
    if len(rhs) != m.rows:
        raise DimensionMismatchError(f"Правая часть длины {len(rhs)} для матрицы {m.rows}x{m.cols}")
    n = m.rows
    augmented = [list(m.row(i)) + [Fraction(rhs[i])] for i in range(n)]
    a, _ = _integer_rows(augmented)
    _, complete = _bareiss_eliminate(a, n)
    if not complete:
        return None

    # Обратный ход: треугольная система эквивалентна исходной
    solution = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(a[i][n]) - sum((a[i][j] * solution[j] for j in range(i + 1, n)), Fraction(0))
        solution[i] = acc / a[i][i]
    return tuple(solution)


def row_echelon(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Приведенный ступенчатый вид и номера ведущих столбцов"""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return a, []
    width = len(a[0])
    pivots = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_echelon(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], width: Optional[int] = None) -> List[RatVector]:
    """
    Базис ядра матрицы (векторы x с rows·x = 0)

    Args:
        rows: строки матрицы
        width: число столбцов (нужно, если строк нет)
    """
    if width is None:
        width = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(width)) for i in range(width)]
    reduced, pivots = row_echelon(rows)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        vector = [Fraction(0)] * width
        vector[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vector[p] = -reduced[r][f]
        basis.append(tuple(vector))
    return basis


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Размерность аффинной оболочки точек (-1 для пустого множества)"""
    if not points:
        return -1
    base = points[0]
    return rank([[x - y for x, y in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0
