"""
Исключения библиотеки канонических форм

Все ошибки наследуют ValueError, поэтому код, который ловит ValueError,
продолжает работать.
"""


class CanformError(ValueError):
    """Базовая ошибка библиотеки"""


class DimensionMismatchError(CanformError):
    """Несовпадение размерностей (число переменных, длина вектора, размер матрицы)"""


class DegeneratePolytopeError(CanformError):
    """Точки не порождают полноразмерный многогранник"""


class UnboundedPolyhedronError(CanformError):
    """H-представление задает неограниченный полиэдр"""


class EmptyInteriorError(CanformError):
    """H-представление имеет пустую внутренность"""


class NotASimplexError(CanformError):
    """Ожидался симплекс"""


class NonInteriorPointError(CanformError):
    """Точка не лежит строго внутри многогранника"""


class NonPointedConeError(CanformError):
    """Конус не острый или не полного ранга"""


class NonGenericWeightsError(CanformError):
    """Комбинаторика суммы Минковского зависит от выбора весов"""


class NonSimplePoleError(CanformError):
    """Гиперплоскость не является простым полюсом формы"""


class DegreeBalanceError(CanformError):
    """Степени числителя и знаменателя не дают -d-1"""


class UnsupportedDimensionError(CanformError):
    """Операция не поддерживается в данной размерности"""


class SubdivisionError(CanformError):
    """Части не образуют подразбиения многогранника"""


class OrientedMatroidError(CanformError):
    """Конфигурации W и V имеют разные ориентированные матроиды"""


class ResampleError(CanformError):
    """Точка выборки неудачна (точка ветвления, вырожденная результанта), нужна другая"""


class InputFormatError(CanformError):
    """Некорректный входной файл"""
