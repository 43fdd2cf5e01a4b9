"""
Модели данных ввода-вывода (JSON) для канонических форм
"""
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, model_validator

from canonical_form import CanonicalForm, ResidueChart
from config import Config
from exact_core import format_rat, parse_rat
from polynomial import LinForm, Poly
from polytope import Polytope, from_halfspaces, hull_from_vertices

# Рациональное число в JSON - строка "p/q" или "p"
Rat = Annotated[Fraction, PlainValidator(parse_rat), PlainSerializer(format_rat, return_type=str)]


class _Model(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)


class FacetModel(_Model):
    c0: Rat = Field(..., description="Свободный член формы")
    coeffs: List[Rat] = Field(..., description="Коэффициенты при x₁…x_d")


class PolytopeSpec(_Model):
    """V-представление, H-представление или набор точек (для слагаемых суммы Минковского)"""

    dim: int = Field(..., ge=0, description="Размерность пространства")
    vertices: Optional[List[List[Rat]]] = None
    facets: Optional[List[FacetModel]] = None
    points: Optional[List[List[Rat]]] = None

    @model_validator(mode="after")
    def _one_representation(self):
        given = [name for name in ("vertices", "facets", "points") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"Нужно ровно одно из полей vertices, facets, points; задано: {given or 'ни одного'}")
        for name in ("vertices", "points"):
            for k, v in enumerate(getattr(self, name) or []):
                if len(v) != self.dim:
                    raise ValueError(f"{name}[{k}] имеет {len(v)} координат, ожидалось {self.dim}")
        for k, f in enumerate(self.facets or []):
            if len(f.coeffs) != self.dim:
                raise ValueError(f"facets[{k}].coeffs имеет длину {len(f.coeffs)}, ожидалось {self.dim}")
        return self

    def to_polytope(self) -> Polytope:
        if self.vertices is not None:
            return hull_from_vertices(self.dim, self.vertices)
        if self.facets is not None:
            return from_halfspaces(self.dim, [LinForm(f.c0, tuple(f.coeffs)) for f in self.facets])
        return hull_from_vertices(self.dim, self.points)

    @classmethod
    def from_polytope(cls, p: Polytope) -> "PolytopeSpec":
        return cls(dim=p.dim, vertices=[list(v) for v in p.vertices])


class TermModel(_Model):
    coeff: Rat
    exp: List[int]


class PoleModel(_Model):
    c0: Rat
    coeffs: List[Rat]
    mult: int = Field(1, ge=1)


class ChartModel(_Model):
    """x_pivot = c0 + Σ coeffs·(оставшиеся переменные)"""

    parent_vars: List[str]
    pivot: int
    c0: Rat
    coeffs: List[Rat]
    equation: Optional[str] = None


class CanonicalFormModel(_Model):
    vars: List[str]
    sign: int = Field(1, description="Ориентация: +1 или −1")
    numerator: List[TermModel]
    poles: List[PoleModel]
    chart: Optional[ChartModel] = None

    @classmethod
    def from_form(cls, f: CanonicalForm) -> "CanonicalFormModel":
        poles = [
            PoleModel(c0=pole.c0, coeffs=list(pole.coeffs), mult=k)
            for pole, k in sorted(f.pole_counts().items(), key=lambda item: item[0].sort_key())
        ]
        chart = None
        if f.chart is not None:
            chart = ChartModel(
                parent_vars=list(f.chart.parent_varnames), pivot=f.chart.pivot,
                c0=f.chart.solved_c0, coeffs=list(f.chart.solved_coeffs), equation=f.chart.pretty(),
            )
        return cls(
            vars=list(f.varnames),
            sign=f.sign,
            numerator=[TermModel(coeff=c, exp=list(e)) for e, c in f.numerator.terms()],
            poles=poles,
            chart=chart,
        )

    def to_form(self) -> CanonicalForm:
        nvars = len(self.vars)
        numerator = Poly(nvars, {tuple(t.exp): t.coeff for t in self.numerator}) * self.sign
        poles = []
        for p in self.poles:
            poles.extend([LinForm(p.c0, tuple(p.coeffs))] * p.mult)
        chart = None
        if self.chart is not None:
            chart = ResidueChart(
                tuple(self.chart.parent_vars), self.chart.pivot, self.chart.c0, tuple(self.chart.coeffs)
            )
        return CanonicalForm.build(nvars, numerator, poles, self.vars, chart)


class CheckReport(_Model):
    name: str
    passed: bool
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)

    @classmethod
    def from_witnesses(cls, name: str, witnesses: List[Dict[str, Any]]) -> "CheckReport":
        """passed = в witnesses нет записи с ключом mismatch"""
        return cls(name=name, passed=not any(w.get("mismatch") for w in witnesses), witnesses=witnesses)

    @property
    def mismatches(self) -> List[Dict[str, Any]]:
        return [w for w in self.witnesses if w.get("mismatch")]


class PushforwardReport(_Model):
    sample: List[Rat]
    preimages: List[List[List[float]]] = Field(
        default_factory=list, description="Прообразы: по паре [Re, Im] на координату"
    )
    degree_found: int
    lhs: float
    lhs_imag: float
    rhs: float
    abs_err: float = Field(..., ge=0)
    rel_err: float = Field(..., ge=0)
    sign: int = Field(1, description="Знак lhs относительно rhs")
    exact_lhs: Optional[Rat] = None
    resamples: int = 0
    passed: bool


class PushforwardRequest(_Model):
    W: List[List[Rat]]
    V: List[List[int]]
    samples: int = Field(Config.PUSHFORWARD_SAMPLES, ge=1)
    tol: float = Field(Config.PUSHFORWARD_TOL, gt=0)
