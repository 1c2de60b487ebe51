from fractions import Fraction
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from app.frames.numbers import Rational


# Window file schema (defined first as every request embeds it)
class WindowPiece(BaseModel):
    interval: Tuple[Rational, Rational]
    coeffs: List[Rational] = Field(min_length=1, description="Ascending coefficients in x.")


class WindowFile(BaseModel):
    """JSON window document; all numbers are exact rational strings."""
    alpha: Rational
    pieces: List[WindowPiece] = Field(min_length=1)

    def to_window_dict(self) -> Dict[str, Any]:
        return {
            "alpha": str(self.alpha),
            "pieces": [
                {"interval": [str(p.interval[0]), str(p.interval[1])], "coeffs": [str(c) for c in p.coeffs]}
                for p in self.pieces
            ],
        }


class WindowSource(BaseModel):
    window: Optional[WindowFile] = None
    bspline: Optional[int] = Field(default=None, ge=2, description="Order N of the centered B-spline B_N.")

    @model_validator(mode="after")
    def exactly_one_source(self):
        if (self.window is None) == (self.bspline is None):
            raise ValueError("Exactly one of 'window' or 'bspline' is required")
        return self


class CheckRequest(WindowSource):
    a: Rational
    b: Rational


class DualRequest(CheckRequest):
    grid: Optional[int] = Field(default=None, ge=2, description="Uniform samples of h over its support.")


class VerifyRequest(CheckRequest):
    grid: int = Field(default=10000, ge=2, description="Samples per band.")
    tol: Optional[float] = Field(default=None, gt=0)


class CurvesRequest(WindowSource):
    max_index: Optional[int] = Field(default=None, ge=1)


class ZZBoundRequest(CheckRequest):
    grid: int = Field(default=64, ge=1, le=4096)


class AtlasRequest(BaseModel):
    bspline: int = Field(ge=2)
    amin: Rational = Fraction(0)
    amax: Rational = Fraction(2)
    bmin: Rational = Fraction(0)
    bmax: Rational = Fraction(3)
    res: int = Field(default=100, ge=1, le=1000)


# Responses
class Witness(BaseModel):
    side: Literal["plus", "minus"]
    n: int
    zero: Union[str, Dict[str, Any]]
    one_sided: bool
    test_point: Union[str, Dict[str, Any]]
    test_point_vanishes: bool


class CheckResponse(BaseModel):
    schema_version: int = Field(default=1, alias="schema")
    alpha: str
    a: str
    b: str
    verdict: Literal["Frame", "NotFrame", "OutOfScope"]
    failed_condition: Optional[Literal["i", "ii", "iii", "iv"]] = None
    M: Optional[int] = None
    kappa: Optional[int] = None
    step: Optional[str] = None
    fast_path: bool = False
    reason: Optional[str] = None
    witnesses: List[Witness] = []
    offending_points: List[Union[str, Dict[str, Any]]] = []
    atlas_label: Optional[str] = None

    model_config = ConfigDict(populate_by_name=True)


class DualResponse(BaseModel):
    schema_version: int = Field(default=1, alias="schema")
    summary: Dict[str, Any]
    case_tree: Dict[str, Any]
    samples: Optional[List[Tuple[float, float]]] = None

    model_config = ConfigDict(populate_by_name=True)


class ResidualResponse(BaseModel):
    schema_version: int = Field(default=1, alias="schema")
    grid: int
    per_n: Dict[str, float]
    overall_max: float
    tol: Optional[float] = None
    passed: Optional[bool] = None

    model_config = ConfigDict(populate_by_name=True)


class CurveModel(BaseModel):
    kind: Literal["plus_hits_zero", "minus_hits_zero", "paired_blowup"]
    y_plus: Union[str, Dict[str, Any]]
    y_minus: Union[str, Dict[str, Any]]
    n: int
    n_minus: Optional[int] = None
    n_plus: Optional[int] = None
    a_min: str
    a_max: str
    a_min_closed: bool
    a_max_closed: bool
    formula: str
    blowup_possible: bool


class CurvesResponse(BaseModel):
    schema_version: int = Field(default=1, alias="schema")
    alpha: str
    curves: List[CurveModel]

    model_config = ConfigDict(populate_by_name=True)


class AtlasCellModel(BaseModel):
    row: int
    col: int
    a: str
    b: str
    label: str
    evidence: str


class AtlasResponse(BaseModel):
    schema_version: int = Field(default=1, alias="schema")
    N: int
    resolution: int
    counts: Dict[str, int]
    cells: List[AtlasCellModel]
    audit_problems: int

    model_config = ConfigDict(populate_by_name=True)


class ZZBoundResponse(BaseModel):
    schema_version: int = Field(default=1, alias="schema")
    a: str
    b: str
    grid: int
    estimate: float

    model_config = ConfigDict(populate_by_name=True)


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
    schema_version: int = Field(default=1, alias="schema")

    model_config = ConfigDict(populate_by_name=True)
