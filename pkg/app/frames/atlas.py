"""
Frame-set atlas for the B-splines B_N, N >= 2.

Points are labelled by the first rule that applies:

    NotFrame_aGeN       a >= N
    NotFrame_bInteger   b in {2, 3, ...}
    NotFrame_abGe1      ab >= 1
    Frame_RegionB       N/2 <= a < N, ab < 1
    Frame_bSmall        a < N, b <= 1/N
    Frame_PropVI        a = k/p, k <= N - 1, p <= cap, b < 1/k
    Frame_PropV         b in {1, 1/2, ..., 1/(N - 1)}
    Frame_PropIV_k      1/N < b < 2/N, N/2 <= ak < 1/b for some k
    ConditionalOnStrip  a < N/2, 1/2 <= ab < 1 (the point itself)
    Frame_Oversampling / ConditionalOnStrip
                        reduction a' = 2Ma with 1/(M+1) <= 2ab < 1/M
    Unknown
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from app.config import get_settings
from app.frames.errors import DomainError
from app.frames.numbers import parse_rational

logger = logging.getLogger(__name__)

Label = Literal[
    "NotFrame_aGeN",
    "NotFrame_abGe1",
    "NotFrame_bInteger",
    "Frame_bSmall",
    "Frame_RegionB",
    "Frame_PropIV_k",
    "Frame_PropV",
    "Frame_PropVI",
    "Frame_Oversampling",
    "ConditionalOnStrip",
    "Unknown",
]

LABELS: Tuple[str, ...] = Label.__args__


@dataclass(frozen=True)
class RegionLabel:
    label: Label
    evidence: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_frame(self) -> bool:
        return self.label.startswith("Frame_")

    @property
    def is_not_frame(self) -> bool:
        return self.label.startswith("NotFrame_")

    def evidence_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.evidence.items())


@dataclass(frozen=True)
class Inapplicable:
    reason: str


def _is_integer_ge2(b: Fraction) -> bool:
    return b.denominator == 1 and b >= 2


def _prop_iv_k(N: int, a: Fraction, b: Fraction) -> Optional[int]:
    if not Fraction(1, N) < b < Fraction(2, N):
        return None
    k = max(1, math.ceil(Fraction(N, 2) / a))
    return k if a * k < 1 / b else None


def _prop_vi(N: int, a: Fraction, b: Fraction, cap: int) -> Optional[Tuple[int, int]]:
    k, p = a.numerator, a.denominator
    if 1 <= k <= N - 1 and p <= cap and b < Fraction(1, k):
        return k, p
    return None


def reduce_to_strip(N: int, a: Any, b: Any):
    """Map (a, b) with ab < 1/2 to (2Ma, b), which lies in 1/2 <= ab < 1."""
    a, b = parse_rational(a), parse_rational(b)
    ab = a * b
    if not (0 < ab < Fraction(1, 2)) or b <= Fraction(1, N) or _is_integer_ge2(b):
        return Inapplicable(f"needs 0 < ab < 1/2, b > 1/N and b not an integer >= 2 (a={a}, b={b})")
    M = math.ceil(1 / (2 * ab)) - 1
    a_prime = 2 * M * a
    evidence = {"M": M, "a_prime": str(a_prime), "b": str(b)}
    if Fraction(N, 2) <= a_prime < N:
        return RegionLabel("Frame_Oversampling", evidence)
    if a_prime < Fraction(N, 2) and Fraction(1, 2) <= a_prime * b < 1:
        return RegionLabel("ConditionalOnStrip", evidence)
    return Inapplicable(f"reduced point a'={a_prime} leaves the strip")


def classify_bspline_point(N: int, a: Any, b: Any, prop_vi_cap: Optional[int] = None) -> RegionLabel:
    if N < 2:
        raise DomainError("B-spline atlas needs N >= 2")
    a, b = parse_rational(a), parse_rational(b)
    if a <= 0 or b <= 0:
        raise DomainError(f"a and b must be positive (got a={a}, b={b})")
    cap = prop_vi_cap or get_settings().prop_vi_cap
    ab = a * b
    if a >= N:
        return RegionLabel("NotFrame_aGeN", {"N": N})
    if _is_integer_ge2(b):
        return RegionLabel("NotFrame_bInteger", {"b": str(b)})
    if ab >= 1:
        return RegionLabel("NotFrame_abGe1", {"ab": str(ab)})
    if Fraction(N, 2) <= a:
        return RegionLabel("Frame_RegionB", {"ab": str(ab)})
    if b <= Fraction(1, N):
        return RegionLabel("Frame_bSmall", {"bound": f"1/{N}"})
    vi = _prop_vi(N, a, b, cap)
    if vi:
        return RegionLabel("Frame_PropVI", {"k": vi[0], "p": vi[1]})
    if b.numerator == 1 and b.denominator <= N - 1:
        return RegionLabel("Frame_PropV", {"b": str(b)})
    k = _prop_iv_k(N, a, b)
    if k is not None:
        return RegionLabel("Frame_PropIV_k", {"k": k})
    if ab >= Fraction(1, 2):
        return RegionLabel("ConditionalOnStrip", {"M": 0, "a_prime": str(a), "b": str(b)})
    reduced = reduce_to_strip(N, a, b)
    if isinstance(reduced, RegionLabel):
        return reduced
    return RegionLabel("Unknown", {})


@dataclass(frozen=True)
class AtlasCell:
    row: int
    col: int
    a: Fraction
    b: Fraction
    region: RegionLabel

    def csv_row(self) -> List[str]:
        return [str(self.a), str(self.b), self.region.label, self.region.evidence_text()]


@dataclass(frozen=True)
class AtlasGrid:
    N: int
    a_range: Tuple[Fraction, Fraction]
    b_range: Tuple[Fraction, Fraction]
    resolution: int
    cells: Tuple[AtlasCell, ...]

    def counts(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for cell in self.cells:
            out[cell.region.label] = out.get(cell.region.label, 0) + 1
        return dict(sorted(out.items()))

    def label_matrix(self) -> List[List[str]]:
        """Labels by (row, col); row 0 is the lowest b."""
        rows = [[""] * self.resolution for _ in range(self.resolution)]
        for cell in self.cells:
            rows[cell.row][cell.col] = cell.region.label
        return rows


def cell_centers(lo: Fraction, hi: Fraction, resolution: int) -> List[Fraction]:
    width = (hi - lo) / resolution
    return [lo + (i + Fraction(1, 2)) * width for i in range(resolution)]


def render_atlas(
    N: int,
    a_range: Sequence[Any] = (0, 2),
    b_range: Sequence[Any] = (0, 3),
    resolution: int = 100,
) -> AtlasGrid:
    """Classify every cell center of a resolution x resolution grid."""
    if resolution < 1:
        raise DomainError("resolution must be positive")
    amin, amax = (parse_rational(v) for v in a_range)
    bmin, bmax = (parse_rational(v) for v in b_range)
    if not (0 <= amin < amax and 0 <= bmin < bmax):
        raise DomainError(f"ranges must be nonnegative and increasing (a: {amin}..{amax}, b: {bmin}..{bmax})")
    settings = get_settings()
    a_centers = cell_centers(amin, amax, resolution)
    b_centers = cell_centers(bmin, bmax, resolution)

    def sweep_row(row: int) -> List[AtlasCell]:
        b = b_centers[row]
        return [
            AtlasCell(row, col, a, b, classify_bspline_point(N, a, b, settings.prop_vi_cap))
            for col, a in enumerate(a_centers)
        ]

    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        rows = list(pool.map(sweep_row, range(resolution)))
    cells = tuple(cell for row in rows for cell in row)
    grid = AtlasGrid(N, (amin, amax), (bmin, bmax), resolution, cells)
    logger.info(f"render_atlas: N={N} {resolution}x{resolution} cells {grid.counts()}")
    return grid


def _frame_rules(N: int, a: Fraction, b: Fraction, cap: int) -> List[str]:
    ab = a * b
    if a >= N or ab >= 1:
        return []
    rules = []
    if b <= Fraction(1, N):
        rules.append("iii")
    if _prop_iv_k(N, a, b) is not None:
        rules.append("iv")
    if b.numerator == 1 and b.denominator <= N - 1:
        rules.append("v")
    if _prop_vi(N, a, b, cap):
        rules.append("vi")
    if Fraction(N, 2) <= a:
        rules.append("B")
    return rules


def _not_frame_rules(N: int, a: Fraction, b: Fraction) -> List[str]:
    rules = []
    if a >= N:
        rules.append("i")
    if _is_integer_ge2(b):
        rules.append("ii")
    if a * b >= 1:
        rules.append("density")
    return rules


def consistency_audit(grid: AtlasGrid, prop_vi_cap: Optional[int] = None) -> List[Tuple[AtlasCell, str]]:
    """Cells whose label contradicts the rule set; empty for a consistent sweep."""
    cap = prop_vi_cap or get_settings().prop_vi_cap
    N = grid.N
    problems: List[Tuple[AtlasCell, str]] = []
    for cell in grid.cells:
        a, b, region = cell.a, cell.b, cell.region
        frame_rules = _frame_rules(N, a, b, cap)
        blocking = _not_frame_rules(N, a, b)
        if frame_rules and blocking:
            problems.append((cell, f"frame rules {frame_rules} and obstructions {blocking} both apply"))
        if blocking and not region.is_not_frame:
            problems.append((cell, f"obstructions {blocking} but labelled {region.label}"))
        if region.label == "NotFrame_bInteger" and not _is_integer_ge2(b):
            problems.append((cell, "bInteger label on non-integer b"))
        if region.label == "Frame_PropIV_k":
            k = region.evidence["k"]
            if not (k >= 1 and Fraction(1, N) < b < Fraction(2, N) and Fraction(N, 2) <= a * k < 1 / b):
                problems.append((cell, f"PropIV evidence k={k} fails its inequalities"))
        if region.label == "ConditionalOnStrip":
            a_prime = Fraction(region.evidence["a_prime"])
            if not (a_prime < Fraction(N, 2) and Fraction(1, 2) <= a_prime * b < 1):
                problems.append((cell, f"strip evidence a'={a_prime} outside the strip"))
    if problems:
        logger.warning(f"consistency_audit: {len(problems)} inconsistent cells")
    return problems
