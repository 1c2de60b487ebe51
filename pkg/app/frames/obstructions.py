"""
Candidate obstruction curves in the (a, b) plane.

Conditions (ii)-(iv) can only fail where a witness zero is carried onto
another zero by the lattice shift. With D = y- - y+ each such coincidence
is the hyperbola

    b = n / (D + (n + 1) a)

where n is the witness index (or n- + n+ for paired witnesses). Along the
curve the shift unit is step = (D + a)/n, so every region constraint is
linear in a and the domain is an interval computed in closed form.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

from app.config import get_settings
from app.frames.analysis import RatioContext, blows_up
from app.frames.lattice import LatticeParams, OutOfScope, classify_params
from app.frames.numbers import AlgebraicPoint, Number, parse_rational
from app.frames.window import Window

logger = logging.getLogger(__name__)

CurveKind = Literal["plus_hits_zero", "minus_hits_zero", "paired_blowup"]


@dataclass(frozen=True)
class Interval:
    """Interval of a values with explicit endpoint closure."""

    lo: Number
    hi: Number
    lo_closed: bool = True
    hi_closed: bool = False

    @property
    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def contains(self, x: Number) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    @property
    def midpoint(self) -> Number:
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        return f"{'[' if self.lo_closed else ']'}{self.lo}, {self.hi}{']' if self.hi_closed else '['}"


@dataclass(frozen=True)
class LinearConstraint:
    """c0 + c1 * a > 0 (strict) or >= 0."""

    c0: Number
    c1: Number
    strict: bool


def solve_constraints(constraints: Sequence[LinearConstraint]) -> Optional[Interval]:
    lo: Number = -math.inf
    hi: Number = math.inf
    lo_closed = hi_closed = False
    for c in constraints:
        if c.c1 == 0:
            if c.c0 < 0 or (c.strict and c.c0 == 0):
                return None
            continue
        root = -c.c0 / c.c1
        if c.c1 > 0:
            if root > lo or (root == lo and c.strict):
                lo, lo_closed = root, not c.strict
        else:
            if root < hi or (root == hi and c.strict):
                hi, hi_closed = root, not c.strict
    interval = Interval(lo, hi, lo_closed, hi_closed)
    return None if interval.is_empty else interval


@dataclass(frozen=True)
class OutOfDomain:
    reason: str


@dataclass(frozen=True)
class ObstructionCurve:
    kind: CurveKind
    y_plus: AlgebraicPoint
    y_minus: AlgebraicPoint
    n: int
    indices: Optional[Tuple[int, int]]
    domain: Interval
    gap: Number
    alpha: Fraction
    blowup_possible: bool

    @property
    def exact(self) -> bool:
        return isinstance(self.gap, Fraction)

    def b_of(self, a: Number) -> Number:
        return self.n / (self.gap + (self.n + 1) * a)

    @property
    def formula(self) -> str:
        return f"b = {self.n}/({self.gap} + {self.n + 1}*a)"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "y_plus": self.y_plus.to_json(),
            "y_minus": self.y_minus.to_json(),
            "n": self.n,
            "n_minus": self.indices[0] if self.indices else None,
            "n_plus": self.indices[1] if self.indices else None,
            "a_min": str(self.domain.lo),
            "a_max": str(self.domain.hi),
            "a_min_closed": self.domain.lo_closed,
            "a_max_closed": self.domain.hi_closed,
            "formula": self.formula,
            "blowup_possible": self.blowup_possible,
        }


def _gap(y_plus: AlgebraicPoint, y_minus: AlgebraicPoint) -> Number:
    if y_plus.is_rational and y_minus.is_rational:
        return y_minus.value - y_plus.value
    return float(y_minus) - float(y_plus)


def _region_constraints(alpha: Fraction, gap: Number, total: int) -> List[LinearConstraint]:
    return [
        LinearConstraint(-alpha, 1, strict=False),
        LinearConstraint(2 * alpha, -1, strict=True),
        LinearConstraint(gap, total + 1, strict=True),
        LinearConstraint(gap, 1, strict=True),
        LinearConstraint(-gap, total - 1, strict=False),
    ]


def _plus_constraints(alpha: Fraction, gap: Number, y: Number, n: int, total: int) -> List[LinearConstraint]:
    # a - alpha < y <= alpha - n * (gap + a) / total
    return [
        LinearConstraint(y + alpha, -1, strict=True),
        LinearConstraint(alpha - y - Fraction(n, total) * gap, -Fraction(n, total), strict=False),
    ]


def _minus_constraints(alpha: Fraction, gap: Number, y: Number, n: int, total: int) -> List[LinearConstraint]:
    # -alpha + n * (gap + a) / total <= y < alpha - a
    return [
        LinearConstraint(alpha - y, -1, strict=True),
        LinearConstraint(y + alpha - Fraction(n, total) * gap, -Fraction(n, total), strict=False),
    ]


def _as_exact(value: Number) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value).limit_denominator(10**9)


def _blowup_possible(w: Window, kind: CurveKind, y_plus: AlgebraicPoint, y_minus: AlgebraicPoint,
                     n_plus: int, n_minus: int, a: Fraction, b: Fraction) -> bool:
    params = classify_params(w.alpha, a, b)
    if isinstance(params, OutOfScope) or params.kappa < max(n_plus, n_minus):
        return False
    ctx = RatioContext(w, params)
    checks = []
    if kind in ("plus_hits_zero", "paired_blowup"):
        checks.append(("plus", n_plus, y_plus))
    if kind in ("minus_hits_zero", "paired_blowup"):
        checks.append(("minus", n_minus, y_minus))
    for side, n, point in checks:
        if not ctx.in_domain(side, n, point):
            return False
        if not blows_up(ctx, side, n, point):
            return False
    return True


def _combinations(w: Window, max_index: int) -> Iterator[Tuple[CurveKind, AlgebraicPoint, AlgebraicPoint, int, int]]:
    zeros = [z.location for z in w.interior_zeros]
    for y_plus in zeros:
        for y_minus in zeros:
            for n in range(1, max_index + 1):
                yield "plus_hits_zero", y_plus, y_minus, n, 0
                yield "minus_hits_zero", y_plus, y_minus, 0, n
            for n_plus in range(1, max_index + 1):
                for n_minus in range(1, max_index + 1):
                    yield "paired_blowup", y_plus, y_minus, n_plus, n_minus


def candidate_curves(w: Window, max_index: Optional[int] = None) -> List[ObstructionCurve]:
    """All hyperbolae on which conditions (ii)-(iv) could fail for w.

    Membership on a curve is necessary, not sufficient, for an obstruction;
    `blowup_possible` records the order bookkeeping at the domain midpoint.
    """
    max_index = max_index or get_settings().max_curve_index
    alpha = w.alpha
    curves: List[ObstructionCurve] = []
    seen = set()
    for kind, y_plus, y_minus, n_plus, n_minus in _combinations(w, max_index):
        gap = _gap(y_plus, y_minus)
        total = n_plus + n_minus
        yp, ym = y_plus.as_number(), y_minus.as_number()
        constraints = _region_constraints(alpha, gap, total)
        constraints.append(LinearConstraint(alpha * total - max(n_plus, n_minus) * gap, -max(n_plus, n_minus), strict=False))
        if n_plus:
            constraints.extend(_plus_constraints(alpha, gap, yp, n_plus, total))
        if n_minus:
            constraints.extend(_minus_constraints(alpha, gap, ym, n_minus, total))
        domain = solve_constraints(constraints)
        if domain is None:
            continue
        key = (gap, total, domain)
        if key in seen:
            continue
        seen.add(key)
        a_mid = _as_exact(domain.midpoint)
        b_mid = _as_exact(total / (gap + (total + 1) * a_mid))
        curves.append(
            ObstructionCurve(
                kind=kind,
                y_plus=y_plus,
                y_minus=y_minus,
                n=total,
                indices=(n_minus, n_plus) if kind == "paired_blowup" else None,
                domain=domain,
                gap=gap,
                alpha=alpha,
                blowup_possible=_blowup_possible(w, kind, y_plus, y_minus, n_plus, n_minus, a_mid, b_mid),
            )
        )
    logger.info(f"candidate_curves: {len(curves)} curves from {len(w.interior_zeros)} interior zeros")
    return curves


def curve_b_at(c: ObstructionCurve, a: Any) -> Union[Number, OutOfDomain]:
    a_value: Number = parse_rational(a) if c.exact else float(parse_rational(a))
    if not c.domain.contains(a_value):
        return OutOfDomain(f"a={a_value} outside domain {c.domain}")
    denominator = c.gap + (c.n + 1) * a_value
    if denominator == 0:
        return OutOfDomain(f"zero denominator at a={a_value}")
    b = c.n / denominator
    if c.exact:
        params = classify_params(c.alpha, a_value, b)
        witness_index = max(c.indices) if c.indices else c.n
        if isinstance(params, OutOfScope) or params.kappa < witness_index:
            return OutOfDomain(f"kappa below {witness_index} at a={a_value}")
    return b
