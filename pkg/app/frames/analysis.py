"""
Frame decision for windows in V_alpha on the region alpha <= a < 2 alpha.

The decision runs four finite checks:

(i)   |g(x)| + |g(x+a)| > 0 on [-a, 0], reduced to the zero catalog.
(ii)  no blow-up witness y+ (a zero where R_n blows up) with g(y+ + n*step - a) = 0.
(iii) the mirror statement for L_n and y-.
(iv)  no pair of witnesses with y+ + n+*step = y- - n-*step + a.

Blow-up is decided from vanishing orders: R_n has a pole at z exactly when
the orders of its denominator factors at z exceed those of its numerator
factors. All point comparisons are exact.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from app.frames.errors import DomainError
from app.frames.lattice import LatticeParams, OutOfScope, classify_params
from app.frames.numbers import AlgebraicPoint, parse_rational
from app.frames.window import Order, Side, Window, ZeroPoint, as_point

logger = logging.getLogger(__name__)

SideName = Literal["plus", "minus"]
Verdict = Literal["Frame", "NotFrame", "OutOfScope"]
Condition = Literal["i", "ii", "iii", "iv"]


class Pole:
    """Marker returned by ratio_R / ratio_L where a denominator factor vanishes."""

    __slots__ = ("at",)

    def __init__(self, at: Any):
        self.at = at

    def __repr__(self) -> str:
        return f"Pole(at={self.at})"


@dataclass(frozen=True)
class RatioContext:
    window: Window
    params: LatticeParams

    @property
    def step(self) -> Fraction:
        return self.params.step

    def plus_domain(self, n: int) -> Tuple[Fraction, Fraction]:
        """]a - alpha, alpha - n*step] (left-open, right-closed)."""
        p = self.params
        return p.a - p.alpha, p.alpha - n * self.step

    def minus_domain(self, n: int) -> Tuple[Fraction, Fraction]:
        """[-alpha + n*step, alpha - a[ (left-closed, right-open)."""
        p = self.params
        return -p.alpha + n * self.step, p.alpha - p.a

    def in_domain(self, side: SideName, n: int, point: AlgebraicPoint) -> bool:
        if side == "plus":
            lo, hi = self.plus_domain(n)
            return point.compare(lo) > 0 and point.compare(hi) <= 0
        lo, hi = self.minus_domain(n)
        return point.compare(lo) >= 0 and point.compare(hi) < 0

    def _check_index(self, n: int) -> None:
        if not 1 <= n <= self.params.kappa:
            raise DomainError(f"n={n} outside 1..kappa={self.params.kappa}")


def _ratio(ctx: RatioContext, n: int, y: Fraction, direction: int) -> Union[float, Pole]:
    g = ctx.window
    step = ctx.step
    a = ctx.params.a
    denominator = g.value(y)
    if denominator == 0:
        return Pole(y)
    value = 1 / denominator
    for k in range(1, n):
        shifted = y + direction * k * step
        den = g.value(shifted)
        if den == 0:
            return Pole(shifted)
        value *= g.value(shifted - direction * a) / den
    return float(value)


def ratio_R(ctx: RatioContext, n: int, y: Any) -> Union[float, Pole]:
    """R_n(y) = (1/g(y)) prod_{k=1}^{n-1} g(y + k step - a) / g(y + k step)."""
    ctx._check_index(n)
    q = parse_rational(y)
    if not ctx.in_domain("plus", n, AlgebraicPoint.rational(q)):
        lo, hi = ctx.plus_domain(n)
        raise DomainError(f"y={q} outside ]{lo}, {hi}]")
    return _ratio(ctx, n, q, +1)


def ratio_L(ctx: RatioContext, n: int, y: Any) -> Union[float, Pole]:
    """L_n(y) = (1/g(y)) prod_{k=1}^{n-1} g(y - k step + a) / g(y - k step)."""
    ctx._check_index(n)
    q = parse_rational(y)
    if not ctx.in_domain("minus", n, AlgebraicPoint.rational(q)):
        lo, hi = ctx.minus_domain(n)
        raise DomainError(f"y={q} outside [{lo}, {hi}[")
    return _ratio(ctx, n, q, -1)


def order_excess(ctx: RatioContext, side: SideName, n: int, point: AlgebraicPoint, approach: Side) -> Order:
    """Denominator order minus numerator order of R_n (or L_n) at point, one-sided."""
    g = ctx.window
    direction = 1 if side == "plus" else -1
    den: Order = g.order_at(point, approach)
    num: Order = 0
    for k in range(1, n):
        shifted = point.shift(direction * k * ctx.step)
        den += g.order_at(shifted, approach)
        num += g.order_at(shifted.shift(-direction * ctx.params.a), approach)
    return den - num


def admissible_sides(ctx: RatioContext, side: SideName, n: int, point: AlgebraicPoint) -> Tuple[Side, ...]:
    """Sides from which y may approach point while staying in the domain."""
    if side == "plus" and point.compare(ctx.plus_domain(n)[1]) == 0:
        return ("left",)
    if side == "minus" and point.compare(ctx.minus_domain(n)[0]) == 0:
        return ("right",)
    return ("left", "right")


def blows_up(ctx: RatioContext, side: SideName, n: int, z: Union[ZeroPoint, AlgebraicPoint, Fraction]) -> bool:
    ctx._check_index(n)
    point = z.location if isinstance(z, ZeroPoint) else as_point(z)
    if not ctx.window.is_zero_at(point):
        raise DomainError(f"{point} is not a zero of the window")
    if not ctx.in_domain(side, n, point):
        raise DomainError(f"{point} outside the {side} domain for n={n}")
    return any(order_excess(ctx, side, n, point, s) > 0 for s in admissible_sides(ctx, side, n, point))


@dataclass(frozen=True)
class BlowUpWitness:
    side: SideName
    n: int
    zero: ZeroPoint
    one_sided: bool
    target: AlgebraicPoint
    target_vanishes: bool

    @property
    def shifted(self) -> AlgebraicPoint:
        """y+ + n*step for plus witnesses, y- - n*step for minus witnesses."""
        return self.target

    def to_dict(self) -> Dict[str, Any]:
        return {
            "side": self.side,
            "n": self.n,
            "zero": self.zero.location.to_json(),
            "one_sided": self.one_sided,
            "test_point": self.target.to_json(),
            "test_point_vanishes": self.target_vanishes,
        }


@dataclass(frozen=True)
class FrameDecision:
    verdict: Verdict
    failed_condition: Optional[Condition] = None
    witnesses: Tuple[BlowUpWitness, ...] = ()
    offending_points: Tuple[AlgebraicPoint, ...] = ()
    M: Optional[int] = None
    kappa: Optional[int] = None
    step: Optional[Fraction] = None
    fast_path: bool = False
    reason: Optional[str] = None

    @property
    def is_frame(self) -> bool:
        return self.verdict == "Frame"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "failed_condition": self.failed_condition,
            "M": self.M,
            "kappa": self.kappa,
            "step": None if self.step is None else str(self.step),
            "fast_path": self.fast_path,
            "reason": self.reason,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "offending_points": [p.to_json() for p in self.offending_points],
        }


def condition_i_offenders(g: Window, p: LatticeParams) -> List[AlgebraicPoint]:
    """Points x with g(x) = g(x + a) = 0, x in [-a, 0], reported by their zero of g."""
    offenders: List[AlgebraicPoint] = []
    lo, hi = p.alpha - p.a, p.a - p.alpha
    for z in g.zero_catalog:
        loc = z.location
        if loc.compare(lo) >= 0 and loc.compare(hi) <= 0:
            offenders.append(loc)
        elif loc.compare(-p.alpha) > 0 and loc.compare(lo) < 0 and g.is_zero_at(loc.shift(p.a)):
            offenders.append(loc)
    return offenders


def find_witnesses(ctx: RatioContext, side: SideName) -> List[BlowUpWitness]:
    g, p = ctx.window, ctx.params
    direction = 1 if side == "plus" else -1
    witnesses = []
    for n in range(1, p.kappa + 1):
        for z in g.zero_catalog:
            if not ctx.in_domain(side, n, z.location):
                continue
            if not blows_up(ctx, side, n, z):
                continue
            target = z.location.shift(direction * n * ctx.step)
            witnesses.append(
                BlowUpWitness(
                    side=side,
                    n=n,
                    zero=z,
                    one_sided=len(admissible_sides(ctx, side, n, z.location)) == 1,
                    target=target,
                    target_vanishes=g.is_zero_at(target.shift(-direction * p.a)),
                )
            )
    return witnesses


def check_frame(w: Window, a: Any, b: Any) -> FrameDecision:
    params = classify_params(w.alpha, a, b)
    if isinstance(params, OutOfScope):
        logger.info(f"check_frame: out of scope ({params.reason})")
        return FrameDecision(verdict="OutOfScope", reason=params.reason)
    common = dict(M=params.M, kappa=params.kappa, step=params.step)

    if w.interior_positive():
        logger.info(f"check_frame: interior-positive window, Frame at a={params.a} b={params.b}")
        return FrameDecision(verdict="Frame", fast_path=True, **common)

    offenders = condition_i_offenders(w, params)
    if offenders:
        logger.info(f"check_frame: condition (i) fails at {offenders}")
        return FrameDecision(verdict="NotFrame", failed_condition="i", offending_points=tuple(offenders), **common)

    if params.kappa == 0:
        return FrameDecision(verdict="Frame", **common)

    ctx = RatioContext(w, params)
    plus = find_witnesses(ctx, "plus")
    minus = find_witnesses(ctx, "minus")
    witnesses = tuple(plus + minus)

    failing_plus = [wt for wt in plus if wt.target_vanishes]
    if failing_plus:
        return FrameDecision(verdict="NotFrame", failed_condition="ii", witnesses=tuple(failing_plus), **common)
    failing_minus = [wt for wt in minus if wt.target_vanishes]
    if failing_minus:
        return FrameDecision(verdict="NotFrame", failed_condition="iii", witnesses=tuple(failing_minus), **common)

    for wp in plus:
        for wm in minus:
            if wp.target == wm.target.shift(params.a):
                logger.info(f"check_frame: condition (iv) fails for {wp.zero.location} / {wm.zero.location}")
                return FrameDecision(
                    verdict="NotFrame",
                    failed_condition="iv",
                    witnesses=(wp, wm),
                    offending_points=(wp.target,),
                    **common,
                )

    logger.info(f"check_frame: Frame at a={params.a} b={params.b} with {len(witnesses)} passing witnesses")
    return FrameDecision(verdict="Frame", witnesses=witnesses, **common)
