"""
Compactly supported dual windows.

On [-alpha, alpha] the dual h is assembled from a case ladder whose values
are either 0 or b/g:

    core           [alpha - a, a - alpha]                    b/g
    ball_plus      B(y~; eps) within [a - alpha, alpha]      0
    ball_plus_a    B(y~ - a; eps) within [-alpha, alpha - a] b/g
    ball_minus     B(w^; eps) within [-alpha, alpha - a]     0
    ball_minus_a   B(w^ + a; eps) within [a - alpha, alpha]  b/g
    rest_neg       remaining part of [-a, 0]                 0
    rest_pos       remaining part of [0, a]                  b/g

Balls are open; the first matching rule wins. Outside [-alpha, alpha] h
lives on the bands +-[n/b, an + alpha], n = 1..kappa, where the duality
conditions for n != 0 determine it recursively:

    H_n(y) = -g(y - a) / g(y) * H_{n-1}(y + step),  y in [0, alpha - n step]
    G_n(w) = -g(w + a) / g(w) * G_{n-1}(w - step),  w in [-alpha + n step, 0]

with h(y + n/b) = H_n(y), h(w - n/b) = G_n(w) and H_0 = G_0 = h on
[-alpha, alpha]. At the isolated points where a denominator vanishes h
takes its one-sided limit. h is 0 everywhere else.
"""
from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np

from app.config import get_settings
from app.frames.analysis import RatioContext, blows_up, check_frame
from app.frames.errors import ConstructionError, DomainError
from app.frames.lattice import LatticeParams, classify_params
from app.frames.numbers import AlgebraicPoint
from app.frames.window import INF, Side, Window, ZeroPoint

logger = logging.getLogger(__name__)

CaseRule = Literal["core", "ball_plus", "ball_plus_a", "ball_minus", "ball_minus_a", "rest_neg", "rest_pos"]

RECIPROCAL_RULES = frozenset({"core", "ball_plus_a", "ball_minus_a", "rest_pos"})
SNAP = 1e-12


def _snap_tol(x: float) -> float:
    return SNAP * max(1.0, abs(x))


def rational_between(lo: AlgebraicPoint, hi: AlgebraicPoint) -> Fraction:
    """A rational strictly between lo < hi."""
    width = Fraction(1, 2)
    while True:
        lo_lo, lo_hi = lo.enclosure(width)
        hi_lo, hi_hi = hi.enclosure(width)
        if lo_hi < hi_lo:
            return (lo_hi + hi_lo) / 2
        width /= 16


@dataclass(frozen=True)
class ZeroSets:
    Y: Tuple[Tuple[ZeroPoint, ...], ...]
    W: Tuple[Tuple[ZeroPoint, ...], ...]

    @property
    def r(self) -> Tuple[int, ...]:
        return tuple(len(ys) for ys in self.Y)

    @property
    def l(self) -> Tuple[int, ...]:
        return tuple(len(ws) for ws in self.W)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "Y": [[z.location.to_json() for z in ys] for ys in self.Y],
            "W": [[z.location.to_json() for z in ws] for ws in self.W],
        }


@dataclass(frozen=True)
class BallSystem:
    epsilon: Fraction
    delta: float
    y_tilde: Tuple[Tuple[int, AlgebraicPoint], ...]
    w_hat: Tuple[Tuple[int, AlgebraicPoint], ...]
    halvings: int

    @property
    def plus_centers(self) -> List[AlgebraicPoint]:
        return [c for _, c in self.y_tilde]

    @property
    def minus_centers(self) -> List[AlgebraicPoint]:
        return [c for _, c in self.w_hat]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "epsilon": str(self.epsilon),
            "delta": self.delta,
            "halvings": self.halvings,
            "y_tilde": [{"n": n, "center": c.to_json()} for n, c in self.y_tilde],
            "w_hat": [{"m": m, "center": c.to_json()} for m, c in self.w_hat],
        }


def _require_frame(w: Window, p: LatticeParams) -> None:
    decision = check_frame(w, p.a, p.b)
    if not decision.is_frame:
        raise DomainError(
            f"Dual construction needs a frame; got {decision.verdict}"
            + (f" (condition {decision.failed_condition})" if decision.failed_condition else "")
        )


def build_zero_sets(w: Window, p: LatticeParams, checked: bool = False) -> ZeroSets:
    if not checked:
        _require_frame(w, p)
    ctx = RatioContext(w, p)
    Y: List[Tuple[ZeroPoint, ...]] = []
    W: List[Tuple[ZeroPoint, ...]] = []
    upper_y0, lower_w0 = p.a - p.alpha, p.alpha - p.a
    Y.append(tuple(z for z in w.zero_catalog if z.location.compare(upper_y0) > 0))
    W.append(tuple(z for z in w.zero_catalog if z.location.compare(lower_w0) < 0))
    for n in range(1, p.kappa + 1):
        Y.append(tuple(z for z in w.zero_catalog if ctx.in_domain("plus", n, z.location) and blows_up(ctx, "plus", n, z)))
        W.append(tuple(z for z in w.zero_catalog if ctx.in_domain("minus", n, z.location) and blows_up(ctx, "minus", n, z)))
    logger.debug(f"zero sets r={[len(y) for y in Y]} l={[len(x) for x in W]}")
    return ZeroSets(Y=tuple(Y), W=tuple(W))


def _within(point: AlgebraicPoint, center: AlgebraicPoint, radius: Fraction) -> bool:
    """|point - center| <= radius."""
    return point.compare(center.shift(-radius)) >= 0 and point.compare(center.shift(radius)) <= 0


def _distance(p: AlgebraicPoint, q: AlgebraicPoint) -> Fraction:
    if p.is_rational and q.is_rational:
        return abs(p.value - q.value)
    # rational lower bound on the distance, from enclosures
    width = Fraction(1, 2**20)
    while True:
        p_lo, p_hi = p.enclosure(width)
        q_lo, q_hi = q.enclosure(width)
        gap = max(q_lo - p_hi, p_lo - q_hi)
        if gap > 0:
            return gap
        width /= 1024


def _balls_ok(
    w: Window,
    p: LatticeParams,
    eps: Fraction,
    y_tilde: Sequence[Tuple[int, AlgebraicPoint]],
    w_hat: Sequence[Tuple[int, AlgebraicPoint]],
) -> bool:
    zeros = [z.location for z in w.zero_catalog]
    shifted = [c.shift(-p.a) for _, c in y_tilde] + [c.shift(p.a) for _, c in w_hat]
    for point in shifted:
        if any(_within(z, point, eps) for z in zeros):
            return False
    for _, yc in y_tilde:
        for _, wc in w_hat:
            target = wc.shift(p.a)
            if not (yc.shift(eps).compare(target.shift(-eps)) <= 0 or target.shift(eps).compare(yc.shift(-eps)) <= 0):
                return False
    for n, yc in y_tilde:
        if n >= 1 and yc.shift(-eps).compare(p.a - p.alpha) < 0:
            return False
    for m, wc in w_hat:
        if m >= 1 and wc.shift(eps).compare(p.alpha - p.a) > 0:
            return False
    return True


def choose_epsilon(w: Window, zs: ZeroSets, p: LatticeParams) -> BallSystem:
    step = p.step
    y_tilde = tuple((n, z.location.shift(n * step)) for n, ys in enumerate(zs.Y) for z in ys)
    w_hat = tuple((m, z.location.shift(-m * step)) for m, ws in enumerate(zs.W) for z in ws)

    shifted = [c.shift(-p.a) for _, c in y_tilde] + [c.shift(p.a) for _, c in w_hat]
    for point in shifted:
        if w.is_zero_at(point):
            raise ConstructionError(f"Shifted center {point} is a zero of g; frame conditions are violated")
    for _, yc in y_tilde:
        for _, wc in w_hat:
            if yc == wc.shift(p.a):
                raise ConstructionError(f"Ball centers {yc} and {wc} + a coincide")

    points: List[AlgebraicPoint] = []
    for q in shifted + [z.location for z in w.zero_catalog]:
        if q not in points:
            points.append(q)
    distances = [_distance(x, y) for i, x in enumerate(points) for y in points[i + 1:]]
    eps = min(distances) / 2 if distances else Fraction(1, 2)

    cap = get_settings().epsilon_max_halvings
    halvings = 0
    while not _balls_ok(w, p, eps, y_tilde, w_hat):
        halvings += 1
        if halvings > cap:
            logger.error(f"choose_epsilon: no admissible epsilon after {cap} halvings")
            raise ConstructionError(f"No admissible epsilon found after {cap} halvings")
        eps /= 2
    logger.debug(f"choose_epsilon: eps={eps} after {halvings} halvings")

    delta = math.inf
    for point in shifted:
        c = float(point)
        delta = min(delta, w.min_abs_on(c - float(eps), c + float(eps)))
    if not shifted:
        delta = 0.0
    if shifted and delta <= 0:
        raise ConstructionError(f"|g| is not bounded below on the shifted balls (delta={delta})")
    return BallSystem(epsilon=eps, delta=delta, y_tilde=y_tilde, w_hat=w_hat, halvings=halvings)


@dataclass(frozen=True)
class Segment:
    lo: AlgebraicPoint
    hi: AlgebraicPoint
    lo_closed: bool
    hi_closed: bool
    rule: CaseRule

    @property
    def reciprocal(self) -> bool:
        return self.rule in RECIPROCAL_RULES

    def to_dict(self) -> Dict[str, Any]:
        return {
            "interval": [self.lo.to_json(), self.hi.to_json()],
            "closed": [self.lo_closed, self.hi_closed],
            "rule": self.rule,
            "value": "b/g" if self.reciprocal else "0",
        }


class CaseLadder:
    """Exact case tree for h on [-alpha, alpha]."""

    def __init__(self, w: Window, p: LatticeParams, balls: BallSystem):
        self.w, self.p, self.balls = w, p, balls
        alpha, a, eps = p.alpha, p.a, balls.epsilon
        self._pos = (a - alpha, alpha)
        self._neg = (-alpha, alpha - a)
        candidates: List[AlgebraicPoint] = [AlgebraicPoint.rational(q) for q in (-alpha, alpha - a, 0, a - alpha, alpha)]
        for center in balls.plus_centers:
            for edge in (center.shift(-eps), center.shift(eps)):
                candidates += [edge, edge.shift(-a)]
        for center in balls.minus_centers:
            for edge in (center.shift(-eps), center.shift(eps)):
                candidates += [edge, edge.shift(a)]
        points = sorted({c for c in candidates if c.compare(-alpha) >= 0 and c.compare(alpha) <= 0})
        self.points: List[AlgebraicPoint] = points
        self.point_rules: List[CaseRule] = [self.rule_at(q) for q in points]
        self.open_rules: List[CaseRule] = [
            self.rule_at(AlgebraicPoint.rational(rational_between(lo, hi))) for lo, hi in zip(points, points[1:])
        ]
        self.floats = np.array([float(q) for q in points])

    def _in_range(self, x: AlgebraicPoint, bounds: Tuple[Fraction, Fraction]) -> bool:
        return x.compare(bounds[0]) >= 0 and x.compare(bounds[1]) <= 0

    def _in_ball(self, x: AlgebraicPoint, centers: Sequence[AlgebraicPoint], offset: Fraction) -> bool:
        eps = self.balls.epsilon
        for c in centers:
            cc = c.shift(offset)
            if x.compare(cc.shift(-eps)) > 0 and x.compare(cc.shift(eps)) < 0:
                return True
        return False

    def rule_at(self, x: AlgebraicPoint) -> CaseRule:
        p = self.p
        if x.compare(p.alpha - p.a) >= 0 and x.compare(p.a - p.alpha) <= 0:
            return "core"
        if self._in_range(x, self._pos) and self._in_ball(x, self.balls.plus_centers, Fraction(0)):
            return "ball_plus"
        if self._in_range(x, self._neg) and self._in_ball(x, self.balls.plus_centers, -p.a):
            return "ball_plus_a"
        if self._in_range(x, self._neg) and self._in_ball(x, self.balls.minus_centers, Fraction(0)):
            return "ball_minus"
        if self._in_range(x, self._pos) and self._in_ball(x, self.balls.minus_centers, p.a):
            return "ball_minus_a"
        return "rest_neg" if x.compare(0) <= 0 else "rest_pos"

    def rule_near(self, x: AlgebraicPoint, side: Side) -> CaseRule:
        """Rule on the open segment adjacent to x from the given side."""
        index = bisect.bisect_left(self.points, x)
        on_point = index < len(self.points) and self.points[index] == x
        if side == "left":
            k = index - 1
        else:
            k = index if on_point else index - 1
        if k < 0 or k >= len(self.open_rules):
            return "rest_neg"
        return self.open_rules[k]

    def rules_many(self, xs: np.ndarray) -> np.ndarray:
        """Boolean mask: True where the rule is b/g; False where h is 0 (or outside)."""
        recip_points = np.array([r in RECIPROCAL_RULES for r in self.point_rules], dtype=bool)
        recip_open = np.array([r in RECIPROCAL_RULES for r in self.open_rules], dtype=bool)
        n = len(self.floats)
        tol = SNAP * np.maximum(1.0, np.abs(self.floats))
        idx = np.searchsorted(self.floats, xs, side="left")
        right = np.minimum(idx, n - 1)
        left = np.maximum(idx - 1, 0)
        near_right = (idx < n) & (np.abs(xs - self.floats[right]) <= tol[right])
        near_left = (idx > 0) & (np.abs(xs - self.floats[left]) <= tol[left])
        inside = (idx > 0) & (idx < n)
        out = np.where(inside, recip_open[np.clip(idx - 1, 0, n - 2)], False)
        out = np.where(near_left, recip_points[left], out)
        out = np.where(near_right, recip_points[right], out)
        return out

    def segments(self) -> List[Segment]:
        """Merged segments with exact endpoints."""
        atoms: List[Tuple[AlgebraicPoint, AlgebraicPoint, bool, bool, CaseRule]] = []
        for i, q in enumerate(self.points):
            atoms.append((q, q, True, True, self.point_rules[i]))
            if i < len(self.open_rules):
                atoms.append((q, self.points[i + 1], False, False, self.open_rules[i]))
        merged: List[List[Any]] = []
        for lo, hi, lc, hc, rule in atoms:
            if merged and merged[-1][4] == rule:
                merged[-1][1], merged[-1][3] = hi, hc
            else:
                merged.append([lo, hi, lc, hc, rule])
        return [Segment(*m) for m in merged]


@dataclass(frozen=True)
class SingularPoint:
    band: int
    location: AlgebraicPoint
    value: float

    def to_dict(self) -> Dict[str, Any]:
        return {"band": self.band, "y": self.location.to_json(), "value": self.value}


class DualWindow:
    """Piecewise-defined dual window h; immutable after construction."""

    def __init__(self, w: Window, p: LatticeParams, zero_sets: ZeroSets, balls: BallSystem):
        self.window = w
        self.params = p
        self.zero_sets = zero_sets
        self.balls = balls
        self.ladder = CaseLadder(w, p, balls)
        self._step = float(p.step)
        self.singular: Dict[int, Tuple[SingularPoint, ...]] = {}
        for n in range(1, p.kappa + 1):
            self.singular[n] = self._singular_points(n, +1)
            self.singular[-n] = self._singular_points(n, -1)
        self.bound = self._bound()
        self.audit_residual: Optional[float] = None

    @property
    def a(self) -> Fraction:
        return self.params.a

    @property
    def b(self) -> Fraction:
        return self.params.b

    @property
    def M(self) -> int:
        return self.params.M

    @property
    def support(self) -> Tuple[Fraction, Fraction]:
        return -self.params.support_radius, self.params.support_radius

    def band_interval(self, n: int) -> Tuple[Fraction, Fraction]:
        """[n/b, an + alpha] for n >= 1 and its reflection for n <= -1."""
        p = self.params
        k = abs(n)
        lo, hi = Fraction(k) / p.b, p.a * k + p.alpha
        return (lo, hi) if n > 0 else (-hi, -lo)

    def nonzero_region(self) -> List[Tuple[Fraction, Fraction]]:
        """Union of closed intervals outside which h vanishes identically."""
        p = self.params
        bands = [self.band_interval(-k) for k in range(p.kappa, 0, -1)]
        return bands + [(-p.alpha, p.alpha)] + [self.band_interval(k) for k in range(1, p.kappa + 1)]

    # singular points of the band recursion

    def _band_domain(self, n: int, direction: int) -> Tuple[Fraction, Fraction]:
        p = self.params
        if direction > 0:
            return Fraction(0), p.alpha - n * p.step
        return -p.alpha + n * p.step, Fraction(0)

    def _limit(self, n: int, direction: int, s: AlgebraicPoint, side: Side) -> float:
        g, p = self.window, self.params
        den, num = 0, 0
        coeff = 1.0
        for k in range(n):
            base = s.shift(direction * k * p.step)
            order_den, c_den = g.leading_term(base, side)
            order_num, c_num = g.leading_term(base.shift(-direction * p.a), side)
            den += order_den
            num += order_num
            if order_den < INF and order_num < INF:
                coeff *= c_num / c_den if c_den else 0.0
        target = s.shift(direction * n * p.step)
        if self.ladder.rule_near(target, side) not in RECIPROCAL_RULES:
            return 0.0
        if num == INF or num > den:
            return 0.0
        if den > num:
            raise ConstructionError(
                f"h is unbounded near {s} in band {direction * n} (side {side}); the ball system does not cover it"
            )
        g_target = g.eval(float(target))
        return (-1) ** n * coeff * float(p.b) / g_target

    def _singular_points(self, n: int, direction: int) -> Tuple[SingularPoint, ...]:
        g, p = self.window, self.params
        lo, hi = self._band_domain(n, direction)
        found: List[AlgebraicPoint] = []
        for z in g.zero_catalog:
            for k in range(n):
                s = z.location.shift(-direction * k * p.step)
                if s.compare(lo) >= 0 and s.compare(hi) <= 0 and s not in found:
                    found.append(s)
        points = []
        for s in sorted(found):
            sides: List[Side] = []
            if s.compare(lo) > 0:
                sides.append("left")
            if s.compare(hi) < 0:
                sides.append("right")
            limits = [self._limit(n, direction, s, side) for side in sides]
            if len(limits) == 2 and not math.isclose(limits[0], limits[1], rel_tol=1e-9, abs_tol=1e-12):
                logger.warning(f"band {direction * n}: one-sided limits at {s} differ ({limits[0]} vs {limits[1]}); using the left limit")
            points.append(SingularPoint(band=direction * n, location=s, value=limits[0] if limits else 0.0))
        return tuple(points)

    # evaluation

    def _core_many(self, xs: np.ndarray) -> np.ndarray:
        mask = self.ladder.rules_many(xs)
        out = np.zeros(xs.shape)
        if mask.any():
            out[mask] = float(self.params.b) / self.window.eval_many(xs[mask])
        return out

    def _band_many(self, n: int, direction: int, ys: np.ndarray) -> np.ndarray:
        g, p = self.window, self.params
        step, a = self._step, float(p.a)
        base = self._core_many(ys + direction * n * step)
        ratio = np.ones(ys.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            for k in range(n):
                t = ys + direction * k * step
                ratio *= g.eval_many(t - direction * a) / g.eval_many(t)
            out = np.where(base == 0.0, 0.0, (-1) ** n * ratio * base)
        for sp_ in self.singular[direction * n]:
            s = float(sp_.location)
            hit = np.abs(ys - s) <= _snap_tol(s)
            out[hit] = sp_.value
        bad = ~np.isfinite(out)
        if bad.any():
            out[bad] = [self._nearest_singular(direction * n, y) for y in ys[bad]]
        return out

    def _nearest_singular(self, band: int, y: float) -> float:
        points = self.singular.get(band, ())
        if not points:
            return 0.0
        return min(points, key=lambda sp_: abs(float(sp_.location) - y)).value

    def evaluate_many(self, xs: Any) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.zeros(xs.shape)
        p = self.params
        alpha = float(p.alpha)
        core = np.abs(xs) <= alpha + _snap_tol(alpha)
        if core.any():
            out[core] = self._core_many(np.clip(xs[core], -alpha, alpha))
        for n in range(1, p.kappa + 1):
            for direction in (1, -1):
                lo, hi = (float(v) for v in self.band_interval(direction * n))
                mask = (xs >= lo - _snap_tol(lo)) & (xs <= hi + _snap_tol(hi)) & ~core
                if mask.any():
                    out[mask] = self._band_many(n, direction, xs[mask] - direction * n / float(p.b))
        return out

    def evaluate(self, x: Any) -> float:
        return float(self.evaluate_many([float(x)])[0])

    __call__ = evaluate

    def breakpoints(self) -> List[float]:
        """Float breakpoints of h: case-ladder points, band edges and singular points."""
        p = self.params
        inv_b = 1 / float(p.b)
        step = self._step
        out = list(self.ladder.floats)
        for n in range(1, p.kappa + 1):
            for direction in (1, -1):
                out.extend(float(v) for v in self.band_interval(direction * n))
                lo, hi = (float(v) for v in self._band_domain(n, direction))
                for q in self.ladder.floats:
                    y = q - direction * n * step
                    if lo <= y <= hi:
                        out.append(y + direction * n * inv_b)
                out.extend(float(sp_.location) + direction * n * inv_b for sp_ in self.singular[direction * n])
        return sorted(set(out))

    def _bound(self) -> float:
        core_bound = 0.0
        b = float(self.params.b)
        for seg in self.ladder.segments():
            if seg.reciprocal:
                core_bound = max(core_bound, b / self.window.min_abs_on(float(seg.lo), float(seg.hi)))
        sampled = 0.0
        p = self.params
        for n in range(1, p.kappa + 1):
            for direction in (1, -1):
                lo, hi = (float(v) for v in self.band_interval(direction * n))
                xs = np.concatenate([np.linspace(lo, hi, 4097), [x for x in self.breakpoints() if lo <= x <= hi]])
                sampled = max(sampled, float(np.max(np.abs(self.evaluate_many(xs)))))
        return max(core_bound, 1.25 * sampled)

    # exports

    def grid(self, points: int) -> Tuple[np.ndarray, np.ndarray]:
        lo, hi = (float(v) for v in self.support)
        xs = np.linspace(lo, hi, points)
        return xs, self.evaluate_many(xs)

    def case_tree(self) -> Dict[str, Any]:
        p = self.params
        bands = []
        for n in range(1, p.kappa + 1):
            for direction in (1, -1):
                lo, hi = self.band_interval(direction * n)
                blo, bhi = self._band_domain(n, direction)
                bands.append(
                    {
                        "n": direction * n,
                        "interval": [str(lo), str(hi)],
                        "variable_domain": [str(blo), str(bhi)],
                        "recursion": (
                            "H_n(y) = -g(y-a)/g(y) * H_{n-1}(y+step), h(y + n/b) = H_n(y)"
                            if direction > 0
                            else "G_n(w) = -g(w+a)/g(w) * G_{n-1}(w-step), h(w - n/b) = G_n(w)"
                        ),
                        "singular_points": [sp_.to_dict() for sp_ in self.singular[direction * n]],
                    }
                )
        return {
            "schema": 1,
            "alpha": str(p.alpha),
            "a": str(p.a),
            "b": str(p.b),
            "M": p.M,
            "kappa": p.kappa,
            "step": str(p.step),
            "support": [str(v) for v in self.support],
            "nonzero_region": [[str(lo), str(hi)] for lo, hi in self.nonzero_region()],
            "zero_sets": self.zero_sets.to_dict(),
            "balls": self.balls.to_dict(),
            "core": [seg.to_dict() for seg in self.ladder.segments()],
            "bands": bands,
            "bound": self.bound,
        }

    def __repr__(self) -> str:
        p = self.params
        return f"DualWindow(a={p.a}, b={p.b}, M={p.M}, kappa={p.kappa}, eps={self.balls.epsilon})"


def _audit(h: DualWindow) -> float:
    """Worst duality residual over all n at the audit grid, relative to b."""
    settings = get_settings()
    g, p = h.window, h.params
    b, a, inv_b = float(p.b), float(p.a), 1 / float(p.b)
    breaks = np.array(h.breakpoints() + [float(t) for t in g.breakpoints])
    worst = 0.0
    for n in range(-(p.M - 1), p.M):
        lo, hi = n * inv_b - a, n * inv_b
        extra = np.concatenate([breaks, breaks - a, breaks + n * inv_b, breaks + n * inv_b - a])
        xs = np.concatenate([np.linspace(lo, hi, settings.audit_points), extra[(extra >= lo) & (extra <= hi)]])
        lhs = g.eval_many(xs - n * inv_b) * h.evaluate_many(xs) + g.eval_many(xs - n * inv_b + a) * h.evaluate_many(xs + a)
        target = b if n == 0 else 0.0
        worst = max(worst, float(np.max(np.abs(lhs - target))) / b)
    return worst


def construct_dual(w: Window, a: Any, b: Any, audit: bool = True) -> DualWindow:
    params = classify_params(w.alpha, a, b)
    if not isinstance(params, LatticeParams):
        raise DomainError(f"Dual construction needs a frame; got OutOfScope ({params.reason})")
    _require_frame(w, params)
    zero_sets = build_zero_sets(w, params, checked=True)
    balls = choose_epsilon(w, zero_sets, params)
    h = DualWindow(w, params, zero_sets, balls)
    if audit:
        residual = _audit(h)
        h.audit_residual = residual
        tol = get_settings().audit_tol
        scale = max(1.0, h.bound * float(np.max(np.abs(w.eval_many(np.linspace(-float(w.alpha), float(w.alpha), 1025))))) / float(params.b))
        if residual > tol * scale:
            logger.error(f"construct_dual: audit residual {residual:.3e} exceeds {tol * scale:.3e}")
            raise ConstructionError(f"Audit residual {residual:.3e} exceeds tolerance {tol * scale:.3e}")
    logger.info(f"construct_dual: {h!r}, bound={h.bound:.6g}")
    return h
