"""
Compactly supported piecewise-polynomial windows.

A Window g has support [-alpha, alpha], is continuous on the real line and
is given by polynomial pieces with rational coefficients on rational
intervals tiling the support. The zero catalog lists every zero in
[-alpha, alpha] with its one-sided vanishing orders, which is what the
frame conditions need.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Any, Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from app.frames.errors import InvalidWindowError
from app.frames.numbers import X, AlgebraicPoint, horner, parse_rational

logger = logging.getLogger(__name__)

Side = Literal["left", "right"]
Order = Union[int, float]
INF = math.inf

PointLike = Union[AlgebraicPoint, Fraction, int]


def as_point(value: PointLike) -> AlgebraicPoint:
    return value if isinstance(value, AlgebraicPoint) else AlgebraicPoint.rational(value)


@dataclass(frozen=True)
class Piece:
    """Polynomial with ascending rational coefficients on [lo, hi]."""

    lo: Fraction
    hi: Fraction
    coeffs: Tuple[Fraction, ...]

    def value(self, x: Fraction) -> Fraction:
        return horner(self.coeffs, x)

    @cached_property
    def poly(self) -> sp.Poly:
        return sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], X, domain="QQ")

    @cached_property
    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def contains(self, point: AlgebraicPoint) -> bool:
        return point.compare(self.lo) >= 0 and point.compare(self.hi) <= 0

    def scaled(self, c: Fraction) -> "Piece":
        return Piece(self.lo, self.hi, tuple(c * k for k in self.coeffs))

    def mirrored(self) -> "Piece":
        return Piece(-self.hi, -self.lo, tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))


@dataclass(frozen=True)
class ZeroPoint:
    """A zero of g with its one-sided vanishing orders.

    Orders are +inf on the side facing away from the support at -alpha and
    alpha, since g vanishes identically there.
    """

    location: AlgebraicPoint
    left_order: Order
    right_order: Order

    @property
    def multiplicity(self) -> int:
        return int(min(self.left_order, self.right_order))

    def __float__(self) -> float:
        return float(self.location)


def _strip(coeffs: Iterable[Any]) -> Tuple[Fraction, ...]:
    values = [parse_rational(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


class Window:
    """Exact piecewise-polynomial window in V_alpha.

    Windows are immutable after construction; all methods are pure.
    """

    def __init__(self, alpha: Any, pieces: Sequence[Tuple[Any, Any, Sequence[Any]]]):
        self.alpha = parse_rational(alpha)
        if self.alpha <= 0:
            raise InvalidWindowError("Empty support: alpha must be positive")
        if not pieces:
            raise InvalidWindowError("Empty support: a window needs at least one piece")
        built = []
        for lo, hi, coeffs in pieces:
            piece = Piece(parse_rational(lo), parse_rational(hi), _strip(coeffs))
            if piece.lo >= piece.hi:
                raise InvalidWindowError(f"Piece interval [{piece.lo}, {piece.hi}] is empty")
            if not piece.coeffs:
                raise InvalidWindowError(
                    f"Piece on [{piece.lo}, {piece.hi}] is identically zero (infinitely many zeros)"
                )
            built.append(piece)
        self.pieces: Tuple[Piece, ...] = tuple(built)
        self._validate()
        self.breakpoints: Tuple[Fraction, ...] = (self.pieces[0].lo,) + tuple(p.hi for p in self.pieces)
        self._leading_cache: Dict[Tuple[AlgebraicPoint, str], Tuple[Order, float]] = {}
        self.zero_catalog: Tuple[ZeroPoint, ...] = self._catalog_zeros()
        logger.debug(f"Window alpha={self.alpha} with {len(self.pieces)} pieces, {len(self.zero_catalog)} zeros")

    def _validate(self) -> None:
        first, last = self.pieces[0], self.pieces[-1]
        if first.lo != -self.alpha or last.hi != self.alpha:
            raise InvalidWindowError(f"Pieces must tile [-{self.alpha}, {self.alpha}] exactly")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.hi != right.lo:
                raise InvalidWindowError(f"Pieces leave a gap or overlap at {left.hi} / {right.lo}")
            if left.value(left.hi) != right.value(right.lo):
                raise InvalidWindowError(
                    f"Discontinuity at breakpoint {left.hi}: {left.value(left.hi)} != {right.value(right.lo)}"
                )
        if first.value(first.lo) != 0 or last.value(last.hi) != 0:
            raise InvalidWindowError("Window must vanish at -alpha and alpha")

    def _catalog_zeros(self) -> Tuple[ZeroPoint, ...]:
        orders: Dict[AlgebraicPoint, List[Order]] = {}
        for piece in self.pieces:
            _, factors = piece.poly.factor_list()
            for factor, multiplicity in factors:
                for root in AlgebraicPoint.real_roots_of(factor):
                    if not piece.contains(root):
                        continue
                    slot = orders.setdefault(root, [0, 0])
                    if root != piece.lo:
                        slot[0] = multiplicity
                    if root != piece.hi:
                        slot[1] = multiplicity
        orders.setdefault(AlgebraicPoint.rational(-self.alpha), [0, 0])[0] = INF
        orders.setdefault(AlgebraicPoint.rational(self.alpha), [0, 0])[1] = INF
        catalog = [ZeroPoint(point, left, right) for point, (left, right) in orders.items()]
        catalog.sort(key=lambda z: z.location)
        return tuple(catalog)

    # evaluation

    def value(self, x: Any) -> Fraction:
        """Exact value at a rational point."""
        q = parse_rational(x)
        if q <= -self.alpha or q >= self.alpha:
            return Fraction(0)
        for piece in self.pieces:
            if piece.lo <= q <= piece.hi:
                return piece.value(q)
        return Fraction(0)

    def eval(self, x: Any) -> float:
        """Value at x as binary floating point from exact intermediates."""
        if isinstance(x, float):
            if not math.isfinite(x):
                return 0.0
            return float(self.value(Fraction(x)))
        return float(self.value(x))

    __call__ = eval

    def eval_many(self, xs: Any) -> np.ndarray:
        """Vectorised float evaluation; 0 outside the support."""
        xs = np.asarray(xs, dtype=float)
        out = np.zeros_like(xs)
        for piece in self.pieces:
            mask = (xs >= float(piece.lo)) & (xs <= float(piece.hi))
            if mask.any():
                out[mask] = np.polynomial.polynomial.polyval(xs[mask], piece.float_coeffs)
        return out

    # zero analysis

    @property
    def interior_zeros(self) -> Tuple[ZeroPoint, ...]:
        return tuple(z for z in self.zero_catalog if abs(z.location.as_number()) < self.alpha)

    def zero_at(self, point: PointLike) -> Optional[ZeroPoint]:
        p = as_point(point)
        for z in self.zero_catalog:
            if z.location == p:
                return z
        return None

    def _piece_for(self, point: AlgebraicPoint, side: Side) -> Optional[Piece]:
        for piece in self.pieces:
            lo, hi = point.compare(piece.lo), point.compare(piece.hi)
            if side == "right" and lo >= 0 and hi < 0:
                return piece
            if side == "left" and lo > 0 and hi <= 0:
                return piece
        return None

    def is_zero_at(self, point: PointLike) -> bool:
        """Exact test g(point) == 0, including points outside the support."""
        p = as_point(point)
        if p.compare(-self.alpha) <= 0 or p.compare(self.alpha) >= 0:
            return True
        if p.is_rational:
            return self.value(p.value) == 0
        piece = self._piece_for(p, "right")
        return piece is not None and sp.rem(piece.poly, p.minimal_polynomial).is_zero

    def leading_term(self, point: PointLike, side: Side) -> Tuple[Order, float]:
        """Order and coefficient c of g(t + d) ~ c d^order as d -> 0 from one side.

        The order is +inf where g vanishes identically on that side.
        """
        p = as_point(point)
        key = (p, side)
        if key in self._leading_cache:
            return self._leading_cache[key]
        piece = self._piece_for(p, side)
        if piece is None:
            result: Tuple[Order, float] = (INF, 0.0)
        elif p.is_rational:
            shifted = piece.poly.shift(sp.Rational(p.value.numerator, p.value.denominator))
            coeffs = list(reversed(shifted.all_coeffs()))
            order = next(k for k, c in enumerate(coeffs) if c != 0)
            result = (order, float(coeffs[order]))
        else:
            minimal = p.minimal_polynomial
            quotient, order = piece.poly, 0
            while True:
                q, r = sp.div(quotient, minimal)
                if not r.is_zero:
                    break
                quotient, order = q, order + 1
            derivative = piece.poly.diff((X, order)) if order else piece.poly
            value = float(derivative.eval(sp.Float(float(p), 30)))
            result = (order, value / factorial(order))
        self._leading_cache[key] = result
        return result

    def order_at(self, point: PointLike, side: Side) -> Order:
        return self.leading_term(point, side)[0]

    def interior_positive(self) -> bool:
        """True iff g > 0 on ]-alpha, alpha[."""
        if self.interior_zeros:
            return False
        return all(piece.value((piece.lo + piece.hi) / 2) > 0 for piece in self.pieces)

    def min_abs_on(self, lo: float, hi: float) -> float:
        """Minimum of |g| on the closed interval [lo, hi] (float, via piece extrema)."""
        candidates = [lo, hi]
        for piece in self.pieces:
            plo, phi = max(lo, float(piece.lo)), min(hi, float(piece.hi))
            if plo > phi:
                continue
            candidates.extend([plo, phi])
            # extrema of g and sign changes of g
            for poly in (np.polynomial.polynomial.polyder(piece.float_coeffs), piece.float_coeffs):
                if poly.size < 2 or not np.any(poly[1:]):
                    continue
                for root in np.polynomial.polynomial.polyroots(poly):
                    if abs(root.imag) < 1e-12 and plo <= root.real <= phi:
                        candidates.append(root.real)
        return float(np.min(np.abs(self.eval_many(np.array(candidates)))))

    # transforms

    def mirror(self) -> "Window":
        return Window(self.alpha, [(p.lo, p.hi, p.coeffs) for p in reversed([q.mirrored() for q in self.pieces])])

    def scale(self, c: Any) -> "Window":
        factor = parse_rational(c)
        if factor == 0:
            raise InvalidWindowError("Scaling by zero leaves the window class")
        return Window(self.alpha, [(p.lo, p.hi, p.coeffs) for p in (q.scaled(factor) for q in self.pieces)])

    def is_even(self) -> bool:
        return self.mirror().pieces == self.pieces

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": str(self.alpha),
            "pieces": [
                {"interval": [str(p.lo), str(p.hi)], "coeffs": [str(c) for c in p.coeffs]}
                for p in self.pieces
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Window":
        try:
            pieces = [(p["interval"][0], p["interval"][1], p["coeffs"]) for p in data["pieces"]]
            return cls(data["alpha"], pieces)
        except (KeyError, IndexError, TypeError) as e:
            raise InvalidWindowError(f"Malformed window document: {e}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Window):
            return NotImplemented
        return self.alpha == other.alpha and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash((self.alpha, self.pieces))

    def __repr__(self) -> str:
        return f"Window(alpha={self.alpha}, pieces={len(self.pieces)}, zeros={[str(z.location) for z in self.zero_catalog]})"


def make_piecewise(alpha: Any, pieces: Sequence[Tuple[Any, Any, Sequence[Any]]]) -> Window:
    """General constructor for windows in V_alpha."""
    return Window(alpha, pieces)


def make_polynomial_window(alpha: Any, expr: Union[str, sp.Expr]) -> Window:
    """Single-piece window given by a polynomial expression in x on [-alpha, alpha]."""
    poly = sp.Poly(sp.sympify(expr), X, domain="QQ")
    a = parse_rational(alpha)
    return Window(a, [(-a, a, list(reversed(poly.all_coeffs())))])


def make_bspline(n: int) -> Window:
    """Centred B-spline B_N on [-N/2, N/2] with unit knot spacing."""
    if n <= 1:
        raise InvalidWindowError("B_1 is discontinuous and outside V_alpha; use N >= 2")
    half = sp.Rational(n, 2)
    pieces = []
    for j in range(n):
        expr = sum(
            (-1) ** k * comb(n, k) * (X + half - k) ** (n - 1) for k in range(j + 1)
        ) / factorial(n - 1)
        poly = sp.Poly(sp.expand(expr), X, domain="QQ")
        pieces.append((-half + j, -half + j + 1, list(reversed(poly.all_coeffs()))))
    return Window(Fraction(n, 2), pieces)
