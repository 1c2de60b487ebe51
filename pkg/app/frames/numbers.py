"""
Exact number types: rationals for parameters and algebraic points for zeros.

Every location the engine compares (zeros of g, their shifts by multiples of
(1-ab)/b and by a) is either rational or a real root of an irreducible
polynomial over Q shifted by a rational. Both are represented by
AlgebraicPoint, which keeps the monic minimal polynomial, the index of the
root among the real roots of that polynomial and a rational isolating
interval that is refined on demand.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Annotated, Any, Dict, List, Sequence, Tuple, Union

import sympy as sp
from pydantic import PlainSerializer, PlainValidator, WithJsonSchema

X = sp.Symbol("x")

Number = Union[Fraction, float]


def parse_rational(value: Any) -> Fraction:
    """Parse "p/q", a decimal string, an int or a float into an exact Fraction.

    Floats are converted through their shortest repr so that 0.35 becomes
    7/20 rather than the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Malformed rational {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"Malformed rational '{value}'. Expected 'p/q' or a decimal.")
    raise ValueError(f"Malformed rational {value!r}")


def format_rational(value: Fraction) -> str:
    return str(value)


Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "examples": ["9/10", "1", "-2/15"]}),
]


def horner(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    """Evaluate a polynomial with ascending coefficients exactly."""
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@total_ordering
class AlgebraicPoint:
    """A real algebraic number with exact equality and ordering.

    Rational points use the linear minimal polynomial x - q and a degenerate
    isolating interval [q, q].
    """

    __slots__ = ("_coeffs", "_index", "_lo", "_hi")

    def __init__(self, coeffs: Tuple[Fraction, ...], index: int, lo: Fraction, hi: Fraction):
        if coeffs[-1] != 1:
            raise ValueError("Minimal polynomial must be monic")
        self._coeffs = tuple(coeffs)
        self._index = index
        self._lo = lo
        self._hi = hi

    @classmethod
    def rational(cls, value: Any) -> "AlgebraicPoint":
        q = parse_rational(value)
        return cls((-q, Fraction(1)), 0, q, q)

    @classmethod
    def real_roots_of(cls, factor: sp.Poly) -> List["AlgebraicPoint"]:
        """All real roots of an irreducible polynomial over Q, ascending."""
        monic = factor.monic()
        coeffs = tuple(parse_rational(c) for c in reversed(monic.all_coeffs()))
        if monic.degree() == 1:
            return [cls.rational(-coeffs[0])]
        points = []
        for index, ((lo, hi), _) in enumerate(monic.intervals()):
            points.append(cls(coeffs, index, parse_rational(lo), parse_rational(hi)))
        return points

    @property
    def is_rational(self) -> bool:
        return len(self._coeffs) == 2

    @property
    def value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return -self._coeffs[0]

    @property
    def minimal_polynomial(self) -> sp.Poly:
        return sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(self._coeffs)], X, domain="QQ")

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return self._coeffs

    def shift(self, offset: Any) -> "AlgebraicPoint":
        """Return self + offset for a rational offset."""
        s = parse_rational(offset)
        if s == 0:
            return self
        if self.is_rational:
            return AlgebraicPoint.rational(self.value + s)
        shifted = self.minimal_polynomial.shift(sp.Rational(-s.numerator, s.denominator))
        coeffs = tuple(parse_rational(c) for c in reversed(shifted.all_coeffs()))
        return AlgebraicPoint(coeffs, self._index, self._lo + s, self._hi + s)

    def __add__(self, offset: Any) -> "AlgebraicPoint":
        return self.shift(offset)

    def __sub__(self, offset: Any) -> "AlgebraicPoint":
        return self.shift(-parse_rational(offset))

    def __neg__(self) -> "AlgebraicPoint":
        if self.is_rational:
            return AlgebraicPoint.rational(-self.value)
        degree = len(self._coeffs) - 1
        flipped = [c if k % 2 == degree % 2 else -c for k, c in enumerate(self._coeffs)]
        # the root order reverses under x -> -x
        count = len(self.minimal_polynomial.intervals())
        return AlgebraicPoint(tuple(flipped), count - 1 - self._index, -self._hi, -self._lo)

    def _refine(self) -> None:
        lo, hi = self._lo, self._hi
        mid = (lo + hi) / 2
        if _sign(horner(self._coeffs, mid)) == _sign(horner(self._coeffs, lo)):
            self._lo = mid
        else:
            self._hi = mid

    def enclosure(self, width: Fraction = Fraction(1, 10**12)) -> Tuple[Fraction, Fraction]:
        """Rational interval of at most the given width containing the point."""
        while self._hi - self._lo > width:
            self._refine()
        return self._lo, self._hi

    def _compare_rational(self, q: Fraction) -> int:
        if self.is_rational:
            return _sign(self.value - q)
        if q <= self._lo:
            return 1
        if q >= self._hi:
            return -1
        same_as_lo = _sign(horner(self._coeffs, q)) == _sign(horner(self._coeffs, self._lo))
        return 1 if same_as_lo else -1

    def compare(self, other: Any) -> int:
        if not isinstance(other, AlgebraicPoint):
            return self._compare_rational(parse_rational(other))
        if other.is_rational:
            return self._compare_rational(other.value)
        if self.is_rational:
            return -other._compare_rational(self.value)
        if self == other:
            return 0
        while not (self._hi < other._lo or other._hi < self._lo):
            self._refine()
            other._refine()
        return 1 if self._lo > other._hi else -1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlgebraicPoint):
            return self._coeffs == other._coeffs and self._index == other._index
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.value == other
        return NotImplemented

    def __lt__(self, other: Any) -> bool:
        return self.compare(other) < 0

    def __hash__(self) -> int:
        return hash((self._coeffs, self._index))

    def __float__(self) -> float:
        if self.is_rational:
            return float(self.value)
        lo, hi = self.enclosure(Fraction(1, 2**60) * max(1, abs(self._lo)))
        return float((lo + hi) / 2)

    def as_number(self) -> Number:
        return self.value if self.is_rational else float(self)

    def to_json(self) -> Union[str, Dict[str, Any]]:
        if self.is_rational:
            return str(self.value)
        return {
            "poly": [str(c) for c in self._coeffs],
            "index": self._index,
            "approx": float(self),
        }

    def __repr__(self) -> str:
        if self.is_rational:
            return str(self.value)
        return f"root[{self._index}]({', '.join(str(c) for c in self._coeffs)}) ~ {float(self):.12g}"


Point = Annotated[
    AlgebraicPoint,
    PlainValidator(lambda v: v if isinstance(v, AlgebraicPoint) else AlgebraicPoint.rational(v)),
    PlainSerializer(lambda p: p.to_json()),
    WithJsonSchema({"oneOf": [{"type": "string"}, {"type": "object"}]}),
]
