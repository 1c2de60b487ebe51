"""
Lattice parameters M and kappa for the region alpha <= a < 2 alpha, ab < 1.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from app.frames.errors import DomainError
from app.frames.numbers import parse_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OutOfScope:
    """Parameters outside the region where the characterization applies."""

    reason: str
    bound: str

    verdict = "OutOfScope"


@dataclass(frozen=True)
class LatticeParams:
    alpha: Fraction
    a: Fraction
    b: Fraction
    M: int
    kappa: int

    @property
    def ab(self) -> Fraction:
        return self.a * self.b

    @property
    def step(self) -> Fraction:
        """The shift unit (1 - ab)/b."""
        return (1 - self.ab) / self.b

    @property
    def support_radius(self) -> Fraction:
        return self.a * self.M

    def band_offset(self, n: int) -> Fraction:
        return Fraction(n) / self.b


def redundancy_index(ab: Fraction) -> int:
    """The unique M >= 1 with (M-1)/M <= ab < M/(M+1), for 0 < ab < 1."""
    return math.floor(ab / (1 - ab)) + 1


def kappa_of(alpha: Fraction, a: Fraction, b: Fraction) -> int:
    """Largest integer k with (1 - ab) k <= b alpha."""
    return math.floor(b * alpha / (1 - a * b))


def classify_params(alpha: Any, a: Any, b: Any) -> Union[LatticeParams, OutOfScope]:
    alpha, a, b = parse_rational(alpha), parse_rational(a), parse_rational(b)
    if alpha <= 0 or a <= 0 or b <= 0:
        raise DomainError(f"alpha, a and b must be positive (got alpha={alpha}, a={a}, b={b})")
    if a < alpha:
        return OutOfScope(f"a={a} is below alpha={alpha}", "a < alpha")
    if a >= 2 * alpha:
        return OutOfScope(f"a={a} is not below 2*alpha={2 * alpha}", "a >= 2 alpha")
    ab = a * b
    if ab >= 1:
        return OutOfScope(f"ab={ab} is not below 1", "ab >= 1")
    M = redundancy_index(ab)
    if M == 1:
        return OutOfScope("M=1 outside the characterized region (needs M >= 2)", "ab < 1/2")
    kappa = kappa_of(alpha, a, b)
    logger.debug(f"alpha={alpha} a={a} b={b}: M={M} kappa={kappa}")
    return LatticeParams(alpha=alpha, a=a, b=b, M=M, kappa=kappa)
