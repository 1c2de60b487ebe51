"""
Numerical checks that do not rely on the frame decision.

duality_residual samples the duality conditions

    g(x - n/b) h(x) + g(x - n/b + a) h(x + a) = b delta_{n,0},  x in [n/b - a, n/b]

for n = 0, +-1, ..., +-(M-1). zz_lower_bound estimates the lower frame bound
of the Gabor system of g for rational ab = p/q from the p x q window
factorization (Zak transform) matrices

    Phi_{r,s}(x, theta) = sum_d g(x - r/b - s a - d p/b) exp(2 pi i d theta)

as (1/b) min over a uniform (x, theta) grid of the smallest eigenvalue of
Phi Phi^*.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from app.config import get_settings
from app.frames.dual import DualWindow
from app.frames.errors import DomainError
from app.frames.lattice import LatticeParams
from app.frames.numbers import parse_rational
from app.frames.window import Window

logger = logging.getLogger(__name__)

ZZ_CHUNK = 32


@dataclass(frozen=True)
class ResidualReport:
    per_n: Dict[int, float]
    grid: int
    overall_max: float
    tol: Optional[float] = None

    @property
    def passed(self) -> Optional[bool]:
        return None if self.tol is None else self.overall_max < self.tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": 1,
            "grid": self.grid,
            "per_n": {str(n): r for n, r in sorted(self.per_n.items())},
            "overall_max": self.overall_max,
            "tol": self.tol,
            "passed": self.passed,
        }


def _band_residual(g: Window, h: DualWindow, p: LatticeParams, n: int, grid: int, breaks: np.ndarray, g_breaks: np.ndarray) -> float:
    a, b = float(p.a), float(p.b)
    shift = n / b
    lo, hi = shift - a, shift
    extra = np.concatenate([breaks, breaks - a, g_breaks + shift, g_breaks + shift - a])
    xs = np.concatenate([np.linspace(lo, hi, grid), extra[(extra >= lo) & (extra <= hi)]])
    lhs = g.eval_many(xs - shift) * h.evaluate_many(xs) + g.eval_many(xs - shift + a) * h.evaluate_many(xs + a)
    target = b if n == 0 else 0.0
    return float(np.max(np.abs(lhs - target)))


def duality_residual(g: Window, h: DualWindow, p: LatticeParams, grid: int, tol: Optional[float] = None) -> ResidualReport:
    if grid < 2:
        raise DomainError(f"grid must be at least 2 (got {grid})")
    if h.params != p or h.window != g:
        raise DomainError("Window or lattice data do not match the dual window")
    breaks = np.array(h.breakpoints())
    g_breaks = np.array([float(t) for t in g.breakpoints])
    indices = list(range(-(p.M - 1), p.M))
    with ThreadPoolExecutor(max_workers=get_settings().threads) as pool:
        values = list(pool.map(lambda n: _band_residual(g, h, p, n, grid, breaks, g_breaks), indices))
    per_n = dict(zip(indices, values))
    report = ResidualReport(per_n=per_n, grid=grid, overall_max=max(values), tol=tol)
    logger.info(f"duality_residual: overall max {report.overall_max:.3e} over {len(indices)} bands")
    return report


def zak_matrices(g: Window, a: Any, b: Any, xs: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Phi(x, theta) for every grid pair; shape (len(xs), len(thetas), p, q)."""
    a, b = parse_rational(a), parse_rational(b)
    ratio = a * b
    p, q = ratio.numerator, ratio.denominator
    period = p / float(b)
    alpha = float(g.alpha)
    r = np.arange(p)[:, None, None]
    s = np.arange(q)[None, :, None]
    offsets = r / float(b) + s * float(a)
    lo = math.floor((float(np.min(xs)) - float(offsets.max()) - alpha) / period) - 1
    hi = math.ceil((float(np.max(xs)) + alpha) / period) + 1
    d = np.arange(lo, hi + 1)
    phases = np.exp(2j * np.pi * np.outer(thetas, d))
    args = xs[:, None, None, None] - offsets[None, :, :, :] - d[None, None, None, :] * period
    samples = g.eval_many(args)
    return np.einsum("xrsd,td->xtrs", samples, phases)


def zz_lower_bound(g: Window, a: Any, b: Any, x_grid: int, nu_grid: int) -> float:
    a, b = parse_rational(a), parse_rational(b)
    if a <= 0 or b <= 0:
        raise DomainError("a and b must be positive")
    if x_grid < 1 or nu_grid < 1:
        raise DomainError("grid sizes must be positive")
    xs = np.arange(x_grid) / x_grid / float(b)
    thetas = np.arange(nu_grid) / nu_grid
    smallest = math.inf
    for start in range(0, x_grid, ZZ_CHUNK):
        phi = zak_matrices(g, a, b, xs[start:start + ZZ_CHUNK], thetas)
        gram = phi @ np.conj(np.swapaxes(phi, -1, -2))
        smallest = min(smallest, float(np.min(np.linalg.eigvalsh(gram)[..., 0])))
    estimate = max(smallest, 0.0) / float(b)
    logger.info(f"zz_lower_bound: a={a} b={b} grid={x_grid}x{nu_grid} -> {estimate:.6e}")
    return estimate
