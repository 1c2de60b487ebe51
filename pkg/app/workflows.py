"""
Workflow functions - Orchestrate the frame engine for the CLI and the API
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from app.frames.analysis import check_frame
from app.frames.atlas import AtlasGrid, classify_bspline_point, consistency_audit, render_atlas
from app.frames.dual import DualWindow, construct_dual
from app.frames.errors import DomainError
from app.frames.lattice import LatticeParams, OutOfScope, classify_params
from app.frames.numbers import parse_rational
from app.frames.obstructions import ObstructionCurve, candidate_curves
from app.frames.verify import ResidualReport, duality_residual, zz_lower_bound
from app.frames.window import Window

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def run_check(w: Window, a: Any, b: Any, bspline: Optional[int] = None) -> Dict[str, Any]:
    """Decide the frame property of (g, a, b).

    Args:
        w: Window g
        a, b: Lattice parameters (rational strings accepted)
        bspline: B-spline order when w is B_N; adds the atlas label to the report

    Returns:
        Report dictionary with "schema", the parameters and the FrameDecision fields
    """
    a, b = parse_rational(a), parse_rational(b)
    decision = check_frame(w, a, b)
    report: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "alpha": str(w.alpha),
        "a": str(a),
        "b": str(b),
        **decision.to_dict(),
    }
    if bspline is not None:
        report["atlas_label"] = classify_bspline_point(bspline, a, b).label
    return report


def require_params(w: Window, a: Any, b: Any) -> LatticeParams:
    params = classify_params(w.alpha, a, b)
    if isinstance(params, OutOfScope):
        raise DomainError(f"Parameters out of scope: {params.reason}")
    return params


def run_dual(w: Window, a: Any, b: Any, grid: Optional[int] = None) -> Tuple[DualWindow, Dict[str, Any]]:
    """Construct the dual window and summarize it.

    Returns:
        (h, report) where report holds a summary, the case tree and, when grid is
        given, uniform samples (x, h(x)) over the support
    """
    h = construct_dual(w, a, b)
    p = h.params
    summary = {
        "a": str(p.a),
        "b": str(p.b),
        "M": p.M,
        "kappa": p.kappa,
        "support": [str(v) for v in h.support],
        "epsilon": str(h.balls.epsilon),
        "delta": h.balls.delta,
        "bound": h.bound,
        "audit_residual": h.audit_residual,
    }
    report: Dict[str, Any] = {"schema": SCHEMA_VERSION, "summary": summary, "case_tree": h.case_tree()}
    if grid is not None:
        xs, ys = h.grid(grid)
        report["samples"] = [[float(x), float(y)] for x, y in zip(xs, ys)]
    return h, report


def run_verify(w: Window, a: Any, b: Any, grid: int = 10000, tol: Optional[float] = None) -> ResidualReport:
    """Construct the dual without its internal audit and sample the duality residuals."""
    params = require_params(w, a, b)
    h = construct_dual(w, params.a, params.b, audit=False)
    return duality_residual(w, h, params, grid, tol)


def run_curves(w: Window, max_index: Optional[int] = None) -> Tuple[List[ObstructionCurve], Dict[str, Any]]:
    curves = candidate_curves(w, max_index)
    return curves, {"schema": SCHEMA_VERSION, "alpha": str(w.alpha), "curves": [c.to_dict() for c in curves]}


def run_atlas(
    N: int,
    a_range: Sequence[Any] = (0, 2),
    b_range: Sequence[Any] = (0, 3),
    resolution: int = 100,
) -> Tuple[AtlasGrid, Dict[str, Any]]:
    grid = render_atlas(N, a_range, b_range, resolution)
    problems = consistency_audit(grid)
    for cell, message in problems[:10]:
        logger.warning(f"run_atlas: cell ({cell.a}, {cell.b}): {message}")
    report = {
        "schema": SCHEMA_VERSION,
        "N": N,
        "resolution": resolution,
        "counts": grid.counts(),
        "cells": [
            {
                "row": c.row,
                "col": c.col,
                "a": str(c.a),
                "b": str(c.b),
                "label": c.region.label,
                "evidence": c.region.evidence_text(),
            }
            for c in grid.cells
        ],
        "audit_problems": len(problems),
    }
    return grid, report


def run_zzbound(w: Window, a: Any, b: Any, grid: int = 64) -> Dict[str, Any]:
    a, b = parse_rational(a), parse_rational(b)
    estimate = zz_lower_bound(w, a, b, grid, grid)
    if not np.isfinite(estimate):
        raise RuntimeError(f"Frame bound estimate is not finite at a={a} b={b}")
    return {"schema": SCHEMA_VERSION, "a": str(a), "b": str(b), "grid": grid, "estimate": estimate}
