"""
Frames module - Gabor frame engine for piecewise-polynomial windows
"""
from .errors import ConstructionError, DomainError, GaborError, InvalidWindowError
from .numbers import AlgebraicPoint, parse_rational
from .window import Window, make_bspline, make_piecewise, make_polynomial_window
from .lattice import LatticeParams, OutOfScope, classify_params
from .analysis import FrameDecision, check_frame
from .obstructions import ObstructionCurve, OutOfDomain, candidate_curves, curve_b_at
from .dual import DualWindow, build_zero_sets, construct_dual
from .verify import ResidualReport, duality_residual, zz_lower_bound
from .atlas import RegionLabel, classify_bspline_point, consistency_audit, reduce_to_strip, render_atlas

__all__ = [
    "GaborError",
    "InvalidWindowError",
    "DomainError",
    "ConstructionError",
    "AlgebraicPoint",
    "parse_rational",
    "Window",
    "make_bspline",
    "make_piecewise",
    "make_polynomial_window",
    "LatticeParams",
    "OutOfScope",
    "classify_params",
    "FrameDecision",
    "check_frame",
    "ObstructionCurve",
    "OutOfDomain",
    "candidate_curves",
    "curve_b_at",
    "DualWindow",
    "build_zero_sets",
    "construct_dual",
    "ResidualReport",
    "duality_residual",
    "zz_lower_bound",
    "RegionLabel",
    "classify_bspline_point",
    "consistency_audit",
    "reduce_to_strip",
    "render_atlas",
]
