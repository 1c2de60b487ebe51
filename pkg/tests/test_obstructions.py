from fractions import Fraction as F

import pytest

from app.frames.analysis import check_frame
from app.frames.obstructions import (
    Interval,
    LinearConstraint,
    OutOfDomain,
    candidate_curves,
    curve_b_at,
    solve_constraints,
)
from app.frames.window import make_polynomial_window


@pytest.fixture
def zero_pair_curve(zero_pair_window):
    for curve in candidate_curves(zero_pair_window):
        if curve.kind == "plus_hits_zero" and curve.n == 1 and curve.y_plus == F(1, 5) and curve.y_minus == F(-2, 15):
            return curve
    pytest.fail("plus_hits_zero curve for (1/5, -2/15), n=1 missing")


def test_zero_pair_curve_hits_the_not_frame_point(zero_pair_curve):
    assert zero_pair_curve.exact
    assert zero_pair_curve.gap == F(-1, 3)
    assert curve_b_at(zero_pair_curve, 1) == F(3, 5)
    assert zero_pair_curve.domain.contains(F(1))
    assert zero_pair_curve.domain.lo == F(9, 10) and zero_pair_curve.domain.lo_closed
    assert zero_pair_curve.blowup_possible


def test_curve_formula_text(zero_pair_curve):
    report = zero_pair_curve.to_dict()
    assert report["formula"] == "b = 1/(-1/3 + 2*a)"
    assert report["y_plus"] == "1/5"
    assert report["y_minus"] == "-2/15"


def test_curve_relation_is_exact(zero_pair_window):
    curves = candidate_curves(zero_pair_window)
    assert curves
    for curve in curves:
        if not curve.exact:
            continue
        lo, hi = curve.domain.lo, curve.domain.hi
        for t in (F(1, 4), F(1, 2), F(3, 4)):
            a = lo + (hi - lo) * t
            b = curve.b_of(a)
            assert b * (curve.gap + (curve.n + 1) * a) == curve.n
            assert 0 < b < 1 / a


def test_paired_curves_use_total_index(zero_pair_window):
    for curve in candidate_curves(zero_pair_window):
        if curve.kind == "paired_blowup":
            n_minus, n_plus = curve.indices
            assert curve.n == n_minus + n_plus


def test_interior_positive_window_has_no_curves(bspline):
    assert candidate_curves(bspline(3)) == []


def test_curves_depend_only_on_zero_catalog(zero_pair_window):
    first = [c.to_dict() for c in candidate_curves(zero_pair_window)]
    second = [c.to_dict() for c in candidate_curves(zero_pair_window.scale(F(-7, 3)))]
    assert first == second


def test_out_of_domain(zero_pair_curve):
    assert isinstance(curve_b_at(zero_pair_curve, F(9, 5)), OutOfDomain)
    assert isinstance(curve_b_at(zero_pair_curve, 2), OutOfDomain)
    assert isinstance(curve_b_at(zero_pair_curve, F(1, 2)), OutOfDomain)


def test_cross_validation_with_frame_decision(zero_pair_window):
    for curve in candidate_curves(zero_pair_window):
        if not (curve.exact and curve.blowup_possible):
            continue
        a = curve.domain.midpoint
        b = curve_b_at(curve, a)
        if isinstance(b, OutOfDomain):
            continue
        assert check_frame(zero_pair_window, a, b).verdict == "NotFrame", curve.formula


def test_irrational_zeros_give_float_curves():
    w = make_polynomial_window(1, "(x**2 - 1/2)*(x - 1/3)*(1 - x**2)")
    curves = candidate_curves(w, max_index=2)
    assert any(not c.exact for c in curves)
    for c in curves:
        if not c.exact:
            assert isinstance(c.gap, float)


def test_solve_constraints():
    interval = solve_constraints(
        [LinearConstraint(F(-1), F(1), strict=False), LinearConstraint(F(2), F(-1), strict=True)]
    )
    assert interval == Interval(F(1), F(2), True, False)
    assert solve_constraints([LinearConstraint(F(-2), F(1), strict=True), LinearConstraint(F(1), F(-1), strict=False)]) is None
    assert str(interval) == "[1, 2["
