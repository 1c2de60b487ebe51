from fractions import Fraction as F

import pytest

from app.frames.dual import construct_dual
from app.frames.errors import DomainError
from app.frames.lattice import classify_params
from app.frames.verify import duality_residual, zz_lower_bound


@pytest.fixture
def example_pair(example_window):
    h = construct_dual(example_window, 1, "3/5", audit=False)
    return example_window, h, h.params


def test_residual_report_shape(example_pair):
    g, h, p = example_pair
    report = duality_residual(g, h, p, grid=500, tol=1e-6)
    data = report.to_dict()
    assert data["schema"] == 1
    assert list(data["per_n"]) == ["-1", "0", "1"]
    assert data["grid"] == 500
    assert report.passed is True
    assert data["overall_max"] == max(report.per_n.values())


def test_residual_tolerance_can_fail(example_pair):
    g, h, p = example_pair
    report = duality_residual(g, h, p, grid=100, tol=0.0)
    assert report.passed is False
    assert duality_residual(g, h, p, grid=100).passed is None


def test_residual_rejects_small_grid(example_pair):
    g, h, p = example_pair
    with pytest.raises(DomainError, match="grid"):
        duality_residual(g, h, p, grid=1)


def test_residual_rejects_mismatched_lattice(example_pair):
    g, h, _ = example_pair
    other = classify_params(g.alpha, F(11, 10), F(3, 5))
    with pytest.raises(DomainError, match="do not match"):
        duality_residual(g, h, other, grid=100)


def test_zz_bound_of_hat_function(bspline):
    assert zz_lower_bound(bspline(2), 1, "1/2", 64, 64) == pytest.approx(1.0, rel=1e-9)


def test_zz_bound_scales_quadratically(bspline):
    assert zz_lower_bound(bspline(2).scale(2), 1, "1/2", 64, 64) == pytest.approx(4.0, rel=1e-9)


def test_zz_bound_positive_for_frame(example_window):
    assert zz_lower_bound(example_window, 1, "3/5", 32, 32) > 0


def test_zz_bound_decays_for_non_frame(zero_pair_window):
    coarse, middle, fine = (zz_lower_bound(zero_pair_window, 1, "3/5", n, n) for n in (64, 256, 1024))
    # each grid refines the previous one
    assert fine <= middle <= coarse
    assert fine <= coarse / 10
    assert coarse < 1e-5


@pytest.mark.parametrize("a,b,grid", [("0", "1/2", 8), ("1", "-1/2", 8), ("1", "1/2", 0)])
def test_zz_bound_rejects_bad_input(bspline, a, b, grid):
    with pytest.raises(DomainError):
        zz_lower_bound(bspline(2), a, b, grid, grid)
