from fractions import Fraction as F
from unittest.mock import patch

import numpy as np
import pytest

from app.frames.dual import build_zero_sets, choose_epsilon, construct_dual
from app.frames.errors import ConstructionError, DomainError
from app.frames.lattice import classify_params
from app.frames.verify import duality_residual
from app.frames.window import make_polynomial_window


@pytest.fixture
def example_params(example_window):
    return classify_params(example_window.alpha, 1, F(3, 5))


@pytest.fixture
def example_dual(example_window):
    return construct_dual(example_window, 1, "3/5")


def test_zero_sets_of_worked_example(example_window, example_params):
    zs = build_zero_sets(example_window, example_params)
    assert [[z.location for z in ys] for ys in zs.Y] == [[F(1, 5), F(9, 10)], [F(1, 5)]]
    assert [[z.location for z in ws] for ws in zs.W] == [[F(-9, 10)], []]
    assert zs.r == (2, 1)
    assert zs.l == (1, 0)


def test_zero_sets_require_frame(zero_pair_window, example_params):
    with pytest.raises(DomainError):
        build_zero_sets(zero_pair_window, example_params)


def test_epsilon_of_worked_example(example_window, example_params):
    zs = build_zero_sets(example_window, example_params)
    balls = choose_epsilon(example_window, zs, example_params)
    assert balls.epsilon == F(1, 60)
    assert balls.halvings == 0
    assert balls.delta > 0
    assert [c for _, c in balls.y_tilde] == [F(1, 5), F(9, 10), F(13, 15)]
    assert [c for _, c in balls.w_hat] == [F(-9, 10)]


def test_epsilon_shrinks_for_close_zeros():
    # the shifted minus centre -1001/2000 + a sits 1/1000 from the zero 1001/2000
    w = make_polynomial_window(1, "(1 - x**2)*(x + 1/2000)*(x - 1001/2000)")
    params = classify_params(w.alpha, 1, F(4, 5))
    zs = build_zero_sets(w, params)
    balls = choose_epsilon(w, zs, params)
    assert balls.epsilon <= F(1, 4000)
    assert balls.delta > 0


def test_epsilon_halves_until_balls_verify(example_window, example_params):
    zs = build_zero_sets(example_window, example_params)
    with patch("app.frames.dual._balls_ok", side_effect=[False, False, True]):
        balls = choose_epsilon(example_window, zs, example_params)
    assert balls.halvings == 2
    assert balls.epsilon == F(1, 240)


def test_epsilon_gives_up_after_cap(example_window, example_params, fresh_settings):
    fresh_settings.setenv("GABOR_EPSILON_MAX_HALVINGS", "3")
    zs = build_zero_sets(example_window, example_params)
    with patch("app.frames.dual._balls_ok", return_value=False):
        with pytest.raises(ConstructionError, match="halvings"):
            choose_epsilon(example_window, zs, example_params)


@pytest.mark.parametrize("b,kappa", [(F(3, 4), 2), (F(4, 5), 3), (F(5, 6), 4)])
def test_duals_with_several_bands(example_window, b, kappa):
    params = classify_params(example_window.alpha, 1, b)
    assert params.kappa == kappa
    h = construct_dual(example_window, 1, b)
    report = duality_residual(example_window, h, params, grid=4000)
    assert report.overall_max < 1e-9


def test_worked_example_duality(example_window, example_params, example_dual):
    h = example_dual
    assert h.support == (F(-2), F(2))
    assert h.audit_residual is not None and h.audit_residual < 1e-9
    report = duality_residual(example_window, h, example_params, grid=10000)
    assert sorted(report.per_n) == [-1, 0, 1]
    assert report.overall_max < 1e-9


def test_dual_vanishes_outside_its_support(example_dual):
    xs = np.concatenate([np.linspace(2.0001, 5, 500), -np.linspace(2.0001, 5, 500)])
    assert np.all(example_dual.evaluate_many(xs) == 0.0)


def test_dual_vanishes_between_core_and_first_band(example_dual):
    # ]alpha, 1/b[ and its reflection
    xs = np.linspace(0.9, 5 / 3, 1002)[1:-1]
    assert np.all(example_dual.evaluate_many(xs) == 0.0)
    assert np.all(example_dual.evaluate_many(-xs) == 0.0)


def test_dual_vanishes_off_its_nonzero_region(example_dual):
    regions = [(float(lo), float(hi)) for lo, hi in example_dual.nonzero_region()]
    xs = np.linspace(-2, 2, 4001)
    outside = np.array([not any(lo - 1e-9 <= x <= hi + 1e-9 for lo, hi in regions) for x in xs])
    assert np.all(example_dual.evaluate_many(xs[outside]) == 0.0)


def test_band_recursion_values(example_window, example_dual):
    g, h = example_window, example_dual
    # interior points: y = 1/10 puts y - a on the support edge and y = 1/5 on a zero
    for y in (0.02, 0.05, 0.15, 0.22):
        expected = -g.eval(y - 1) / g.eval(y) * h.evaluate(y + 2 / 3)
        assert h.evaluate(y + 5 / 3) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_core_value_is_b_over_g(example_window, example_dual):
    for x in (-0.05, 0.0, 0.05):
        assert example_dual.evaluate(x) == pytest.approx(0.6 / example_window.eval(x))


def test_case_tree_is_exact(example_dual):
    tree = example_dual.case_tree()
    assert tree["schema"] == 1
    assert (tree["M"], tree["kappa"], tree["step"]) == (2, 1, "2/3")
    assert tree["support"] == ["-2", "2"]
    assert [band["n"] for band in tree["bands"]] == [1, -1]
    assert tree["bands"][0]["interval"] == ["5/3", "19/10"]
    assert tree["balls"]["epsilon"] == "1/60"
    assert {seg["rule"] for seg in tree["core"]} >= {"core", "ball_plus", "rest_pos"}
    for seg in tree["core"]:
        assert all(isinstance(v, str) for v in seg["interval"])


def test_not_frame_is_rejected(zero_pair_window):
    with pytest.raises(DomainError, match="condition"):
        construct_dual(zero_pair_window, 1, "3/5")


def test_out_of_scope_is_rejected(example_window):
    with pytest.raises(DomainError, match="OutOfScope"):
        construct_dual(example_window, 2, "1/4")


def test_audit_failure_raises(example_window):
    with patch("app.frames.dual._audit", return_value=1.0):
        with pytest.raises(ConstructionError, match="Audit residual"):
            construct_dual(example_window, 1, "3/5")


@pytest.mark.parametrize(
    "N,a,b",
    [
        (2, F(6, 5), F(7, 10)),
        (3, F(2), F(2, 5)),
        (4, F(5, 2), F(1, 3)),
        (2, F(3, 2), F(1, 2)),
        (5, F(3), F(1, 5)),
    ],
)
def test_bspline_duals(bspline, N, a, b):
    w = bspline(N)
    params = classify_params(w.alpha, a, b)
    h = construct_dual(w, a, b)
    report = duality_residual(w, h, params, grid=2000)
    assert report.overall_max < 1e-8
    regions = [(float(lo), float(hi)) for lo, hi in h.nonzero_region()]
    xs = np.linspace(-float(a) * params.M, float(a) * params.M, 6001)
    outside = np.array([not any(lo - 1e-9 <= x <= hi + 1e-9 for lo, hi in regions) for x in xs])
    assert outside.any()
    assert np.all(h.evaluate_many(xs[outside]) == 0.0)
