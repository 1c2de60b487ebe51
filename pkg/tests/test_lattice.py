from fractions import Fraction as F

import pytest

from app.frames.errors import DomainError
from app.frames.lattice import LatticeParams, OutOfScope, classify_params, kappa_of, redundancy_index

TRIPLES = [
    (F(9, 10), F(1), F(3, 5)),
    (F(9, 10), F(17, 10), F(7, 20)),
    (F(1), F(6, 5), F(7, 10)),
    (F(3, 2), F(2), F(2, 5)),
    (F(2), F(5, 2), F(1, 3)),
    (F(1), F(1), F(1, 2)),
    (F(1), F(3, 2), F(1, 2)),
    (F(1), F(1), F(2, 3)),
    (F(1, 2), F(3, 4), F(1)),
    (F(5, 4), F(2), F(9, 20)),
    (F(1), F(19, 10), F(1, 2)),
    (F(7, 10), F(1), F(13, 20)),
]


def brute_force(alpha, a, b):
    ab = a * b
    M = next(m for m in range(1, 10**6 + 1) if F(m - 1, m) <= ab < F(m, m + 1))
    kappa = max(k for k in range(0, M + 1) if (1 - ab) * k <= b * alpha)
    return M, kappa


@pytest.mark.parametrize("alpha,a,b", TRIPLES)
def test_m_and_kappa_match_brute_force(alpha, a, b):
    params = classify_params(alpha, a, b)
    assert isinstance(params, LatticeParams)
    assert (params.M, params.kappa) == brute_force(alpha, a, b)


def test_worked_example_parameters():
    p = classify_params("9/10", "1", "3/5")
    assert (p.M, p.kappa) == (2, 1)
    assert p.step == F(2, 3)
    assert p.support_radius == 2
    q = classify_params("9/10", "17/10", "7/20")
    assert (q.M, q.kappa) == (2, 0)


def test_redundancy_band_edges():
    assert redundancy_index(F(21, 25)) == 6
    assert redundancy_index(F(5, 6)) == 6
    assert redundancy_index(F(1, 2)) == 2
    assert redundancy_index(F(2, 3)) == 3
    assert kappa_of(F(9, 10), F(1), F(3, 5)) == 1


@pytest.mark.parametrize(
    "alpha,a,b,bound",
    [
        ("1", "1/2", "1", "a < alpha"),
        ("1", "2", "1/4", "a >= 2 alpha"),
        ("1", "3/2", "2/3", "ab >= 1"),
        ("1", "1", "2/5", "ab < 1/2"),
    ],
)
def test_out_of_scope(alpha, a, b, bound):
    result = classify_params(alpha, a, b)
    assert isinstance(result, OutOfScope)
    assert result.bound == bound
    assert result.verdict == "OutOfScope"


def test_m_one_reason_names_the_condition():
    result = classify_params(1, 1, "2/5")
    assert "M=1" in result.reason


@pytest.mark.parametrize("alpha,a,b", [("0", "1", "1/2"), ("1", "-1", "1/2"), ("1", "1", "0")])
def test_nonpositive_inputs(alpha, a, b):
    with pytest.raises(DomainError):
        classify_params(alpha, a, b)


def test_malformed_rational():
    with pytest.raises(ValueError, match="Malformed rational"):
        classify_params("9/10", "one", "1/2")
