# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
import numpy as np
import pytest
from src.model.problem_control.problem import PiecewiseAffine, ProblemInstance
from src.model.solver_control.exceptions import InvalidMetricException
from src.model.solver_control.metrics import MetricSet, UpdateKind, bfgs_update, curvature_guard, \
    h_bfgs_update, huang_theta, huang_y, lipschitz_bound, ss_bfgs_update
from tests.helpers import quadratic, random_spd


E1 = np.array([1.0, 0.0])


def random_pair(rng: np.random.Generator, n: int):
    B = random_spd(rng, n)
    while True:
        s, y = rng.standard_normal(n), rng.standard_normal(n)
        if s @ y > 0.1 * np.linalg.norm(s) * np.linalg.norm(y):
            return B, s, y


def test_bfgs_fixed_point() -> None:
    assert np.allclose(bfgs_update(np.eye(2), E1, E1), np.eye(2), atol=1e-15)


def test_bfgs_rank_one() -> None:
    assert np.allclose(bfgs_update(np.eye(2), E1, 2.0 * E1), np.diag([2.0, 1.0]), atol=1e-15)


@pytest.mark.parametrize("n", [2, 5, 10])
def test_bfgs_secant_and_definiteness(rng: np.random.Generator, n: int) -> None:
    for _ in range(1000):
        B, s, y = random_pair(rng, n)
        updated = bfgs_update(B, s, y)
        assert np.linalg.norm(updated @ s - y) <= 1e-10 * np.linalg.norm(y)
        assert np.min(np.linalg.eigvalsh(updated)) > 0.0
        assert np.array_equal(updated, updated.T)


def test_ss_bfgs_unit_scaling() -> None:
    assert np.allclose(ss_bfgs_update(np.eye(2), E1, E1), np.eye(2), atol=1e-15)


def test_ss_bfgs_rank_one() -> None:
    assert np.allclose(ss_bfgs_update(np.eye(2), E1, 2.0 * E1), np.diag([2.0, 2.0]), atol=1e-15)


@pytest.mark.parametrize("n", [2, 5, 10])
def test_ss_bfgs_secant_and_definiteness(rng: np.random.Generator, n: int) -> None:
    for _ in range(1000):
        B, s, y = random_pair(rng, n)
        updated = ss_bfgs_update(B, s, y)
        assert np.linalg.norm(updated @ s - y) <= 1e-10 * np.linalg.norm(y)
        assert np.min(np.linalg.eigvalsh(updated)) > 0.0


def test_huang_theta_vanishes_on_quadratics(rng: np.random.Generator) -> None:
    objective = quadratic([[2.0]], [0.0])
    x, x_next = np.array([0.0]), np.array([1.0])
    assert huang_theta(objective.value(x), objective.value(x_next), objective.gradient(x),
                       objective.gradient(x_next), x_next - x) == 0.0
    M = rng.standard_normal((4, 4))
    Q, q = M @ M.T, rng.standard_normal(4)
    x, x_next = rng.standard_normal(4), rng.standard_normal(4)
    value = lambda z: 0.5 * z @ Q @ z + q @ z
    theta = huang_theta(value(x), value(x_next), Q @ x + q, Q @ x_next + q, x_next - x)
    assert abs(theta) <= 1e-10 * (1.0 + abs(value(x)) + abs(value(x_next)))


def test_huang_theta_quartic() -> None:
    assert huang_theta(0.0, 1.0, np.array([0.0]), np.array([4.0]), np.array([1.0])) == 6.0


def test_huang_theta_antisymmetric_gradients() -> None:
    assert huang_theta(2.0, 2.0, np.array([1.0, -3.0]), np.array([-1.0, 3.0]), np.array([0.5, 0.7])) == 0.0


def test_h_bfgs_without_correction_is_bfgs(rng: np.random.Generator) -> None:
    B, s, y = random_pair(rng, 4)
    assert np.array_equal(h_bfgs_update(B, s, y, 0.0), bfgs_update(B, s, y))


def test_h_bfgs_rank_one() -> None:
    assert np.array_equal(huang_y(E1, E1, 1.0), 2.0 * E1)
    assert np.allclose(h_bfgs_update(np.eye(2), E1, E1, 1.0), np.diag([2.0, 1.0]), atol=1e-15)


@pytest.mark.parametrize("n", [2, 5, 10])
def test_h_bfgs_secant_and_definiteness(rng: np.random.Generator, n: int) -> None:
    for _ in range(1000):
        B, s, y = random_pair(rng, n)
        theta = 0.5 * float(s @ y) * rng.uniform(-1.0, 1.0)
        y_hat = huang_y(s, y, theta)
        updated = h_bfgs_update(B, s, y, theta)
        assert np.linalg.norm(updated @ s - y_hat) <= 1e-10 * np.linalg.norm(y_hat)
        assert np.min(np.linalg.eigvalsh(updated)) > 0.0


def test_curvature_guard() -> None:
    assert not curvature_guard(np.zeros(2), E1, np.eye(2))
    assert not curvature_guard(E1, -E1, np.eye(2))
    assert curvature_guard(E1, E1, np.eye(2))


def test_lipschitz_bound_diagonal() -> None:
    p = ProblemInstance(smooth=(quadratic([[1.0, 0.0], [0.0, 4.0]], [0.0, 0.0]),
                                quadratic([[3.0, 0.0], [0.0, 2.0]], [0.0, 0.0])),
                        nonsmooth=(PiecewiseAffine.zero(2), PiecewiseAffine.zero(2)))
    assert lipschitz_bound(p) == pytest.approx(4.0, rel=1e-14)


def test_lipschitz_bound_identity() -> None:
    p = ProblemInstance(smooth=(quadratic(np.eye(3).tolist(), [0.0] * 3),), nonsmooth=(PiecewiseAffine.zero(3),))
    assert lipschitz_bound(p) == pytest.approx(1.0, rel=1e-14)


def test_lipschitz_bound_dominates_sampled_gain(rng: np.random.Generator) -> None:
    M = rng.standard_normal((5, 5))
    Q = M @ M.T
    p = ProblemInstance(smooth=(quadratic(Q.tolist(), [0.0] * 5),), nonsmooth=(PiecewiseAffine.zero(5),))
    directions = rng.standard_normal((100000, 5))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    sampled = float(np.max(np.linalg.norm(directions @ Q, axis=1)))
    bound = lipschitz_bound(p)
    assert sampled <= bound * (1.0 + 1e-12)
    assert bound - sampled <= 0.05 * bound


def test_metric_set_skips_negative_curvature() -> None:
    metrics = MetricSet.identity(2, 2, UpdateKind.BFGS)
    assert not metrics.update(0, E1, -E1, iteration=3)
    assert np.array_equal(metrics.mats[0], np.eye(2))
    assert metrics.skipped == [(3, 0)]
    assert metrics.update(1, E1, 2.0 * E1, iteration=3)
    assert np.allclose(metrics.mats[1], np.diag([2.0, 1.0]))


def test_metric_set_frozen_zero_never_changes() -> None:
    metrics = MetricSet.identity(2, 3, UpdateKind.FROZEN_ZERO)
    assert not metrics.update(0, np.ones(3), np.ones(3))
    assert np.array_equal(metrics.stack, np.zeros((2, 3, 3)))


def test_metric_set_huang_guard() -> None:
    metrics = MetricSet.identity(1, 2, UpdateKind.HBFGS)
    # theta = -s^T y turns y_hat into zero
    assert not metrics.update(0, E1, E1, theta=-1.0)
    assert np.array_equal(metrics.mats[0], np.eye(2))


def test_metric_set_rejects_indefinite() -> None:
    with pytest.raises(InvalidMetricException):
        MetricSet([np.diag([1.0, -1.0])], UpdateKind.BFGS)
    with pytest.raises(InvalidMetricException):
        MetricSet([np.array([[1.0, 0.5], [0.0, 1.0]])], UpdateKind.SSBFGS)
