# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from enum import Enum
from typing import List, Optional
import numpy as np
from src.configuration import configuration as cfg
from src.model.problem_control.problem import ProblemInstance
from src.model.solver_control.exceptions import InvalidMetricException
from src.utility.silver import linear_algebra_utility


STEP_NORM_FLOOR = 1e-14
CURVATURE_RATIO_FLOOR = 1e-12
METRIC_CURVATURE_FLOOR = 1e-14


class UpdateKind(str, Enum):
    """
    Quasi-Newton update formula. The values double as method names.
    FROZEN_ZERO keeps B_i = 0, which turns the direction subproblem into the proximal gradient one.
    """
    BFGS = "bfgs"
    SSBFGS = "ssbfgs"
    HBFGS = "hbfgs"
    FROZEN_ZERO = "pgm"


def curvature_guard(s: np.ndarray, y_or_yhat: np.ndarray, B: np.ndarray) -> bool:
    """
    Function for checking whether an update pair keeps the metric positive definite.
    :param s: Step.
    :param y_or_yhat: Gradient difference (or its Huang modification).
    :param B: Current metric.
    :return: True, if ||s|| > 1e-14, s^T y > 1e-12 ||s|| ||y|| and s^T B s > 1e-14.
    """
    s_norm = float(np.linalg.norm(s))
    if not s_norm > STEP_NORM_FLOOR:
        return False
    curvature = float(s @ y_or_yhat)
    if not curvature > CURVATURE_RATIO_FLOOR * s_norm * float(np.linalg.norm(y_or_yhat)):
        return False
    return bool(float(s @ (B @ s)) > METRIC_CURVATURE_FLOOR)


def _remove_curvature(B: np.ndarray, s: np.ndarray) -> np.ndarray:
    Bs = B @ s
    return B - np.outer(Bs, Bs) / float(s @ Bs)


def bfgs_update(B: np.ndarray, s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Function for the BFGS update B - B s s^T B / (s^T B s) + y y^T / (s^T y).
    :param B: Current metric.
    :param s: Step.
    :param y: Gradient difference.
    :return: Updated metric, satisfying B+ s = y.
    """
    updated = _remove_curvature(B, s) + np.outer(y, y) / float(s @ y)
    return 0.5 * (updated + updated.T)


def ss_bfgs_update(B: np.ndarray, s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Function for the self-scaling BFGS update
    (s^T y / s^T B s) (B - B s s^T B / (s^T B s)) + y y^T / (s^T y).
    :param B: Current metric.
    :param s: Step.
    :param y: Gradient difference.
    :return: Updated metric, satisfying B+ s = y.
    """
    scaling = float(s @ y) / float(s @ (B @ s))
    updated = scaling * _remove_curvature(B, s) + np.outer(y, y) / float(s @ y)
    return 0.5 * (updated + updated.T)


def huang_theta(g_k: float, g_k1: float, grad_k: np.ndarray, grad_k1: np.ndarray, s: np.ndarray) -> float:
    """
    Function for the Huang correction 6 (g(x_k) - g(x_k+1)) + 3 (grad g(x_k) + grad g(x_k+1))^T s.
    Vanishes for quadratic g.
    :param g_k: Smooth value at x_k.
    :param g_k1: Smooth value at x_k+1.
    :param grad_k: Smooth gradient at x_k.
    :param grad_k1: Smooth gradient at x_k+1.
    :param s: Step x_k+1 - x_k.
    :return: Correction theta.
    """
    return float(6.0 * (g_k - g_k1) + 3.0 * (np.asarray(grad_k) + np.asarray(grad_k1)) @ np.asarray(s))


def huang_y(s: np.ndarray, y: np.ndarray, theta: float) -> np.ndarray:
    """
    Function for the modified gradient difference y_hat = (1 + theta / (s^T y)) y.
    :param s: Step.
    :param y: Gradient difference.
    :param theta: Huang correction.
    :return: y_hat.
    """
    return (1.0 + theta / float(s @ y)) * y


def h_bfgs_update(B: np.ndarray, s: np.ndarray, y: np.ndarray, theta: float) -> np.ndarray:
    """
    Function for the Huang BFGS update B - B s s^T B / (s^T B s) + y_hat y_hat^T / (s^T y_hat).
    :param B: Current metric.
    :param s: Step.
    :param y: Gradient difference.
    :param theta: Huang correction.
    :return: Updated metric, satisfying B+ s = y_hat.
    """
    y_hat = huang_y(s, y, theta)
    updated = _remove_curvature(B, s) + np.outer(y_hat, y_hat) / float(s @ y_hat)
    return 0.5 * (updated + updated.T)


def lipschitz_bound(p: ProblemInstance) -> float:
    """
    Function for computing the common Lipschitz constant max_i lambda_max(Q_i) of the smooth gradients.
    :param p: Problem instance.
    :return: Lipschitz constant.
    """
    return max(g.lipschitz_constant for g in p.smooth)


class MetricSet(object):
    """
    Per-objective metrics B_i, owned and mutated by a single solver run.
    """

    def __init__(self, mats: List[np.ndarray], kind: UpdateKind = UpdateKind.BFGS) -> None:
        """
        Initiation method.
        :param mats: List of symmetric positive definite matrices, ignored entries for FROZEN_ZERO.
        :param kind: Update formula.
        """
        self.kind = UpdateKind(kind)
        if self.kind == UpdateKind.FROZEN_ZERO:
            self.mats = [np.zeros_like(np.asarray(mat, dtype=float)) for mat in mats]
        else:
            self.mats = [np.array(mat, dtype=float) for mat in mats]
            self.validate()
        self.skipped = []

    @classmethod
    def identity(cls, m: int, n: int, kind: UpdateKind = UpdateKind.BFGS) -> "MetricSet":
        """
        Method for creating the initial metrics B_i = I.
        :param m: Objective count.
        :param n: Dimension.
        :param kind: Update formula.
        :return: Metric set.
        """
        return cls([np.eye(n) for _ in range(m)], kind)

    @property
    def m(self) -> int:
        return len(self.mats)

    @property
    def n(self) -> int:
        return self.mats[0].shape[0]

    @property
    def stack(self) -> np.ndarray:
        return np.array(self.mats)

    def validate(self) -> None:
        """
        Method for validating symmetry and positive definiteness of all matrices.
        """
        for index, mat in enumerate(self.mats):
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise InvalidMetricException(index, "metric matrix is not square")
            if not linear_algebra_utility.is_symmetric(mat, 1e-10):
                raise InvalidMetricException(index, "metric matrix is not symmetric")
            if not linear_algebra_utility.is_positive_definite(mat):
                raise InvalidMetricException(index)

    def update(self, index: int, s: np.ndarray, y: np.ndarray, theta: Optional[float] = None,
               iteration: Optional[int] = None) -> bool:
        """
        Method for updating one metric with the configured formula.
        The update is skipped, keeping B_i, if the curvature guard fails.
        :param index: Objective index.
        :param s: Realized step x_k+1 - x_k.
        :param y: Gradient difference of objective index.
        :param theta: Huang correction, required for HBFGS.
        :param iteration: Outer iteration, recorded for skipped updates.
        :return: True, if the matrix was updated, else False.
        """
        if self.kind == UpdateKind.FROZEN_ZERO:
            return False
        B = self.mats[index]
        accepted = curvature_guard(s, y, B)
        if accepted and self.kind == UpdateKind.HBFGS:
            accepted = curvature_guard(s, huang_y(s, y, 0.0 if theta is None else theta), B)
        if not accepted:
            self.skipped.append((iteration, index))
            cfg.LOGGER.debug(f"Skipped {self.kind.value} update of objective {index} at iteration {iteration}.")
            return False
        if self.kind == UpdateKind.BFGS:
            self.mats[index] = bfgs_update(B, s, y)
        elif self.kind == UpdateKind.SSBFGS:
            self.mats[index] = ss_bfgs_update(B, s, y)
        else:
            self.mats[index] = h_bfgs_update(B, s, y, 0.0 if theta is None else theta)
        return True
