# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from typing import List
import numpy as np
from src.model.problem_control.problem import PiecewiseAffine, ProblemInstance, QuadraticObjective
from src.model.problem_control.uncertainty import Box, TransformedBox, support_function


def quadratic(Q: list, q: list) -> QuadraticObjective:
    return QuadraticObjective(Q=np.array(Q, dtype=float), q=np.array(q, dtype=float))


def single_objective_problem() -> ProblemInstance:
    """
    g(x) = x^2 - 2x, minimized at x = 1.
    """
    return ProblemInstance(smooth=(quadratic([[2.0]], [-2.0]),), nonsmooth=(PiecewiseAffine.zero(1),))


def bi_objective_problem() -> ProblemInstance:
    """
    g_1 = 1/2 x^2, g_2 = 1/2 (x - 2)^2 without its constant; the Pareto set is [0, 2].
    """
    return ProblemInstance(smooth=(quadratic([[1.0]], [0.0]), quadratic([[1.0]], [-2.0])),
                           nonsmooth=(PiecewiseAffine.zero(1), PiecewiseAffine.zero(1)))


def random_problem(rng: np.random.Generator, n: int, m: int, pieces: int) -> ProblemInstance:
    smooth, nonsmooth = [], []
    for _ in range(m):
        M = rng.standard_normal((n, n))
        smooth.append(QuadraticObjective(Q=M @ M.T + np.eye(n), q=rng.standard_normal(n)))
        nonsmooth.append(PiecewiseAffine(slopes=rng.standard_normal((pieces, n)),
                                         offsets=0.1 * rng.standard_normal(pieces)))
    return ProblemInstance(smooth=tuple(smooth), nonsmooth=tuple(nonsmooth))


def random_spd(rng: np.random.Generator, n: int) -> np.ndarray:
    M = rng.standard_normal((n, n))
    return M @ M.T + 0.5 * np.eye(n)


def random_metrics(rng: np.random.Generator, n: int, m: int) -> List[np.ndarray]:
    return [random_spd(rng, n) for _ in range(m)]


def robust_problem(rng: np.random.Generator, n: int, m: int, delta: float) -> ProblemInstance:
    """
    Well-conditioned quadratics (Q = M M^T + I) with box and transformed box support functions.
    """
    smooth = []
    for _ in range(m):
        M = rng.standard_normal((n, n))
        smooth.append(QuadraticObjective(Q=M @ M.T + np.eye(n), q=rng.standard_normal(n)))
    nonsmooth = [support_function(Box(delta=delta, n=n))] + \
        [support_function(TransformedBox(B=rng.standard_normal((n, n)) + 2.0 * np.eye(n), delta=delta))
         for _ in range(m - 1)]
    return ProblemInstance(smooth=tuple(smooth), nonsmooth=tuple(nonsmooth))
