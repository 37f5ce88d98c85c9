# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
# Slow, independent verifiers for the direction subproblem. Only piece evaluation is shared
# with the solver; the minimization code paths are separate.
from dataclasses import dataclass
from typing import Callable, List, Tuple, Union
import numpy as np
from scipy.optimize import minimize
from src.model.problem_control.exceptions import CapacityException, InvalidArgumentException
from src.model.problem_control.problem import ProblemInstance, as_vector
from src.model.solver_control.metrics import MetricSet
from src.model.solver_control.subproblem import PieceSet, QuadraticPiece, piece_arrays, solve_direction


GOLDEN_RATIO = (np.sqrt(5.0) - 1.0) / 2.0
MAX_GRID_RESOLUTION = 2001


@dataclass(frozen=True)
class OracleReport(object):
    """
    Value of a feasible point, hence an upper bound on the true minimum.
    """
    value: float
    argmin: np.ndarray
    evaluations: int
    method: str


def _as_piece_set(pieces: Union[PieceSet, List[QuadraticPiece]]) -> PieceSet:
    return pieces if isinstance(pieces, PieceSet) else PieceSet.from_pieces(list(pieces))


def _as_stack(metrics: Union[MetricSet, np.ndarray]) -> np.ndarray:
    return metrics.stack if isinstance(metrics, MetricSet) else np.asarray(metrics, dtype=float)


def _objective(piece_set: PieceSet, stack: np.ndarray, omega: float) -> Callable[[np.ndarray], float]:
    def phi(d: np.ndarray) -> float:
        return float(np.max(piece_set.values(d, stack)) + 0.5 * omega * d @ d)
    return phi


def _epigraph_polish(piece_set: PieceSet, stack: np.ndarray, omega: float, start: np.ndarray) -> np.ndarray:
    """
    Function for solving min mu + omega/2 ||d||^2 s.t. v_p(d) <= mu with SLSQP from a start point.
    """
    n = start.shape[0]
    metrics = stack[piece_set.indices]

    def objective(z: np.ndarray) -> float:
        return float(z[-1] + 0.5 * omega * z[:n] @ z[:n])

    def objective_gradient(z: np.ndarray) -> np.ndarray:
        return np.concatenate([omega * z[:n], [1.0]])

    def slack(z: np.ndarray) -> np.ndarray:
        return z[-1] - piece_set.values(z[:n], stack)

    def slack_jacobian(z: np.ndarray) -> np.ndarray:
        gradients = piece_set.lins + np.einsum("pij,j->pi", metrics, z[:n])
        return np.hstack([-gradients, np.ones((piece_set.size, 1))])

    start_z = np.concatenate([start, [float(np.max(piece_set.values(start, stack)))]])
    result = minimize(objective, start_z, jac=objective_gradient, method="SLSQP",
                      constraints=[{"type": "ineq", "fun": slack, "jac": slack_jacobian}],
                      options={"ftol": 1e-15, "maxiter": 500})
    return result.x[:n]


def subgradient_oracle(pieces: Union[PieceSet, List[QuadraticPiece]], metrics: Union[MetricSet, np.ndarray],
                       omega: float, iters: int = 100000, refine: bool = True) -> OracleReport:
    """
    Function for minimizing phi(d) = max_p piece_p(d) + omega/2 ||d||^2 by subgradient descent from d = 0
    with steps c / sqrt(k), c = 1 / (1 + max_p ||lin_p||), keeping the best point.
    The best point is then polished by an SLSQP epigraph solve; the better feasible value is reported.
    :param pieces: Pieces.
    :param metrics: Metric set or stacked metrics.
    :param omega: Proximal weight.
    :param iters: Subgradient iterations.
    :param refine: Polish the best point.
    :return: Oracle report.
    """
    piece_set = _as_piece_set(pieces)
    stack = _as_stack(metrics)
    phi = _objective(piece_set, stack, omega)
    d = np.zeros(piece_set.lins.shape[1])
    best_value, best_d = phi(d), d.copy()
    scale = 1.0 / (1.0 + float(np.max(np.linalg.norm(piece_set.lins, axis=1))))
    evaluations = 1
    for k in range(1, iters + 1):
        active = int(np.argmax(piece_set.values(d, stack)))
        subgradient = piece_set.lins[active] + stack[piece_set.indices[active]] @ d + omega * d
        d = d - scale / np.sqrt(k) * subgradient
        value = phi(d)
        evaluations += 1
        if value < best_value:
            best_value, best_d = value, d.copy()
    method = "subgradient"
    if refine:
        polished = _epigraph_polish(piece_set, stack, omega, best_d)
        polished_value = phi(polished)
        evaluations += 1
        if np.all(np.isfinite(polished)) and polished_value < best_value:
            best_value, best_d, method = polished_value, polished, "subgradient+slsqp"
    return OracleReport(value=best_value, argmin=best_d, evaluations=evaluations, method=method)


def _golden_section(function: Callable[[float], float], lower: float, upper: float,
                    steps: int) -> Tuple[float, float, int]:
    left = upper - GOLDEN_RATIO * (upper - lower)
    right = lower + GOLDEN_RATIO * (upper - lower)
    f_left, f_right = function(left), function(right)
    evaluations = 2
    for _ in range(steps):
        if f_left <= f_right:
            upper, right, f_right = right, left, f_left
            left = upper - GOLDEN_RATIO * (upper - lower)
            f_left = function(left)
        else:
            lower, left, f_left = left, right, f_right
            right = lower + GOLDEN_RATIO * (upper - lower)
            f_right = function(right)
        evaluations += 1
    return (left, f_left, evaluations) if f_left <= f_right else (right, f_right, evaluations)


def grid_oracle(pieces: Union[PieceSet, List[QuadraticPiece]], metrics: Union[MetricSet, np.ndarray],
                omega: float, box_radius: float = 1.0, resolution: int = 401, steps: int = 40) -> OracleReport:
    """
    Function for minimizing phi over the box [-r, r]^n (n <= 2) by exhaustive grid evaluation followed by
    coordinate bisection: golden-section search per coordinate, nested for n = 2 so that the outer search
    runs over the convex partial minimum of the inner one.
    :param pieces: Pieces.
    :param metrics: Metric set or stacked metrics.
    :param omega: Proximal weight.
    :param box_radius: Half width of the search box.
    :param resolution: Grid points per axis, at most 2001.
    :param steps: Golden-section steps per coordinate.
    :return: Oracle report.
    """
    piece_set = _as_piece_set(pieces)
    stack = _as_stack(metrics)
    n = piece_set.lins.shape[1]
    if n > 2:
        raise CapacityException(n, 2, "grid oracle supports at most two dimensions")
    if not 2 <= resolution <= MAX_GRID_RESOLUTION:
        raise InvalidArgumentException("resolution", f"resolution must lie in [2, {MAX_GRID_RESOLUTION}]")
    phi = _objective(piece_set, stack, omega)
    axis = np.linspace(-box_radius, box_radius, resolution)
    points = np.array(np.meshgrid(*([axis] * n), indexing="ij")).reshape(n, -1)
    values = np.full(points.shape[1], -np.inf)
    for p in range(piece_set.size):
        metric = stack[piece_set.indices[p]]
        piece = piece_set.lins[p] @ points + 0.5 * np.einsum("ik,ij,jk->k", points, metric, points) \
            + piece_set.constants[p]
        values = np.maximum(values, piece)
    values = values + 0.5 * omega * np.sum(points**2, axis=0)
    best = int(np.argmin(values))
    best_value, best_d = float(values[best]), points[:, best].copy()
    evaluations = points.shape[1]

    if n == 1:
        location, value, spent = _golden_section(lambda t: phi(np.array([t])), -box_radius, box_radius, steps)
        refined = np.array([location])
        evaluations += spent
    else:
        counter = [0]

        def inner(first: float) -> Tuple[float, float]:
            location, value, spent = _golden_section(lambda t: phi(np.array([first, t])),
                                                     -box_radius, box_radius, steps)
            counter[0] += spent
            return location, value

        first, value, spent = _golden_section(lambda t: inner(t)[1], -box_radius, box_radius, steps)
        refined = np.array([first, inner(first)[0]])
        value = phi(refined)
        evaluations += spent + counter[0] + 1
    if value < best_value:
        best_value, best_d = value, refined
    return OracleReport(value=best_value, argmin=best_d, evaluations=evaluations, method="grid")


def stationarity_certificate(x: np.ndarray, p: ProblemInstance, omega: float, tol: float, seed: int = 0,
                             oracle_iters: int = 2000) -> Tuple[bool, float]:
    """
    Function for certifying Pareto stationarity through beta_omega(x) >= -tol, computed with identity metrics
    by the direction solver (from random dual weights) and by the subgradient oracle.
    :param x: Point to certify.
    :param p: Problem instance.
    :param omega: Proximal weight.
    :param tol: Tolerance on beta.
    :param seed: Seed of the random dual initialization.
    :param oracle_iters: Subgradient oracle iterations.
    :return: Stationarity flag (max of both estimates >= -tol) and the tighter (smaller) estimate.
    """
    x = as_vector(x, p.n)
    identity = np.array([np.eye(p.n) for _ in range(p.m)])
    piece_set = piece_arrays(x, p)
    weights = np.random.default_rng(seed).dirichlet(np.ones(piece_set.size))
    solution = solve_direction(x, p, identity, omega, initial_weights=weights)
    report = subgradient_oracle(piece_set, identity, omega, oracle_iters)
    return bool(max(solution.beta, report.value) >= -tol), float(min(solution.beta, report.value))
