# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union
import numpy as np
from scipy import linalg
from src.model.problem_control.exceptions import InvalidArgumentException
from src.model.problem_control.problem import ProblemInstance, as_vector, smooth_gradients, nonsmooth_values
from src.model.solver_control.exceptions import SubproblemFailure
from src.model.solver_control.metrics import MetricSet
from src.utility.silver import linear_algebra_utility, simplex_utility


ACTIVE_PIECE_TOLERANCE = 1e-12
DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITER = 100000
STALL_ITERATIONS = 500
POLISH_EVERY = 10
ROUNDOFF_FACTOR = 64.0


@dataclass(frozen=True, eq=False)
class QuadraticPiece(object):
    """
    One quadratic piece lin^T d + 1/2 d^T B_i d + c of the model theta_x.
    metric_index is the zero-based objective index i.
    """
    lin: np.ndarray
    metric_index: int
    c: float


@dataclass(frozen=True, eq=False)
class PieceSet(object):
    """
    Row-stacked pieces, the working representation of the solver.
    """
    lins: np.ndarray
    indices: np.ndarray
    constants: np.ndarray

    @classmethod
    def from_pieces(cls, pieces: List[QuadraticPiece]) -> "PieceSet":
        return cls(lins=np.array([piece.lin for piece in pieces], dtype=float),
                   indices=np.array([piece.metric_index for piece in pieces], dtype=int),
                   constants=np.array([piece.c for piece in pieces], dtype=float))

    @property
    def size(self) -> int:
        return self.constants.shape[0]

    def to_pieces(self) -> List[QuadraticPiece]:
        return [QuadraticPiece(lin=self.lins[p].copy(), metric_index=int(self.indices[p]),
                               c=float(self.constants[p])) for p in range(self.size)]

    def values(self, d: np.ndarray, metric_stack: np.ndarray) -> np.ndarray:
        """
        Method for evaluating every piece at d.
        :param d: Direction.
        :param metric_stack: Array of shape (m, n, n).
        :return: Piece values.
        """
        curvatures = np.einsum("j,ijk,k->i", d, metric_stack, d)
        return self.lins @ d + 0.5 * curvatures[self.indices] + self.constants


@dataclass(frozen=True, eq=False)
class SubproblemSolution(object):
    """
    Certified solution of min_d theta_x(d) + omega/2 ||d||^2.
    """
    d: np.ndarray
    beta: float
    theta: float
    weights: np.ndarray
    gap: float
    iterations: int = 0


PiecesLike = Union[PieceSet, List[QuadraticPiece]]
MetricsLike = Union[MetricSet, np.ndarray]


def _metric_stack(metrics: MetricsLike) -> np.ndarray:
    if isinstance(metrics, MetricSet):
        return metrics.stack
    return np.asarray(metrics, dtype=float)


def _piece_set(pieces: PiecesLike) -> PieceSet:
    if isinstance(pieces, PieceSet):
        return pieces
    return PieceSet.from_pieces(list(pieces))


def piece_arrays(x: np.ndarray, p: ProblemInstance) -> PieceSet:
    """
    Function for building the row-stacked pieces of theta_x.
    :param x: Current point.
    :param p: Problem instance.
    :return: Piece set.
    """
    x = as_vector(x, p.n)
    gradients = smooth_gradients(p, x)
    lins, indices, constants = [], [], []
    for i, h in enumerate(p.nonsmooth):
        piece_values = h.piece_values(x)
        lins.append(gradients[i][None, :] + h.slopes)
        indices.append(np.full(h.piece_count, i, dtype=int))
        constants.append(piece_values - np.max(piece_values))
    return PieceSet(lins=np.vstack(lins), indices=np.concatenate(indices), constants=np.concatenate(constants))


def build_pieces(x: np.ndarray, p: ProblemInstance, metrics: MetricsLike) -> List[QuadraticPiece]:
    """
    Function for decomposing theta_x into quadratic pieces, one per objective and h-piece:
    lin = grad g_i(x) + a_j, c = a_j^T x + b_j - h_i(x).
    :param x: Current point.
    :param p: Problem instance.
    :param metrics: Metric set (only the objective count is checked).
    :return: List of quadratic pieces.
    """
    if _metric_stack(metrics).shape[0] != p.m:
        raise InvalidArgumentException(
            "metrics", f"dimension mismatch, expected {p.m} metrics got {_metric_stack(metrics).shape[0]}")
    return piece_arrays(x, p).to_pieces()


def theta_at(x: np.ndarray, d: np.ndarray, p: ProblemInstance, metrics: MetricsLike) -> float:
    """
    Function for evaluating theta_x(d) = max_i {grad g_i(x)^T d + 1/2 d^T B_i d + h_i(x+d) - h_i(x)} directly.
    :param x: Current point.
    :param d: Direction.
    :param p: Problem instance.
    :param metrics: Metric set.
    :return: theta_x(d).
    """
    x = as_vector(x, p.n)
    d = as_vector(d, p.n, "d")
    stack = _metric_stack(metrics)
    models = smooth_gradients(p, x) @ d + 0.5 * np.einsum("j,ijk,k->i", d, stack, d)
    return float(np.max(models + nonsmooth_values(p, x + d) - nonsmooth_values(p, x)))


def dual_value(weights: np.ndarray, pieces: PiecesLike, metrics: MetricsLike,
               omega: float) -> Tuple[float, np.ndarray]:
    """
    Function for evaluating the Lagrangian dual psi(w) = sum_p w_p c_p - 1/2 g(w)^T H(w)^-1 g(w)
    with H(w) = sum_p w_p B_i(p) + omega I and g(w) = sum_p w_p lin_p.
    :param weights: Simplex weights over pieces.
    :param pieces: Pieces.
    :param metrics: Metric set or stacked metrics.
    :param omega: Proximal weight.
    :return: Dual value and the inner minimizer d(w) = -H(w)^-1 g(w).
    """
    piece_set = _piece_set(pieces)
    stack = _metric_stack(metrics)
    objective_weights = np.bincount(piece_set.indices, weights=weights, minlength=stack.shape[0])
    hessian = np.tensordot(objective_weights, stack, axes=1) + omega * np.eye(stack.shape[1])
    linear = weights @ piece_set.lins
    try:
        d = -linear_algebra_utility.solve_spd(hessian, linear)
    except linalg.LinAlgError:
        raise SubproblemFailure(np.inf, 0, message="dual Hessian is not positive definite")
    return float(weights @ piece_set.constants + 0.5 * linear @ d), d


def default_tolerance(omega: float, direction_norm: Optional[float] = None) -> float:
    """
    Function for the gap tolerance min(1e-12, 1e-4 omega max(||d||^2, 1e-8)).
    :param omega: Proximal weight.
    :param direction_norm: Norm of the current outer direction, if known.
    :return: Gap tolerance.
    """
    if direction_norm is None:
        return DEFAULT_TOLERANCE
    return min(DEFAULT_TOLERANCE, 1e-4 * omega * max(direction_norm**2, 1e-8))


def _roundoff_floor(piece_set: PieceSet, d: np.ndarray, stack: np.ndarray) -> float:
    magnitude = np.abs(piece_set.lins @ d) + 0.5 * np.abs(np.einsum("j,ijk,k->i", d, stack, d))[piece_set.indices] \
        + np.abs(piece_set.constants)
    return ROUNDOFF_FACTOR * np.finfo(float).eps * (1.0 + float(np.max(magnitude)))


def _gap(values: np.ndarray, weights: np.ndarray) -> float:
    # phi(d(w)) - psi(w), both share the omega/2 ||d||^2 term
    return max(float(np.max(values) - weights @ values), 0.0)


def _newton_polish(weights: np.ndarray, support: np.ndarray, piece_set: PieceSet, stack: np.ndarray,
                   omega: float) -> Optional[np.ndarray]:
    """
    Function for solving the KKT system on a fixed support:
    H(w) d + g(w) = 0, v_p(d) = mu for p in support, sum(w) = 1.
    Pieces whose weight turns negative are dropped and the solve is repeated.
    :return: Simplex weights, or None if no nonnegative solution was found.
    """
    n = stack.shape[1]
    support = np.flatnonzero(support)
    while support.size > 0:
        local = weights[support].clip(min=0.0)
        local = local / local.sum() if local.sum() > 0 else np.full(support.size, 1.0 / support.size)
        lins = piece_set.lins[support]
        metrics = stack[piece_set.indices[support]]
        full = np.zeros_like(weights)
        full[support] = local
        _, d = dual_value(full, piece_set, stack, omega)
        mu = float(np.max(piece_set.values(d, stack)[support]))
        k = support.size
        for _ in range(30):
            hessian = np.tensordot(local, metrics, axes=1) + omega * np.eye(n)
            jacobian = (lins + np.einsum("pij,j->pi", metrics, d)).T
            values = lins @ d + 0.5 * np.einsum("j,pjk,k->p", d, metrics, d) + piece_set.constants[support]
            residual = np.concatenate([hessian @ d + local @ lins, values - mu, [local.sum() - 1.0]])
            if np.max(np.abs(residual)) <= 1e-15 * (1.0 + np.max(np.abs(values))):
                break
            kkt = np.zeros((n + k + 1, n + k + 1))
            kkt[:n, :n] = hessian
            kkt[:n, n:n + k] = jacobian
            kkt[n:n + k, :n] = jacobian.T
            kkt[n:n + k, -1] = -1.0
            kkt[-1, n:n + k] = 1.0
            try:
                step = np.linalg.solve(kkt, -residual)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(kkt, -residual, rcond=None)[0]
            d = d + step[:n]
            local = local + step[n:n + k]
            mu = mu + step[-1]
            if not np.all(np.isfinite(step)):
                return None
        if np.min(local) >= 0.0:
            full = np.zeros_like(weights)
            full[support] = local
            return full / full.sum()
        support = np.delete(support, int(np.argmin(local)))
    return None


def _initial_weights(piece_set: PieceSet) -> np.ndarray:
    return simplex_utility.uniform_on_support(piece_set.size, piece_set.constants >= -ACTIVE_PIECE_TOLERANCE)


def solve_pieces(piece_set: PieceSet, metrics: MetricsLike, omega: float, tol: float = DEFAULT_TOLERANCE,
                 max_iter: int = DEFAULT_MAX_ITER,
                 initial_weights: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray, float, int]:
    """
    Function for maximizing the concave dual psi over the simplex until the duality gap
    max_p v_p(d(w)) - sum_p w_p v_p(d(w)) is at most tol.
    Ascent uses projected gradient steps (the gradient of psi is the vector of piece values at d(w))
    with backtracking, a Frank-Wolfe step whenever the best gap stalls, and a Newton solve of the
    KKT system on the current support every few iterations.
    :param piece_set: Pieces.
    :param metrics: Metric set or stacked metrics.
    :param omega: Proximal weight.
    :param tol: Gap tolerance; raised to a round-off floor proportional to the piece magnitudes.
    :param max_iter: Iteration budget.
    :param initial_weights: Starting weights, defaults to uniform weights on pieces active at d = 0.
    :return: Direction, weights, gap and iterations spent.
    """
    if omega <= 0.0:
        raise SubproblemFailure(np.inf, 0, message="proximal weight must be positive")
    stack = _metric_stack(metrics)
    weights = _initial_weights(piece_set) if initial_weights is None else \
        simplex_utility.project_onto_simplex(np.asarray(initial_weights, dtype=float))
    psi, d = dual_value(weights, piece_set, stack, omega)
    values = piece_set.values(d, stack)
    gap = _gap(values, weights)
    best = (gap, d, weights)
    step = omega / max(float(np.max(np.sum(piece_set.lins**2, axis=1))), 1e-12)
    last_improvement = 0
    for iteration in range(max_iter + 1):
        tolerance = max(tol, _roundoff_floor(piece_set, d, stack))
        if gap <= tolerance:
            return d, weights, gap, iteration
        if gap < best[0]:
            if gap < (1.0 - 1e-3) * best[0]:
                last_improvement = iteration
            best = (gap, d, weights)
        if iteration == max_iter:
            break

        if iteration % POLISH_EVERY == 0:
            top = float(np.max(values))
            for support in (weights > 1e-12,
                            (weights > 1e-12) | (values >= top - 1e-6 * (1.0 + abs(top))),
                            values >= top - 1e-9 * (1.0 + abs(top))):
                polished = _newton_polish(weights, support, piece_set, stack, omega)
                if polished is None:
                    continue
                polished_psi, polished_d = dual_value(polished, piece_set, stack, omega)
                polished_values = piece_set.values(polished_d, stack)
                polished_gap = _gap(polished_values, polished)
                if polished_gap < gap:
                    weights, psi, d, values, gap = polished, polished_psi, polished_d, polished_values, polished_gap
                if gap <= max(tol, _roundoff_floor(piece_set, d, stack)):
                    break
            if gap <= max(tol, _roundoff_floor(piece_set, d, stack)):
                continue

        if iteration - last_improvement >= STALL_ITERATIONS:
            candidate = np.zeros_like(weights)
            candidate[int(np.argmax(values))] = 1.0
            mix = 2.0 / (iteration - last_improvement + 2.0)
            trial = (1.0 - mix) * weights + mix * candidate
            trial_psi, trial_d = dual_value(trial, piece_set, stack, omega)
            if trial_psi >= psi:
                weights, psi, d = trial, trial_psi, trial_d
                values = piece_set.values(d, stack)
                gap = _gap(values, weights)
                continue

        for _ in range(60):
            trial = simplex_utility.project_onto_simplex(weights + step * values)
            move = trial - weights
            trial_psi, trial_d = dual_value(trial, piece_set, stack, omega)
            if trial_psi >= psi + values @ move - (move @ move) / (2.0 * step) - 1e-15 * (1.0 + abs(psi)):
                weights, psi, d = trial, trial_psi, trial_d
                step *= 2.0
                break
            step *= 0.5
        values = piece_set.values(d, stack)
        gap = _gap(values, weights)
    raise SubproblemFailure(best[0], max_iter, best[1])


def solve_direction(x: np.ndarray, p: ProblemInstance, metrics: MetricsLike, omega: float,
                    tol: float = DEFAULT_TOLERANCE, max_iter: int = DEFAULT_MAX_ITER,
                    initial_weights: Optional[np.ndarray] = None) -> SubproblemSolution:
    """
    Function for computing the proximal quasi-Newton direction
    d = argmin_d theta_x(d) + omega/2 ||d||^2 with a duality gap certificate;
    ||d - d*||^2 <= 2 gap / omega.
    :param x: Current point.
    :param p: Problem instance.
    :param metrics: Metric set (zero matrices for the proximal gradient baseline).
    :param omega: Proximal weight, positive.
    :param tol: Gap tolerance.
    :param max_iter: Dual iteration budget.
    :param initial_weights: Optional starting weights over pieces.
    :return: Subproblem solution.
    """
    x = as_vector(x, p.n)
    stack = _metric_stack(metrics)
    if stack.shape[0] != p.m:
        raise InvalidArgumentException(
            "metrics", f"dimension mismatch, expected {p.m} metrics got {stack.shape[0]}")
    piece_set = piece_arrays(x, p)
    d, weights, gap, iterations = solve_pieces(piece_set, stack, omega, tol, max_iter, initial_weights)
    theta = theta_at(x, d, p, stack)
    return SubproblemSolution(d=d, beta=theta + 0.5 * omega * float(d @ d), theta=theta, weights=weights,
                              gap=gap, iterations=iterations)
