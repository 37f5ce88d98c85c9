# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from dataclasses import dataclass
from functools import cached_property
from typing import List, Tuple, Sequence, Any
import numpy as np
from src.configuration import configuration as cfg
from src.model.problem_control.exceptions import InvalidArgumentException, InvalidStateException
from src.utility.silver import linear_algebra_utility


SYMMETRY_TOLERANCE = 1e-12


def as_vector(x: Any, dimension: int, name: str = "x") -> np.ndarray:
    """
    Function for validating and converting a point.
    :param x: Array-like point.
    :param dimension: Expected dimension.
    :param name: Argument name for error reporting.
    :return: Float vector of shape (dimension,).
    """
    vector = np.asarray(x, dtype=float).reshape(-1)
    if vector.shape[0] != dimension:
        raise InvalidArgumentException(
            name, f"dimension mismatch, expected {dimension} got {vector.shape[0]}")
    return vector


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class QuadraticObjective(object):
    """
    Smooth part g(x) = 1/2 x^T Q x + q^T x with symmetric positive definite Q.
    """
    Q: np.ndarray
    q: np.ndarray

    def __post_init__(self) -> None:
        """
        Validation method.
        """
        Q = np.asarray(self.Q, dtype=float)
        q = np.asarray(self.q, dtype=float).reshape(-1)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise InvalidArgumentException("Q", f"expected a square matrix, got shape {Q.shape}")
        if q.shape[0] != Q.shape[0]:
            raise InvalidArgumentException("q", f"dimension mismatch, expected {Q.shape[0]} got {q.shape[0]}")
        if not (np.all(np.isfinite(Q)) and np.all(np.isfinite(q))):
            raise InvalidArgumentException("Q, q", "non-finite coefficients")
        Q, asymmetry = linear_algebra_utility.symmetrize(Q)
        if asymmetry > SYMMETRY_TOLERANCE:
            cfg.LOGGER.warning(
                f"Quadratic coefficient was asymmetric (relative {asymmetry:.3e}), symmetrized.")
        if not linear_algebra_utility.is_positive_definite(Q):
            raise InvalidArgumentException("Q", "quadratic coefficient is not positive definite")
        object.__setattr__(self, "Q", _freeze(Q))
        object.__setattr__(self, "q", _freeze(q))

    @property
    def dimension(self) -> int:
        return self.q.shape[0]

    @cached_property
    def modulus(self) -> float:
        """
        Strong convexity modulus, the smallest eigenvalue of Q.
        """
        return linear_algebra_utility.smallest_eigenvalue(self.Q)

    @cached_property
    def lipschitz_constant(self) -> float:
        """
        Lipschitz constant of the gradient, the largest eigenvalue of Q.
        """
        return linear_algebra_utility.largest_eigenvalue(self.Q)

    def value(self, x: np.ndarray) -> float:
        x = as_vector(x, self.dimension)
        return float(0.5 * x @ (self.Q @ x) + self.q @ x)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = as_vector(x, self.dimension)
        return self.Q @ x + self.q


@dataclass(frozen=True, eq=False)
class PiecewiseAffine(object):
    """
    Finite maximum of affine functions h(x) = max_j (a_j^T x + b_j).
    Slopes are stored row-wise.
    """
    slopes: np.ndarray
    offsets: np.ndarray

    def __post_init__(self) -> None:
        """
        Validation method.
        """
        slopes = np.asarray(self.slopes, dtype=float)
        offsets = np.asarray(self.offsets, dtype=float).reshape(-1)
        if slopes.ndim != 2 or slopes.shape[0] == 0:
            raise InvalidArgumentException("pieces", "at least one affine piece is required")
        if offsets.shape[0] != slopes.shape[0]:
            raise InvalidArgumentException("pieces", "slope and offset counts differ")
        if not (np.all(np.isfinite(slopes)) and np.all(np.isfinite(offsets))):
            raise InvalidArgumentException("pieces", "non-finite piece coefficients")
        object.__setattr__(self, "slopes", _freeze(slopes))
        object.__setattr__(self, "offsets", _freeze(offsets))

    @classmethod
    def from_pieces(cls, pieces: Sequence[Tuple[Sequence[float], float]]) -> "PiecewiseAffine":
        """
        Method for creating a piecewise affine function from (a, b) pairs.
        :param pieces: Sequence of (slope, offset) pairs.
        :return: Piecewise affine function.
        """
        if len(pieces) == 0:
            raise InvalidArgumentException("pieces", "at least one affine piece is required")
        return cls(slopes=np.array([np.asarray(a, dtype=float).reshape(-1) for a, _ in pieces]),
                   offsets=np.array([float(b) for _, b in pieces]))

    @classmethod
    def zero(cls, dimension: int) -> "PiecewiseAffine":
        """
        Method for creating h = 0 as a single zero piece.
        :param dimension: Dimension.
        :return: Piecewise affine function.
        """
        return cls(slopes=np.zeros((1, dimension)), offsets=np.zeros(1))

    @property
    def dimension(self) -> int:
        return self.slopes.shape[1]

    @property
    def piece_count(self) -> int:
        return self.slopes.shape[0]

    @property
    def pieces(self) -> List[Tuple[np.ndarray, float]]:
        return [(self.slopes[j], float(self.offsets[j])) for j in range(self.piece_count)]

    def piece_values(self, x: np.ndarray) -> np.ndarray:
        x = as_vector(x, self.dimension)
        return self.slopes @ x + self.offsets

    def value(self, x: np.ndarray) -> float:
        return float(np.max(self.piece_values(x)))


@dataclass(frozen=True, eq=False)
class ProblemInstance(object):
    """
    Composite multiobjective problem with objectives F_i = g_i + h_i.
    """
    smooth: Tuple[QuadraticObjective, ...]
    nonsmooth: Tuple[PiecewiseAffine, ...]

    def __post_init__(self) -> None:
        """
        Validation method.
        """
        smooth = tuple(self.smooth)
        nonsmooth = tuple(self.nonsmooth)
        if len(smooth) == 0:
            raise InvalidArgumentException("smooth", "at least one objective is required")
        if len(smooth) != len(nonsmooth):
            raise InvalidArgumentException(
                "nonsmooth", f"expected {len(smooth)} nonsmooth parts, got {len(nonsmooth)}")
        dimension = smooth[0].dimension
        if any(part.dimension != dimension for part in smooth + nonsmooth):
            raise InvalidArgumentException("smooth, nonsmooth", "parts do not share one dimension")
        object.__setattr__(self, "smooth", smooth)
        object.__setattr__(self, "nonsmooth", nonsmooth)

    @property
    def n(self) -> int:
        return self.smooth[0].dimension

    @property
    def m(self) -> int:
        return len(self.smooth)

    @property
    def piece_count(self) -> int:
        return sum(h.piece_count for h in self.nonsmooth)


def eval_smooth(obj: QuadraticObjective, x: np.ndarray) -> float:
    """
    Function for evaluating a smooth part g(x) = 1/2 x^T Q x + q^T x.
    :param obj: Quadratic objective.
    :param x: Point.
    :return: Value.
    """
    return obj.value(x)


def grad_smooth(obj: QuadraticObjective, x: np.ndarray) -> np.ndarray:
    """
    Function for evaluating the gradient Qx + q of a smooth part.
    :param obj: Quadratic objective.
    :param x: Point.
    :return: Gradient.
    """
    return obj.gradient(x)


def eval_nonsmooth(h: PiecewiseAffine, x: np.ndarray) -> float:
    """
    Function for evaluating a nonsmooth part max_j (a_j^T x + b_j).
    :param h: Piecewise affine function.
    :param x: Point.
    :return: Value.
    """
    if h.slopes.shape[0] == 0:
        raise InvalidStateException("PiecewiseAffine", "piece list is empty")
    return h.value(x)


def smooth_values(p: ProblemInstance, x: np.ndarray) -> np.ndarray:
    """
    Function for evaluating all smooth parts.
    :param p: Problem instance.
    :param x: Point.
    :return: Vector (g_1(x), ..., g_m(x)).
    """
    x = as_vector(x, p.n)
    return np.array([eval_smooth(g, x) for g in p.smooth])


def smooth_gradients(p: ProblemInstance, x: np.ndarray) -> np.ndarray:
    """
    Function for evaluating all smooth gradients.
    :param p: Problem instance.
    :param x: Point.
    :return: Matrix with rows grad g_i(x).
    """
    x = as_vector(x, p.n)
    return np.array([grad_smooth(g, x) for g in p.smooth])


def nonsmooth_values(p: ProblemInstance, x: np.ndarray) -> np.ndarray:
    """
    Function for evaluating all nonsmooth parts.
    :param p: Problem instance.
    :param x: Point.
    :return: Vector (h_1(x), ..., h_m(x)).
    """
    x = as_vector(x, p.n)
    return np.array([eval_nonsmooth(h, x) for h in p.nonsmooth])


def eval_F(p: ProblemInstance, x: np.ndarray) -> np.ndarray:
    """
    Function for evaluating the objective vector F(x) = (g_i(x) + h_i(x))_i.
    :param p: Problem instance.
    :param x: Point.
    :return: Objective vector.
    """
    return smooth_values(p, x) + nonsmooth_values(p, x)
