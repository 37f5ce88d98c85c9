# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
import itertools
import math
from dataclasses import dataclass
from typing import List, Union
import numpy as np
from scipy import linalg
from scipy.optimize import linprog
from src.model.problem_control.exceptions import InvalidArgumentException, CapacityException, \
    SingularMatrixException, InvalidSetException
from src.model.problem_control.problem import PiecewiseAffine
from src.utility.silver import linear_algebra_utility


MAX_BOX_DIMENSION = 20
MAX_SUBSETS = 10**6
MIN_RECIPROCAL_CONDITION = 1e-10
DEDUPLICATION_TOLERANCE = 1e-9
FEASIBILITY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Box(object):
    """
    Box {u | -delta <= u_i <= delta}.
    """
    delta: float
    n: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.delta) and self.delta >= 0.0):
            raise InvalidArgumentException("delta", "delta must be finite and nonnegative")
        if self.n < 1:
            raise InvalidArgumentException("n", "dimension must be positive")


@dataclass(frozen=True, eq=False)
class TransformedBox(object):
    """
    Transformed box {u | -delta <= (Bu)_i <= delta} with invertible B.
    """
    B: np.ndarray
    delta: float

    def __post_init__(self) -> None:
        B = np.array(self.B, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise InvalidArgumentException("B", f"expected a square matrix, got shape {B.shape}")
        if not (np.isfinite(self.delta) and self.delta >= 0.0):
            raise InvalidArgumentException("delta", "delta must be finite and nonnegative")
        rcond = linear_algebra_utility.reciprocal_condition(B)
        if rcond <= MIN_RECIPROCAL_CONDITION:
            raise SingularMatrixException("B", rcond)
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.B.shape[0]


@dataclass(frozen=True, eq=False)
class HPolytope(object):
    """
    Polytope {u | Au <= b}, required to be nonempty and bounded.
    """
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        A = np.array(self.A, dtype=float)
        b = np.array(self.b, dtype=float).reshape(-1)
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise InvalidArgumentException("A, b", "constraint matrix and right hand side do not match")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise InvalidArgumentException("A, b", "non-finite constraint data")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.A.shape[1]


UncertaintySet = Union[Box, TransformedBox, HPolytope]


def _deduplicate(points: List[np.ndarray], tolerance: float = DEDUPLICATION_TOLERANCE) -> List[np.ndarray]:
    kept = []
    for point in points:
        if not any(np.max(np.abs(point - other)) <= tolerance for other in kept):
            kept.append(point)
    return kept


def box_vertices(delta: float, n: int) -> List[np.ndarray]:
    """
    Function for enumerating the vertices of {u | -delta <= u_i <= delta}.
    Sign patterns are produced in lexicographic order with + before -.
    :param delta: Half width.
    :param n: Dimension.
    :return: List of 2^n vertices, a single zero vertex for delta = 0.
    """
    if n < 1:
        raise InvalidArgumentException("n", "dimension must be positive")
    if not (np.isfinite(delta) and delta >= 0.0):
        raise InvalidArgumentException("delta", "delta must be finite and nonnegative")
    if n > MAX_BOX_DIMENSION:
        raise CapacityException(2**n, 2**MAX_BOX_DIMENSION)
    if delta == 0.0:
        return [np.zeros(n)]
    return [np.array(signs, dtype=float) * delta for signs in itertools.product((1.0, -1.0), repeat=n)]


def transformed_box_vertices(B: np.ndarray, delta: float) -> List[np.ndarray]:
    """
    Function for enumerating the vertices of {u | -delta <= (Bu)_i <= delta}.
    The invertible map B^-1 carries box vertices to the vertices of the transformed box.
    :param B: Invertible square matrix.
    :param delta: Half width.
    :return: List of vertices.
    """
    B = np.asarray(B, dtype=float)
    rcond = linear_algebra_utility.reciprocal_condition(B)
    if rcond <= MIN_RECIPROCAL_CONDITION:
        raise SingularMatrixException("B", rcond)
    vertices = box_vertices(delta, B.shape[0])
    factor = linalg.lu_factor(B, check_finite=False)
    solved = linalg.lu_solve(factor, np.array(vertices).T, check_finite=False).T
    return _deduplicate(list(solved))


def _check_bounded(A: np.ndarray, b: np.ndarray) -> None:
    for coordinate in range(A.shape[1]):
        for sign in (1.0, -1.0):
            objective = np.zeros(A.shape[1])
            objective[coordinate] = -sign
            result = linprog(objective, A_ub=A, b_ub=b, bounds=[(None, None)] * A.shape[1], method="highs")
            if result.status == 2:
                raise InvalidSetException("hpolytope", "constraint set is empty")
            if result.status == 3:
                raise InvalidSetException("hpolytope", f"unbounded along coordinate {coordinate}")


def hpolytope_vertices(A: np.ndarray, b: np.ndarray) -> List[np.ndarray]:
    """
    Function for enumerating the vertices of {u | Au <= b} by brute force over row subsets.
    :param A: Constraint matrix with d >= n rows.
    :param b: Right hand side.
    :return: List of vertices in subset enumeration order.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).reshape(-1)
    rows, n = A.shape
    if rows < n:
        raise InvalidSetException("hpolytope", f"{rows} constraints cannot bound a set in dimension {n}")
    subsets = math.comb(rows, n)
    if subsets > MAX_SUBSETS:
        raise CapacityException(subsets, MAX_SUBSETS)
    _check_bounded(A, b)
    vertices = []
    for subset in itertools.combinations(range(rows), n):
        submatrix = A[list(subset)]
        if linear_algebra_utility.reciprocal_condition(submatrix) <= MIN_RECIPROCAL_CONDITION:
            continue
        point = linalg.solve(submatrix, b[list(subset)], check_finite=False)
        if np.all(b - A @ point >= -FEASIBILITY_TOLERANCE):
            vertices.append(point)
    vertices = _deduplicate(vertices)
    if not vertices or not all(np.all(np.isfinite(vertex)) for vertex in vertices):
        raise InvalidSetException("hpolytope", "no finite vertex found")
    return vertices


def vertices_of(U: UncertaintySet) -> List[np.ndarray]:
    """
    Function for enumerating the vertices of any supported uncertainty set.
    :param U: Uncertainty set.
    :return: List of vertices.
    """
    if isinstance(U, Box):
        return box_vertices(U.delta, U.n)
    if isinstance(U, TransformedBox):
        return transformed_box_vertices(U.B, U.delta)
    if isinstance(U, HPolytope):
        return hpolytope_vertices(U.A, U.b)
    raise InvalidArgumentException("U", f"unsupported uncertainty set type {type(U).__name__}")


def support_function(U: UncertaintySet) -> PiecewiseAffine:
    """
    Function for converting an uncertainty set into its support function h(x) = max_{u in U} u^T x.
    The maximum of the linear program is attained at a vertex, so h is the maximum over vertices.
    :param U: Uncertainty set.
    :return: Piecewise affine function with one zero-offset piece per vertex.
    """
    vertices = vertices_of(U)
    return PiecewiseAffine(slopes=np.array(vertices), offsets=np.zeros(len(vertices)))


def uncertainty_to_dict(U: UncertaintySet) -> dict:
    """
    Function for encoding an uncertainty set as a document.
    :param U: Uncertainty set.
    :return: Dictionary.
    """
    if isinstance(U, Box):
        return {"type": "box", "delta": float(U.delta), "n": int(U.n)}
    if isinstance(U, TransformedBox):
        return {"type": "transformed_box", "delta": float(U.delta), "B": U.B.tolist()}
    if isinstance(U, HPolytope):
        return {"type": "hpolytope", "A": U.A.tolist(), "b": U.b.tolist()}
    raise InvalidArgumentException("U", f"unsupported uncertainty set type {type(U).__name__}")


def uncertainty_from_dict(data: dict, n: int = None) -> UncertaintySet:
    """
    Function for decoding an uncertainty set document.
    :param data: Dictionary with a 'type' field of 'box', 'transformed_box' or 'hpolytope'.
    :param n: Dimension, used for boxes without an explicit 'n'.
    :return: Uncertainty set.
    """
    set_type = data.get("type")
    if set_type == "box":
        dimension = data.get("n", n)
        if dimension is None:
            raise InvalidArgumentException("n", "box document without a dimension")
        return Box(delta=float(data["delta"]), n=int(dimension))
    if set_type == "transformed_box":
        return TransformedBox(B=np.array(data["B"], dtype=float), delta=float(data["delta"]))
    if set_type == "hpolytope":
        return HPolytope(A=np.array(data["A"], dtype=float), b=np.array(data["b"], dtype=float))
    raise InvalidArgumentException("type", f"unknown uncertainty set type '{set_type}'")
