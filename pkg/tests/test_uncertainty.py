# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from typing import List, Set, Tuple
import numpy as np
import pytest
from scipy.spatial import ConvexHull
from src.model.problem_control.exceptions import CapacityException, InvalidArgumentException, InvalidSetException, \
    SingularMatrixException
from src.model.problem_control.problem import eval_nonsmooth
from src.model.problem_control.uncertainty import Box, HPolytope, TransformedBox, box_vertices, \
    hpolytope_vertices, support_function, transformed_box_vertices, uncertainty_from_dict, uncertainty_to_dict


def as_set(vertices: List[np.ndarray], digits: int = 12) -> Set[Tuple[float, ...]]:
    return {tuple(np.round(vertex, digits) + 0.0) for vertex in vertices}


def test_box_vertices_square() -> None:
    assert as_set(box_vertices(0.1, 2)) == {(0.1, 0.1), (0.1, -0.1), (-0.1, 0.1), (-0.1, -0.1)}


def test_box_vertices_degenerate() -> None:
    vertices = box_vertices(0.0, 5)
    assert len(vertices) == 1
    assert np.array_equal(vertices[0], np.zeros(5))


def test_box_vertices_count() -> None:
    vertices = box_vertices(0.05, 5)
    assert len(vertices) == 32
    assert len(as_set(vertices)) == 32
    assert all(np.max(np.abs(vertex)) == 0.05 for vertex in vertices)


def test_box_vertices_capacity() -> None:
    with pytest.raises(CapacityException):
        box_vertices(0.1, 21)


def test_transformed_box_identity() -> None:
    assert as_set(transformed_box_vertices(np.eye(2), 0.1)) == as_set(box_vertices(0.1, 2))


def test_transformed_box_diagonal() -> None:
    assert as_set(transformed_box_vertices(np.diag([2.0, 1.0]), 0.1)) == \
        {(0.05, 0.1), (0.05, -0.1), (-0.05, 0.1), (-0.05, -0.1)}


def test_transformed_box_vertices_are_feasible_and_tight(rng: np.random.Generator) -> None:
    B = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
    delta = 0.1
    vertices = transformed_box_vertices(B, delta)
    assert len(vertices) == 8
    for vertex in vertices:
        image = B @ vertex
        assert np.all(np.abs(image) <= delta + 1e-12)
        assert np.count_nonzero(np.abs(np.abs(image) - delta) <= 1e-12) >= 3


def test_transformed_box_rejects_singular() -> None:
    with pytest.raises(SingularMatrixException):
        TransformedBox(B=np.array([[1.0, 1.0], [1.0, 1.0]]), delta=0.1)
    with pytest.raises(SingularMatrixException):
        transformed_box_vertices(np.zeros((2, 2)), 0.1)


def test_hpolytope_square() -> None:
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    assert as_set(hpolytope_vertices(A, np.ones(4))) == {(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)}


def test_hpolytope_triangle() -> None:
    A = np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]])
    b = np.array([0.0, 0.0, 1.0])
    assert as_set(hpolytope_vertices(A, b)) == {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)}


def test_hpolytope_matches_convex_hull(rng: np.random.Generator) -> None:
    A = np.vstack([np.eye(3), -np.eye(3), rng.standard_normal((2, 3))])
    b = np.concatenate([np.ones(6), 0.5 + np.abs(rng.standard_normal(2))])
    vertices = hpolytope_vertices(A, b)
    # independent candidate set: every feasible intersection of three constraint planes
    candidates = []
    for first in range(8):
        for second in range(first + 1, 8):
            for third in range(second + 1, 8):
                rows = [first, second, third]
                if abs(np.linalg.det(A[rows])) < 1e-9:
                    continue
                point = np.linalg.solve(A[rows], b[rows])
                if np.all(A @ point <= b + 1e-9):
                    candidates.append(point)
    candidates = np.unique(np.round(np.array(candidates), 10), axis=0)
    hull = ConvexHull(candidates)
    assert as_set(vertices, 8) == as_set(list(candidates[hull.vertices]), 8)


def test_hpolytope_rejects_unbounded() -> None:
    A = np.array([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(InvalidSetException):
        hpolytope_vertices(A, np.ones(2))
    with pytest.raises(InvalidSetException):
        hpolytope_vertices(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]]), np.ones(3))


def test_hpolytope_rejects_empty() -> None:
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    with pytest.raises(InvalidSetException):
        hpolytope_vertices(A, np.array([-1.0, -1.0, 1.0, 1.0]))


def test_support_function_zero_box() -> None:
    h = support_function(Box(delta=0.0, n=5))
    assert h.piece_count == 1
    assert eval_nonsmooth(h, np.arange(5.0)) == 0.0


def test_support_function_box() -> None:
    h = support_function(Box(delta=0.1, n=2))
    assert eval_nonsmooth(h, np.array([1.0, -2.0])) == pytest.approx(0.3, abs=1e-15)


def test_support_function_bounds_sampled_maximum(rng: np.random.Generator) -> None:
    B = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
    delta = 0.05
    h = support_function(TransformedBox(B=B, delta=delta))
    samples = np.linalg.solve(B, rng.uniform(-delta, delta, size=(3, 10000))).T
    for _ in range(20):
        x = rng.standard_normal(3)
        assert eval_nonsmooth(h, x) >= float(np.max(samples @ x)) - 1e-9


def test_support_function_hpolytope() -> None:
    A = np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]])
    h = support_function(HPolytope(A=A, b=np.array([0.0, 0.0, 1.0])))
    assert eval_nonsmooth(h, np.array([2.0, 3.0])) == pytest.approx(3.0)
    assert eval_nonsmooth(h, np.array([-1.0, -1.0])) == pytest.approx(0.0)


def test_uncertainty_documents() -> None:
    transformed = TransformedBox(B=np.diag([2.0, 1.0]), delta=0.1)
    restored = uncertainty_from_dict(uncertainty_to_dict(transformed))
    assert isinstance(restored, TransformedBox)
    assert np.array_equal(restored.B, transformed.B)
    assert uncertainty_from_dict({"type": "box", "delta": 0.2}, 3).n == 3
    with pytest.raises(InvalidArgumentException):
        uncertainty_from_dict({"type": "ellipsoid"})
    with pytest.raises(InvalidArgumentException):
        uncertainty_from_dict({"type": "box", "delta": 0.2})


def symmetric_sets(rng: np.random.Generator, delta: float) -> list:
    return [Box(delta=delta, n=3), TransformedBox(B=rng.standard_normal((3, 3)) + 3.0 * np.eye(3), delta=delta)]


def test_support_function_nonnegative_on_symmetric_sets(rng: np.random.Generator) -> None:
    for U in symmetric_sets(rng, 0.1):
        h = support_function(U)
        for _ in range(100):
            assert eval_nonsmooth(h, 5.0 * rng.standard_normal(3)) >= -1e-15


def test_support_function_positively_homogeneous(rng: np.random.Generator) -> None:
    for U in symmetric_sets(rng, 0.05):
        h = support_function(U)
        assert eval_nonsmooth(h, np.zeros(3)) == 0.0
        for _ in range(100):
            x, t = rng.standard_normal(3), rng.uniform(0.0, 10.0)
            expected = t * eval_nonsmooth(h, x)
            assert eval_nonsmooth(h, t * x) == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_support_function_monotone_in_delta(rng: np.random.Generator) -> None:
    B = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
    for shape in (lambda delta: Box(delta=delta, n=3), lambda delta: TransformedBox(B=B, delta=delta)):
        functions = [support_function(shape(delta)) for delta in (0.0, 0.05, 0.1, 0.2)]
        for _ in range(100):
            x = rng.standard_normal(3)
            values = [eval_nonsmooth(h, x) for h in functions]
            assert all(lower <= upper + 1e-14 * (1.0 + abs(upper)) for lower, upper in zip(values, values[1:]))
