# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from typing import Tuple
import numpy as np
from scipy import linalg


def symmetrize(matrix: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Function for symmetrizing a square matrix.
    :param matrix: Square matrix.
    :return: Symmetric part (M + M^T) / 2 and the relative asymmetry of the input.
    """
    scale = max(float(np.max(np.abs(matrix))), 1.0) if matrix.size else 1.0
    asymmetry = float(np.max(np.abs(matrix - matrix.T))) / scale if matrix.size else 0.0
    return 0.5 * (matrix + matrix.T), asymmetry


def is_symmetric(matrix: np.ndarray, relative_tolerance: float = 1e-10) -> bool:
    """
    Function for checking symmetry of a square matrix.
    :param matrix: Square matrix.
    :param relative_tolerance: Allowed asymmetry relative to the largest entry.
    :return: True, if the matrix is symmetric within tolerance, else False.
    """
    return symmetrize(matrix)[1] <= relative_tolerance


def is_positive_definite(matrix: np.ndarray) -> bool:
    """
    Function for checking positive definiteness via Cholesky factorization.
    :param matrix: Symmetric matrix.
    :return: True, if the factorization succeeds, else False.
    """
    if not np.all(np.isfinite(matrix)):
        return False
    try:
        linalg.cholesky(matrix, lower=True, check_finite=False)
        return True
    except linalg.LinAlgError:
        return False


def smallest_eigenvalue(matrix: np.ndarray) -> float:
    """
    Function for computing the smallest eigenvalue of a symmetric matrix.
    :param matrix: Symmetric matrix.
    :return: Smallest eigenvalue.
    """
    return float(linalg.eigh(matrix, eigvals_only=True)[0])


def largest_eigenvalue(matrix: np.ndarray) -> float:
    """
    Function for computing the largest eigenvalue of a symmetric matrix.
    :param matrix: Symmetric matrix.
    :return: Largest eigenvalue.
    """
    return float(linalg.eigh(matrix, eigvals_only=True)[-1])


def reciprocal_condition(matrix: np.ndarray) -> float:
    """
    Function for estimating the reciprocal 1-norm condition number of a square matrix.
    :param matrix: Square matrix.
    :return: Reciprocal condition in [0, 1], 0 for singular or non-finite input.
    """
    if not np.all(np.isfinite(matrix)):
        return 0.0
    with np.errstate(all="ignore"):
        condition = np.linalg.cond(matrix, 1)
    if not np.isfinite(condition) or condition <= 0.0:
        return 0.0
    return float(1.0 / condition)


def smallest_singular_value(matrix: np.ndarray) -> float:
    """
    Function for computing the smallest singular value of a matrix.
    :param matrix: Matrix.
    :return: Smallest singular value.
    """
    return float(linalg.svdvals(matrix)[-1])


def solve_spd(matrix: np.ndarray, right_hand_side: np.ndarray) -> np.ndarray:
    """
    Function for solving a symmetric positive definite system with a Cholesky factorization.
    Raises scipy.linalg.LinAlgError, if the matrix is not positive definite.
    :param matrix: Symmetric positive definite matrix.
    :param right_hand_side: Right hand side.
    :return: Solution.
    """
    factor = linalg.cho_factor(matrix, lower=True, check_finite=False)
    return linalg.cho_solve(factor, right_hand_side, check_finite=False)
