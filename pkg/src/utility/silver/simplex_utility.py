# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
import numpy as np


def project_onto_simplex(vector: np.ndarray) -> np.ndarray:
    """
    Function for the Euclidean projection onto the unit simplex {w | w >= 0, sum(w) = 1}.
    Sort-based algorithm: find the largest index k with u_k - (sum_{j<=k} u_j - 1) / k > 0
    for the descending sort u, then threshold.
    :param vector: Vector to project.
    :return: Projected vector.
    """
    size = vector.shape[0]
    if size == 1:
        return np.ones(1)
    descending = np.sort(vector)[::-1]
    cumulative = np.cumsum(descending) - 1.0
    indices = np.arange(1, size + 1)
    candidates = descending - cumulative / indices > 0
    rho = indices[candidates][-1]
    threshold = cumulative[rho - 1] / rho
    projected = np.maximum(vector - threshold, 0.0)
    return projected / projected.sum()


def uniform_on_support(size: int, support: np.ndarray) -> np.ndarray:
    """
    Function for creating simplex weights, uniform over a support mask.
    :param size: Number of weights.
    :param support: Boolean mask. Falls back to all entries, if empty.
    :return: Simplex weights.
    """
    weights = np.zeros(size)
    if not np.any(support):
        support = np.ones(size, dtype=bool)
    weights[support] = 1.0 / np.count_nonzero(support)
    return weights
