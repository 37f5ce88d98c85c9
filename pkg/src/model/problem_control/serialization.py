# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from typing import Optional, Tuple
import numpy as np
from src.model.problem_control.exceptions import InvalidArgumentException
from src.model.problem_control.problem import QuadraticObjective, PiecewiseAffine, ProblemInstance
from src.model.problem_control import uncertainty
from src.utility.bronze import json_utility


def instance_to_dict(p: ProblemInstance, x0: Optional[np.ndarray] = None) -> dict:
    """
    Function for encoding a problem instance as a document.
    Floats are written with their shortest round-trip representation.
    :param p: Problem instance.
    :param x0: Optional starting point to embed.
    :return: Dictionary with fields n, m, Q, q, h and optionally x0.
    """
    data = {
        "n": p.n,
        "m": p.m,
        "Q": [g.Q.tolist() for g in p.smooth],
        "q": [g.q.tolist() for g in p.smooth],
        "h": [[[a.tolist(), b] for a, b in h.pieces] for h in p.nonsmooth]
    }
    if x0 is not None:
        data["x0"] = np.asarray(x0, dtype=float).tolist()
    return data


def instance_from_dict(data: dict) -> Tuple[ProblemInstance, Optional[np.ndarray]]:
    """
    Function for decoding a problem instance document.
    Entries of 'h' are either piece lists [[a, b], ...] or uncertainty set documents.
    A missing 'h' means h_i = 0 for every objective.
    :param data: Dictionary.
    :return: Problem instance and the embedded starting point, if any.
    """
    try:
        n = int(data["n"])
        m = int(data["m"])
        smooth = [QuadraticObjective(Q=np.array(Q, dtype=float), q=np.array(q, dtype=float))
                  for Q, q in zip(data["Q"], data["q"])]
    except KeyError as ex:
        raise InvalidArgumentException(str(ex), "instance document is missing a field")
    if len(smooth) != m:
        raise InvalidArgumentException("Q, q", f"expected {m} smooth parts, got {len(smooth)}")
    nonsmooth = []
    for entry in data.get("h", [[[[0.0] * n, 0.0]]] * m):
        if isinstance(entry, dict):
            nonsmooth.append(uncertainty.support_function(uncertainty.uncertainty_from_dict(entry, n)))
        else:
            nonsmooth.append(PiecewiseAffine.from_pieces([(a, b) for a, b in entry]))
    problem = ProblemInstance(smooth=tuple(smooth), nonsmooth=tuple(nonsmooth))
    if problem.n != n:
        raise InvalidArgumentException("n", f"declared dimension {n} differs from data dimension {problem.n}")
    x0 = data.get("x0")
    return problem, (np.array(x0, dtype=float) if x0 is not None else None)


def save_instance(p: ProblemInstance, path: str, x0: Optional[np.ndarray] = None) -> None:
    """
    Function for saving a problem instance to a JSON file.
    :param p: Problem instance.
    :param path: Target path.
    :param x0: Optional starting point to embed.
    """
    json_utility.save(instance_to_dict(p, x0), path)


def load_instance(path: str) -> Tuple[ProblemInstance, Optional[np.ndarray]]:
    """
    Function for loading a problem instance from a JSON file.
    :param path: Source path.
    :return: Problem instance and the embedded starting point, if any.
    """
    return instance_from_dict(json_utility.load(path))
