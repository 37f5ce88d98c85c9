# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from typing import Optional
import numpy as np


class InvalidMetricException(Exception):
    """
    InvalidMetricException class.
    """

    def __init__(self, index: int, message: str = "metric matrix is not symmetric positive definite") -> None:
        """
        Initiation method for Invalid Metric Exception.
        :param index: Objective index of the offending matrix.
        :param message: Message to include in exception.
        """
        self.index = index
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : objective {self.index}"


class SubproblemFailure(Exception):
    """
    SubproblemFailure class.
    """

    def __init__(self, gap: float, iterations: int, best_direction: Optional[np.ndarray] = None,
                 message: str = "direction subproblem did not reach its duality gap tolerance") -> None:
        """
        Initiation method for Subproblem Failure.
        :param gap: Best duality gap reached.
        :param iterations: Dual iterations spent.
        :param best_direction: Direction belonging to the best gap.
        :param message: Message to include in exception.
        """
        self.gap = gap
        self.iterations = iterations
        self.best_direction = best_direction
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : gap {self.gap:.3e} after {self.iterations} iterations"


class LineSearchFailure(Exception):
    """
    LineSearchFailure class.
    """

    def __init__(self, step: float, backtracks: int,
                 message: str = "Armijo condition not met within the backtracking budget") -> None:
        """
        Initiation method for Line Search Failure.
        :param step: Last rejected step length.
        :param backtracks: Backtracks spent.
        :param message: Message to include in exception.
        """
        self.step = step
        self.backtracks = backtracks
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : last step {self.step:.3e} after {self.backtracks} backtracks"
