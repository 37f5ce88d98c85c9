# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple
import numpy as np
from pydantic import BaseModel, validator
from src.configuration import configuration as cfg
from src.model.solver_control.metrics import UpdateKind


class SolverConfig(BaseModel):
    """
    Dataclass for solver configuration.
    """
    method: UpdateKind = UpdateKind.BFGS
    line_search: bool = True
    omega: float = cfg.SOLVER_DEFAULTS.get("omega", 5.0)
    tau: float = cfg.SOLVER_DEFAULTS.get("tau", 0.5)
    zeta: float = cfg.SOLVER_DEFAULTS.get("zeta", 0.5)
    eps: float = cfg.SOLVER_DEFAULTS.get("eps", 1e-6)
    max_iter: int = cfg.SOLVER_DEFAULTS.get("max_iter", 10000)
    max_backtracks: int = cfg.SOLVER_DEFAULTS.get("max_backtracks", 60)
    sub_tol: Optional[float] = None
    sub_max_iter: int = cfg.SOLVER_DEFAULTS.get("sub_max_iter", 100000)
    initial_metric_scale: float = 1.0
    exhaustive_line_search: bool = False
    auto_omega: bool = False
    verbose_trace: bool = False

    class Config:
        validate_assignment = True

    @validator("omega", "eps", "initial_metric_scale")
    def _positive(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("must be positive")
        return value

    @validator("tau", "zeta")
    def _open_unit_interval(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("must lie in (0, 1)")
        return value

    @validator("max_iter", "sub_max_iter")
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @validator("max_backtracks")
    def _nonnegative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("must be nonnegative")
        return value

    @validator("sub_tol")
    def _positive_or_none(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not value > 0.0:
            raise ValueError("must be positive")
        return value


class RunStatus(str, Enum):
    """
    Termination status of a run.
    """
    STATIONARY = "Stationary"
    MAX_ITER = "MaxIter"
    LINE_SEARCH_FAILURE = "LineSearchFailure"
    SUBPROBLEM_FAILURE = "SubproblemFailure"


@dataclass(frozen=True)
class IterationRecord(object):
    """
    One outer iteration. step is 0 for the terminal record of a stationary run.
    """
    iteration: int
    x: np.ndarray
    objectives: np.ndarray
    direction_norm: float
    beta: float
    theta: float
    step: float
    backtracks: int
    gap: float

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "norm_d": self.direction_norm,
            "beta": self.beta,
            "theta": self.theta,
            "step": self.step,
            "backtracks": self.backtracks,
            "gap": self.gap,
            "F": self.objectives.tolist()
        }


@dataclass
class RunResult(object):
    """
    Result of a solver run with its full iteration trace.
    """
    x_final: np.ndarray
    F_final: np.ndarray
    iterations: int
    status: RunStatus
    trace: List[IterationRecord] = field(default_factory=list)
    wallclock: float = 0.0
    omega: float = 0.0
    final_beta: float = float("nan")
    final_direction_norm: float = float("nan")
    skipped_updates: List[Tuple[Optional[int], int]] = field(default_factory=list)
    message: str = ""
