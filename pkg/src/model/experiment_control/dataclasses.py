# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from dataclasses import dataclass
from typing import List, Optional
import numpy as np
from pydantic import BaseModel, validator
from src.configuration import configuration as cfg
from src.model.solver_control.dataclasses import SolverConfig
from src.model.solver_control.metrics import UpdateKind


class ExperimentConfig(BaseModel):
    """
    Dataclass for experiment configuration. Solver overrides left at None keep the solver defaults.
    """
    seed: int = cfg.EXPERIMENT_DEFAULTS.get("seed", 20231017)
    n: int = cfg.EXPERIMENT_DEFAULTS.get("n", 5)
    m: int = cfg.EXPERIMENT_DEFAULTS.get("m", 2)
    runs: int = cfg.EXPERIMENT_DEFAULTS.get("runs", 100)
    deltas: List[float] = cfg.EXPERIMENT_DEFAULTS.get("deltas", [0.0, 0.05, 0.1])
    methods: List[UpdateKind] = cfg.EXPERIMENT_DEFAULTS.get("methods", [kind.value for kind in UpdateKind])
    line_search: bool = cfg.EXPERIMENT_DEFAULTS.get("line_search", True)
    both_modes: bool = False
    fixed_instance: bool = False
    omega: Optional[float] = None
    tau: Optional[float] = None
    zeta: Optional[float] = None
    eps: Optional[float] = None
    max_iter: Optional[int] = None
    workers: int = cfg.WORKERS
    certify: bool = False
    svg: bool = False
    out_dir: str = cfg.OUTPUT_PATH

    @validator("runs", "n", "m", "workers")
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @validator("seed")
    def _nonnegative_seed(cls, value: int) -> int:
        if value < 0:
            raise ValueError("seed must be nonnegative")
        return value

    @validator("deltas")
    def _nonnegative_deltas(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("at least one delta is required")
        if any(not delta >= 0.0 for delta in value):
            raise ValueError("deltas must be nonnegative")
        return value

    @validator("methods")
    def _some_methods(cls, value: List[UpdateKind]) -> List[UpdateKind]:
        if not value:
            raise ValueError("at least one method is required")
        return value

    @property
    def modes(self) -> List[bool]:
        return [True, False] if self.both_modes else [self.line_search]

    def solver_config(self, method: UpdateKind, line_search: bool) -> SolverConfig:
        """
        Method for deriving the solver configuration of one batch entry.
        :param method: Update formula.
        :param line_search: Line search flag.
        :return: Solver configuration.
        """
        overrides = {key: getattr(self, key) for key in ("omega", "tau", "zeta", "eps", "max_iter")
                     if getattr(self, key) is not None}
        # fixed-step runs need omega > L/2, which depends on the instance
        auto_omega = not line_search and self.omega is None
        return SolverConfig(method=method, line_search=line_search, auto_omega=auto_omega, **overrides)


@dataclass
class FrontierRecord(object):
    """
    Outcome of one (run, delta, method, mode) batch entry.
    """
    run_id: int
    delta: float
    method: UpdateKind
    line_search: bool
    status: str
    iterations: int
    wallclock_ms: float
    F: np.ndarray
    x: np.ndarray
    instance_hash: str = ""
    nondominated: bool = False
    certified: Optional[bool] = None
    message: str = ""
