# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
import time
from typing import Optional, Tuple
import numpy as np
from src.configuration import configuration as cfg
from src.model.problem_control.exceptions import InvalidArgumentException
from src.model.problem_control.problem import ProblemInstance, as_vector, eval_F, smooth_values, \
    smooth_gradients
from src.model.solver_control.dataclasses import SolverConfig, RunResult, RunStatus, IterationRecord
from src.model.solver_control.exceptions import LineSearchFailure, SubproblemFailure
from src.model.solver_control.metrics import MetricSet, UpdateKind, huang_theta, lipschitz_bound
from src.model.solver_control.subproblem import solve_direction, default_tolerance
from src.utility.bronze import json_utility


def armijo_search(x: np.ndarray, d: np.ndarray, theta: float, p: ProblemInstance, tau: float, zeta: float,
                  max_backtracks: int, F_x: Optional[np.ndarray] = None,
                  exhaustive: bool = False) -> Tuple[float, int]:
    """
    Function for the Armijo rule F_i(x + l d) <= F_i(x) + l tau theta for all i, over l = zeta^j.
    :param x: Current point.
    :param d: Direction.
    :param theta: Model value theta_x(d) < 0.
    :param p: Problem instance.
    :param tau: Sufficient decrease constant.
    :param zeta: Backtracking factor.
    :param max_backtracks: Largest j tried.
    :param F_x: Objective vector at x, evaluated if not given.
    :param exhaustive: Test every j up to max_backtracks and return the largest accepted step.
    :return: Accepted step and its exponent j.
    """
    if not theta < 0.0:
        raise LineSearchFailure(1.0, 0, f"model value {theta:.3e} is not negative")
    F_x = eval_F(p, x) if F_x is None else F_x
    accepted = []
    step = 1.0
    for backtracks in range(max_backtracks + 1):
        step = zeta**backtracks
        if np.all(eval_F(p, x + step * d) <= F_x + step * tau * theta):
            if not exhaustive:
                return step, backtracks
            accepted.append(backtracks)
    if accepted:
        return zeta**min(accepted), min(accepted)
    raise LineSearchFailure(step, max_backtracks)


class SolverController(object):
    """
    Controller class for proximal quasi-Newton runs, with (Armijo) or without (unit step) line search.
    """

    def __init__(self, problem: ProblemInstance, config: SolverConfig = None) -> None:
        """
        Initiation method.
        :param problem: Problem instance.
        :param config: Solver configuration. Defaults to None in which case defaults are used.
        """
        self.problem = problem
        self.config = config if config is not None else SolverConfig()
        self.omega = self.config.omega
        self.warning = ""
        if not self.config.line_search:
            lipschitz = lipschitz_bound(problem)
            if self.config.auto_omega:
                self.omega = 1.01 * lipschitz / 2.0
            elif self.omega <= lipschitz / 2.0:
                self.warning = f"Fixed-step run with omega={self.omega} <= L/2={lipschitz / 2.0:.6g}; " \
                               f"descent is not guaranteed."
                cfg.LOGGER.warning(self.warning)

    def run(self, x0: np.ndarray, raise_on_failure: bool = False) -> RunResult:
        """
        Method for running the outer iteration from x0.
        :param x0: Starting point.
        :param raise_on_failure: Re-raise subproblem and line search failures instead of reporting them as status.
        :return: Run result.
        """
        p, config = self.problem, self.config
        x = as_vector(x0, p.n, "x0").copy()
        if not np.all(np.isfinite(x)):
            raise InvalidArgumentException("x0", "starting point is not finite")
        metrics = MetricSet([config.initial_metric_scale * np.eye(p.n) for _ in range(p.m)], config.method)
        started = time.perf_counter()
        trace = []
        status, message = RunStatus.MAX_ITER, ""
        F_x, g_x, grads_x = eval_F(p, x), smooth_values(p, x), smooth_gradients(p, x)
        final_beta, final_norm, previous_norm = float("nan"), float("nan"), None
        try:
            for iteration in range(config.max_iter):
                tolerance = config.sub_tol if config.sub_tol is not None else \
                    default_tolerance(self.omega, previous_norm)
                solution = solve_direction(x, p, metrics, self.omega, tolerance, config.sub_max_iter)
                final_beta, final_norm = solution.beta, float(np.linalg.norm(solution.d))
                if final_norm < config.eps:
                    self._record(trace, iteration, x, F_x, solution, final_norm, 0.0, 0)
                    status = RunStatus.STATIONARY
                    break
                if config.line_search:
                    step, backtracks = armijo_search(x, solution.d, solution.theta, p, config.tau, config.zeta,
                                                     config.max_backtracks, F_x, config.exhaustive_line_search)
                else:
                    step, backtracks = 1.0, 0
                self._record(trace, iteration, x, F_x, solution, final_norm, step, backtracks)
                x_next = x + step * solution.d
                if not np.all(np.isfinite(x_next)):
                    raise SubproblemFailure(solution.gap, iteration, solution.d, "iterate is no longer finite")
                F_next, g_next, grads_next = eval_F(p, x_next), smooth_values(p, x_next), smooth_gradients(p, x_next)
                s = x_next - x
                for index in range(p.m):
                    y = grads_next[index] - grads_x[index]
                    theta = huang_theta(g_x[index], g_next[index], grads_x[index], grads_next[index], s) \
                        if config.method == UpdateKind.HBFGS else None
                    metrics.update(index, s, y, theta, iteration)
                x, F_x, g_x, grads_x = x_next, F_next, g_next, grads_next
                previous_norm = final_norm
        except SubproblemFailure as ex:
            if raise_on_failure:
                raise ex
            status, message = RunStatus.SUBPROBLEM_FAILURE, str(ex)
            cfg.LOGGER.warning(f"Run stopped: {message}")
        except LineSearchFailure as ex:
            if raise_on_failure:
                raise ex
            status, message = RunStatus.LINE_SEARCH_FAILURE, str(ex)
            cfg.LOGGER.warning(f"Run stopped: {message}")
        return RunResult(x_final=x, F_final=F_x, iterations=len(trace), status=status, trace=trace,
                         wallclock=time.perf_counter() - started, omega=self.omega, final_beta=final_beta,
                         final_direction_norm=final_norm, skipped_updates=list(metrics.skipped),
                         message="; ".join(text for text in (self.warning, message) if text))

    def _record(self, trace: list, iteration: int, x: np.ndarray, F_x: np.ndarray, solution, norm: float,
                step: float, backtracks: int) -> None:
        record = IterationRecord(iteration=iteration, x=x.copy(), objectives=F_x.copy(), direction_norm=norm,
                                 beta=solution.beta, theta=solution.theta, step=step, backtracks=backtracks,
                                 gap=solution.gap)
        trace.append(record)
        if self.config.verbose_trace:
            cfg.LOGGER.info(json_utility.dumps_line(record.to_dict()))


def run(p: ProblemInstance, x0: np.ndarray, config: SolverConfig = None,
        raise_on_failure: bool = False) -> RunResult:
    """
    Function for running the proximal quasi-Newton method.
    :param p: Problem instance.
    :param x0: Starting point.
    :param config: Solver configuration. Defaults to None in which case defaults are used.
    :param raise_on_failure: Re-raise subproblem and line search failures instead of reporting them as status.
    :return: Run result.
    """
    return SolverController(p, config).run(x0, raise_on_failure)


def pgm_baseline(p: ProblemInstance, x0: np.ndarray, config: SolverConfig = None,
                 raise_on_failure: bool = False) -> RunResult:
    """
    Function for running the proximal gradient baseline, i.e. the same method with B_i = 0.
    :param p: Problem instance.
    :param x0: Starting point.
    :param config: Solver configuration, its method is replaced.
    :param raise_on_failure: Re-raise subproblem and line search failures instead of reporting them as status.
    :return: Run result.
    """
    config = (config if config is not None else SolverConfig()).copy(update={"method": UpdateKind.FROZEN_ZERO})
    return run(p, x0, config, raise_on_failure)
