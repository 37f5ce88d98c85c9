# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional
import numpy as np
import pandas as pd
import toml
from pydantic import ValidationError
from src.configuration import configuration as cfg
from src.control.experiment_controller import ExperimentController
from src.control.solver_controller import run
from src.model.experiment_control.dataclasses import ExperimentConfig
from src.model.experiment_control.exceptions import OutputException
from src.model.problem_control import exceptions as problem_exceptions
from src.model.problem_control.problem import ProblemInstance, as_vector
from src.model.problem_control.serialization import load_instance
from src.model.solver_control.dataclasses import RunResult, RunStatus, SolverConfig
from src.model.solver_control.metrics import UpdateKind
from src.quality.reference_oracles import stationarity_certificate
from src.utility.bronze import dictionary_utility, json_utility
from src.utility.silver import file_system_utility


EXIT_SUCCESS = 0
EXIT_OUTPUT_ERROR = 1
EXIT_INVALID_CONFIG = 2
EXIT_RUN_FAILED = 3

INPUT_ERRORS = (
    problem_exceptions.InvalidArgumentException,
    problem_exceptions.InvalidStateException,
    problem_exceptions.CapacityException,
    problem_exceptions.SingularMatrixException,
    problem_exceptions.InvalidSetException,
    KeyError,
    ValueError,
    FileNotFoundError
)


def _float_list(text: str) -> List[float]:
    return [float(entry) for entry in text.split(",") if entry.strip()]


def _method_list(text: str) -> List[str]:
    return [entry.strip() for entry in text.split(",") if entry.strip()]


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--omega", type=float, default=None, help="Proximal weight.")
    parser.add_argument("--tau", type=float, default=None, help="Armijo constant in (0, 1).")
    parser.add_argument("--zeta", type=float, default=None, help="Backtracking factor in (0, 1).")
    parser.add_argument("--eps", type=float, default=None, help="Stopping tolerance on the direction norm.")
    parser.add_argument("--max-iter", dest="max_iter", type=int, default=None, help="Outer iteration budget.")


def build_parser() -> argparse.ArgumentParser:
    """
    Function for building the argument parser.
    :return: Argument parser.
    """
    parser = argparse.ArgumentParser(prog="pqn", description="Proximal quasi-Newton multiobjective optimization.")
    parser.add_argument("--config", default=None, help="TOML or JSON file with [solver] and [experiment] tables.")
    parser.add_argument("--log-level", dest="log_level", default=None, help="Logging level, e.g. INFO or DEBUG.")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Solve a single instance.")
    solve.add_argument("--instance", required=True, help="Instance JSON document.")
    solve.add_argument("--method", choices=[kind.value for kind in UpdateKind], default=None)
    solve.add_argument("--no-line-search", dest="line_search", action="store_const", const=False, default=None)
    solve.add_argument("--auto-omega", dest="auto_omega", action="store_const", const=True, default=None,
                       help="Use omega = 1.01 L/2 in fixed-step mode.")
    solve.add_argument("--x0", type=_float_list, default=None, help="Comma separated starting point.")
    solve.add_argument("--out", default=None, help="Trace CSV path.")
    solve.add_argument("--verbose", dest="verbose_trace", action="store_const", const=True, default=None,
                       help="Stream one JSON record per iteration.")
    _add_solver_flags(solve)

    experiment = commands.add_parser("experiment", help="Run the seeded experiment batch.")
    experiment.add_argument("--seed", type=int, default=None)
    experiment.add_argument("--n", type=int, default=None)
    experiment.add_argument("--m", type=int, default=None)
    experiment.add_argument("--runs", type=int, default=None)
    experiment.add_argument("--deltas", type=_float_list, default=None, help="Comma separated, e.g. 0,0.05,0.1.")
    experiment.add_argument("--methods", type=_method_list, default=None, help="Comma separated, e.g. pgm,bfgs.")
    experiment.add_argument("--no-line-search", dest="line_search", action="store_const", const=False, default=None)
    experiment.add_argument("--both-modes", dest="both_modes", action="store_const", const=True, default=None)
    experiment.add_argument("--fixed-instance", dest="fixed_instance", action="store_const", const=True,
                            default=None)
    experiment.add_argument("--workers", type=int, default=None)
    experiment.add_argument("--certify", action="store_const", const=True, default=None)
    experiment.add_argument("--svg", action="store_const", const=True, default=None)
    experiment.add_argument("--out-dir", dest="out_dir", default=None)
    experiment.add_argument("--no-progress", dest="progress", action="store_false", default=True)
    _add_solver_flags(experiment)

    check = commands.add_parser("check", help="Certify (approximate) stationarity of a point.")
    check.add_argument("--instance", required=True, help="Instance JSON document.")
    check.add_argument("--point", required=True, help="CSV file with the point coordinates.")
    check.add_argument("--omega", type=float, default=None)
    check.add_argument("--tol", type=float, default=None, help="Defaults to 10 omega eps^2.")
    check.add_argument("--eps", type=float, default=None)
    return parser


def load_config_file(path: Optional[str]) -> dict:
    """
    Function for loading a configuration document.
    :param path: TOML or JSON path, None for no file.
    :return: Configuration document.
    """
    if path is None:
        return {}
    if json_utility.is_json(path):
        return json_utility.load(path)
    return toml.load(path)


def _flags(args: argparse.Namespace, keys: List[str]) -> dict:
    return {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}


def solver_config_from(args: argparse.Namespace, document: dict) -> SolverConfig:
    """
    Function for building the solver configuration, flags taking precedence over the file.
    :param args: Parsed arguments.
    :param document: Configuration document.
    :return: Solver configuration.
    """
    merged = dictionary_utility.merge_data(
        dictionary_utility.section(document, "solver"),
        _flags(args, ["method", "line_search", "omega", "tau", "zeta", "eps", "max_iter", "auto_omega",
                      "verbose_trace"]))
    return SolverConfig(**merged)


def experiment_config_from(args: argparse.Namespace, document: dict) -> ExperimentConfig:
    """
    Function for building the experiment configuration, flags taking precedence over the file.
    :param args: Parsed arguments.
    :param document: Configuration document.
    :return: Experiment configuration.
    """
    merged = dictionary_utility.merge_data(
        dictionary_utility.section(document, "experiment"),
        _flags(args, ["seed", "n", "m", "runs", "deltas", "methods", "line_search", "both_modes", "fixed_instance",
                      "workers", "certify", "svg", "out_dir", "omega", "tau", "zeta", "eps", "max_iter"]))
    return ExperimentConfig(**merged)


def trace_frame(result: RunResult, p: ProblemInstance) -> pd.DataFrame:
    """
    Function for arranging a run trace as a data frame.
    :param result: Run result.
    :param p: Problem instance.
    :return: Data frame with one row per trace record.
    """
    rows = []
    for record in result.trace:
        row = {key: value for key, value in record.to_dict().items() if key != "F"}
        row.update({f"F{i + 1}": value for i, value in enumerate(record.objectives)})
        row.update({f"x{j + 1}": value for j, value in enumerate(record.x)})
        rows.append(row)
    columns = ["iteration", "norm_d", "beta", "theta", "step", "backtracks", "gap"] + \
        [f"F{i + 1}" for i in range(p.m)] + [f"x{j + 1}" for j in range(p.n)]
    return pd.DataFrame(rows, columns=columns)


def read_point(path: str, n: int) -> np.ndarray:
    """
    Function for reading a point from a CSV file, either one row or one column of numbers.
    :param path: CSV path.
    :param n: Dimension.
    :return: Point.
    """
    frame = pd.read_csv(path, header=None, float_precision="round_trip")
    return as_vector(frame.to_numpy(dtype=float).ravel(), n, "point")


def run_solve(args: argparse.Namespace, document: dict) -> int:
    config = solver_config_from(args, document)
    problem, x0 = load_instance(args.instance)
    if args.x0 is not None:
        x0 = np.asarray(args.x0, dtype=float)
    if x0 is None:
        raise problem_exceptions.InvalidArgumentException("x0", "instance has no x0, pass --x0")
    result = run(problem, x0, config)
    if args.out is not None:
        try:
            file_system_utility.safely_create_path(os.path.dirname(args.out))
            trace_frame(result, problem).to_csv(args.out, index=False, float_format="%.17g")
        except OSError as ex:
            raise OutputException(args.out, f"could not write trace ({ex.strerror})")
    print(json_utility.dumps_line({"status": result.status.value, "iterations": result.iterations,
                                   "F": result.F_final.tolist(), "x": result.x_final.tolist(),
                                   "beta": result.final_beta, "omega": result.omega}))
    return EXIT_SUCCESS if result.status == RunStatus.STATIONARY else EXIT_RUN_FAILED


def run_experiment(args: argparse.Namespace, document: dict) -> int:
    experiment = experiment_config_from(args, document)
    controller = ExperimentController(experiment)
    controller.run(progress=args.progress)
    written = controller.save()
    print(json_utility.dumps_line({"records": len(controller.records), "failed": controller.summary["failed"],
                                   "outputs": written}))
    return EXIT_RUN_FAILED if controller.failed else EXIT_SUCCESS


def run_check(args: argparse.Namespace, document: dict) -> int:
    defaults = SolverConfig(**dictionary_utility.merge_data(dictionary_utility.section(document, "solver"),
                                                            _flags(args, ["omega", "eps"])))
    problem, _ = load_instance(args.instance)
    point = read_point(args.point, problem.n)
    tol = args.tol if args.tol is not None else 10.0 * defaults.omega * defaults.eps**2
    stationary, beta = stationarity_certificate(point, problem, defaults.omega, tol)
    print(json_utility.dumps_line({"stationary": stationary, "beta": beta, "tol": tol}))
    return EXIT_SUCCESS if stationary else EXIT_RUN_FAILED


COMMANDS = {"solve": run_solve, "experiment": run_experiment, "check": run_check}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Function for running the command line interface.
    :param argv: Arguments, defaults to sys.argv.
    :return: Exit code.
    """
    args = build_parser().parse_args(argv)
    if args.log_level is not None:
        cfg.LOGGER.setLevel(args.log_level.upper())
    if not cfg.LOGGER.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
        cfg.LOGGER.addHandler(handler)
    try:
        document = load_config_file(args.config)
        return COMMANDS[args.command](args, document)
    except ValidationError as ex:
        cfg.LOGGER.error(f"Invalid configuration: {ex}")
        return EXIT_INVALID_CONFIG
    except (toml.TomlDecodeError, json.JSONDecodeError) as ex:
        cfg.LOGGER.error(f"Unreadable configuration: {ex}")
        return EXIT_INVALID_CONFIG
    except OutputException as ex:
        cfg.LOGGER.error(str(ex))
        return EXIT_OUTPUT_ERROR
    except INPUT_ERRORS as ex:
        cfg.LOGGER.error(f"Invalid input: {ex}")
        return EXIT_INVALID_CONFIG
