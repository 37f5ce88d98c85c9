# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
# Seeded instance generation and batch execution.
#
# Random draws use numpy's PCG64 bit generator (numpy.random.default_rng) seeded with
# SeedSequence([seed, instance_index, 0]) for the instance and SeedSequence([seed, run_index, 1])
# for the starting point. instance_index is the run index, or 0 with fixed_instance.
# Instance draw order, all standard normal and row-major:
#   M_1, ..., M_m (each redrawn while its smallest singular value is below 1e-8),
#   q_1, ..., q_m,
#   B_2, ..., B_m (each redrawn while its reciprocal condition is below 1e-6).
# The starting point stream draws x0 (n values). Draws do not depend on delta, so all deltas
# and methods of one run index share the instance and x0.
import json
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple
import numpy as np
import pandas as pd
from tqdm import tqdm
from src.configuration import configuration as cfg
from src.control.solver_controller import run
from src.model.experiment_control.dataclasses import ExperimentConfig, FrontierRecord
from src.model.experiment_control.exceptions import InstanceGenerationException, OutputException
from src.model.problem_control.problem import ProblemInstance, QuadraticObjective
from src.model.problem_control.uncertainty import Box, TransformedBox, support_function
from src.model.solver_control.dataclasses import RunStatus
from src.model.solver_control.metrics import UpdateKind
from src.quality.reference_oracles import stationarity_certificate
from src.utility.bronze import hashing_utility, json_utility
from src.utility.silver import file_system_utility, linear_algebra_utility, svg_utility


MAX_REDRAWS = 100
MIN_SINGULAR_VALUE = 1e-8
MIN_RECIPROCAL_CONDITION = 1e-6
FAILED_STATUS = "Failed"
CSV_NAME = "frontier.csv"
SUMMARY_NAME = "summary.json"


def _redraw(rng: np.random.Generator, n: int, accept, seed: int, run_index: int) -> np.ndarray:
    for attempt in range(MAX_REDRAWS):
        matrix = rng.standard_normal((n, n))
        if accept(matrix):
            return matrix
        cfg.LOGGER.debug(f"Redrawing matrix (attempt {attempt + 1}) for seed {seed}, run {run_index}.")
    raise InstanceGenerationException(seed, run_index)


def generate_instance(seed: int, n: int, m: int, delta: float, run_index: int = 0,
                      fixed_instance: bool = False) -> Tuple[ProblemInstance, np.ndarray]:
    """
    Function for generating a seeded robust instance: Q_i = M_i M_i^T, standard normal q_i and x0,
    h_1 the support function of the box of half width delta, h_i (i >= 2) the support function of the
    transformed box {u | -delta <= (B_i u)_j <= delta}.
    :param seed: Experiment seed.
    :param n: Dimension.
    :param m: Objective count.
    :param delta: Uncertainty half width, 0 yields h_i = 0.
    :param run_index: Run index, folded into the seeds.
    :param fixed_instance: Draw the instance from run index 0, so that only x0 varies between runs.
    :return: Problem instance and starting point.
    """
    instance_rng = np.random.default_rng(np.random.SeedSequence([seed, 0 if fixed_instance else run_index, 0]))
    start_rng = np.random.default_rng(np.random.SeedSequence([seed, run_index, 1]))
    factors = [_redraw(instance_rng, n, lambda M: linear_algebra_utility.smallest_singular_value(M)
                       >= MIN_SINGULAR_VALUE, seed, run_index) for _ in range(m)]
    linear = [instance_rng.standard_normal(n) for _ in range(m)]
    transforms = [_redraw(instance_rng, n, lambda B: linear_algebra_utility.reciprocal_condition(B)
                          >= MIN_RECIPROCAL_CONDITION, seed, run_index) for _ in range(m - 1)]
    x0 = start_rng.standard_normal(n)
    smooth = tuple(QuadraticObjective(Q=M @ M.T, q=q) for M, q in zip(factors, linear))
    nonsmooth = (support_function(Box(delta=delta, n=n)),) + \
        tuple(support_function(TransformedBox(B=B, delta=delta)) for B in transforms)
    return ProblemInstance(smooth=smooth, nonsmooth=nonsmooth), x0


def instance_hash(p: ProblemInstance, x0: np.ndarray) -> str:
    """
    Function for hashing the exact data of an instance and its starting point.
    :param p: Problem instance.
    :param x0: Starting point.
    :return: SHA256 hex digest.
    """
    arrays = [array for g in p.smooth for array in (g.Q, g.q)] + \
        [array for h in p.nonsmooth for array in (h.slopes, h.offsets)] + [x0]
    return hashing_utility.hash_arrays_with_sha256(*arrays)


def pareto_filter(objectives: np.ndarray) -> np.ndarray:
    """
    Function for flagging nondominated objective vectors: r is dominated, if some s has
    F(s) <= F(r) componentwise with strict inequality somewhere.
    :param objectives: Array of shape (k, m).
    :return: Boolean flags of shape (k,).
    """
    objectives = np.asarray(objectives, dtype=float)
    if objectives.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    weakly_better = np.all(objectives[:, None, :] <= objectives[None, :, :], axis=2)
    strictly_better = np.any(objectives[:, None, :] < objectives[None, :, :], axis=2)
    # entry [s, r]: s dominates r
    return ~np.any(weakly_better & strictly_better, axis=0)


def _run_entry(experiment: ExperimentConfig, run_index: int, delta: float, method: UpdateKind,
               line_search: bool) -> FrontierRecord:
    nan = np.full(experiment.m, np.nan)
    try:
        problem, x0 = generate_instance(experiment.seed, experiment.n, experiment.m, delta, run_index,
                                        experiment.fixed_instance)
    except Exception as ex:
        cfg.LOGGER.warning(f"Instance generation failed for run {run_index}, delta {delta}: {ex}")
        return FrontierRecord(run_id=run_index, delta=delta, method=method, line_search=line_search,
                              status=FAILED_STATUS, iterations=0, wallclock_ms=0.0, F=nan,
                              x=np.full(experiment.n, np.nan), message=str(ex))
    record = FrontierRecord(run_id=run_index, delta=delta, method=method, line_search=line_search,
                            status=FAILED_STATUS, iterations=0, wallclock_ms=0.0, F=nan, x=x0,
                            instance_hash=instance_hash(problem, x0))
    try:
        solver_config = experiment.solver_config(method, line_search)
        result = run(problem, x0, solver_config)
        record.status = result.status.value
        record.iterations = result.iterations
        record.wallclock_ms = 1000.0 * result.wallclock
        record.F, record.x = result.F_final, result.x_final
        record.message = result.message
        if experiment.certify and result.status == RunStatus.STATIONARY:
            record.certified = stationarity_certificate(
                result.x_final, problem, result.omega, 10.0 * result.omega * solver_config.eps**2,
                seed=run_index)[0]
    except Exception as ex:
        cfg.LOGGER.warning(f"Run {run_index} ({method.value}, delta {delta}, line search {line_search}) failed: {ex}")
        record.message = str(ex)
    return record


def run_batch(experiment: ExperimentConfig, progress: bool = True) -> List[FrontierRecord]:
    """
    Function for running every (delta, method, mode, run) entry of an experiment.
    Failures are recorded in the status column and never abort the batch.
    :param experiment: Experiment configuration.
    :param progress: Show a progress bar.
    :return: Records ordered by (delta, method, mode, run_id), with nondominated flags per group.
    """
    tasks = [(run_index, delta, method, line_search)
             for delta in experiment.deltas
             for method in experiment.methods
             for line_search in experiment.modes
             for run_index in range(experiment.runs)]
    with tqdm(total=len(tasks), desc="Running experiment...", ncols=80, disable=not progress) as progress_bar:
        def execute(task: tuple) -> FrontierRecord:
            record = _run_entry(experiment, *task)
            progress_bar.update(1)
            return record
        if experiment.workers > 1:
            with ThreadPoolExecutor(max_workers=experiment.workers) as executor:
                records = list(executor.map(execute, tasks))
        else:
            records = [execute(task) for task in tasks]
    apply_pareto_flags(records)
    return records


def apply_pareto_flags(records: List[FrontierRecord]) -> None:
    """
    Function for setting nondominated flags within each (delta, method, mode) group.
    Records without finite objective values are never nondominated.
    :param records: Records to flag in place.
    """
    groups: Dict[tuple, List[FrontierRecord]] = {}
    for record in records:
        groups.setdefault((record.delta, record.method, record.line_search), []).append(record)
    for group in groups.values():
        finite = [record for record in group if np.all(np.isfinite(record.F))]
        for record in group:
            record.nondominated = False
        if finite:
            flags = pareto_filter(np.array([record.F for record in finite]))
            for record, flag in zip(finite, flags):
                record.nondominated = bool(flag)


def records_frame(records: List[FrontierRecord], n: int, m: int) -> pd.DataFrame:
    """
    Function for arranging records as a data frame with the CSV column layout.
    :param records: Records.
    :param n: Dimension.
    :param m: Objective count.
    :return: Data frame.
    """
    columns = ["run_id", "delta", "method", "line_search", "status", "iterations", "wallclock_ms",
               "nondominated"] + [f"F{i + 1}" for i in range(m)] + [f"x{j + 1}" for j in range(n)]
    rows = [[record.run_id, record.delta, UpdateKind(record.method).value, record.line_search, record.status,
             record.iterations, record.wallclock_ms, record.nondominated] + list(record.F) + list(record.x)
            for record in records]
    return pd.DataFrame(rows, columns=columns)


def determinism_hash(frame: pd.DataFrame) -> str:
    """
    Function for hashing the CSV content without the wallclock column.
    :param frame: Records frame.
    :return: SHA256 hex digest.
    """
    return hashing_utility.hash_text_with_sha256(
        frame.drop(columns=["wallclock_ms"]).to_csv(index=False, float_format="%.17g"))


def dominance_counts(records: List[FrontierRecord]) -> List[dict]:
    """
    Function for counting, per delta and mode, how many nondominated points of one method are
    dominated by some point of another method.
    :param records: Flagged records.
    :return: List of count entries.
    """
    counts = []
    keys = sorted({(record.delta, record.line_search) for record in records})
    for delta, line_search in keys:
        by_method: Dict[str, np.ndarray] = {}
        for record in records:
            if record.delta == delta and record.line_search == line_search and np.all(np.isfinite(record.F)):
                by_method.setdefault(UpdateKind(record.method).value, []).append(record.F)
        by_method = {method: np.array(points) for method, points in by_method.items()}
        front = {method: points[pareto_filter(points)] for method, points in by_method.items()}
        for method, points in front.items():
            for other, other_points in by_method.items():
                if other == method:
                    continue
                dominated = np.any(np.all(other_points[:, None, :] <= points[None, :, :], axis=2) &
                                   np.any(other_points[:, None, :] < points[None, :, :], axis=2), axis=0)
                counts.append({"delta": delta, "line_search": line_search, "method": method,
                               "dominated_by": other, "count": int(np.count_nonzero(dominated)),
                               "front_size": int(points.shape[0])})
    return counts


def summarize(records: List[FrontierRecord], experiment: ExperimentConfig) -> dict:
    """
    Function for building the experiment summary: medians per group, dominance counts,
    the paired-seed iteration comparison and instance hashes.
    :param records: Flagged records.
    :param experiment: Experiment configuration.
    :return: Summary dictionary.
    """
    frame = records_frame(records, experiment.n, experiment.m)
    frame["F_sum"] = frame[[f"F{i + 1}" for i in range(experiment.m)]].sum(axis=1, skipna=False)
    frame["stationary"] = frame["status"] == RunStatus.STATIONARY.value
    groups = []
    for (delta, method, line_search), group in frame.groupby(["delta", "method", "line_search"], sort=True):
        groups.append({"delta": float(delta), "method": method, "line_search": bool(line_search),
                       "runs": int(len(group)), "stationary": int(group["stationary"].sum()),
                       "median_iterations": float(group["iterations"].median()),
                       "median_F_sum": float(group["F_sum"].median()) if group["F_sum"].notna().any() else None})
    comparisons = []
    for (delta, line_search), group in frame.groupby(["delta", "line_search"], sort=True):
        medians = group.groupby("method")["iterations"].median()
        if UpdateKind.FROZEN_ZERO.value in medians and UpdateKind.BFGS.value in medians:
            comparisons.append({"delta": float(delta), "line_search": bool(line_search),
                                "pgm_median_iterations": float(medians[UpdateKind.FROZEN_ZERO.value]),
                                "bfgs_median_iterations": float(medians[UpdateKind.BFGS.value]),
                                "pgm_not_faster": bool(medians[UpdateKind.FROZEN_ZERO.value]
                                                       >= medians[UpdateKind.BFGS.value])})
    hashes: Dict[str, set] = {}
    for record in records:
        hashes.setdefault(f"{record.run_id}:{record.delta!r}", set()).add(record.instance_hash)
    certified = [record.certified for record in records if record.certified is not None]
    return {
        "config": json.loads(experiment.json()),
        "records": len(records),
        "failed": int((~frame["stationary"]).sum()),
        "groups": groups,
        "dominance_counts": dominance_counts(records),
        "pgm_vs_bfgs_iterations": comparisons,
        "paired_instances_consistent": all(len(values) == 1 for values in hashes.values()),
        "instance_hashes": {key: sorted(values)[0] for key, values in sorted(hashes.items())},
        "certified": {"checked": len(certified), "passed": int(sum(certified))},
        "messages": [{"run_id": record.run_id, "delta": record.delta, "method": UpdateKind(record.method).value,
                      "line_search": record.line_search, "message": record.message}
                     for record in records if record.message],
        "determinism_hash": determinism_hash(records_frame(records, experiment.n, experiment.m))
    }


def write_outputs(records: List[FrontierRecord], out_dir: str, n: int, m: int, svg: bool = False,
                  summary: Optional[dict] = None) -> Dict[str, str]:
    """
    Function for writing the frontier CSV (17 significant digits), optional SVG scatters per delta
    and mode, and an optional summary document.
    :param records: Flagged records.
    :param out_dir: Output folder.
    :param n: Dimension.
    :param m: Objective count.
    :param svg: Write SVG scatters (F1 against F2).
    :param summary: Summary to write as JSON.
    :return: Mapping of output kind to written path.
    """
    written = {}
    path = out_dir
    try:
        file_system_utility.safely_create_path(out_dir)
        frame = records_frame(records, n, m)
        path = os.path.join(out_dir, CSV_NAME)
        frame.to_csv(path, index=False, float_format="%.17g")
        written["csv"] = path
        if svg and m >= 2:
            keys = sorted({(record.delta, record.line_search) for record in records})
            modes = {line_search for _, line_search in keys}
            for delta, line_search in keys:
                series = {}
                for record in records:
                    if record.delta != delta or record.line_search != line_search:
                        continue
                    points, flags = series.setdefault(UpdateKind(record.method).value, ([], []))
                    points.append(np.asarray(record.F, dtype=float)[:2])
                    flags.append(record.nondominated)
                suffix = "" if len(modes) == 1 else ("_ls" if line_search else "_fixed")
                path = os.path.join(out_dir, f"frontier_delta_{delta:g}{suffix}.svg")
                title = f"delta = {delta:g}, {'line search' if line_search else 'unit step'}"
                document = svg_utility.scatter_svg(
                    {name: (np.array(points), np.array(flags)) for name, (points, flags) in series.items()}, title)
                file_system_utility.write_text(path, document)
                written[f"svg_{delta:g}{suffix}"] = path
        if summary is not None:
            path = os.path.join(out_dir, SUMMARY_NAME)
            json_utility.save(summary, path)
            written["summary"] = path
    except OSError as ex:
        raise OutputException(path, f"could not write output ({ex.strerror})")
    return written


def read_frontier(path: str) -> pd.DataFrame:
    """
    Function for reading a frontier CSV with exact float parsing.
    :param path: CSV path.
    :return: Data frame.
    """
    return pd.read_csv(path, float_precision="round_trip")


class ExperimentController(object):
    """
    Controller class for running and persisting experiments.
    """

    def __init__(self, experiment: ExperimentConfig) -> None:
        """
        Initiation method.
        :param experiment: Experiment configuration.
        """
        self.experiment = experiment
        self.records: List[FrontierRecord] = []
        self.summary: dict = {}

    def run(self, progress: bool = True) -> List[FrontierRecord]:
        """
        Method for running the batch and building its summary.
        :param progress: Show a progress bar.
        :return: Records.
        """
        cfg.LOGGER.info(f"Starting experiment with {len(self.experiment.deltas)} deltas, "
                        f"{len(self.experiment.methods)} methods, {self.experiment.runs} runs.")
        self.records = run_batch(self.experiment, progress)
        self.summary = summarize(self.records, self.experiment)
        return self.records

    def save(self) -> Dict[str, str]:
        """
        Method for writing all outputs to the configured folder.
        :return: Mapping of output kind to written path.
        """
        return write_outputs(self.records, self.experiment.out_dir, self.experiment.n, self.experiment.m,
                             self.experiment.svg, self.summary)

    @property
    def failed(self) -> bool:
        return any(record.status != RunStatus.STATIONARY.value for record in self.records)
