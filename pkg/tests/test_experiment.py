# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
import os
import numpy as np
import pytest
from pydantic import ValidationError
from src.control.experiment_controller import ExperimentController, generate_instance, instance_hash, \
    pareto_filter, read_frontier, records_frame, run_batch, summarize, write_outputs
from src.model.experiment_control.dataclasses import ExperimentConfig
from src.model.experiment_control.exceptions import OutputException
from src.model.solver_control.metrics import UpdateKind
from src.utility.bronze import json_utility
from src.utility.silver import linear_algebra_utility


def small_config(tmp_path, **overrides) -> ExperimentConfig:
    settings = {"seed": 42, "n": 2, "m": 2, "runs": 2, "deltas": [0.05], "methods": ["bfgs"], "max_iter": 300,
                "out_dir": str(tmp_path)}
    settings.update(overrides)
    return ExperimentConfig(**settings)


def skyline(points: np.ndarray) -> np.ndarray:
    order = np.lexsort((points[:, 1], points[:, 0]))
    flags = np.zeros(points.shape[0], dtype=bool)
    best = np.inf
    for index in order:
        if points[index, 1] < best:
            flags[index] = True
            best = points[index, 1]
    return flags


def test_generate_instance_is_deterministic() -> None:
    first, first_x0 = generate_instance(5, 5, 2, 0.05, run_index=3)
    second, second_x0 = generate_instance(5, 5, 2, 0.05, run_index=3)
    assert np.array_equal(first_x0, second_x0)
    for left, right in zip(first.smooth, second.smooth):
        assert np.array_equal(left.Q, right.Q)
        assert np.array_equal(left.q, right.q)
    for left, right in zip(first.nonsmooth, second.nonsmooth):
        assert np.array_equal(left.slopes, right.slopes)
    assert instance_hash(first, first_x0) == instance_hash(second, second_x0)


def test_generate_instance_without_uncertainty() -> None:
    p, _ = generate_instance(5, 5, 2, 0.0)
    for h in p.nonsmooth:
        assert h.piece_count == 1
        assert np.array_equal(h.slopes, np.zeros((1, 5)))
        assert np.array_equal(h.offsets, np.zeros(1))


def test_generate_instance_piece_counts() -> None:
    p, x0 = generate_instance(5, 5, 2, 0.1)
    assert [h.piece_count for h in p.nonsmooth] == [32, 32]
    assert x0.shape == (5,)


def test_generated_quadratics_are_positive_definite() -> None:
    for seed in range(1000):
        p, _ = generate_instance(seed, 5, 2, 0.0)
        for g in p.smooth:
            assert linear_algebra_utility.is_positive_definite(g.Q)
            assert np.array_equal(g.Q, g.Q.T)


def test_generate_instance_fixed_instance_varies_start() -> None:
    first, first_x0 = generate_instance(9, 3, 2, 0.05, run_index=0, fixed_instance=True)
    other, other_x0 = generate_instance(9, 3, 2, 0.05, run_index=4, fixed_instance=True)
    assert np.array_equal(first.smooth[0].Q, other.smooth[0].Q)
    assert not np.array_equal(first_x0, other_x0)
    redrawn, _ = generate_instance(9, 3, 2, 0.05, run_index=4)
    assert not np.array_equal(first.smooth[0].Q, redrawn.smooth[0].Q)


def test_pareto_filter_examples() -> None:
    assert pareto_filter(np.array([[1.0, 2.0], [2.0, 1.0], [2.0, 2.0]])).tolist() == [True, True, False]
    assert pareto_filter(np.array([[3.0, 4.0]])).tolist() == [True]
    assert pareto_filter(np.zeros((0, 2))).tolist() == []


def test_pareto_filter_keeps_duplicates() -> None:
    assert pareto_filter(np.array([[1.0, 1.0], [1.0, 1.0]])).tolist() == [True, True]


def test_pareto_filter_matches_skyline(rng: np.random.Generator) -> None:
    for _ in range(5):
        points = rng.standard_normal((200, 2))
        assert np.array_equal(pareto_filter(points), skyline(points))


def test_experiment_config_validation(tmp_path) -> None:
    with pytest.raises(ValidationError):
        small_config(tmp_path, runs=0)
    with pytest.raises(ValidationError):
        small_config(tmp_path, deltas=[-0.1])
    with pytest.raises(ValidationError):
        small_config(tmp_path, methods=["newton"])
    with pytest.raises(ValidationError):
        small_config(tmp_path, seed=-1)
    assert small_config(tmp_path, both_modes=True).modes == [True, False]


def test_fixed_step_entries_use_instance_omega(tmp_path) -> None:
    config = small_config(tmp_path)
    assert config.solver_config(UpdateKind.BFGS, False).auto_omega
    assert not config.solver_config(UpdateKind.BFGS, True).auto_omega
    assert not small_config(tmp_path, omega=30.0).solver_config(UpdateKind.BFGS, False).auto_omega


def test_fixed_step_warning_reaches_summary(tmp_path) -> None:
    controller = ExperimentController(small_config(tmp_path, runs=1, line_search=False, omega=1e-6, max_iter=3))
    controller.run(progress=False)
    assert "descent is not guaranteed" in controller.records[0].message
    assert [entry["run_id"] for entry in controller.summary["messages"]] == [0]


def test_run_batch_single_entry(tmp_path) -> None:
    records = run_batch(small_config(tmp_path, runs=1), progress=False)
    assert len(records) == 1
    assert records[0].nondominated
    assert records[0].F.shape == (2,)


def test_run_batch_order_and_pairing(tmp_path) -> None:
    config = small_config(tmp_path, deltas=[0.0, 0.1], methods=["pgm", "bfgs"], runs=3)
    records = run_batch(config, progress=False)
    assert len(records) == 2 * 2 * 3
    keys = [(record.delta, record.method, record.run_id) for record in records]
    assert keys == [(delta, UpdateKind(method), run) for delta in [0.0, 0.1] for method in ["pgm", "bfgs"]
                    for run in range(3)]
    for delta in [0.0, 0.1]:
        for run in range(3):
            hashes = {record.instance_hash for record in records if record.delta == delta and record.run_id == run}
            assert len(hashes) == 1
    summary = summarize(records, config)
    assert summary["paired_instances_consistent"]
    assert len(summary["groups"]) == 4


def test_median_objective_sum_grows_with_delta(tmp_path) -> None:
    experiment = small_config(tmp_path, seed=20231017, n=5, runs=20, deltas=[0.0, 0.05, 0.1],
                              methods=[kind.value for kind in UpdateKind], max_iter=None)
    summary = summarize(run_batch(experiment, progress=False), experiment)
    for method in UpdateKind:
        medians = [group["median_F_sum"] for group in summary["groups"] if group["method"] == method.value]
        assert len(medians) == 3
        assert all(lower <= upper for lower, upper in zip(medians, medians[1:]))


def test_run_batch_is_deterministic_across_workers(tmp_path) -> None:
    config = small_config(tmp_path, methods=["bfgs", "hbfgs"])
    serial = summarize(run_batch(config, progress=False), config)
    parallel = summarize(run_batch(config.copy(update={"workers": 3}), progress=False), config)
    assert serial["determinism_hash"] == parallel["determinism_hash"]


def test_run_batch_records_failures(tmp_path) -> None:
    config = small_config(tmp_path, runs=1, max_iter=1)
    records = run_batch(config, progress=False)
    assert records[0].status == "MaxIter"
    assert records[0].iterations == 1


def test_write_outputs_empty(tmp_path) -> None:
    written = write_outputs([], str(tmp_path), n=2, m=2)
    with open(written["csv"], encoding="utf-8") as csv_file:
        content = csv_file.read().strip()
    assert content == "run_id,delta,method,line_search,status,iterations,wallclock_ms,nondominated,F1,F2,x1,x2"


def test_write_outputs_round_trip(tmp_path) -> None:
    records = run_batch(small_config(tmp_path, runs=3), progress=False)
    written = write_outputs(records, str(tmp_path), n=2, m=2)
    frame = read_frontier(written["csv"])
    assert np.array_equal(frame[["F1", "F2"]].to_numpy(), np.array([record.F for record in records]))
    assert np.array_equal(frame[["x1", "x2"]].to_numpy(), np.array([record.x for record in records]))
    assert frame["method"].tolist() == ["bfgs"] * 3


def test_write_outputs_svg_per_delta(tmp_path) -> None:
    config = small_config(tmp_path, runs=2, deltas=[0.0, 0.05, 0.1], methods=["pgm", "bfgs"], svg=True)
    controller = ExperimentController(config)
    controller.run(progress=False)
    written = controller.save()
    svgs = sorted(name for name in os.listdir(tmp_path) if name.endswith(".svg"))
    assert len(svgs) == 3
    for name in svgs:
        with open(os.path.join(tmp_path, name), encoding="utf-8") as svg_file:
            assert svg_file.read().count('class="series"') <= 2
    summary = json_utility.load(written["summary"])
    assert summary["records"] == 12
    assert len(summary["pgm_vs_bfgs_iterations"]) == 3
    assert summary["determinism_hash"] == summarize(controller.records, config)["determinism_hash"]


def test_write_outputs_both_modes_svg_names(tmp_path) -> None:
    config = small_config(tmp_path, runs=1, both_modes=True, svg=True)
    records = run_batch(config, progress=False)
    write_outputs(records, str(tmp_path), n=2, m=2, svg=True)
    assert sorted(name for name in os.listdir(tmp_path) if name.endswith(".svg")) == \
        ["frontier_delta_0.05_fixed.svg", "frontier_delta_0.05_ls.svg"]


def test_write_outputs_reports_path(tmp_path) -> None:
    blocker = tmp_path / "occupied"
    blocker.write_text("not a folder")
    with pytest.raises(OutputException) as info:
        write_outputs([], str(blocker), n=2, m=2)
    assert "occupied" in str(info.value)


def test_records_frame_columns(tmp_path) -> None:
    frame = records_frame(run_batch(small_config(tmp_path, runs=1), progress=False), 2, 2)
    assert list(frame.columns)[-4:] == ["F1", "F2", "x1", "x2"]
