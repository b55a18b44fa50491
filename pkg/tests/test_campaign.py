import csv
import json
import os

import numpy as np
import pytest

from fenopt.campaign import (bench_comparison, compare_campaigns, execute_run,
                             load_campaign, run_campaign)
from fenopt.errors import ConfigError, MismatchedBudgets
from fenopt.runconfig import RunConfig, build_problem
from fenopt.search.records import RunRecord


# ---------------------------------------------------------------- config

def test_config_validation_errors():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"location": "paris"})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"scenario": "S9"})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"algorithm": "annealing"})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"weather": "/no/such/file.epw"})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"runs": 3, "seeds": [1, 2]})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"runs": 2, "seeds": [1, 1]})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"nonsense_field": 1})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"evaluator": {"type": "external"}})


def test_config_seed_expansion():
    config = RunConfig.from_dict({"runs": 3, "seed": 10})
    assert config.run_seeds() == [10, 11, 12]
    config = RunConfig.from_dict({"runs": 2, "seeds": [5, 9]})
    assert config.run_seeds() == [5, 9]


def test_bundled_defaults_build(tmp_path):
    config = RunConfig.from_dict({"location": "leon", "runs": 1})
    problem = build_problem(config)
    assert problem.fitness_config.location.value == "leon"
    assert problem.dim == 40


# --------------------------------------------------------------- campaign

def test_single_run_record(tmp_campaign_config):
    config = RunConfig.from_dict(tmp_campaign_config(budget=150))
    record = execute_run(config, seed=5, run_index=0)
    assert record.n_evals <= 150
    assert len(record.trace) == record.n_evals
    assert np.all(np.diff(record.trace) <= 0)
    assert record.cache_stats["misses"] == record.n_evals
    assert record.best_solution["design"]["windows"][0]["id"] == "W1"
    assert 1 <= len(record.top_solutions) <= 3
    # round trip through JSON
    back = RunRecord.from_json_dict(
        json.loads(json.dumps(record.to_json_dict())))
    assert back.best_fitness == record.best_fitness
    assert np.array_equal(back.trace, record.trace)


def test_campaign_artifacts(tmp_campaign_config):
    config = RunConfig.from_dict(
        tmp_campaign_config(runs=2, budget=120, top_k=2))
    manifest = run_campaign(config)
    out = config.output_dir
    assert os.path.exists(os.path.join(out, "campaign.json"))
    assert os.path.exists(os.path.join(out, "solutions.csv"))
    assert os.path.exists(os.path.join(out, "convergence.csv"))
    assert os.path.exists(os.path.join(out, "robustness.csv"))
    assert os.path.exists(os.path.join(out, "runs", "run_00.json"))
    assert os.path.exists(os.path.join(out, "runs", "run_01.json"))

    again = load_campaign(out)
    assert again["runs"] == manifest["runs"]

    with open(os.path.join(out, "solutions.csv")) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4  # 2 runs x top 2
    assert "W5_glazing" in rows[0]

    with open(os.path.join(out, "convergence.csv")) as fh:
        conv = list(csv.DictReader(fh))
    assert len(conv) == 120
    assert float(conv[-1]["median"]) <= float(conv[0]["median"])

    with open(os.path.join(out, "runs", "run_00.json")) as fh:
        rec = RunRecord.from_json_dict(json.load(fh))
    assert rec.seed == manifest["seeds"][0]


def test_campaign_parallel_matches_serial(tmp_path):
    base = {"location": "madrid", "scenario": "S1", "runs": 2, "budget": 100,
            "seed": 11, "top_k": 2}
    serial = run_campaign(RunConfig.from_dict(
        dict(base, output_dir=str(tmp_path / "serial"), parallel=1)))
    parallel = run_campaign(RunConfig.from_dict(
        dict(base, output_dir=str(tmp_path / "parallel"), parallel=2)))
    for a, b in zip(serial["runs"], parallel["runs"]):
        assert a["best_fitness"] == b["best_fitness"]
        assert a["n_evals"] == b["n_evals"]


def test_compare_campaigns(tmp_path):
    base = {"location": "madrid", "scenario": "S1", "runs": 5, "budget": 80,
            "top_k": 1}
    run_campaign(RunConfig.from_dict(
        dict(base, seed=1, output_dir=str(tmp_path / "a"))))
    run_campaign(RunConfig.from_dict(
        dict(base, seed=1, output_dir=str(tmp_path / "b"))))
    report = compare_campaigns([str(tmp_path / "a")], [str(tmp_path / "b")])
    assert len(report["rows"]) == 1
    row = report["rows"][0]
    # identical seeds: identical samples, p ~ 1, not significant
    assert row["p_value"] == pytest.approx(1.0, abs=1e-6)
    assert not row["significant"]
    assert report["threshold"] == pytest.approx(0.01)


def test_compare_mismatched_budgets(tmp_path):
    base = {"location": "madrid", "scenario": "S1", "runs": 2, "top_k": 1}
    run_campaign(RunConfig.from_dict(
        dict(base, budget=80, seed=1, output_dir=str(tmp_path / "a"))))
    run_campaign(RunConfig.from_dict(
        dict(base, budget=90, seed=1, output_dir=str(tmp_path / "b"))))
    with pytest.raises(MismatchedBudgets):
        compare_campaigns([str(tmp_path / "a")], [str(tmp_path / "b")])


def test_scenario_s2_campaign(tmp_campaign_config):
    config = RunConfig.from_dict(
        tmp_campaign_config(scenario="S2", budget=100))
    manifest = run_campaign(config)
    best = manifest["best_solution"]
    assert set(best["design"]["sc_by_facade"].values()) == {0}


def test_external_evaluator_campaign(tmp_campaign_config):
    import sys
    stub = [sys.executable, "-c", (
        "import json,sys;"
        "req=json.loads(sys.stdin.readline());"
        "w=sum(x['width_m']*x['height_m'] for x in req['design']['windows']);"
        "print(json.dumps({'edh': 40.0 - w, 'edc': 12.0, 'nct': 150,"
        " 'q_sol_jul': 1.0}))")]
    config = RunConfig.from_dict(tmp_campaign_config(
        runs=1, budget=70, algorithm="de",
        evaluator={"type": "external", "command": stub, "timeout_s": 30}))
    manifest = run_campaign(config)
    assert manifest["runs"][0]["n_evals"] <= 70
    assert manifest["best_solution"]["edh"] < 40.0


def test_bench_comparison_tiny():
    report = bench_comparison("sphere", dim=5, budget=900, seeds=range(5))
    assert report["medians"]["hybrid"] <= report["medians"]["ga"]
    assert 0.0 <= report["p_value"] <= 1.0
