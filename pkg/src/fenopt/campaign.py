"""Campaign orchestration: many seeded runs of one problem, artifact
emission, campaign comparison, and the benchmark harness.

Artifacts per campaign directory:
  campaign.json      manifest (config echo, per-run summaries, best solution)
  runs/run_XX.json   full RunRecord per run
  solutions.csv      top-k distinct solutions per run, flattened
  convergence.csv    best-so-far distribution across runs per evaluation
  robustness.csv     per-dimension value frequencies over per-run bests

Writes are atomic (temp file + rename).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .analysis import (convergence_table, robustness_table, select_best,
                       write_csv, write_robustness_csv)
from .errors import ConfigError, MismatchedBudgets
from .fitness import EDC_SATISFACTION, EDH_SATISFACTION, Location
from .runconfig import RunConfig, build_problem, ga_config, hybrid_config
from .search.de import de_run
from .search.ga import ga_run
from .search.hybrid import hybrid_run
from .search.records import RunRecord
from .search.shade import shade_run
from .stats import bonferroni, wilcoxon_rank_sum


def atomic_write_text(path, text: str):
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def atomic_write_json(path, payload):
    atomic_write_text(path, json.dumps(payload, indent=1))


def execute_run(config: RunConfig, seed: int, run_index: int) -> RunRecord:
    """One optimization run, including its top-k solution payloads."""
    problem = build_problem(config)
    if config.algorithm == "hybrid":
        record = hybrid_run(problem, hybrid_config(config), config.budget, seed)
    elif config.algorithm == "shade":
        record = shade_run(problem, config.budget, seed)
    elif config.algorithm == "de":
        record = de_run(problem, config.budget, seed)
    elif config.algorithm == "ga":
        record = ga_run(problem, ga_config(config), config.budget, seed)
    else:
        raise ConfigError(f"unknown algorithm {config.algorithm!r}")

    record.cache_stats = problem.cache.stats()
    top = problem.top_distinct(record.final_population, record.final_fitness,
                               config.top_k)
    record.top_solutions = [
        problem.solution_payload(values, solution_id=f"run{run_index:02d}-{rank}")
        for rank, values in enumerate(top)
    ]
    record.best_solution = problem.solution_payload(
        record.best_values, solution_id=f"run{run_index:02d}-best")
    return record


def _worker(args):
    raw_config, seed, run_index = args
    config = RunConfig.from_dict(raw_config)
    record = execute_run(config, seed, run_index)
    return record.to_json_dict()


def flatten_solution(payload: dict, run_index: int, rank: int) -> dict:
    design = payload["design"]
    row = {
        "run": run_index, "rank": rank, "id": payload["id"],
        "fitness": payload["fitness"], "edh": payload["edh"],
        "edc": payload["edc"], "nct": payload["nct"],
        "q_sol_jul": payload["q_sol_jul"],
        "penalty_solar": payload["penalties"]["solar"],
        "penalty_window_u": payload["penalties"]["window_u"],
        "penalty_k": payload["penalties"]["k"],
        "penalty_rwf": payload["penalties"]["rwf"],
        "penalties_zero": all(v == 0.0 for v in payload["penalties"].values()),
        "k": design["k"], "wwr": design["wwr"],
        "window_area_total": design["window_area_total"],
        "shading_area_total": design["shading_area_total"],
        "frame": design["frame"], "reflectance": design["reflectance"],
    }
    for win in design["windows"]:
        sid = win["id"]
        row[f"{sid}_width"] = win["width_m"]
        row[f"{sid}_height"] = win["height_m"]
        row[f"{sid}_area"] = win["area_m2"]
        row[f"{sid}_glazing"] = win["glazing_code"]
        row[f"{sid}_u_w"] = win["u_w"]
    for facade, sc in design["sc_by_facade"].items():
        row[f"{facade}_sc"] = f"SC{sc}"
    for facade, geom in design["shading_by_facade"].items():
        for name, value in geom.items():
            row[f"{facade}_{name}"] = value
    return row


def run_campaign(config: RunConfig, progress=None) -> dict:
    """Execute every run, write the artifact set, return the manifest."""
    config.validate()
    out_dir = config.output_dir
    runs_dir = os.path.join(out_dir, "runs")
    os.makedirs(runs_dir, exist_ok=True)

    seeds = config.run_seeds()
    jobs = [(config.to_dict(), seed, i) for i, seed in enumerate(seeds)]
    records = []
    if config.parallel > 1:
        with ProcessPoolExecutor(max_workers=config.parallel) as pool:
            for payload in pool.map(_worker, jobs):
                records.append(RunRecord.from_json_dict(payload))
                if progress:
                    progress(len(records), len(jobs))
    else:
        for job in jobs:
            records.append(RunRecord.from_json_dict(_worker(job)))
            if progress:
                progress(len(records), len(jobs))

    for i, record in enumerate(records):
        atomic_write_json(os.path.join(runs_dir, f"run_{i:02d}.json"),
                          record.to_json_dict())

    solution_rows = []
    for i, record in enumerate(records):
        for rank, payload in enumerate(record.top_solutions or []):
            solution_rows.append(flatten_solution(payload, i, rank))
    if solution_rows:
        write_csv(os.path.join(out_dir, "solutions.csv"), solution_rows,
                  list(solution_rows[0].keys()))

    conv = convergence_table([r.trace for r in records])
    write_csv(os.path.join(out_dir, "convergence.csv"), conv)

    vectors = np.array([r.best_solution["canonical_vector"] for r in records])
    problem = build_problem(config)
    names = problem.encoder.layout.names
    robustness = robustness_table(vectors, names) if len(records) >= 2 else []
    if robustness:
        write_robustness_csv(os.path.join(out_dir, "robustness.csv"), robustness)

    location = Location(config.location)
    best = select_best(
        [r.best_solution for r in records],
        edh_limit=EDH_SATISFACTION[location],
        edc_limit=EDC_SATISFACTION[location])

    manifest = {
        "config": config.to_dict(),
        "seeds": seeds,
        "runs": [
            {"index": i, "seed": r.seed, "n_evals": r.n_evals,
             "best_fitness": r.best_fitness, "restarts": r.restarts,
             "cache_stats": r.cache_stats,
             "penalties_zero": all(v == 0.0 for v in
                                   r.best_solution["penalties"].values())}
            for i, r in enumerate(records)
        ],
        "best_solution": best,
        "artifacts": {
            "solutions": "solutions.csv",
            "convergence": "convergence.csv",
            "robustness": "robustness.csv" if robustness else None,
            "runs_dir": "runs",
        },
    }
    atomic_write_json(os.path.join(out_dir, "campaign.json"), manifest)
    return manifest


def load_campaign(path) -> dict:
    manifest_path = os.path.join(path, "campaign.json")
    if not os.path.exists(manifest_path):
        raise ConfigError(f"no campaign manifest under {path}")
    with open(manifest_path) as fh:
        return json.load(fh)


def compare_campaigns(dirs_a, dirs_b, alpha: float = 0.01) -> dict:
    """Pairwise statistical comparison of two campaign lists.

    Entries pair by position (typically one per location); each pair adds
    one rank-sum p-value; the family-wise threshold is alpha / pairs.
    """
    if len(dirs_a) != len(dirs_b) or not dirs_a:
        raise ConfigError("compare needs equally many campaign dirs on each side")
    rows = []
    p_values = []
    for dir_a, dir_b in zip(dirs_a, dirs_b):
        man_a = load_campaign(dir_a)
        man_b = load_campaign(dir_b)
        if man_a["config"]["budget"] != man_b["config"]["budget"]:
            raise MismatchedBudgets(
                f"{dir_a} and {dir_b} have different budgets")
        best_a = [r["best_fitness"] for r in man_a["runs"]]
        best_b = [r["best_fitness"] for r in man_b["runs"]]
        p = wilcoxon_rank_sum(best_a, best_b)
        p_values.append(p)
        rows.append({
            "label": f"{man_a['config']['location']}",
            "a_algorithm": man_a["config"]["algorithm"],
            "b_algorithm": man_b["config"]["algorithm"],
            "a_median": float(np.median(best_a)),
            "b_median": float(np.median(best_b)),
            "a_q25": float(np.percentile(best_a, 25)),
            "a_q75": float(np.percentile(best_a, 75)),
            "b_q25": float(np.percentile(best_b, 25)),
            "b_q75": float(np.percentile(best_b, 75)),
            "p_value": p,
        })
    flags = bonferroni(p_values, alpha)
    for row, flag in zip(rows, flags):
        row["significant"] = bool(flag)
    return {"alpha": alpha, "threshold": alpha / len(p_values), "rows": rows}


def bench_comparison(function: str, dim: int, budget: int, seeds,
                     algorithms=("hybrid", "ga"), pop_size: int = 60) -> dict:
    """Benchmark-function harness comparing algorithms over shared seeds."""
    from .search.ga import GAConfig
    from .search.hybrid import HybridConfig
    from .search.problems import ShiftedRastrigin, ShiftedSphere

    makers = {"sphere": ShiftedSphere, "rastrigin": ShiftedRastrigin}
    if function not in makers:
        raise ConfigError(f"unknown benchmark function {function!r}")

    finals = {alg: [] for alg in algorithms}
    for seed in seeds:
        for alg in algorithms:
            problem = makers[function](dim, seed=1234)
            if alg == "hybrid":
                rec = hybrid_run(problem, HybridConfig(pop_size=pop_size),
                                 budget, seed)
            elif alg == "ga":
                rec = ga_run(problem, GAConfig(pop_size=pop_size), budget, seed)
            elif alg == "de":
                rec = de_run(problem, budget, seed, pop_size=pop_size)
            elif alg == "shade":
                rec = shade_run(problem, budget, seed, pop_size=pop_size)
            else:
                raise ConfigError(f"unknown algorithm {alg!r}")
            finals[alg].append(rec.best_fitness)

    report = {
        "function": function, "dim": dim, "budget": budget,
        "seeds": list(seeds),
        "medians": {alg: float(np.median(v)) for alg, v in finals.items()},
        "finals": {alg: [float(x) for x in v] for alg, v in finals.items()},
    }
    if len(algorithms) == 2:
        a, b = algorithms
        report["p_value"] = wilcoxon_rank_sum(finals[a], finals[b])
    return report
