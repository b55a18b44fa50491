"""Run artifacts: everything one optimization run leaves behind."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    budget: int
    config: dict
    n_evals: int
    best_fitness: float
    best_values: np.ndarray
    trace: np.ndarray              # best-so-far after each counted evaluation
    final_population: np.ndarray   # (P, d)
    final_fitness: np.ndarray      # (P,)
    restarts: int = 0
    cache_stats: dict | None = None
    best_solution: dict | None = None
    top_solutions: list | None = None

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "budget": self.budget,
            "config": self.config,
            "n_evals": self.n_evals,
            "best_fitness": self.best_fitness,
            "best_values": [float(v) for v in self.best_values],
            "trace": [[i + 1, float(v)] for i, v in enumerate(self.trace)],
            "final_population": [[float(v) for v in row]
                                 for row in self.final_population],
            "final_fitness": [float(v) for v in self.final_fitness],
            "restarts": self.restarts,
            "cache_stats": self.cache_stats,
            "best_solution": self.best_solution,
            "top_solutions": self.top_solutions,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "RunRecord":
        return cls(
            algorithm=d["algorithm"], seed=d["seed"], budget=d["budget"],
            config=d.get("config", {}), n_evals=d["n_evals"],
            best_fitness=d["best_fitness"],
            best_values=np.array(d["best_values"]),
            trace=np.array([v for _, v in d["trace"]]),
            final_population=np.array(d["final_population"]),
            final_fitness=np.array(d["final_fitness"]),
            restarts=d.get("restarts", 0),
            cache_stats=d.get("cache_stats"),
            best_solution=d.get("best_solution"),
            top_solutions=d.get("top_solutions"),
        )
