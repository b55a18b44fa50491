"""Optimization problems: benchmark functions and the fenestration design
problem (canonicalize -> cached simulate -> penalty/satisfaction fitness).

Budget semantics: by default only distinct simulator evaluations (cache
misses) consume budget; re-encountering a canonical design is free.  Set
``count_cache_hits=True`` to charge every fitness call instead.  Rows a
problem cannot afford return NaN and the caller must treat them as
rejected trials.
"""

from __future__ import annotations

import numpy as np

from ..encoding import Encoder, EvalCache, Scenario
from ..fitness import FitnessConfig, total_fitness
from ..sim.engine import SimulatorSettings, prepare_context, simulate_batch


class BudgetTracker:
    """Counts evaluations and keeps the per-evaluation best-so-far trace."""

    def __init__(self, budget: int):
        self.budget = int(budget)
        self.used = 0
        self.best = float("inf")
        self.trace = []

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    def record(self, fitness: float):
        self.used += 1
        if fitness < self.best:
            self.best = fitness
        self.trace.append(self.best)


class _Benchmark:
    def __init__(self, dim: int, bound: float, shift_scale: float, seed: int):
        self.dim = dim
        self.lower = np.full(dim, -bound)
        self.upper = np.full(dim, bound)
        rng = np.random.default_rng(seed)
        self.shift = rng.uniform(-shift_scale, shift_scale, dim)

    def evaluate(self, X, tracker: BudgetTracker, max_new=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        allowed = tracker.remaining if max_new is None else min(max_new,
                                                                tracker.remaining)
        n_run = min(len(X), max(0, allowed))
        out = np.full(len(X), np.nan)
        if n_run:
            vals = self._f(X[:n_run] - self.shift)
            out[:n_run] = vals
            for v in vals:
                tracker.record(float(v))
        return out


class ShiftedSphere(_Benchmark):
    name = "sphere"

    def __init__(self, dim: int, seed: int = 0):
        super().__init__(dim, 100.0, 80.0, seed)

    @staticmethod
    def _f(Z):
        return np.sum(Z * Z, axis=1)


class ShiftedRastrigin(_Benchmark):
    name = "rastrigin"

    def __init__(self, dim: int, seed: int = 0):
        super().__init__(dim, 5.12, 4.0, seed)

    @staticmethod
    def _f(Z):
        return 10.0 * Z.shape[1] + np.sum(Z * Z - 10.0 * np.cos(2 * np.pi * Z),
                                          axis=1)


class FenestrationProblem:
    """The full design problem over one building/catalog/weather/location."""

    name = "fenestration"

    def __init__(self, building, catalog, weather, fitness_config: FitnessConfig,
                 scenario: Scenario = Scenario.S1,
                 settings: SimulatorSettings | None = None,
                 cache: EvalCache | None = None,
                 count_cache_hits: bool = False,
                 external_command=None, external_timeout_s: float = 120.0,
                 weather_path=None):
        self.building = building
        self.catalog = catalog
        self.weather = weather
        self.weather_path = weather_path
        self.fitness_config = fitness_config
        self.scenario = Scenario(scenario)
        self.settings = settings or SimulatorSettings()
        self.encoder = Encoder(building, catalog, self.scenario)
        self.ctx = prepare_context(building, weather, self.settings)
        self.cache = cache if cache is not None else EvalCache()
        self.count_cache_hits = count_cache_hits
        self.external_command = external_command
        self.external_timeout_s = external_timeout_s
        self.simulations_run = 0

    @property
    def dim(self) -> int:
        return len(self.encoder.layout)

    @property
    def lower(self):
        return self.encoder.lower

    @property
    def upper(self):
        return self.encoder.upper

    def _simulate(self, batch):
        if self.external_command is None:
            return simulate_batch(batch, ctx=self.ctx)
        from ..sim.external import external_evaluate
        return [external_evaluate(d, self.building, self.weather_path,
                                  self.external_command,
                                  timeout_s=self.external_timeout_s)
                for d in batch]

    def evaluate(self, X, tracker: BudgetTracker, max_new=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        designs = [self.encoder.canonicalize(row) for row in X]
        keys = [d.key for d in designs]
        hits, missing = self.cache.lookup_batch(keys)

        allowed = tracker.remaining if max_new is None else min(max_new,
                                                                tracker.remaining)
        to_run = missing[: max(0, allowed)]
        if to_run:
            first_design = {}
            for d in designs:
                first_design.setdefault(d.key, d)
            batch = [first_design[k] for k in to_run]
            results = self._simulate(batch)
            self.simulations_run += len(batch)
            items = []
            for design, result in zip(batch, results):
                breakdown = total_fitness(result, design, self.fitness_config)
                items.append((design.key, (result, breakdown)))
                tracker.record(breakdown.total)
            self.cache.store_batch(items)
            hits.update(dict(items))

        ran = set(to_run)
        out = np.full(len(X), np.nan)
        for i, key in enumerate(keys):
            entry = hits.get(key)
            if entry is None:
                continue
            if self.count_cache_hits and key not in ran:
                if tracker.remaining <= 0:
                    continue
                tracker.record(entry[1].total)
            out[i] = entry[1].total
        return out

    def evaluate_design(self, values):
        """(design, SimulationResult, FitnessBreakdown) for one genome."""
        tracker = BudgetTracker(1)
        design = self.encoder.canonicalize(values)
        cached = self.cache.peek(design.key)
        if cached is None:
            self.evaluate(np.atleast_2d(values), tracker)
            cached = self.cache.peek(design.key)
        return design, cached[0], cached[1]

    def solution_payload(self, values, solution_id=None) -> dict:
        """Everything reports need about one genome, JSON-ready."""
        design, result, breakdown = self.evaluate_design(values)
        return {
            "id": solution_id,
            "location": self.fitness_config.location.value,
            "scenario": self.scenario.value,
            "fitness": breakdown.total,
            "edh": result.edh, "edc": result.edc, "nct": result.nct,
            "q_sol_jul": result.q_sol_jul,
            "penalties": dict(breakdown.penalties),
            "design": design.to_dict(),
            "canonical_vector": [float(v) for v in
                                 self.encoder.canonical_vector(design)],
        }

    def top_distinct(self, population, fitness, k: int) -> list:
        """Best k rows of a population with distinct canonical keys."""
        order = np.argsort(fitness, kind="stable")
        seen = set()
        picks = []
        for i in order:
            key = self.encoder.canonicalize(population[i]).key
            if key in seen:
                continue
            seen.add(key)
            picks.append(population[i])
            if len(picks) >= k:
                break
        return picks
