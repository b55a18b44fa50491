"""Real-coded genetic algorithm baseline: tournament-2 selection,
BLX-alpha crossover, per-gene Gaussian mutation, elitism of one."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems import BudgetTracker
from .records import RunRecord

MAX_STALL_GENERATIONS = 2000


@dataclass(frozen=True)
class GAConfig:
    pop_size: int = 60
    blx_alpha: float = 0.5
    crossover_prob: float = 0.90
    mutation_prob: float = 0.01   # per gene
    mutation_sigma_frac: float = 0.10  # of each coordinate's range
    tournament_size: int = 2
    elitism: int = 1

    def to_dict(self) -> dict:
        return {
            "pop_size": self.pop_size, "blx_alpha": self.blx_alpha,
            "crossover_prob": self.crossover_prob,
            "mutation_prob": self.mutation_prob,
            "mutation_sigma_frac": self.mutation_sigma_frac,
            "tournament_size": self.tournament_size, "elitism": self.elitism,
        }


def _tournament(rng, fits, size):
    idx = rng.integers(len(fits), size=size)
    return int(idx[np.argmin(fits[idx])])


def blx_crossover(rng, a, b, alpha, lower, upper):
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    span = hi - lo
    child1 = rng.uniform(lo - alpha * span, hi + alpha * span)
    child2 = rng.uniform(lo - alpha * span, hi + alpha * span)
    return (np.clip(child1, lower, upper), np.clip(child2, lower, upper))


def ga_run(problem, config: GAConfig, budget: int, seed: int) -> RunRecord:
    rng = np.random.default_rng(seed)
    tracker = BudgetTracker(budget)
    lower, upper = problem.lower, problem.upper
    sigma = config.mutation_sigma_frac * (upper - lower)

    pop = rng.uniform(lower, upper, (config.pop_size, problem.dim))
    fits = problem.evaluate(pop, tracker)
    valid = ~np.isnan(fits)
    pop, fits = pop[valid], fits[valid]

    stall = 0
    while tracker.remaining > 0 and len(pop) >= 2 and stall < MAX_STALL_GENERATIONS:
        used_before = tracker.used
        children = []
        while len(children) < len(pop):
            i = _tournament(rng, fits, config.tournament_size)
            j = _tournament(rng, fits, config.tournament_size)
            if rng.random() < config.crossover_prob:
                c1, c2 = blx_crossover(rng, pop[i], pop[j], config.blx_alpha,
                                       lower, upper)
            else:
                c1, c2 = pop[i].copy(), pop[j].copy()
            children.extend([c1, c2])
        children = np.array(children[: len(pop)])

        mutate = rng.random(children.shape) < config.mutation_prob
        noise = rng.normal(0.0, 1.0, children.shape) * sigma
        children = np.clip(np.where(mutate, children + noise, children),
                           lower, upper)

        child_fits = problem.evaluate(children, tracker)
        keep = ~np.isnan(child_fits)
        if keep.any():
            new_pop = children[keep]
            new_fits = child_fits[keep]
            # Elitism: the best incumbents replace the worst children.
            if config.elitism > 0:
                elite_idx = np.argsort(fits, kind="stable")[: config.elitism]
                worst_idx = np.argsort(new_fits, kind="stable")[::-1][: config.elitism]
                for e, w in zip(elite_idx, worst_idx):
                    if fits[e] < new_fits[w]:
                        new_pop[w] = pop[e]
                        new_fits[w] = fits[e]
            # Carry unevaluated slots over from the parents.
            if len(new_pop) < len(pop):
                fill = np.argsort(fits, kind="stable")[: len(pop) - len(new_pop)]
                new_pop = np.vstack([new_pop, pop[fill]])
                new_fits = np.concatenate([new_fits, fits[fill]])
            pop, fits = new_pop, new_fits
        stall = stall + 1 if tracker.used == used_before else 0

    best = int(np.argmin(fits))
    return RunRecord(
        algorithm="ga", seed=seed, budget=budget, config=config.to_dict(),
        n_evals=tracker.used, best_fitness=float(fits[best]),
        best_values=pop[best].copy(), trace=np.array(tracker.trace),
        final_population=pop, final_fitness=fits,
    )
