"""Plain differential evolution, rand/1/bin."""

from __future__ import annotations

import numpy as np

from .problems import BudgetTracker
from .records import RunRecord

MAX_STALL_GENERATIONS = 2000


def de_trials(pop, rng, f, cr, lower, upper):
    """Trial vectors for one rand/1/bin generation (serial RNG order)."""
    n, d = pop.shape
    trials = np.empty_like(pop)
    for i in range(n):
        r1, r2, r3 = _distinct(rng, n, i, 3)
        v = pop[r1] + f * (pop[r2] - pop[r3])
        np.clip(v, lower, upper, out=v)
        cross = rng.random(d) <= cr
        cross[rng.integers(d)] = True
        trials[i] = np.where(cross, v, pop[i])
    return trials


def _distinct(rng, n, exclude, count):
    picked = []
    while len(picked) < count:
        r = int(rng.integers(n))
        if r != exclude and r not in picked:
            picked.append(r)
    return picked


def de_step(pop, fits, evaluate, rng, f=0.8, cr=0.5, lower=None, upper=None):
    """One generation: mutate, cross, evaluate, greedy select.

    ``evaluate`` maps an (n, d) array to fitness values (NaN = trial
    could not be evaluated and is rejected).
    """
    trials = de_trials(pop, rng, f, cr, lower, upper)
    trial_fits = evaluate(trials)
    accept = ~np.isnan(trial_fits) & (trial_fits <= fits)
    pop = pop.copy()
    fits = fits.copy()
    pop[accept] = trials[accept]
    fits[accept] = trial_fits[accept]
    return pop, fits


def de_run(problem, budget: int, seed: int, pop_size: int = 60,
           f: float = 0.8, cr: float = 0.5) -> RunRecord:
    rng = np.random.default_rng(seed)
    tracker = BudgetTracker(budget)
    lower, upper = problem.lower, problem.upper

    pop = rng.uniform(lower, upper, (pop_size, problem.dim))
    fits = problem.evaluate(pop, tracker)
    valid = ~np.isnan(fits)
    pop, fits = pop[valid], fits[valid]

    stall = 0
    while tracker.remaining > 0 and len(pop) >= 4 and stall < MAX_STALL_GENERATIONS:
        used_before = tracker.used
        pop, fits = de_step(pop, fits, lambda X: problem.evaluate(X, tracker),
                            rng, f, cr, lower, upper)
        stall = stall + 1 if tracker.used == used_before else 0

    best = int(np.argmin(fits))
    return RunRecord(
        algorithm="de", seed=seed, budget=budget,
        config={"pop_size": pop_size, "f": f, "cr": cr},
        n_evals=tracker.used, best_fitness=float(fits[best]),
        best_values=pop[best].copy(), trace=np.array(tracker.trace),
        final_population=pop, final_fitness=fits,
    )
