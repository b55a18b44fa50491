"""Success-history-based adaptive DE (current-to-pbest/1 with archive).

Per individual, the scale factor is drawn from a Cauchy around a
remembered mean (resampled while nonpositive, clamped to 1) and the
crossover rate from a clipped normal; means live in a fixed-size
circular memory updated after each generation with the weighted Lehmer
mean of the settings that produced improvements, weighted by how much
they improved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .problems import BudgetTracker
from .records import RunRecord

MEMORY_SIZE = 50
P_BEST_MAX = 0.2
MAX_STALL_GENERATIONS = 2000


@dataclass
class ShadeMemory:
    m_f: np.ndarray
    m_cr: np.ndarray
    index: int = 0
    archive: list = field(default_factory=list)

    @classmethod
    def fresh(cls, size: int = MEMORY_SIZE) -> "ShadeMemory":
        return cls(m_f=np.full(size, 0.5), m_cr=np.full(size, 0.5))

    @property
    def size(self) -> int:
        return len(self.m_f)


def _sample_f(rng, loc):
    f = 0.0
    while f <= 0.0:
        f = loc + 0.1 * rng.standard_cauchy()
    return min(f, 1.0)


def _lehmer(values, weights):
    num = float(np.sum(weights * values * values))
    den = float(np.sum(weights * values))
    if den <= 0.0:
        return 1e-8  # degenerate all-zero success set; keep memory in (0, 1]
    return num / den


def shade_step(pop, fits, memory: ShadeMemory, evaluate, rng,
               lower=None, upper=None, archive_size=None,
               cr_update: str = "mean"):
    """One SHADE generation; returns (pop, fits), mutating ``memory``.

    ``cr_update`` selects the crossover-memory estimator: "mean"
    (weighted arithmetic, the original formulation) or "lehmer".
    """
    n, d = pop.shape
    if archive_size is None:
        archive_size = n
    order = np.argsort(fits, kind="stable")

    trials = np.empty_like(pop)
    f_used = np.empty(n)
    cr_used = np.empty(n)
    for i in range(n):
        r = int(rng.integers(memory.size))
        f_i = _sample_f(rng, memory.m_f[r])
        cr_i = float(np.clip(memory.m_cr[r] + 0.1 * rng.standard_normal(), 0.0, 1.0))
        p_i = rng.uniform(2.0 / n, P_BEST_MAX)
        p_count = max(2, int(round(p_i * n)))
        pbest = int(order[rng.integers(p_count)])

        r1 = i
        while r1 == i:
            r1 = int(rng.integers(n))
        pool = n + len(memory.archive)
        r2 = i
        while r2 == i or r2 == r1:
            r2 = int(rng.integers(pool))
        x_r2 = pop[r2] if r2 < n else memory.archive[r2 - n]

        v = pop[i] + f_i * (pop[pbest] - pop[i]) + f_i * (pop[r1] - x_r2)
        # Out-of-bounds components land midway between the parent and the bound.
        v = np.where(v < lower, (lower + pop[i]) / 2.0, v)
        v = np.where(v > upper, (upper + pop[i]) / 2.0, v)

        cross = rng.random(d) <= cr_i
        cross[rng.integers(d)] = True
        trials[i] = np.where(cross, v, pop[i])
        f_used[i] = f_i
        cr_used[i] = cr_i

    trial_fits = evaluate(trials)
    valid = ~np.isnan(trial_fits)
    replace = valid & (trial_fits <= fits)
    success = valid & (trial_fits < fits)

    new_pop = pop.copy()
    new_fits = fits.copy()
    for i in np.flatnonzero(success):
        memory.archive.append(pop[i].copy())
    new_pop[replace] = trials[replace]
    new_fits[replace] = trial_fits[replace]
    while len(memory.archive) > archive_size:
        memory.archive.pop(int(rng.integers(len(memory.archive))))

    if success.any():
        delta = fits[success] - trial_fits[success]
        weights = delta / float(delta.sum())
        memory.m_f[memory.index] = min(1.0, _lehmer(f_used[success], weights))
        if cr_update == "lehmer":
            m_cr = _lehmer(cr_used[success], weights)
        else:
            m_cr = max(1e-8, float(np.sum(weights * cr_used[success])))
        memory.m_cr[memory.index] = min(1.0, m_cr)
        memory.index = (memory.index + 1) % memory.size

    return new_pop, new_fits


def shade_run(problem, budget: int, seed: int, pop_size: int = 60,
              memory_size: int = MEMORY_SIZE) -> RunRecord:
    rng = np.random.default_rng(seed)
    tracker = BudgetTracker(budget)
    lower, upper = problem.lower, problem.upper

    pop = rng.uniform(lower, upper, (pop_size, problem.dim))
    fits = problem.evaluate(pop, tracker)
    valid = ~np.isnan(fits)
    pop, fits = pop[valid], fits[valid]
    memory = ShadeMemory.fresh(memory_size)

    stall = 0
    while tracker.remaining > 0 and len(pop) >= 4 and stall < MAX_STALL_GENERATIONS:
        used_before = tracker.used
        pop, fits = shade_step(pop, fits, memory,
                               lambda X: problem.evaluate(X, tracker),
                               rng, lower, upper)
        stall = stall + 1 if tracker.used == used_before else 0

    best = int(np.argmin(fits))
    return RunRecord(
        algorithm="shade", seed=seed, budget=budget,
        config={"pop_size": pop_size, "memory_size": memory_size},
        n_evals=tracker.used, best_fitness=float(fits[best]),
        best_values=pop[best].copy(), trace=np.array(tracker.trace),
        final_population=pop, final_fitness=fits,
    )
