"""Bound-constrained quasi-Newton local search with numerical gradients.

Limited-memory BFGS (10 correction pairs) over box bounds: search
directions come from the two-loop recursion, trial points project onto
the bounds, and a batched backtracking line search accepts the first
Armijo-satisfying step (or the best improving one).  Gradients are
two-sided finite differences with step eps * max(1, |x_i|), one-sided
against a bound.

Snapped or multimodal landscapes defeat the tiny-step gradient: it comes
back zero on a plateau and the line search stalls in a local basin.  The
search then escalates through coarse probe gradients (+-5%, 10%, 20% of
each coordinate's range), which is what lets it hop between
canonicalization cells or neighbouring basins; a successful coarse step
drops back to the fine gradient.

Every evaluated point is tracked; the returned point is the best seen
and never worse than the start.
"""

from __future__ import annotations

import numpy as np

MEMORY_DEPTH = 10
ARMIJO_C1 = 1e-4
LADDER = (1.0, 0.5, 0.25, 0.1, 0.03, 0.01, 0.003, 0.001)
PROBE_FRACTIONS = (0.05, 0.1, 0.2, 0.4)
FIRST_STEP_RANGE_FRACTION = 0.1


def _gradient_with_steps(x, evaluate, lower, upper, h):
    """Two-sided secant gradient with per-coordinate steps h.

    Returns (g, n_seen) or (None, n_seen) when the evaluator starts
    returning NaN (caller out of budget).
    """
    d = len(x)
    plus = np.tile(x, (d, 1))
    minus = np.tile(x, (d, 1))
    for i in range(d):
        plus[i, i] = min(x[i] + h[i], upper[i])
        minus[i, i] = max(x[i] - h[i], lower[i])
    values = evaluate(np.vstack([plus, minus]))
    n_seen = int(np.sum(~np.isnan(values)))
    if np.isnan(values).any():
        return None, n_seen
    idx = np.arange(d)
    denom = plus[idx, idx] - minus[idx, idx]
    g = np.zeros(d)
    nz = denom > 0
    g[nz] = (values[:d][nz] - values[d:][nz]) / denom[nz]
    return g, n_seen


def finite_difference_gradient(x, fx, evaluate, lower, upper, eps=1e-8):
    """Gradient estimate at x; step eps * max(1, |x_i|) per coordinate."""
    x = np.asarray(x, dtype=float)
    h = eps * np.maximum(1.0, np.abs(x))
    return _gradient_with_steps(x, evaluate, np.asarray(lower, dtype=float),
                                np.asarray(upper, dtype=float), h)


def _two_loop(mem, g):
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(mem):
        a = rho * float(np.dot(s, q))
        alphas.append(a)
        q -= a * y
    s, y, _ = mem[-1]
    q *= float(np.dot(s, y)) / float(np.dot(y, y))
    for (s, y, rho), a in zip(mem, reversed(alphas)):
        b = rho * float(np.dot(y, q))
        q += (a - b) * s
    return q


def local_search(x0, f0, evaluate, lower, upper, eps: float = 1e-8,
                 max_evals: int = 200, ranges=None):
    """Descend from (x0, f0); returns (x_best, f_best, evals_used).

    ``evaluate`` maps an (n, d) array to fitness values, NaN once the
    caller's budget is exhausted (max_evals itself is a soft cap: the
    final iteration may finish its gradient and line-search batches).
    ``ranges`` (default upper - lower) scales the plateau probes.
    """
    x0 = np.asarray(x0, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if ranges is None:
        ranges = upper - lower
    ranges = np.maximum(np.asarray(ranges, dtype=float), 1e-12)

    best_x, best_f = x0.copy(), float(f0)
    used = 0
    exhausted = False

    def run(points):
        nonlocal used, best_x, best_f, exhausted
        values = evaluate(np.atleast_2d(points))
        used += int(np.sum(~np.isnan(values)))
        if np.isnan(values).any():
            exhausted = True
        for row, v in zip(np.atleast_2d(points), values):
            if not np.isnan(v) and v < best_f:
                best_f = float(v)
                best_x = np.array(row)
        return values

    def try_step(x, fx, g, mem):
        """Line search along the quasi-Newton direction; None if stuck."""
        direction = -_two_loop(mem, g) if mem else -g
        slope = float(np.dot(g, direction))
        if slope >= 0.0:
            direction = -g
            slope = -float(np.dot(g, g))
        if mem:
            scale = 1.0
        else:
            scale = (FIRST_STEP_RANGE_FRACTION
                     / max(1e-12, float(np.max(np.abs(direction) / ranges))))
        candidates, alphas = [], []
        for a in LADDER:
            c = np.clip(x + a * scale * direction, lower, upper)
            if float(np.max(np.abs(c - x))) > 0.0:
                candidates.append(c)
                alphas.append(a * scale)
        if not candidates:
            return None
        values = run(np.array(candidates))
        for c, a, v in zip(candidates, alphas, values):
            if not np.isnan(v) and v <= fx + ARMIJO_C1 * a * slope:
                return c, float(v)
        improving = [(c, float(v)) for c, v in zip(candidates, values)
                     if not np.isnan(v) and v < fx]
        if improving:
            return min(improving, key=lambda cv: cv[1])
        return None

    x, fx = x0.copy(), float(f0)
    mem = []
    prev = None   # (x, g) of the previous fine-gradient iteration
    skip_fine = False  # snapped landscapes never grow a tiny-step gradient

    while used < max_evals and not exhausted:
        moved = False
        for mode in ("fine",) + PROBE_FRACTIONS:
            if mode == "fine":
                if skip_fine:
                    continue
                h = eps * np.maximum(1.0, np.abs(x))
            else:
                h = mode * ranges
            g, _ = _gradient_with_steps(x, run, lower, upper, h)
            if g is None:
                break
            if not np.any(g):
                if mode == "fine":
                    skip_fine = True
                continue
            if mode == "fine":
                if prev is not None:
                    s = x - prev[0]
                    y = g - prev[1]
                    sy = float(np.dot(s, y))
                    if sy > 1e-12:
                        mem.append((s, y, 1.0 / sy))
                        if len(mem) > MEMORY_DEPTH:
                            mem.pop(0)
                prev = (x.copy(), g.copy())
            else:
                mem.clear()
                prev = None
            step = try_step(x, fx, g, mem)
            if step is not None:
                x, fx = step[0].copy(), step[1]
                moved = True
                break
            if used >= max_evals or exhausted:
                break
        if not moved:
            break

    return best_x, best_f, used
