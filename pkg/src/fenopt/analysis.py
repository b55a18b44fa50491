"""Campaign analysis: best-solution selection, variability and frequency
statistics, convergence and robustness exports."""

from __future__ import annotations

import csv

import numpy as np

from .errors import EmptyTable, MismatchedBudgets, TooFewRows, UnknownField


def select_best(rows, edh_limit: float, edc_limit: float) -> dict:
    """Pick the reportable best solution from a table of evaluated rows.

    If any row keeps both energy demands within the acceptance limits,
    the compliant row with the lowest combined demand wins; otherwise the
    row with the smallest total limit violation.  Ties break on lower
    comfort violation hours, then on id.
    """
    rows = list(rows)
    if not rows:
        raise EmptyTable("no solutions to select from")

    def violation(row):
        return (max(0.0, row["edh"] - edh_limit)
                + max(0.0, row["edc"] - edc_limit))

    compliant = [r for r in rows if violation(r) == 0.0]
    if compliant:
        return min(compliant,
                   key=lambda r: (r["edh"] + r["edc"], r["nct"], str(r["id"])))
    return min(rows, key=lambda r: (violation(r), r["nct"], str(r["id"])))


def variability(values) -> dict:
    """Population standard deviation plus linear-interpolated quartiles."""
    values = np.asarray(list(values), dtype=float)
    if len(values) < 2:
        raise TooFewRows("variability needs at least two rows")
    q25, q50, q75 = np.percentile(values, [25, 50, 75])
    return {
        "sigma": float(np.std(values)),   # population (divide by N)
        "q25": float(q25), "median": float(q50), "q75": float(q75),
        "min": float(values.min()), "max": float(values.max()),
        "n": int(len(values)),
    }


def frequency(rows, field: str) -> dict:
    """Histogram of a solution field: exact counts for discrete values,
    0.1 bins for continuous dimensions; zero depths/extensions report as
    'absent'."""
    rows = list(rows)
    if not rows or field not in rows[0]:
        raise UnknownField(field)
    absent_style = ("depth" in field) or ("ext" in field)
    out = {}
    for row in rows:
        v = row[field]
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            if absent_style and float(v) == 0.0:
                key = "absent"
            else:
                key = round(float(v) + 1e-12, 1)
                if key == int(key):
                    key = int(key) if isinstance(v, int) else key
        else:
            key = v
        out[key] = out.get(key, 0) + 1
    return out


def convergence_table(traces) -> list:
    """Across-run distribution of best-so-far at every evaluation index.

    Returns rows of (eval_index, median, q25, q75, q05, q95); all traces
    must share the same budget.
    """
    traces = [np.asarray(t, dtype=float) for t in traces]
    if not traces:
        raise MismatchedBudgets("no traces")
    length = len(traces[0])
    if any(len(t) != length for t in traces):
        raise MismatchedBudgets("traces have different evaluation budgets")
    stack = np.vstack(traces)
    q05, q25, q50, q75, q95 = np.percentile(stack, [5, 25, 50, 75, 95], axis=0)
    return [
        {"eval_index": i + 1, "median": float(q50[i]), "q25": float(q25[i]),
         "q75": float(q75[i]), "q05": float(q05[i]), "q95": float(q95[i])}
        for i in range(length)
    ]


def robustness_table(vectors, names) -> list:
    """Value frequencies per genome dimension across per-run best solutions.

    ``vectors`` is an (R, d) array of canonical vectors (one per run).
    Each output row lists the distinct values of one dimension with their
    counts (counts sum to R): the bubble-chart data.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim != 2 or len(vectors) < 2:
        raise TooFewRows("robustness needs at least two runs")
    rows = []
    for j, name in enumerate(names):
        vals, counts = np.unique(np.round(vectors[:, j], 6), return_counts=True)
        order = np.argsort(-counts, kind="stable")
        rows.append({
            "dimension": name,
            "values": [(float(vals[i]), int(counts[i])) for i in order],
        })
    return rows


def modal_share(robustness_rows, min_runs: int) -> float:
    """Fraction of dimensions whose modal value appears in >= min_runs runs."""
    hits = sum(1 for r in robustness_rows if r["values"][0][1] >= min_runs)
    return hits / len(robustness_rows)


def write_csv(path, rows, fieldnames=None):
    rows = list(rows)
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def write_robustness_csv(path, robustness_rows):
    flat = []
    for row in robustness_rows:
        for value, count in row["values"]:
            flat.append({"dimension": row["dimension"], "value": value,
                         "count": count})
    write_csv(path, flat, ["dimension", "value", "count"])
