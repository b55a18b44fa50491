"""Command-line client for the fenopt service.

Every subcommand drives the same HTTP API the service exposes: by
default against an in-process application instance, or against a remote
server via --server.  Exit codes: 0 success, 2 configuration/input
error, 3 evaluator failure.
"""

from __future__ import annotations

import argparse
import json
import sys

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EVALUATOR = 3

EVALUATOR_ERRORS = ("SpawnError", "ProtocolError", "EvaluatorTimeout",
                    "NumericalError")


def make_client(server: str | None):
    if server:
        import httpx
        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient
    from .service.app import create_app
    return TestClient(create_app())


def _fail(detail: str) -> int:
    print(f"error: {detail}", file=sys.stderr)
    if any(name in str(detail) for name in EVALUATOR_ERRORS):
        return EXIT_EVALUATOR
    return EXIT_CONFIG


def cmd_run(args) -> int:
    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"cannot load config {args.config}: {exc}")
    for name in ("runs", "budget", "seed", "parallel", "output_dir",
                 "algorithm", "location", "scenario"):
        value = getattr(args, name, None)
        if value is not None:
            config[name] = value

    with make_client(args.server) as client:
        response = client.post("/campaigns",
                               json={"config": config, "wait": True})
        if response.status_code != 200:
            return _fail(response.json().get("detail", response.text))
        job = response.json()
    if job["status"] != "done":
        return _fail(job.get("error") or "campaign failed")
    manifest = job["manifest"]
    best = manifest["best_solution"]
    print(f"campaign complete: {len(manifest['runs'])} runs, "
          f"artifacts in {manifest['config']['output_dir']}")
    for run in manifest["runs"]:
        print(f"  run {run['index']:02d} seed={run['seed']} "
              f"best={run['best_fitness']:.6g} evals={run['n_evals']} "
              f"restarts={run['restarts']}")
    print(f"best solution {best['id']}: EDh={best['edh']:.1f} "
          f"EDc={best['edc']:.1f} NCT={best['nct']:.0f} "
          f"F={best['fitness']:.6g}")
    return EXIT_OK


def cmd_compare(args) -> int:
    with make_client(args.server) as client:
        response = client.post("/compare", json={
            "dirs_a": args.a, "dirs_b": args.b, "alpha": args.alpha})
        if response.status_code != 200:
            return _fail(response.json().get("detail", response.text))
        payload = response.json()
    print(payload["summary"])
    if args.csv:
        from .analysis import write_csv
        write_csv(args.csv, payload["report"]["rows"])
        print(f"wrote {args.csv}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    try:
        with open(args.solution) as fh:
            solution = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"cannot load solution {args.solution}: {exc}")
    with make_client(args.server) as client:
        response = client.post("/solutions/inspect",
                               json={"solution": solution})
        if response.status_code != 200:
            return _fail(response.json().get("detail", response.text))
        print(response.json()["report"])
    return EXIT_OK


def cmd_catalog(args) -> int:
    with make_client(args.server) as client:
        response = client.post("/catalog/compositions", json={
            "catalog_path": args.catalog, "orientation": args.orientation})
        if response.status_code != 200:
            return _fail(response.json().get("detail", response.text))
        payload = response.json()
    rows = payload["compositions"]
    if args.format == "csv":
        print("code,u_g,shgc,vt")
        for row in rows:
            print(f"{row['code']},{row['u_g']},{row['shgc']},{row['vt']}")
    else:
        for row in rows:
            print(f"{row['code']:60s} U={row['u_g']:.3f} "
                  f"SHGC={row['shgc']:.3f} VT={row['vt']:.3f}")
        print(f"{payload['count']} legal compositions for "
              f"orientation {payload['orientation']}")
    return EXIT_OK


def cmd_bench(args) -> int:
    with make_client(args.server) as client:
        response = client.post("/bench", json={
            "function": args.function, "dim": args.dim,
            "budget": args.budget, "runs": args.runs,
            "base_seed": args.seed, "algorithms": args.algorithms})
        if response.status_code != 200:
            return _fail(response.json().get("detail", response.text))
        report = response.json()["report"]
    print(f"{report['function']} d={report['dim']} budget={report['budget']}")
    for alg, median in report["medians"].items():
        print(f"  {alg}: median final fitness {median:.6g}")
    if "p_value" in report:
        print(f"  rank-sum p = {report['p_value']:.4g}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn
    uvicorn.run("fenopt.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fenopt",
        description="Fenestration design optimization toolkit")
    parser.add_argument("--server", default=None,
                        help="remote service URL (default: run in process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute an optimization campaign")
    p.add_argument("--config", required=True, help="campaign config JSON")
    p.add_argument("--runs", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--parallel", type=int)
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--algorithm", choices=("hybrid", "shade", "de", "ga"))
    p.add_argument("--location", choices=("leon", "madrid", "sevilla"))
    p.add_argument("--scenario", choices=("S1", "S2"))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="compare two campaign sets")
    p.add_argument("--a", nargs="+", required=True)
    p.add_argument("--b", nargs="+", required=True)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("inspect", help="print a solution genome sheet")
    p.add_argument("solution", help="solution JSON file")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("catalog", help="list legal glazing compositions")
    p.add_argument("--catalog", default=None)
    p.add_argument("--orientation", default="S",
                   choices=("N", "E", "SE", "S", "SW", "W"))
    p.add_argument("--format", default="text", choices=("text", "csv"))
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("bench", help="benchmark-function algorithm comparison")
    p.add_argument("--function", default="sphere",
                   choices=("sphere", "rastrigin"))
    p.add_argument("--dim", type=int, default=20)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--runs", type=int, default=15)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--algorithms", nargs="+", default=["hybrid", "ga"])
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
