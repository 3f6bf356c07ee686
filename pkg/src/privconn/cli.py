"""Command-line front end.

Subcommands mirror the library: privatize a graph, solve the mechanism
scale, turn a released value into consensus-rate or distance bounds, run
the empirical audits, and demo the exact-release reconstruction attack.

Reports are JSON (sections: inputs, public_statistics, results, audit,
plus a generated_at timestamp; keys sorted, so output is reproducible up
to the timestamp); the tabular outputs (consensus curve, bounds sweep)
can be CSV instead. --output takes a path or - for stdout. Exit codes:
0 success, 2 bad input, 3 infeasible privacy parameters, 4 numerical
failure, 5 audit failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

import numpy as np

from .consensus_analysis import (
    RateErrorQuery,
    expected_rate_error,
    settle_time,
    worst_case_settle_time,
)
from .errors import InfeasibleParamsError, NumericalError
from .graph_core import from_edge_list, spectrum
from .privacy_mechanism import PrivacyParams, normalizer_C, privatize, solve_scale_b
from .property_bounds import exact_bounds, expected_bounds, min_degree_inference
from .validation import (
    attack_under_noise,
    audit_concentration,
    audit_dp,
    audit_expectations,
    audit_sensitivity,
    exact_value_attack,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERICAL = 4
EXIT_AUDIT_FAILED = 5

_SENSITIVITY_CAP = 5


def _read_graph(path: str):
    if path == "-":
        return from_edge_list(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as fh:
        return from_edge_list(fh.read())


def _parse_grid(text: str, what: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"{what} must look like start:stop:points, got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    points = int(parts[2])
    if points < 2 or stop <= start or start <= 0.0:
        raise ValueError(f"bad {what} {text!r}: need 0 < start < stop and points >= 2")
    return np.linspace(start, stop, points)


def _parse_alpha(text: str):
    if text == "auto":
        return None
    alpha = float(text)
    if alpha <= 1.0:
        raise ValueError(f"alpha must be > 1 or 'auto', got {text!r}")
    return alpha


def _params(args) -> PrivacyParams:
    return PrivacyParams(epsilon=args.eps, delta=args.delta, A=args.A)


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_report(inputs: dict, public: dict, results: dict, audit: dict | None = None) -> str:
    payload = {
        "inputs": inputs,
        "public_statistics": public,
        "results": results,
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }
    if audit is not None:
        payload["audit"] = audit
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv_table(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _cmd_privatize(args) -> int:
    graph = _read_graph(args.input)
    params = _params(args)
    rng = np.random.default_rng(args.seed)
    release = privatize(graph, params, rng)
    report = _json_report(
        inputs={
            "input": args.input,
            "epsilon": params.epsilon,
            "delta": params.delta,
            "A": params.A,
            "seed": args.seed,
        },
        public={"n": release.n, "b": release.scale_b, "C": release.normalizer_C},
        results={"lambda2_tilde": release.lambda2_tilde},
    )
    _emit(report, args.output)
    return EXIT_OK


def _cmd_solve_b(args) -> int:
    params = _params(args)
    b = solve_scale_b(params, float(args.n))
    report = _json_report(
        inputs={"n": args.n, "epsilon": params.epsilon, "delta": params.delta, "A": params.A},
        public={"b": b},
        results={"b": b},
    )
    _emit(report, args.output)
    return EXIT_OK


def _cmd_consensus(args) -> int:
    params = _params(args)
    n = float(args.n)
    b = solve_scale_b(params, n)
    grid = _parse_grid(args.t_grid, "t grid")
    errors = expected_rate_error(grid, args.lambda2, b, n)
    bounds = errors / args.a
    rows = [[float(t), float(v), float(e)] for t, v, e in zip(grid, bounds, errors)]
    if args.format == "csv":
        _emit(_csv_table(["t", "bound", "expected_error"], rows), args.output)
        return EXIT_OK
    query = RateErrorQuery(t=float(grid[0]), a=args.a, eta=args.eta)
    report = _json_report(
        inputs={
            "lambda2": args.lambda2,
            "n": args.n,
            "epsilon": params.epsilon,
            "delta": params.delta,
            "A": params.A,
            "a": args.a,
            "eta": args.eta,
            "t_grid": args.t_grid,
        },
        public={"b": b, "C": normalizer_C(args.lambda2, b, n)},
        results={
            "settle_time": settle_time(query, args.lambda2, b, n),
            "worst_case_settle_time": worst_case_settle_time(query, b, n),
            "curve": [
                {"t": t, "bound": v, "expected_error": e, "vacuous": v > 1.0}
                for t, v, e in rows
            ],
        },
    )
    _emit(report, args.output)
    return EXIT_OK


_SWEEP_FIELDS = (
    "exact_d_lower",
    "exact_d_upper",
    "exact_rho_lower",
    "exact_rho_upper",
    "expected_d_lower",
    "expected_d_upper",
    "expected_rho_lower",
    "expected_rho_upper",
)


def _cmd_bounds(args) -> int:
    lambda_n = args.lambda_n if args.lambda_n is not None else float(args.n)
    alpha = _parse_alpha(args.alpha)
    if args.sweep_eps is not None:
        # the sweep always optimizes each bound's base; a pinned --alpha
        # only applies to the single-report form
        eps_values = _parse_grid(args.sweep_eps, "epsilon sweep")
        exact = exact_bounds(args.lambda2, lambda_n, args.n)
        rows = []
        sweep = []
        for eps in eps_values:
            params = PrivacyParams(epsilon=float(eps), delta=args.delta, A=args.A)
            b = solve_scale_b(params, float(args.n))
            expd = expected_bounds(args.lambda2, b, lambda_n, args.n)
            values = (
                exact.d_lower,
                exact.d_upper,
                exact.rho_lower,
                exact.rho_upper,
                expd.d_lower,
                expd.d_upper,
                expd.rho_lower,
                expd.rho_upper,
            )
            rows.append([float(eps), b, *values])
            record = {"epsilon": float(eps), "b": b}
            record.update(zip(_SWEEP_FIELDS, values))
            sweep.append(record)
        if args.format == "csv":
            _emit(_csv_table(["epsilon", "b", *_SWEEP_FIELDS], rows), args.output)
            return EXIT_OK
        report = _json_report(
            inputs={
                "lambda2": args.lambda2,
                "lambda_n": lambda_n,
                "n": args.n,
                "delta": args.delta,
                "A": args.A,
                "sweep_eps": args.sweep_eps,
            },
            public={},
            results={"sweep": sweep},
        )
        _emit(report, args.output)
        return EXIT_OK
    if args.format == "csv":
        raise ValueError("csv output is only available for tabular results (use --sweep-eps)")
    bounds = exact_bounds(args.lambda2, lambda_n, args.n, alpha_d=alpha, alpha_rho=alpha)
    report = _json_report(
        inputs={
            "lambda2": args.lambda2,
            "lambda_n": lambda_n,
            "n": args.n,
            "alpha": args.alpha,
        },
        public={},
        results={
            "bounds": bounds.as_dict(),
            "min_degree_at_least": min_degree_inference(args.lambda2, args.n),
        },
    )
    _emit(report, args.output)
    return EXIT_OK


def _cmd_validate(args) -> int:
    params = _params(args)
    seed = args.seed if args.seed is not None else 0
    audit = {}
    failed = False
    if args.n <= _SENSITIVITY_CAP:
        sens = audit_sensitivity(args.n, params.A)
        audit["sensitivity"] = sens.as_dict()
        failed = failed or not sens.passed
    else:
        audit["sensitivity"] = {
            "skipped": True,
            "reason": f"exhaustive scan needs n <= {_SENSITIVITY_CAP}",
        }
    dp = audit_dp(
        args.n,
        params,
        pairs=args.pairs,
        samples_per_graph=args.samples_per_graph,
        bins=args.bins,
        seed=seed,
        scale_factor=args.scale_factor,
    )
    audit["dp_distinguisher"] = dp.as_dict()
    failed = failed or not dp.passed
    b = dp.details["b"]
    conc = audit_concentration(
        args.lambda2,
        b,
        float(args.n),
        _parse_grid(args.t_grid, "t grid"),
        args.a,
        trials=args.conc_trials,
        seed=seed,
    )
    audit["concentration"] = conc.as_dict()
    failed = failed or not conc.passed
    expect = audit_expectations(
        args.lambda2, b, float(args.n), trials=args.exp_trials, seed=seed
    )
    audit["expectations"] = expect.as_dict()
    failed = failed or not expect.passed
    report = _json_report(
        inputs={
            "n": args.n,
            "epsilon": params.epsilon,
            "delta": params.delta,
            "A": params.A,
            "samples_per_graph": args.samples_per_graph,
            "pairs": args.pairs,
            "bins": args.bins,
            "seed": seed,
            "scale_factor": args.scale_factor,
            "lambda2": args.lambda2,
            "a": args.a,
            "t_grid": args.t_grid,
            "conc_trials": args.conc_trials,
            "exp_trials": args.exp_trials,
        },
        public={},
        results={"passed": not failed},
        audit=audit,
    )
    _emit(report, args.output)
    return EXIT_AUDIT_FAILED if failed else EXIT_OK


def _cmd_attack_demo(args) -> int:
    graph = _read_graph(args.input)
    if not (0 <= args.node < graph.n):
        raise ValueError(f"node {args.node} out of range for n = {graph.n}")
    known_present = [e for e in graph.edges if args.node not in e]
    known_absent = [
        (u, v)
        for u in range(graph.n)
        for v in range(u + 1, graph.n)
        if args.node not in (u, v) and (u, v) not in graph.edges
    ]
    summ = spectrum(graph)
    exact = exact_value_attack(
        graph.n, summ.lambda2, known_present, known_absent, tol=args.tol
    )
    params = _params(args)
    rng = np.random.default_rng(args.seed)
    release = privatize(graph, params, rng)
    noisy = attack_under_noise(
        graph.n,
        release.lambda2_tilde,
        release.scale_b,
        coverage=args.coverage,
        known_present=known_present,
        known_absent=known_absent,
    )
    report = _json_report(
        inputs={
            "input": args.input,
            "node": args.node,
            "epsilon": params.epsilon,
            "delta": params.delta,
            "A": params.A,
            "seed": args.seed,
            "tol": args.tol,
            "coverage": args.coverage,
        },
        public={"n": graph.n, "b": release.scale_b},
        results={
            "exact_release_leak": exact.as_dict(),
            "private_release": {"lambda2_tilde": release.lambda2_tilde},
            "attack_under_noise": noisy.as_dict(),
            "min_degree_from_release": min_degree_inference(
                release.lambda2_tilde, graph.n
            ),
        },
    )
    _emit(report, args.output)
    return EXIT_OK


def _add_budget(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--eps", type=float, default=0.4, help="privacy budget epsilon")
    parser.add_argument("--delta", type=float, default=0.05, help="privacy slack delta")
    parser.add_argument("--A", type=int, default=1, help="adjacency radius in edges")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="privconn",
        description="Differentially private algebraic connectivity with certified bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("privatize", help="release lambda2 of an edge-list graph")
    p.add_argument("--input", required=True, help="edge-list file, or - for stdin")
    _add_budget(p)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: OS entropy)")
    p.add_argument("--output", default=None, help="report path, or - for stdout (default)")
    p.set_defaults(run=_cmd_privatize)

    p = sub.add_parser("solve-b", help="minimal feasible noise scale for a node count")
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    _add_budget(p)
    p.add_argument("--output", default=None)
    p.set_defaults(run=_cmd_solve_b)

    p = sub.add_parser("consensus", help="rate-error bounds from a released value")
    p.add_argument("--lambda2", type=float, required=True, help="released connectivity value")
    p.add_argument("--n", type=int, required=True)
    _add_budget(p)
    p.add_argument("--a", type=float, default=0.1, help="deviation threshold")
    p.add_argument("--eta", type=float, default=0.05, help="tail probability ceiling")
    p.add_argument("--t-grid", default="1:100:100", help="time grid start:stop:points")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(run=_cmd_consensus)

    p = sub.add_parser("bounds", help="distance and degree bounds from a released value")
    p.add_argument("--lambda2", type=float, required=True, help="released connectivity value")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda-n", type=float, default=None, help="largest eigenvalue (default n)")
    p.add_argument("--alpha", default="auto", help="log base > 1, or 'auto' to optimize")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--A", type=int, default=1)
    p.add_argument(
        "--sweep-eps",
        default=None,
        help="epsilon grid start:stop:points: tabulate exact vs expected bounds per budget",
    )
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(run=_cmd_bounds)

    p = sub.add_parser("validate", help="run the empirical audits")
    p.add_argument("--n", type=int, required=True)
    _add_budget(p)
    p.add_argument("--samples-per-graph", type=int, default=200_000, help="draws per graph")
    p.add_argument("--pairs", type=int, default=20, help="random adjacent pairs")
    p.add_argument("--bins", type=int, default=50, help="histogram bins")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--scale-factor",
        type=float,
        default=1.0,
        help="multiply the solved scale (below 1: negative control, must fail)",
    )
    p.add_argument("--lambda2", type=float, default=1.0, help="center for the accuracy audits")
    p.add_argument("--a", type=float, default=0.2, help="deviation threshold")
    p.add_argument("--t-grid", default="1:100:25", help="time grid start:stop:points")
    p.add_argument("--conc-trials", type=int, default=10_000, help="draws per grid point")
    p.add_argument("--exp-trials", type=int, default=1_000_000, help="draws for the means")
    p.add_argument("--output", default=None)
    p.set_defaults(run=_cmd_validate)

    p = sub.add_parser("attack-demo", help="reconstruction attack on exact vs private release")
    p.add_argument("--input", required=True, help="edge-list file, or - for stdin")
    p.add_argument("--node", type=int, required=True, help="whose edges the adversary misses")
    _add_budget(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-6, help="exact-match tolerance")
    p.add_argument("--coverage", type=float, default=0.9, help="noise window mass")
    p.add_argument("--output", default=None)
    p.set_defaults(run=_cmd_attack_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except InfeasibleParamsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
