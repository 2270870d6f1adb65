"""Command-line front end: simulate, regress, centrality, derive.

Exit codes: 0 success, 1 verification mismatch, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import inference
from .centrality import (
    DiffusionParams,
    RegularizationSpec,
    ScalingPolicy,
    degree,
    diffusion,
    eigenvector_centrality,
    regularized_eigenvector_centrality,
)
from .errors import BudgetExceeded, CentregError
from .io import binary_matrix_from_files, read_outcomes
from .monte_carlo import ConfigError, ExperimentConfig, run_experiment, write_outputs
from .walks import DERIVE_B_CAP, derive_b, derive_g, reference_b, reference_g

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centreg",
        description="OLS regression on network centralities under sparsity and measurement error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a replicated simulation experiment")
    sim.add_argument("--config", required=True, help="JSON experiment configuration")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--threads", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None, help="override the config master seed")
    sim.add_argument("--dump-graph", action="store_true", help="write the first replication's edge list per cell")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")

    reg = sub.add_parser("regress", help="fit a centrality regression on user data")
    reg.add_argument("--edges", required=True, help="edge-list CSV (header i,j)")
    reg.add_argument("--outcomes", required=True, help="outcomes CSV (header id,y)")
    reg.add_argument(
        "--centrality",
        default="degree",
        choices=("degree", "diffusion", "eigenvector", "regularized-eigenvector"),
    )
    reg.add_argument("--delta", type=float, default=1.0)
    reg.add_argument("--T", type=int, default=2)
    reg.add_argument("--delta-rule", default="fixed",
                     choices=("fixed", "inverse-lambda1", "inverse-sqrt-lambda1"))
    reg.add_argument("--scaling", default="sqrt-lambda1", choices=("sqrt-lambda1", "sqrt-n", "fixed"))
    reg.add_argument("--scale-a", type=float, default=None, help="a_n for fixed scaling")
    reg.add_argument("--reg-mode", default="oracle", choices=("oracle", "plug-in"))
    reg.add_argument("--reg-p", type=float, default=None, help="oracle sparsity scale p_n")
    reg.add_argument("--reg-M", type=float, default=None, help="plug-in graphon mass lower bound")
    reg.add_argument("--mode", default=None,
                     help="inference mode override (default inferred from centrality)")
    reg.add_argument("--beta0", type=float, action="append", default=None)
    reg.add_argument("--alpha", type=float, action="append", default=None)
    reg.add_argument("--out", default=None, help="output file (default stdout)")
    reg.add_argument("--format", choices=("json", "csv"), default="json")
    reg.add_argument("--seed", type=int, default=0)

    cen = sub.add_parser("centrality", help="compute a centrality vector from an edge list")
    cen.add_argument("--edges", required=True)
    cen.add_argument("--n", type=int, default=None, help="node count (default: max id + 1)")
    cen.add_argument("--kind", default="degree",
                     choices=("degree", "diffusion", "eigenvector", "regularized-eigenvector"))
    cen.add_argument("--delta", type=float, default=1.0)
    cen.add_argument("--T", type=int, default=2)
    cen.add_argument("--delta-rule", default="fixed",
                     choices=("fixed", "inverse-lambda1", "inverse-sqrt-lambda1"))
    cen.add_argument("--scaling", default="sqrt-lambda1", choices=("sqrt-lambda1", "sqrt-n", "fixed"))
    cen.add_argument("--scale-a", type=float, default=None)
    cen.add_argument("--reg-mode", default="oracle", choices=("oracle", "plug-in"))
    cen.add_argument("--reg-p", type=float, default=None)
    cen.add_argument("--reg-M", type=float, default=None)
    cen.add_argument("--out", default=None)
    cen.add_argument("--format", choices=("csv", "json"), default="csv")
    cen.add_argument("--seed", type=int, default=0)

    der = sub.add_parser("derive", help="derive coefficient tables and verify against references",
                         aliases=["derive-coefficients"])
    der.add_argument("what", nargs="?", choices=("g", "b"))
    der.add_argument("--what", dest="what_opt", choices=("g", "b"),
                     help="alternative to the positional argument")
    der.add_argument("--max", type=int, default=None, help="largest t (for g) or T (for b)")
    der.add_argument("--verify", action="store_true", help="exit 1 on any mismatch with the embedded tables")
    der.add_argument("--format", choices=("csv", "json"), default="csv")
    der.add_argument("--out", default=None)

    return parser


# ---------------------------------------------------------------------------
# subcommands


def _cmd_simulate(args) -> int:
    try:
        cfg = ExperimentConfig.from_json_file(args.config)
    except FileNotFoundError:
        print(f"error: config file {args.config} not found", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"error: {args.config}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.seed is not None:
        cfg.master_seed = args.seed
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("CENTREG_THREADS", "1"))

    result = run_experiment(cfg, threads=threads)
    write_outputs(result, args.out, fmt=args.format, dump_graph=args.dump_graph)

    fully_failed = [
        c.cell_index
        for c in result.cells
        if all(not c.ok_mask(label).any() for label in c.estimators)
    ]
    if fully_failed:
        print(f"error: cells {fully_failed} produced no successful replication", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _centrality_vector(args, a_hat, seed):
    kind = args.kind if hasattr(args, "kind") else args.centrality
    if kind == "degree":
        return degree(a_hat)
    if kind == "diffusion":
        params = DiffusionParams(delta=args.delta, T=args.T, delta_rule=args.delta_rule)
        return diffusion(a_hat, params)
    scaling = ScalingPolicy(kind=args.scaling, a=args.scale_a)
    if kind == "eigenvector":
        return eigenvector_centrality(a_hat, scaling, seed=seed)
    if args.reg_mode == "oracle":
        if args.reg_p is None:
            raise CentregError("--reg-p is required for oracle regularization")
        spec = RegularizationSpec(mode="oracle", p_n=args.reg_p)
    else:
        if args.reg_M is None:
            raise CentregError("--reg-M is required for plug-in regularization")
        spec = RegularizationSpec(mode="plug-in", M=args.reg_M)
    return regularized_eigenvector_centrality(a_hat, scaling, spec, seed=seed)


def _cmd_regress(args) -> int:
    try:
        ids, y = read_outcomes(args.outcomes)
        order = np.argsort(ids)
        ids, y = ids[order], y[order]
        a_hat = binary_matrix_from_files(args.edges, ids)
        c_hat = _centrality_vector(args, a_hat, args.seed)

        mode = args.mode
        if mode is None:
            mode = {
                "degree": "noisy-degree",
                "diffusion": "noisy-diffusion",
                "eigenvector": "noisy-eigenvector-corollary-5",
                "regularized-eigenvector": "noisy-eigenvector-corollary-5",
            }[args.centrality]
        fit = inference.ols(y, c_hat, mode=mode)

        if args.centrality == "degree":
            inference.degree_bias_variance(a_hat, fit)
        elif args.centrality == "diffusion":
            params = DiffusionParams(delta=args.delta, T=args.T, delta_rule=args.delta_rule)
            inference.diffusion_bias_variance(a_hat, params, fit)
        else:
            inference.eigen_bias_variance(c_hat.lambda1, c_hat, a_hat, fit)

        beta0s = args.beta0 if args.beta0 else [0.0]
        alphas = args.alpha if args.alpha else [0.05]
        payload = fit.to_json_dict()
        payload["centrality"] = args.centrality
        payload["tests"] = []
        for b0 in beta0s:
            tr = inference.test_beta(fit, b0, alphas=alphas)
            payload["tests"].append(
                {
                    "beta0": b0,
                    "statistic": tr.statistic,
                    "p_value": tr.p_value,
                    "branch": tr.branch,
                    "reject_at": {str(a): r for a, r in tr.reject_at.items()},
                }
            )
        payload["intervals"] = []
        for a in alphas:
            iv = inference.confidence(fit, a)
            payload["intervals"].append(
                {
                    "alpha": a,
                    "c0": [iv.c0.lo, iv.c0.hi],
                    "c": [[piece.lo, piece.hi] for piece in iv.c],
                    "c_star": [[piece.lo, piece.hi] for piece in iv.c_star],
                    "wraps": iv.wraps,
                }
            )
    except (CentregError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = json.dumps(payload, indent=1, default=float)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    return EXIT_OK


def _cmd_centrality(args) -> int:
    try:
        from .io import read_edge_list
        from .graph_model import SymmetricBinaryMatrix

        rows, cols = read_edge_list(args.edges)
        n = args.n if args.n is not None else (int(max(rows.max(), cols.max())) + 1 if len(rows) else 0)
        if n < 2:
            print("error: need at least two nodes", file=sys.stderr)
            return EXIT_USAGE
        a_hat = SymmetricBinaryMatrix.from_edges(n, rows, cols)
        vec = _centrality_vector(args, a_hat, args.seed)
    except (CentregError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.format == "json":
        payload = {"recipe": vec.recipe, "values": [float(v) for v in vec.values]}
        if vec.lambda1 is not None:
            payload["lambda1"] = vec.lambda1
        text = json.dumps(payload, indent=1)
        if args.out:
            Path(args.out).write_text(text)
        else:
            print(text)
    else:
        out = sys.stdout if not args.out else open(args.out, "w", newline="")
        try:
            writer = csv.writer(out)
            writer.writerow(["id", "value"])
            for i, v in enumerate(vec.values):
                writer.writerow([i, repr(float(v))])
        finally:
            if args.out:
                out.close()
    return EXIT_OK


def _cmd_derive(args) -> int:
    what = args.what or args.what_opt
    if what is None:
        print("error: specify the table to derive (g or b)", file=sys.stderr)
        return EXIT_USAGE
    if args.what and args.what_opt and args.what != args.what_opt:
        print("error: conflicting positional and --what values", file=sys.stderr)
        return EXIT_USAGE
    top = args.max if args.max is not None else (10 if what == "g" else 4)
    try:
        if what == "g":
            derived = {t: derive_g(t) for t in range(1, top + 1)}
        else:
            # the intrinsic budget cap (DERIVE_B_CAP) turns an over-large
            # --max into a BudgetExceeded usage error
            derived = {T: derive_b(T) for T in range(1, top + 1)}
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    mismatches = []
    if args.verify:
        for key, poly in derived.items():
            try:
                ref = reference_g(key) if what == "g" else reference_b(key)
            except CentregError:
                continue
            if poly.coeffs != ref.coeffs:
                mismatches.append(key)

    rows = []
    if what == "g":
        for t, poly in derived.items():
            for r, c in sorted(poly.coeffs.items()):
                rows.append({"t": t, "r": r, "coefficient": c})
        header = ["t", "r", "coefficient"]
    else:
        for T, poly in derived.items():
            for (t, s), c in sorted(poly.coeffs.items()):
                rows.append({"T": T, "t": t, "delta_power": s, "coefficient": c})
        header = ["T", "t", "delta_power", "coefficient"]

    if args.format == "json":
        text = json.dumps(rows, indent=1)
        if args.out:
            Path(args.out).write_text(text)
        else:
            print(text)
    else:
        out = sys.stdout if not args.out else open(args.out, "w", newline="")
        try:
            writer = csv.DictWriter(out, fieldnames=header)
            writer.writeheader()
            writer.writerows(rows)
        finally:
            if args.out:
                out.close()

    if mismatches:
        print(f"verification FAILED for {what} at {mismatches}", file=sys.stderr)
        return EXIT_MISMATCH
    if args.verify:
        print(f"verification passed for all derived {what} tables", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "regress":
        return _cmd_regress(args)
    if args.command == "centrality":
        return _cmd_centrality(args)
    if args.command in ("derive", "derive-coefficients"):
        return _cmd_derive(args)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
