"""Command-line front end.

Subcommands: verify, sweep, eval, gen.  Flags override config-file values.
Exit codes: 0 pass, 1 property failure (counterexample written), 2 usage or
configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .errors import (
    ConfigError,
    DimensionMismatch,
    NonHermitianInput,
    NotNormalized,
    NotPSD,
    ParseError,
)
from .harness import (
    SweepConfig,
    Tolerances,
    cmd_eval,
    cmd_gen,
    cmd_sweep,
    cmd_verify,
)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="root RNG seed")
    parser.add_argument("--config", default=None, help="JSON config file (SweepConfig fields)")
    parser.add_argument("--out", default=None, help="output artifact path")
    parser.add_argument("--quad-nodes", type=int, default=None,
                        help="Gauss nodes per quadrature panel")
    parser.add_argument("--tol-bound", type=float, default=None,
                        help="relative slack for bound verdicts")
    parser.add_argument("--trials", type=int, default=None, help="trials per suite/grid point")
    parser.add_argument("--dims", type=_int_list, default=None, help="comma list of dimensions")
    parser.add_argument("--q", type=_float_list, default=None, help="comma list of q values")
    parser.add_argument("--b0", type=_float_list, default=None,
                        help="comma list of smallest-eigenvalue values")


def _build_config(args: argparse.Namespace) -> SweepConfig:
    doc: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {args.config}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"config file {args.config} must hold a JSON object")
    config = SweepConfig.from_dict(doc)
    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.dims is not None:
        overrides["dims"] = args.dims
    if args.q is not None:
        overrides["q_grid"] = args.q
    if args.b0 is not None:
        overrides["b0_grid"] = args.b0
    if args.out is not None:
        overrides["output_path"] = args.out
    tol_overrides: dict = {}
    if args.quad_nodes is not None:
        tol_overrides["quad_nodes"] = args.quad_nodes
    if args.tol_bound is not None:
        tol_overrides["tol_bound"] = args.tol_bound
    if tol_overrides:
        overrides["tolerances"] = dataclasses.replace(config.tolerances, **tol_overrides)
    return dataclasses.replace(config, **overrides) if overrides else config


def _run_verify(args: argparse.Namespace) -> int:
    report = cmd_verify(_build_config(args))
    for suite in report.suites:
        status = "pass" if suite.failures == 0 else "FAIL"
        slack = "n/a" if suite.worst_slack is None else f"{suite.worst_slack:.3e}"
        print(f"{status}  {suite.name:24s} instances={suite.instances_run:6d} "
              f"failures={suite.failures} worst_slack={slack}")
        if suite.counterexample_path:
            print(f"      counterexample: {suite.counterexample_path}")
    print("all suites passed" if report.passed else "verification FAILED")
    return 0 if report.passed else 1


def _run_sweep(args: argparse.Namespace) -> int:
    out = cmd_sweep(_build_config(args))
    print(f"wrote {out}")
    return 0


def _run_eval(args: argparse.Namespace) -> int:
    tols = Tolerances()
    if args.quad_nodes is not None:
        tols = dataclasses.replace(tols, quad_nodes=args.quad_nodes)
    if args.tol_bound is not None:
        tols = dataclasses.replace(tols, tol_bound=args.tol_bound)
    report = cmd_eval(args.rho, args.sigma, args.q or (2.0,), tols)
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def _run_gen(args: argparse.Namespace) -> int:
    if args.out is None:
        raise ConfigError("gen requires --out")
    seed = 0 if args.seed is None else args.seed
    out = cmd_gen(args.d, args.rank, seed, args.out)
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrelent",
        description="Relative q-entropy of density matrices and its continuity bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run every randomized property suite")
    _add_common(p_verify)
    p_verify.set_defaults(func=_run_verify)

    p_sweep = sub.add_parser("sweep", help="grid sweep writing one CSV row per instance")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=_run_sweep)

    p_eval = sub.add_parser("eval", help="evaluate one state pair from files")
    p_eval.add_argument("rho", help="state file for the first argument")
    p_eval.add_argument("sigma", help="state file for the second argument")
    _add_common(p_eval)
    p_eval.set_defaults(func=_run_eval)

    p_gen = sub.add_parser("gen", help="sample a random state and write it to a file")
    p_gen.add_argument("--d", type=int, required=True, help="dimension")
    p_gen.add_argument("--rank", type=int, required=True, help="rank of the sampled state")
    _add_common(p_gen)
    p_gen.set_defaults(func=_run_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, NotPSD, NotNormalized, NonHermitianInput, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
