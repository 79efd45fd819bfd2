"""Command-line front end.

Exit codes: 0 on success, 2 for invalid input, 3 for numerical failure.
Payloads go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import jsonio
from .channels import family_channel
from .cases import random_identity_case
from .errors import NumericError, ValidationError
from .optimize import (
    INPUT_POLICIES,
    OptimizerConfig,
    maximize_coherent_information,
    records_to_csv,
    records_to_json,
    sweep,
    uniform_grid,
)
from .qmath import make_rng
from .quantities import analyze, max_mixed_summary, verify_identity

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
IDENTITY_PASS = 1e-8


def round12(obj):
    """Round every float to 12 significant digits so output text is stable."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round12(v) for v in obj]
    return obj


def emit(payload) -> None:
    sys.stdout.write(json.dumps(round12(payload), indent=2) + "\n")


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(
        restarts=args.restarts,
        max_iters=args.max_iters,
        step_init=args.step_init,
        tol_obj=args.tol_obj,
        seed=args.seed,
    )


def cmd_validate(args) -> int:
    ch, _ = jsonio.load_channel_file(args.path)
    emit({"valid": True, "dim_in": ch.dim_in, "dim_out": ch.dim_out, "n_kraus": ch.dim_env})
    return EXIT_OK


def cmd_analyze(args) -> int:
    ch, ens = jsonio.load_channel_file(args.path)
    if args.input == "max-mixed":
        emit(max_mixed_summary(ch))
        return EXIT_OK
    if ens is None:
        raise ValidationError(f"{args.path} has no 'ensemble'; pass --input max-mixed to analyze without one")
    emit(analyze(ch, ens).to_dict())
    return EXIT_OK


def cmd_sweep(args) -> int:
    grid = uniform_grid(args.start, args.stop, args.steps)
    records = sweep(args.family, grid, args.input_policy, _optimizer_config(args), args.dim)
    if args.format == "csv":
        sys.stdout.write(records_to_csv(records))
    else:
        emit(records_to_json(records))
    return EXIT_OK


def cmd_optimize(args) -> int:
    if args.path:
        ch, _ = jsonio.load_channel_file(args.path)
    elif args.family:
        ch = family_channel(args.family, args.param, args.dim)
    else:
        raise ValidationError("give a channel file or --family")
    res = maximize_coherent_information(ch, _optimizer_config(args))
    emit(
        {
            "best_value": res.best_value,
            "best_input": jsonio.density_to_json(res.best_input),
            "converged": res.converged,
            "runs": [{"restart": i, "value": v} for i, v in res.trace_of_runs],
        }
    )
    return EXIT_OK


def cmd_verify_identity(args) -> int:
    if args.trials < 1:
        raise ValidationError(f"--trials must be >= 1, got {args.trials}")
    if args.max_dim not in (2, 3, 4):
        raise ValidationError(f"--max-dim must be 2, 3 or 4, got {args.max_dim}")
    rng = make_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        ch, ens = random_identity_case(rng, args.max_dim, family=args.family)
        worst = max(worst, verify_identity(ch, ens))
    emit({"trials": args.trials, "max_residual": worst, "pass": bool(worst < IDENTITY_PASS)})
    return EXIT_OK


def _add_optimizer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--step-init", type=float, default=0.1)
    p.add_argument("--tol-obj", type=float, default=1e-7)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qprivacy",
        description="Coherent information, Holevo quantities and privacy bounds of quantum channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a channel file describes a CPTP map")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="entropies and Holevo quantities for a channel + ensemble")
    p.add_argument("path")
    p.add_argument(
        "--input",
        choices=["ensemble", "max-mixed"],
        default="ensemble",
        help="analyze the file's ensemble (default) or only the maximally mixed input",
    )
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="coherent information along a channel family")
    p.add_argument("--family", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--input-policy", choices=INPUT_POLICIES, default="max-mixed")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_optimizer_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="maximize coherent information over inputs")
    p.add_argument("path", nargs="?")
    p.add_argument("--family")
    p.add_argument("--param", type=float)
    p.add_argument("--dim", type=int, default=2)
    _add_optimizer_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify-identity", help="check I(avg) = chi_out - chi_env on random pure ensembles")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=["identity"], default=None)
    p.set_defaults(func=cmd_verify_identity)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
