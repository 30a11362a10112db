"""Command-line entry point.

Exit codes: 0 success, 1 invalid scenario, 2 numerical failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .basis import BasisConfig, build_basis
from .errors import NumericalError, ScenarioError
from .experiment import SWEEP_AXES, load_scenario, run_scenario, sweep, validate_scenario
from .io import basis_to_dict, write_csv, write_json

OUTPUT_DIR_ENV = "PROLATE_SUPERRES_OUTPUT_DIR"

EXIT_OK, EXIT_SCENARIO, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def _global_flags(default):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=default, help="override the scenario RNG seed")
    p.add_argument("--output-dir", default=default, help=f"output directory (env: {OUTPUT_DIR_ENV})")
    p.add_argument("--threads", type=int, default=default, help="worker threads for Monte-Carlo trials")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prolate-superres",
        description="Prolate-spheroidal superresolution with coherent and squeezed light.",
        parents=[_global_flags(None)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    flags = _global_flags(argparse.SUPPRESS)

    p = sub.add_parser("basis", parents=[flags], help="dump the prolate eigensystem as JSON")
    p.add_argument("--c", type=float, default=1.0, help="space-bandwidth product")
    p.add_argument("--grid-size", type=int, default=512)
    p.add_argument("--num-modes", type=int, default=8)

    p = sub.add_parser("run", parents=[flags], help="run one scenario file")
    p.add_argument("scenario")

    p = sub.add_parser("sweep", parents=[flags], help="run a scenario over a list of parameter values")
    p.add_argument("scenario")
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--values", required=True, nargs="+", type=float)

    p = sub.add_parser("validate", parents=[flags], help="check a scenario file without running it")
    p.add_argument("scenario")
    return parser


def _output_dir(args):
    return args.output_dir or os.environ.get(OUTPUT_DIR_ENV)


def _prepare(args):
    scenario = load_scenario(args.scenario)
    overrides = {}
    if args.seed is not None:
        scenario = replace(scenario, noise=replace(scenario.noise, seed=args.seed))
        overrides["seed"] = args.seed
    out = _output_dir(args)
    if out:
        scenario = replace(scenario, output_dir=out)
        overrides["output_dir"] = out
    return scenario, overrides


def _cmd_basis(args):
    basis = build_basis(BasisConfig(args.c, args.grid_size, args.num_modes))
    data = basis_to_dict(basis)
    out = _output_dir(args)
    if out:
        write_json(os.path.join(out, "basis.json"), data)
        write_csv(os.path.join(out, "eigenvalues.csv"), ["k", "eigenvalue"],
                  [range(basis.num_modes), basis.eigenvalues])
    else:
        json.dump(data, sys.stdout)
        sys.stdout.write("\n")
    return EXIT_OK


def _cmd_run(args):
    scenario, overrides = _prepare(args)
    s = run_scenario(scenario, threads=args.threads or 1, overrides=overrides)
    print(f"{scenario.name}: median factor {s.median_factor:.3f} "
          f"(q25 {s.q25_factor:.3f}, q75 {s.q75_factor:.3f}), noiseless {s.noiseless_factor:.3f}; "
          f"outputs in {scenario.output_dir}")
    print(f"wall time {s.wall_time:.2f} s", file=sys.stderr)
    return EXIT_OK


def _cmd_sweep(args):
    scenario, _ = _prepare(args)
    values = [int(v) if args.axis == "K_reconstruct" and float(v).is_integer() else v for v in args.values]
    rows = sweep(scenario, args.axis, values, threads=args.threads or 1)
    print(f"{args.axis},median_factor,q25_factor,q75_factor")
    for r in rows:
        print(f"{r['value']},{r['median_factor']},{r['q25_factor']},{r['q75_factor']}")
    return EXIT_OK


def _cmd_validate(args):
    problems = validate_scenario(args.scenario)
    for msg in problems:
        print(f"{args.scenario}: {msg}", file=sys.stderr)
    if not problems:
        print(f"{args.scenario}: ok")
    return EXIT_SCENARIO if problems else EXIT_OK


COMMANDS = {"basis": _cmd_basis, "run": _cmd_run, "sweep": _cmd_sweep, "validate": _cmd_validate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except (NumericalError, ValueError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
