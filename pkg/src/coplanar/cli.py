"""Command-line entry points.

    coplanar simulate <config.json>   run a config end to end
    coplanar verify <config.json>     re-analyze an existing series
    coplanar scenarios                list the named scenarios
    coplanar svd <matrix-file>        pseudo-SVD and signed distance of a matrix

The verification sweep honors COPLANAR_THREADS as a parallelism cap.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import CoplanarError, InputError
from .linalg import is_degenerate, pseudo_svd, signed_distance, singular_margin
from .pipeline import (
    STATUS_CONFIG_ERROR,
    RunConfig,
    reanalyze,
    run_pipeline,
)
from .scenarios import scenario_catalog


def _cmd_simulate(args) -> int:
    cfg = RunConfig.from_file(args.config)
    result = run_pipeline(cfg)
    if "error" in result.report:
        print(f"error: {result.report['error']}", file=sys.stderr)
    else:
        print(json.dumps({k: result.report[k] for k in ("n_events", "word", "status")}, indent=2))
        for name, path in result.paths.items():
            print(f"wrote {name}: {path}")
    return result.status


def _cmd_verify(args) -> int:
    cfg = RunConfig.from_file(args.config)
    result = reanalyze(cfg)
    if "error" in result.report:
        print(f"error: {result.report['error']}", file=sys.stderr)
    else:
        osc = result.report["oscillation"]
        print(
            json.dumps(
                {
                    "n_events": result.report["n_events"],
                    "violations": osc["violations"],
                    "hypotheses_met": osc["hypotheses_met"],
                    "status": result.status,
                },
                indent=2,
            )
        )
    return result.status


def _cmd_scenarios(args) -> int:
    for name, desc in scenario_catalog().items():
        print(f"{name:24s} {desc}")
    return 0


def _cmd_svd(args) -> int:
    try:
        mat = np.loadtxt(args.matrix_file, ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read matrix from {args.matrix_file}: {exc}") from exc
    res = pseudo_svd(mat)
    np.set_printoptions(precision=12, suppress=False)
    print("g1 =")
    print(res.g1)
    print("x  =", res.x)
    print("g2 =")
    print(res.g2)
    print("signed distance S =", signed_distance(mat))
    print("singular margin   =", singular_margin(mat))
    if is_degenerate(mat):
        print("on the degeneration locus (|S| below the reporting tolerance)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coplanar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a config end to end")
    p.add_argument("config")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="re-analyze an existing series")
    p.add_argument("config")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("scenarios", help="list the named scenarios")
    p.set_defaults(func=_cmd_scenarios)

    p = sub.add_parser("svd", help="pseudo-SVD of a whitespace-separated square matrix")
    p.add_argument("matrix_file")
    p.set_defaults(func=_cmd_svd)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return STATUS_CONFIG_ERROR
    except CoplanarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
