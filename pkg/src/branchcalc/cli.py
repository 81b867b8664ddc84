"""Command-line front end: ``branchcalc run <experiment>`` and ``branchcalc list``.

The default output directory is ``branchcalc-results/<name>``, overridable
per run with ``--out`` or globally with the ``BRANCHCALC_OUT`` environment
variable.  Exit status: 0 when every check of the experiment passed, 1 on
failed checks or serialized numerical errors, 2 for unknown experiments or
invalid parameters.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import InvalidParametersError, UnknownExperimentError
from .experiments import EXPERIMENTS, ExperimentSpec, catalog, run


def _parse_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _parse_params(pairs):
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise InvalidParametersError(f"--param expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        params[key] = _parse_value(value)
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchcalc",
        description="Contour-calculus experiments: projections, logarithms, "
        "boundary log-kernels, zeta residues.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runner = sub.add_parser("run", help="run one named experiment")
    runner.add_argument("name", help="experiment name (see `branchcalc list`)")
    runner.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="override an experiment parameter (repeatable)")
    runner.add_argument("--out", metavar="DIR", default=None,
                        help="output directory (default: $BRANCHCALC_OUT/<name> "
                        "or branchcalc-results/<name>)")
    runner.add_argument("--seed", type=int, default=0,
                        help="seed for randomized checks (default 0)")

    sub.add_parser("list", help="print the experiment catalog")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for line in catalog():
            print(line)
        return 0

    out_dir = args.out
    if out_dir is None and os.environ.get("BRANCHCALC_OUT"):
        out_dir = str(Path(os.environ["BRANCHCALC_OUT"]) / args.name)
    try:
        spec = ExperimentSpec(
            name=args.name,
            parameters=_parse_params(args.param),
            out_dir=out_dir,
            seed=args.seed,
        )
        status = run(spec)
    except (UnknownExperimentError, InvalidParametersError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    where = spec.out_dir or Path("branchcalc-results") / args.name
    print(f"{args.name}: {'all checks passed' if status == 0 else 'FAILED'} "
          f"(artifacts in {where})")
    return status


if __name__ == "__main__":
    sys.exit(main())
