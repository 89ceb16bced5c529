"""Command-line front end: run bundled or user scenarios and write artifacts.

Exit codes: 0 on success, 2 on validation problems (bad scenario file, wrong
subcommand for the operation, out-of-range parameters), 3 on numerical
failures during the run.
"""

from __future__ import annotations

import argparse
import sys

from .runner import GENERIC_SUBCOMMANDS, OP_SUBCOMMANDS, run
from .scenarios import ScenarioError, bundled_scenarios, load_scenario

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

_SUBCOMMAND_HELP = {
    "steer": "single-beam anomalous reflection",
    "multibeam": "weighted split into several reflected beams",
    "bandpass": "spectral filtering plus steering of the passed content",
    "wavefront": "focus / non-diffracting / bending phase profiles",
    "optimize": "fit resonant unit cells to a steering profile",
    "farfield": "far-field sweep of any scenario (requires observation.sweep)",
    "propagate": "propagation planes of any scenario (requires observation.planes)",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-kspace",
        description="Model a finite reconfigurable surface as a spatial filter in k-space.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name in (*OP_SUBCOMMANDS, *GENERIC_SUBCOMMANDS):
        p = sub.add_parser(name, help=_SUBCOMMAND_HELP[name])
        p.add_argument(
            "--scenario",
            required=True,
            help="bundled scenario name or path to a scenario JSON file",
        )
        p.add_argument(
            "--out",
            default=None,
            help="output directory (default: ./out/<scenario-name>)",
        )
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument(
            "--pad", type=int, default=None, help="override the spectral zero-padding factor"
        )
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
        p.add_argument(
            "--figures", action="store_true", help="also render PNG figures of the artifacts"
        )

    sub.add_parser("list-scenarios", help="print the bundled scenario names")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.subcommand == "list-scenarios":
        for name in bundled_scenarios():
            sc = load_scenario(name)
            print(f"{name:8s} {sc.operation.kind:10s} {sc.description}")
        return EXIT_OK

    try:
        sc = load_scenario(args.scenario)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(
            "hint: pass a bundled name (see 'ris-kspace list-scenarios') or a JSON file path",
            file=sys.stderr,
        )
        return EXIT_VALIDATION

    out = args.out if args.out is not None else f"out/{sc.name}"
    try:
        summary = run(
            args.subcommand,
            sc,
            out,
            seed=args.seed,
            pad=args.pad,
            figures=args.figures,
        )
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (RuntimeError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        print(
            "hint: try a larger --pad, a finer grid, or a shorter propagation range",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL

    if not args.quiet:
        _report(summary, out)
    return EXIT_OK


def _report(summary: dict, out: str) -> None:
    sc = summary["scenario"]
    print(f"{sc['name']}: {sc['operation']} on {sc['grid']['nx']}x{sc['grid']['ny']} grid")
    op = summary["operation"]
    for key in (
        "theta_r_deg",
        "converged",
        "sweeps",
        "objective",
        "peak_kx_over_k0",
        "peak_ratio",
        "integrated_ratio",
        "equal_split_max_dev",
        "preset",
    ):
        if key in op:
            print(f"  {key} = {op[key]}")
    obs = summary["observation"]
    if "sweep" in obs:
        for key, val in sorted(obs["sweep"].items()):
            if key.endswith("peak_theta_deg") or key == "route_l2_rel":
                print(f"  {key} = {val}")
    if "planes" in obs:
        for key, val in sorted(obs["planes"].items()):
            if key.startswith(("axial", "fwhm", "tracking")):
                print(f"  {key} = {val}")
    print(f"  artifacts -> {out}")


if __name__ == "__main__":
    sys.exit(main())
