"""Command-line front end.

    mediamatch match            --scenario water.json --out out/
    mediamatch sweep            --scenario water.json --out out/
    mediamatch links            --scenario water.json --out out/ --links 45
    mediamatch backscatter      --scenario water.json --out out/ --links 45
    mediamatch bench-controller --scenario water.json --out out/

Exit codes: 0 success, 2 scenario/config error, 3 infeasible search,
4 oracle or budget violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (BudgetError, cmd_backscatter, cmd_bench_controller,
                      cmd_links, cmd_match, cmd_sweep)
from .matching import SearchError
from .scenario import ScenarioError, load_scenario, scenario_from_dict
from .surface import CalibrationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_VIOLATION = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mediamatch",
        description="Layered-media impedance matching and surface-control simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")

    p = sub.add_parser("match", help="admittance/voltage matching + spectra")
    common(p)
    p = sub.add_parser("sweep", help="through-power heatmap grids")
    common(p)
    p = sub.add_parser("links", help="controller over seeded multipath links")
    common(p)
    p.add_argument("--links", type=int, default=45, help="number of links")
    p.add_argument("--parallel", type=int, default=1, help="worker processes")
    p = sub.add_parser("backscatter", help="two-way channel-product emulation")
    common(p)
    p.add_argument("--links", type=int, default=45, help="number of links")
    p = sub.add_parser("bench-controller", help="voting vs enumeration comparison")
    common(p)
    p.add_argument("--links", type=int, default=100, dest="links",
                   help="number of seeded channels")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
        if args.seed is not None:
            raw = dict(scenario.raw)
            raw["seed"] = args.seed
            scenario = scenario_from_dict(raw)
        out = Path(args.out)

        if args.command == "match":
            report = cmd_match(scenario, out)
        elif args.command == "sweep":
            report = cmd_sweep(scenario, out)
        elif args.command == "links":
            report = cmd_links(scenario, out, args.links, parallel=args.parallel)
        elif args.command == "backscatter":
            report = cmd_backscatter(scenario, out, args.links)
        else:
            report = cmd_bench_controller(scenario, out, n_seeds=args.links)
    except (ScenarioError, FileNotFoundError, ValueError) as exc:
        if isinstance(exc, CalibrationError):
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SearchError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION

    sys.stdout.write(report.render())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
