"""Command-line pipeline: validate -> model -> scenario -> analyze -> report.

Every number printed or written comes from a library operation. Exit codes:
0 success, 1 identity violations, 2 structural or parse errors,
3 non-productive economy.

Subcommands: validate, multipliers, run, compare. The default output
directory may be set through the IOIMPACT_OUT environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import (
    IOModelError,
    NonProductiveEconomyError,
    ScenarioConfigError,
    StructuralError,
)
from .impact import (
    apply_blowup,
    compare_methods,
    estimate_blowup_factor,
    inoperability,
    make_extraction_spec,
    partial_extraction,
)
from .ingest import parse_blowup_history, parse_io_table, parse_scenario
from .leontief import build_model
from .report import (
    ReportBundle,
    comparison_table,
    impact_table,
    load_impact_result,
    multiplier_table,
    plotdata_table,
    recipe_tables,
    result_to_dict,
    sector_profile_table,
    validation_table,
    write_reports,
)
from .scenario import build_delta, extraction_intensities
from .table import INGESTED_REL_TOL, drop_zero_sectors, validate_table

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_STRUCTURAL = 2
EXIT_NON_PRODUCTIVE = 3

_METHODS = ("inoperability", "extraction", "both")


def _add_table_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--table", required=True, help="IO table CSV")
    p.add_argument("--meta", required=True, help="sector metadata CSV (code,name)")
    p.add_argument(
        "--satellites",
        nargs="*",
        default=[],
        metavar="FILE",
        help="satellite account CSVs (sector,<kind>)",
    )
    p.add_argument(
        "--rel-tol",
        type=float,
        default=INGESTED_REL_TOL,
        help=f"identity tolerance (default {INGESTED_REL_TOL:g})",
    )


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--out",
        default=os.environ.get("IOIMPACT_OUT", "reports"),
        help="output directory (default: $IOIMPACT_OUT or ./reports)",
    )
    p.add_argument(
        "--format",
        nargs="+",
        default=["csv", "json"],
        choices=["csv", "json"],
        help="report formats",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ioimpact",
        description="Leontief input-output analysis and demand-shock impact pipelines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check table accounting identities")
    _add_table_args(p)
    p.add_argument("--out", default=os.environ.get("IOIMPACT_OUT"), help="optional report directory")

    p = sub.add_parser("multipliers", help="output and satellite multiplier tables")
    _add_table_args(p)
    _add_output_args(p)
    p.add_argument("--sector", help="sector code for profile and recipe views")
    p.add_argument("--top-k", type=int, default=10, help="ranking depth for recipe views")

    p = sub.add_parser("run", help="run demand-shock scenarios")
    _add_table_args(p)
    _add_output_args(p)
    p.add_argument("--scenario", required=True, nargs="+", help="scenario JSON file(s)")
    p.add_argument("--method", choices=_METHODS, default="both")
    p.add_argument("--blowup", type=float, help="override blowup factor")
    p.add_argument(
        "--blowup-history",
        nargs=2,
        metavar=("FD_CSV", "GDP_CSV"),
        help="estimate the blowup factor from history files",
    )
    p.add_argument("--top-k", type=int, default=10, help="plot-data ranking depth")
    p.add_argument("--jobs", type=int, default=1, help="parallel scenario runs")

    p = sub.add_parser("compare", help="compare two impact result JSON files")
    p.add_argument("result_a")
    p.add_argument("result_b")
    _add_output_args(p)

    return parser


def _load_validated(args):
    table = parse_io_table(args.table, args.meta, args.satellites)
    table, dropped = drop_zero_sectors(table)
    for sector in dropped:
        print(f"dropped zero-output sector: {sector.code} ({sector.name})", file=sys.stderr)
    report = validate_table(table, rel_tol=args.rel_tol)
    return table, report


def cmd_validate(args) -> int:
    table, report = _load_validated(args)
    for line in report.lines():
        print(line)
    if args.out:
        bundle = ReportBundle()
        bundle.add(validation_table(report))
        write_reports(bundle, args.out, formats=("csv", "json"))
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_multipliers(args) -> int:
    table, report = _load_validated(args)
    if not report.passed:
        for line in report.lines():
            print(line, file=sys.stderr)
        return EXIT_VALIDATION
    model = build_model(table)
    bundle = ReportBundle()
    bundle.add(validation_table(report))
    bundle.add(multiplier_table(model))
    if args.sector:
        bundle.add(sector_profile_table(model, args.sector))
        for t in recipe_tables(model, args.sector, args.top_k):
            bundle.add(t)
    manifest = write_reports(bundle, args.out, formats=tuple(args.format))
    print(f"wrote {len(manifest['files'])} report files to {args.out}")
    return EXIT_OK


def _resolve_blowup(args, spec) -> float:
    if args.blowup is not None:
        return args.blowup
    if args.blowup_history:
        fd, gdp = parse_blowup_history(*args.blowup_history)
        return estimate_blowup_factor(fd, gdp)
    return spec.blowup_factor if spec.blowup_factor > 0 else 1.0


def _run_scenario(model, spec, args):
    delta = build_delta(model.table, spec)
    blowup = _resolve_blowup(args, spec)
    results = []
    if args.method in ("inoperability", "both"):
        results.append(apply_blowup(inoperability(model, delta), blowup))
    if args.method in ("extraction", "both"):
        alpha = extraction_intensities(model.table, spec)
        ext_spec = make_extraction_spec(
            model,
            spec.target_sector,
            alpha,
            f_bar=model.f + delta.delta,
            label=delta.scenario,
        )
        results.append(apply_blowup(partial_extraction(model, ext_spec), blowup))
    return spec, delta, blowup, results


def _print_summary(spec, blowup, results) -> None:
    for result in results:
        print(f"scenario {spec.name} [{result.method}] blowup={blowup:g}")
        print(f"  change in output (M):              {result.totals['output']:,.0f}")
        print(f"  change in output (%):              {result.pct_output * 100:.2f}")
        for kind, label in (
            ("value_added", "change in value added (M):  "),
            ("income", "change in income (M):       "),
            ("employment", "change in employment (#):   "),
            ("gross_fixed_capital_formation", "change in capital formation:"),
        ):
            if kind in result.totals:
                print(f"  {label}        {result.totals[kind]:,.0f}")


def cmd_run(args) -> int:
    table, report = _load_validated(args)
    if not report.passed:
        for line in report.lines():
            print(line, file=sys.stderr)
        return EXIT_VALIDATION
    model = build_model(table)
    specs = [parse_scenario(path) for path in args.scenario]

    if args.jobs > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            runs = list(pool.map(lambda s: _run_scenario(model, s, args), specs))
    else:
        runs = [_run_scenario(model, spec, args) for spec in specs]

    multi = len(runs) > 1
    for spec, delta, blowup, results in runs:
        bundle = ReportBundle()
        bundle.add(validation_table(report))
        bundle.add(multiplier_table(model))
        for result in results:
            bundle.add(impact_table(result))
            bundle.documents[f"result_{result.method}"] = result_to_dict(result)
        bundle.add(plotdata_table(results[0], top_k=args.top_k))
        if len(results) == 2:
            bundle.add(comparison_table(compare_methods(results[1], results[0])))
        out_dir = Path(args.out) / spec.name if multi else Path(args.out)
        write_reports(bundle, out_dir, formats=tuple(args.format))
        _print_summary(spec, blowup, results)
    return EXIT_OK


def cmd_compare(args) -> int:
    a = load_impact_result(args.result_a)
    b = load_impact_result(args.result_b)
    comparison = compare_methods(a, b)
    bundle = ReportBundle()
    bundle.add(comparison_table(comparison))
    write_reports(bundle, args.out, formats=tuple(args.format))
    for key, value in sorted(comparison.total_diffs.items()):
        print(f"{key} difference ({a.method} - {b.method}): {value:,.0f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "multipliers": cmd_multipliers,
        "run": cmd_run,
        "compare": cmd_compare,
    }
    try:
        return handlers[args.command](args)
    except NonProductiveEconomyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_PRODUCTIVE
    except (StructuralError, ScenarioConfigError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL
    except IOModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL


if __name__ == "__main__":
    sys.exit(main())
