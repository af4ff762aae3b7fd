"""Command-line entry point.

Subcommands: `analyze` (full pipeline on one file), `catalog`
(list/show/query the embedded dataset registry), and `measures` (the
22-measure reference).  Diagnostics go to stderr, data to stdout.

Exit codes: 0 success, 1 usage/parse/internal error, 2 input not ML-ready,
3 labels collapse to a single class, 4 unknown dataset name.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .catalog import (
    CkcStep,
    QueryFilter,
    load_catalog,
    query_datasets,
    resolve_step,
    summary_stats,
)
from .complexity.measures import REGISTRY
from .errors import (
    NoLabelError,
    NotMlReadyError,
    OtdpError,
    SingleClassError,
    TableTooLargeError,
    UnknownDatasetError,
)
from .pipeline import RunConfig, run_analyze
from .report import format_half_up, render_json

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_ML_READY = 2
EXIT_SINGLE_CLASS = 3
EXIT_UNKNOWN_DATASET = 4

ENV_CATALOG = "OTDP_CATALOG"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="otdp",
        description=(
            "Profile a labelled industrial network-traffic dataset file: "
            "imbalance ratio, mutual-information feature ranking, and the "
            "22-measure average complexity score; or query the built-in "
            "dataset catalogue."
        ),
    )
    parser.add_argument("--version", action="version", version=f"otdp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze",
        help="run the full analysis pipeline on a CSV or ARFF file",
        description=(
            "Pipeline: parse, infer schema, readiness check, clean, binarize "
            "labels, imbalance ratio, ratio-preserving sample of k rows, "
            "one-hot encode, rank features by mutual information, keep the "
            "top m, compute the complexity report, emit stats/plots/JSON."
        ),
    )
    analyze.add_argument("input", help="path to the dataset file (.csv or .arff)")
    analyze.add_argument("--out", required=True, help="output directory")
    analyze.add_argument(
        "--config", metavar="FILE",
        help="JSON file of option values; precedence is flags > file > defaults",
    )
    analyze.add_argument("--name", help="dataset name for reports (default: file stem)")
    analyze.add_argument(
        "--format", dest="file_format", choices=("auto", "csv", "arff"),
        help="input format (default: by file extension)",
    )
    analyze.add_argument(
        "--delimiter", help="CSV delimiter: ',' ';' or tab (default ',')"
    )
    analyze.add_argument(
        "--no-header", action="store_true", default=None,
        help="CSV has no header row; columns are named col_0, col_1, ...",
    )
    analyze.add_argument("--label-column", help="label column name (default: autodetect)")
    analyze.add_argument(
        "--benign-alias", action="append", dest="benign_aliases", metavar="VALUE",
        help="label value treated as benign; repeatable "
        "(default: benign, normal, 0, false, good, natural)",
    )
    analyze.add_argument(
        "--k", type=int, help="sample size for the complexity estimate (default 1000)"
    )
    analyze.add_argument(
        "--m", type=int, help="number of top-MI features the score uses (default 10)"
    )
    analyze.add_argument(
        "--bins", type=int, help="discretisation bins for mutual information (default 10)"
    )
    analyze.add_argument(
        "--binning", choices=("equal-frequency", "equal-width"),
        help="binning mode (default equal-frequency)",
    )
    analyze.add_argument("--seed", type=int, help="sampling seed (default 42)")
    analyze.add_argument(
        "--cardinality-cap", type=int,
        help="categorical columns with more distinct values are dropped (default 64)",
    )
    analyze.add_argument(
        "--skip-sampling", action="store_true", default=None,
        help="score the full cleaned file instead of a k-row sample",
    )
    analyze.add_argument(
        "--max-cells", type=int,
        help="in-memory cell budget; larger files are only counted (default 20M)",
    )
    analyze.add_argument(
        "--plot-cap", type=int,
        help="uniformly thin plots beyond this many points (default 200000)",
    )
    analyze.add_argument("--benign-color", help="plot colour for benign points (default blue)")
    analyze.add_argument("--malicious-color", help="plot colour for malicious points (default red)")

    catalog = sub.add_parser("catalog", help="query the embedded dataset catalogue")
    catalog.add_argument(
        "--catalog", dest="catalog_path", metavar="PATH",
        help=f"catalogue file to use (default: embedded; env {ENV_CATALOG} overrides)",
    )
    catalog.add_argument("--json", action="store_true", help="emit JSON instead of text")
    catalog_sub = catalog.add_subparsers(dest="catalog_command", required=True)

    cat_list = catalog_sub.add_parser("list", help="list all 32 datasets")
    cat_list.add_argument("--ml-ready", action="store_true", help="only the 17 ML-ready datasets")

    cat_show = catalog_sub.add_parser("show", help="show one dataset record")
    cat_show.add_argument("dataset", help="dataset name")

    cat_query = catalog_sub.add_parser("query", help="filter datasets (clauses AND together)")
    cat_query.add_argument("--attack", help="attack subheading, e.g. 'Ransomware'")
    cat_query.add_argument(
        "--step", help="kill-chain step, e.g. 'Reconnaissance' or 'Command & Control'"
    )
    cat_query.add_argument("--year-from", type=int, help="earliest year")
    cat_query.add_argument("--year-to", type=int, help="latest year")
    cat_query.add_argument("--scenario", help="substring of the application scenario")
    cat_query.add_argument("--ml-ready", action="store_true", help="only ML-ready datasets")

    catalog_sub.add_parser(
        "stats", help="aggregates over the ML-ready records (avg IR, avg CS, histogram)"
    )

    measures = sub.add_parser("measures", help="print the 22-measure reference")
    measures.add_argument("--json", action="store_true", help="emit JSON instead of text")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "catalog":
            return _cmd_catalog(args)
        if args.command == "measures":
            return _cmd_measures(args)
    except UnknownDatasetError as err:
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_UNKNOWN_DATASET
    except OtdpError as err:
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as err:
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_ERROR
    raise AssertionError("unreachable")


def _error_report(out_dir: str | None, kind: str, message: str, reasons=()) -> None:
    if not out_dir:
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    payload = {"error": kind, "message": message, "reasons": list(reasons)}
    (path / "error.json").write_text(render_json(payload), encoding="utf-8")


#: analyze options a --config file may set, keyed by RunConfig field name
_CONFIG_KEYS = (
    "dataset_name", "file_format", "delimiter", "has_header", "label_column",
    "benign_aliases", "k", "m", "bins", "binning", "seed", "cardinality_cap",
    "skip_sampling", "max_cells", "plot_cap", "benign_color", "malicious_color",
)


def _merge_run_config(args) -> RunConfig:
    """Precedence: explicit flags > --config file > built-in defaults."""
    file_values = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_values = json.load(fh)
        unknown = set(file_values) - set(_CONFIG_KEYS)
        if unknown:
            raise OtdpError(
                f"{args.config}: unknown config keys: {', '.join(sorted(unknown))}"
            )
    defaults = {f.name: f.default for f in fields(RunConfig)}

    def pick(flag_value, key):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return file_values[key]
        return defaults[key]

    delimiter = pick(args.delimiter, "delimiter")
    if delimiter in ("\\t", "tab"):
        delimiter = "\t"
    has_header = pick(
        None if args.no_header is None else not args.no_header, "has_header"
    )
    return RunConfig(
        input_path=args.input,
        out_dir=args.out,
        dataset_name=pick(args.name, "dataset_name"),
        file_format=pick(args.file_format, "file_format"),
        delimiter=delimiter,
        has_header=has_header,
        label_column=pick(args.label_column, "label_column"),
        benign_aliases=pick(args.benign_aliases, "benign_aliases"),
        k=pick(args.k, "k"),
        m=pick(args.m, "m"),
        bins=pick(args.bins, "bins"),
        binning=pick(args.binning, "binning"),
        seed=pick(args.seed, "seed"),
        cardinality_cap=pick(args.cardinality_cap, "cardinality_cap"),
        skip_sampling=pick(args.skip_sampling, "skip_sampling"),
        max_cells=pick(args.max_cells, "max_cells"),
        plot_cap=pick(args.plot_cap, "plot_cap"),
        benign_color=pick(args.benign_color, "benign_color"),
        malicious_color=pick(args.malicious_color, "malicious_color"),
    )


def _cmd_analyze(args) -> int:
    try:
        config = _merge_run_config(args)
    except (OtdpError, OSError, json.JSONDecodeError) as err:
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_ERROR
    try:
        result = run_analyze(config)
    except NotMlReadyError as err:
        _error_report(args.out, "not-ml-ready", str(err), err.reasons)
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_NOT_ML_READY
    except NoLabelError as err:
        _error_report(args.out, "not-ml-ready", str(err), ["no label column"])
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_NOT_ML_READY
    except SingleClassError as err:
        _error_report(args.out, "single-class", str(err), [str(err)])
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_SINGLE_CLASS
    except TableTooLargeError as err:
        _error_report(args.out, "table-too-large", str(err))
        print(f"otdp: {err}", file=sys.stderr)
        if err.n_rows is not None:
            print(
                f"otdp: counted {err.n_rows} rows x {err.n_cols} columns",
                file=sys.stderr,
            )
        return EXIT_ERROR
    except OtdpError as err:
        _error_report(args.out, "error", str(err))
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as err:
        _error_report(args.out, "io-error", str(err))
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as err:
        # library precondition violations (too few rows, bad flag combos)
        _error_report(args.out, "invalid-input", str(err))
        print(f"otdp: {err}", file=sys.stderr)
        return EXIT_ERROR
    print(result.stats_row)
    for path in result.written_files:
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _load_catalog_for(args):
    path = args.catalog_path or os.environ.get(ENV_CATALOG) or None
    return load_catalog(path)


def _record_brief(record) -> dict:
    out = {
        "id": record.id,
        "name": record.name,
        "year": record.year,
        "scenario": record.scenario,
        "attack_types": record.attack_type_count,
        "ml_ready": record.ml_ready,
    }
    if record.ckc_year is not None:
        out["ckc_year"] = record.ckc_year
    return out


def _record_full(record) -> dict:
    out = _record_brief(record)
    out["attacks"] = sorted(flag.name for flag in record.attack_flags)
    out["kill_chain_steps"] = [
        step.value for step in CkcStep if step in record.steps()
    ]
    if record.url:
        out["url"] = record.url
    if record.label_column:
        out["label_column"] = record.label_column
    if record.stats:
        s = record.stats
        out["stats"] = {
            "selected_file": s.selected_file,
            "file_format": s.file_format,
            "n_points": s.n_points,
            "n_features": s.n_features,
            "ir": s.ir,
            "avg_cs": s.avg_cs,
        }
    return out


def _print_record_lines(record) -> None:
    print(f"{record.id:>2}  {record.name}")
    print(f"    year: {record.year}" + (
        f" (attack mapping table: {record.ckc_year})" if record.ckc_year else ""
    ))
    print(f"    scenario: {record.scenario}")
    print(f"    attack types: {record.attack_type_count}")
    flags = sorted(flag.name for flag in record.attack_flags)
    print(f"    attacks: {', '.join(flags) if flags else '-'}")
    if record.url:
        print(f"    url: {record.url}")
    if record.stats:
        s = record.stats
        print(
            f"    ml-ready file: {s.selected_file} ({s.file_format}), "
            f"{s.n_points} points, {s.n_features} features, "
            f"IR {format_half_up(s.ir, 2)}, avg CS {format_half_up(s.avg_cs, 3)}"
        )
    else:
        print("    ml-ready: no")


def _print_record_table(records) -> None:
    print(f"{'id':>2}  {'name':<40} {'year':<5} {'ml':<3} {'ir':>6} {'cs':>6}  scenario")
    for r in records:
        ir = format_half_up(r.stats.ir, 2) if r.stats else "-"
        cs = format_half_up(r.stats.avg_cs, 3) if r.stats else "-"
        ml = "yes" if r.ml_ready else "no"
        print(f"{r.id:>2}  {r.name:<40} {r.year:<5} {ml:<3} {ir:>6} {cs:>6}  {r.scenario}")


def _cmd_catalog(args) -> int:
    catalog = _load_catalog_for(args)
    if args.catalog_command == "list":
        records = catalog.ml_ready_records if args.ml_ready else catalog.records
        if args.json:
            print(render_json({"datasets": [_record_brief(r) for r in records]}), end="")
        else:
            _print_record_table(records)
        return EXIT_OK
    if args.catalog_command == "show":
        record = catalog.find(args.dataset)
        if args.json:
            print(render_json(_record_full(record)), end="")
        else:
            _print_record_lines(record)
        return EXIT_OK
    if args.catalog_command == "query":
        year_range = None
        if args.year_from is not None or args.year_to is not None:
            year_range = (args.year_from or 0, args.year_to or 9999)
        records = query_datasets(
            catalog,
            QueryFilter(
                attack=args.attack,
                step=resolve_step(args.step) if args.step else None,
                year_range=year_range,
                scenario_substring=args.scenario,
                ml_ready_only=args.ml_ready,
            ),
        )
        if args.json:
            print(render_json({"datasets": [_record_brief(r) for r in records]}), end="")
        else:
            _print_record_table(records)
        return EXIT_OK
    if args.catalog_command == "stats":
        summary = summary_stats(catalog)
        payload = {
            "ml_ready_count": len(catalog.ml_ready_records),
            "avg_ir": summary.avg_ir,
            "avg_cs": summary.avg_cs,
            "cs_histogram": list(summary.cs_histogram),
            "ir_above_30": summary.ir_above(30),
        }
        if args.json:
            print(render_json(payload), end="")
        else:
            print(f"ML-ready datasets: {payload['ml_ready_count']}")
            print(f"average IR: {format_half_up(summary.avg_ir, 2)}")
            print(f"average CS: {format_half_up(summary.avg_cs, 3)}")
            bands = ["[0,0.1)", "[0.1,0.2)", "[0.2,0.3)", "[0.3,0.4)", "[0.4,0.5]", ">0.5"]
            for band, count in zip(bands, summary.cs_histogram):
                print(f"  CS {band}: {count}")
            print(f"datasets with IR > 30: {payload['ir_above_30']}")
        return EXIT_OK
    raise AssertionError("unreachable")


def _cmd_measures(args) -> int:
    if args.json:
        payload = [
            {
                "id": info.id.value,
                "family": info.family,
                "summary": info.summary,
                "normalization": info.normalization,
            }
            for info in REGISTRY
        ]
        print(render_json({"measures": payload}), end="")
        return EXIT_OK
    print("22 complexity measures (normalized to [0,1], 1 = most complex)")
    family = None
    for info in REGISTRY:
        if info.family != family:
            family = info.family
            print(f"\n{family}")
        print(f"  {info.id.value:<8} {info.summary}")
        print(f"  {'':<8} normalization: {info.normalization}")
    print("\nFull formulas and skip conditions: docs/measures.md")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
