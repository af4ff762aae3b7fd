"""End-to-end analysis: parse, clean, sample, rank, score, emit.

The step order is fixed: parse -> infer schema -> readiness check -> clean ->
binarize -> imbalance ratio -> ratio-preserving sample -> one-hot encode ->
MI ranking -> top-m selection -> complexity report -> emitters.  Feature
plots are drawn from the full cleaned file; the complexity score uses the
sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .complexity.report import ComplexityConfig, complexity_report
from .errors import NotMlReadyError, UnsupportedFormatError
from .features import FeatureSelectionConfig, rank_features, select_top_m
from .ingest import (
    DEFAULT_MAX_CELLS,
    check_ml_ready,
    infer_schema,
    parse_arff,
    parse_csv,
)
from .preprocess import (
    LabeledMatrix,
    Provenance,
    SamplingConfig,
    TableEncoder,
    binarize_labels,
    clean,
    imbalance_ratio,
    stratified_sample,
)
from .report import (
    DEFAULT_PLOT_CAP,
    STATS_HEADER,
    AnalysisBundle,
    emit_feature_plots,
    emit_importance_chart,
    emit_stats_row,
    render_json,
)

XLSX_HINT = (
    "XLSX input is not supported; export the sheet to CSV "
    "(e.g. with LibreOffice: soffice --convert-to csv <file>) and re-run"
)

PLOT_TOP = 5


@dataclass
class RunConfig:
    """Everything one `analyze` run needs; defaults match the CLI flags."""

    input_path: str
    out_dir: Optional[str] = None
    dataset_name: Optional[str] = None
    file_format: str = "auto"  # auto | csv | arff
    delimiter: str = ","
    has_header: bool = True
    label_column: Optional[str] = None
    benign_aliases: Optional[Sequence[str]] = None
    k: int = 1000
    m: int = 10
    bins: int = 10
    binning: str = "equal-frequency"
    seed: int = 42
    cardinality_cap: int = 64
    skip_sampling: bool = False
    max_cells: int = DEFAULT_MAX_CELLS
    plot_cap: int = DEFAULT_PLOT_CAP
    benign_color: str = "blue"
    malicious_color: str = "red"

    def config_echo(self) -> dict:
        return {
            "input_path": str(self.input_path),
            "file_format": self.file_format,
            "delimiter": self.delimiter,
            "has_header": self.has_header,
            "label_column": self.label_column,
            "benign_aliases": list(self.benign_aliases) if self.benign_aliases else None,
            "k": self.k,
            "m": self.m,
            "bins": self.bins,
            "binning": self.binning,
            "seed": self.seed,
            "cardinality_cap": self.cardinality_cap,
            "skip_sampling": self.skip_sampling,
            "plot_cap": self.plot_cap,
        }


@dataclass
class RunResult:
    bundle: AnalysisBundle
    stats_row: str
    written_files: list[Path] = field(default_factory=list)


def _detect_format(path: str, declared: str) -> str:
    if declared != "auto":
        return declared
    suffix = Path(path).suffix.lower()
    if suffix == ".arff":
        return "arff"
    if suffix in (".xlsx", ".xls"):
        raise UnsupportedFormatError(f"{path}: {XLSX_HINT}")
    return "csv"


def run_analyze(config: RunConfig) -> RunResult:
    """Run the whole pipeline; writes outputs when `out_dir` is set.

    Raises NotMlReadyError / SingleClassError / parse errors for the CLI to
    map onto exit codes.
    """
    fmt = _detect_format(config.input_path, config.file_format)
    if fmt == "arff":
        table = parse_arff(Path(config.input_path), max_cells=config.max_cells)
    else:
        table = parse_csv(
            Path(config.input_path),
            delimiter=config.delimiter,
            has_header=config.has_header,
            max_cells=config.max_cells,
        )

    _, label_spec = infer_schema(
        table, label_hint=config.label_column, benign_aliases=config.benign_aliases
    )
    verdict = check_ml_ready(table, label_spec)
    if not verdict.ready:
        raise NotMlReadyError(table.source_name, verdict.reasons)

    cleaned = clean(table, label_spec)
    y_full = binarize_labels(cleaned.table, cleaned.label_spec)
    imbalance = imbalance_ratio(y_full)

    sampling = SamplingConfig(k=config.k, seed=config.seed)
    if config.skip_sampling:
        sample_rows = cleaned.table.rows
        y_sample = y_full
    else:
        sample = stratified_sample(cleaned.table.rows, y_full, sampling)
        sample_rows = sample.rows
        y_sample = sample.y

    encoder = TableEncoder.from_table(
        cleaned.table, cleaned.label_spec, config.cardinality_cap
    )
    provenance = Provenance(
        source_name=table.source_name,
        seed=config.seed,
        k_requested=config.k,
        dropped_rows=cleaned.dropped_rows,
    )
    matrix = LabeledMatrix(
        encoder.feature_names, encoder.transform(sample_rows), y_sample, provenance
    )

    selection_config = FeatureSelectionConfig(
        m=config.m, bins=config.bins, binning=config.binning
    )
    ranking = rank_features(matrix, selection_config)
    selected = select_top_m(ranking, config.m)

    complexity = complexity_report(
        matrix.X,
        matrix.y,
        selection=selected,
        config=ComplexityConfig(seed=config.seed),
        k_used=matrix.n_rows,
        m_used=len(selected),
    )

    plot_features = tuple(s.feature_index for s in ranking[:PLOT_TOP])
    bundle = AnalysisBundle(
        dataset_name=config.dataset_name or Path(config.input_path).stem,
        source_file=Path(config.input_path).name,
        file_format=fmt,
        n_points=cleaned.table.n_rows,
        n_features=len(encoder.feature_names),
        imbalance=imbalance,
        complexity=complexity,
        ranking=ranking,
        plot_features=plot_features,
        provenance={
            "config": config.config_echo(),
            "sampling": "without-replacement",
            "sample_size": int(matrix.n_rows),
            "dropped_rows": cleaned.dropped_rows,
            "dropped_columns": list(cleaned.dropped_columns),
            "dropped_high_cardinality": [
                {"column": name, "distinct": count}
                for name, count in encoder.dropped_high_cardinality
            ],
            "selected_features": list(selected),
        },
    )

    stats_row, _ = emit_stats_row(bundle)
    result = RunResult(bundle=bundle, stats_row=stats_row)
    if config.out_dir is not None:
        result.written_files = _write_outputs(config, bundle, cleaned, y_full, encoder)
    return result


def _write_outputs(config, bundle, cleaned, y_full, encoder) -> list[Path]:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    plot_values = {
        idx: encoder.column_values(cleaned.table.rows, idx)
        for idx in bundle.plot_features
    }
    plot_names = {idx: encoder.feature_names[idx] for idx in bundle.plot_features}
    plots = emit_feature_plots(
        plot_values,
        y_full,
        bundle.plot_features,
        out,
        feature_names=plot_names,
        row_indices=cleaned.kept_row_indices,
        plot_cap=config.plot_cap,
        benign_color=config.benign_color,
        malicious_color=config.malicious_color,
    )
    bundle.provenance["plots"] = [
        {
            "feature_index": p.feature_index,
            "feature_name": p.feature_name,
            "file": p.figure_path.name,
            "sidecar": p.sidecar_path.name,
            "n_plotted": p.n_plotted,
            "thinning_factor": p.thinning_factor,
        }
        for p in plots
    ]
    for p in plots:
        written.extend([p.figure_path, p.sidecar_path])

    chart = emit_importance_chart(bundle.ranking, out / "importance.svg")
    written.extend([chart.figure_path, chart.sidecar_path])

    stats_row, stats_json = emit_stats_row(bundle)
    stats_path = out / "stats.txt"
    stats_path.write_text(STATS_HEADER + "\n" + stats_row + "\n", encoding="utf-8")
    written.append(stats_path)

    json_path = out / "analysis.json"
    json_path.write_text(render_json(stats_json), encoding="utf-8")
    written.append(json_path)
    return written
