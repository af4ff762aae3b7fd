"""otdp: profiling toolkit for labelled industrial network-traffic datasets.

Parses CSV/ARFF dataset files, checks whether they are usable as classifier
input, computes the class imbalance ratio and a 22-measure average
classification-complexity score on a ratio-preserving sample, ranks features
by mutual information with the label, renders reports and plots, and ships a
queryable catalogue of 32 open industrial traffic datasets with their Cyber
Kill Chain attack mapping.
"""

__version__ = "0.1.0"

from .catalog import (
    AttackSubheading,
    Catalog,
    CkcStep,
    DatasetRecord,
    QueryFilter,
    load_catalog,
    query_datasets,
    summary_stats,
)
from .complexity import (
    ComplexityConfig,
    ComplexityReport,
    MeasureId,
    complexity_report,
    compute_measure,
    standardize,
)
from .errors import OtdpError
from .features import (
    FeatureScore,
    FeatureSelectionConfig,
    mutual_information,
    rank_features,
    select_top_m,
)
from .ingest import (
    LabelSpec,
    RawTable,
    check_ml_ready,
    infer_schema,
    parse_arff,
    parse_csv,
)
from .pipeline import RunConfig, run_analyze
from .preprocess import (
    ImbalanceStat,
    LabeledMatrix,
    SamplingConfig,
    binarize_labels,
    clean,
    imbalance_ratio,
    one_hot_encode,
    stratified_sample,
)
from .report import AnalysisBundle, emit_feature_plots, emit_importance_chart, emit_stats_row

__all__ = [
    "AnalysisBundle",
    "AttackSubheading",
    "Catalog",
    "CkcStep",
    "ComplexityConfig",
    "ComplexityReport",
    "DatasetRecord",
    "FeatureScore",
    "FeatureSelectionConfig",
    "ImbalanceStat",
    "LabelSpec",
    "LabeledMatrix",
    "MeasureId",
    "OtdpError",
    "QueryFilter",
    "RawTable",
    "RunConfig",
    "SamplingConfig",
    "binarize_labels",
    "check_ml_ready",
    "clean",
    "complexity_report",
    "compute_measure",
    "emit_feature_plots",
    "emit_importance_chart",
    "emit_stats_row",
    "imbalance_ratio",
    "infer_schema",
    "load_catalog",
    "mutual_information",
    "one_hot_encode",
    "parse_arff",
    "parse_csv",
    "query_datasets",
    "rank_features",
    "run_analyze",
    "select_top_m",
    "standardize",
    "stratified_sample",
    "summary_stats",
    "__version__",
]
