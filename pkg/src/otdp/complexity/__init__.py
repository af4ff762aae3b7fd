"""Classification-complexity measures and the averaged complexity score."""

from .graph import (
    NeighborGraph,
    build_neighbor_graph,
    distance_matrix,
    minimum_spanning_tree,
    prune_cross_class,
)
from .linear import Hyperplane, LinearClassifierConfig, train_linear_classifier
from .measures import (
    FAMILIES,
    MEASURE_BY_ID,
    REGISTRY,
    MeasureContext,
    MeasureId,
    MeasureInfo,
    MeasureSkip,
    MeasureValue,
)
from .report import (
    ComplexityConfig,
    ComplexityReport,
    canonicalize,
    complexity_report,
    compute_measure,
    standardize,
)

__all__ = [
    "FAMILIES",
    "MEASURE_BY_ID",
    "REGISTRY",
    "ComplexityConfig",
    "ComplexityReport",
    "Hyperplane",
    "LinearClassifierConfig",
    "MeasureContext",
    "MeasureId",
    "MeasureInfo",
    "MeasureSkip",
    "MeasureValue",
    "NeighborGraph",
    "build_neighbor_graph",
    "canonicalize",
    "complexity_report",
    "compute_measure",
    "distance_matrix",
    "minimum_spanning_tree",
    "prune_cross_class",
    "standardize",
    "train_linear_classifier",
]
