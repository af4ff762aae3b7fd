"""Mutual-information feature scoring against the binary label.

The estimator is the plug-in (histogram) estimate in bits: continuous
features are discretised first (equal-frequency by default), anything with
few distinct values is used as-is, and MI is summed over the joint cell
frequencies with the 0*log(0) = 0 convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import SingleClassError
from .preprocess import LabeledMatrix

BinningMode = Literal["equal-frequency", "equal-width"]


@dataclass(frozen=True)
class FeatureSelectionConfig:
    m: int = 10
    bins: int = 10
    binning: BinningMode = "equal-frequency"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if self.binning not in ("equal-frequency", "equal-width"):
            raise ValueError(f"unknown binning mode {self.binning!r}")


@dataclass(frozen=True)
class FeatureScore:
    feature_index: int
    feature_name: str
    mi_bits: float


def equal_frequency_edges(values: np.ndarray, bins: int) -> np.ndarray:
    """Bin edges at midpoints between the order statistics around each
    quantile cut; duplicate edges (heavy ties) are merged."""
    v = np.sort(values)
    n = v.size
    edges = []
    for k in range(1, bins):
        pos = k * n / bins
        left = v[int(np.ceil(pos)) - 1]
        right = v[min(int(np.ceil(pos)), n - 1)] if pos != int(pos) else v[int(pos)]
        edges.append((left + right) / 2.0)
    return np.unique(np.asarray(edges, dtype=np.float64))


def equal_width_edges(values: np.ndarray, bins: int) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return np.empty(0, dtype=np.float64)
    return np.unique(np.linspace(lo, hi, bins + 1)[1:-1])


def discretize(x: np.ndarray, config: FeatureSelectionConfig = FeatureSelectionConfig()) -> np.ndarray:
    """Integer cell codes for one feature.

    Features with at most `bins` distinct values (indicators, encoded
    categoricals, small integer counts) are used as-is; anything else is
    binned per the configured mode.
    """
    x = np.asarray(x, dtype=np.float64)
    distinct = np.unique(x)
    if distinct.size <= config.bins:
        return np.searchsorted(distinct, x)
    if config.binning == "equal-frequency":
        edges = equal_frequency_edges(x, config.bins)
    else:
        edges = equal_width_edges(x, config.bins)
    return np.searchsorted(edges, x, side="right")


def mutual_information(
    x: np.ndarray,
    y: np.ndarray,
    config: FeatureSelectionConfig = FeatureSelectionConfig(),
) -> float:
    """Plug-in MI between one feature and the binary label, in bits.

    A constant feature scores exactly 0.0.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    if x.shape[0] != y.shape[0]:
        raise ValueError("feature and label lengths differ")
    if x.shape[0] < 4:
        raise ValueError("mutual information needs at least 4 points")
    if (y == y[0]).all():
        raise SingleClassError("mutual information needs both classes present")
    if (x == x[0]).all():
        return 0.0
    codes = discretize(x, config)
    n = x.shape[0]
    n_cells = int(codes.max()) + 1
    joint = np.zeros((n_cells, 2), dtype=np.float64)
    np.add.at(joint, (codes, y.astype(np.intp)), 1.0)
    pxy = joint / n
    px = pxy.sum(axis=1, keepdims=True)
    py = pxy.sum(axis=0, keepdims=True)
    nz = pxy > 0
    mi = float(np.sum(pxy[nz] * np.log2(pxy[nz] / (px @ py)[nz])))
    return max(mi, 0.0)


def rank_features(
    matrix: LabeledMatrix,
    config: FeatureSelectionConfig = FeatureSelectionConfig(),
) -> tuple[FeatureScore, ...]:
    """Score every column and sort by MI descending, ties by column index."""
    scores = [
        FeatureScore(j, matrix.feature_names[j], mutual_information(matrix.X[:, j], matrix.y, config))
        for j in range(matrix.n_features)
    ]
    scores.sort(key=lambda s: (-s.mi_bits, s.feature_index))
    return tuple(scores)


def select_top_m(scores: Sequence[FeatureScore], m: int) -> tuple[int, ...]:
    """First min(m, len) feature indices of the ranking, in rank order."""
    if not scores:
        raise ValueError("empty ranking")
    return tuple(s.feature_index for s in scores[: min(m, len(scores))])
