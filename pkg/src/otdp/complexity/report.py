"""Complexity scoring: run all 22 measures and average their normalized values.

The score is computed on a canonicalised copy of the data (columns ordered by
their value multisets, rows lexicographically), which makes it exactly
invariant - bit for bit - under row and column permutations of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import SingleClassError
from ..preprocess import ImbalanceStat, imbalance_ratio
from .linear import LinearClassifierConfig
from .measures import (
    MEASURE_BY_ID,
    REGISTRY,
    MeasureContext,
    MeasureId,
    MeasureSkip,
    MeasureValue,
)


@dataclass(frozen=True)
class ComplexityConfig:
    seed: int = 42
    #: network-measure graph connects pairs within this share of the largest
    #: pairwise distance
    epsilon_scale: float = 0.15
    classifier: LinearClassifierConfig = LinearClassifierConfig()
    pca_variance: float = 0.95
    #: more skipped measures than this flags the report as low-confidence
    max_skips: int = 6


@dataclass
class ComplexityReport:
    measures: tuple[MeasureValue, ...]
    skipped: tuple[tuple[MeasureId, str], ...]
    cs: float
    ir: ImbalanceStat
    k_used: int
    m_used: int
    seed: int
    low_confidence: bool = field(default=False)

    def measure(self, mid: MeasureId) -> MeasureValue | None:
        for mv in self.measures:
            if mv.id == mid:
                return mv
        return None


def standardize(X: np.ndarray) -> np.ndarray:
    """Zero mean, unit (population) variance per column; constant columns
    map to all-zeros."""
    X = np.asarray(X, dtype=np.float64)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    safe = np.where(std > 0, std, 1.0)
    out = (X - mean) / safe
    out[:, std == 0] = 0.0
    return out


def canonicalize(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reorder columns and rows into a content-determined canonical order.

    Columns sort by the multiset of their (value, label) pairs - a key that
    does not depend on the incoming row order - then rows sort
    lexicographically by (label, canonical columns), and columns are finally
    re-sorted by their literal value sequences to pin down exact duplicates.
    Any row/column permutation of the same data canonicalises to the same
    arrays, which is what makes downstream floating-point reductions
    permutation-invariant to the bit.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    n, d = X.shape

    col_keys = [tuple(sorted(zip(X[:, j].tolist(), y.tolist()))) for j in range(d)]
    col_order = sorted(range(d), key=lambda j: col_keys[j])
    X = X[:, col_order]

    def row_sort(matrix: np.ndarray, labels: np.ndarray) -> np.ndarray:
        keys = tuple(matrix[:, j] for j in range(matrix.shape[1] - 1, -1, -1)) + (labels,)
        return np.lexsort(keys)

    order = row_sort(X, y)
    X, y = X[order], y[order]

    col_order2 = sorted(range(d), key=lambda j: tuple(X[:, j].tolist()))
    if col_order2 != list(range(d)):
        X = X[:, col_order2]
        order = row_sort(X, y)
        X, y = X[order], y[order]
    return np.ascontiguousarray(X), y


def compute_measure(
    X: np.ndarray,
    y: np.ndarray,
    measure_id: MeasureId,
    config: ComplexityConfig = ComplexityConfig(),
) -> MeasureValue:
    """One measure on standardized data (raises MeasureSkip when undefined)."""
    ctx = _context(X, y, config)
    return MEASURE_BY_ID[measure_id].compute(ctx)


def _context(X: np.ndarray, y: np.ndarray, config: ComplexityConfig) -> MeasureContext:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("X and y do not align")
    if X.shape[0] < 4:
        raise ValueError("complexity measures need at least 4 points")
    if (y == y[0]).all():
        raise SingleClassError("complexity measures need both classes present")
    return MeasureContext(
        X,
        y,
        seed=config.seed,
        epsilon_scale=config.epsilon_scale,
        classifier=config.classifier,
        pca_variance=config.pca_variance,
    )


def complexity_report(
    X: np.ndarray,
    y: np.ndarray,
    selection: Sequence[int] | None = None,
    config: ComplexityConfig = ComplexityConfig(),
    ir: ImbalanceStat | None = None,
    k_used: int | None = None,
    m_used: int | None = None,
) -> ComplexityReport:
    """Evaluate all 22 measures and average the normalized values.

    `selection` restricts X to the given feature columns first.  The data is
    canonicalised and standardized internally.  Measures that are undefined
    for this instance are listed in `skipped` with a reason; more than
    `config.max_skips` of them flags the report as low-confidence.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if selection is not None:
        X = X[:, list(selection)]
    Xc, yc = canonicalize(X, y)
    Xs = standardize(Xc)
    ctx = _context(Xs, yc, config)

    values: list[MeasureValue] = []
    skipped: list[tuple[MeasureId, str]] = []
    for info in REGISTRY:
        try:
            values.append(info.compute(ctx))
        except MeasureSkip as skip:
            skipped.append((info.id, skip.reason))
    if not values:
        raise SingleClassError("every complexity measure was skipped")
    cs = float(np.mean([mv.normalized for mv in values]))
    return ComplexityReport(
        measures=tuple(values),
        skipped=tuple(skipped),
        cs=cs,
        ir=ir if ir is not None else imbalance_ratio(yc),
        k_used=k_used if k_used is not None else int(X.shape[0]),
        m_used=m_used if m_used is not None else int(X.shape[1]),
        seed=config.seed,
        low_confidence=len(skipped) > config.max_skips,
    )
