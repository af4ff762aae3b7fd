import numpy as np
import pytest

from conftest import gaussian_blobs
from otdp.complexity import (
    ComplexityConfig,
    MeasureId,
    canonicalize,
    complexity_report,
)
from otdp.errors import SingleClassError


def test_far_separated_blobs_score_low():
    X, y = gaussian_blobs(10.0, n=200, d=2, seed=42)
    report = complexity_report(X, y)
    assert report.cs < 0.25


def test_random_labels_score_higher_than_separable():
    X_easy, y_easy = gaussian_blobs(10.0, n=200, d=2, seed=42)
    easy = complexity_report(X_easy, y_easy)
    rng = np.random.default_rng(42)
    X_hard = rng.normal(size=(200, 2))
    y_hard = np.array([0, 1] * 100)
    hard = complexity_report(X_hard, y_hard)
    assert hard.cs > easy.cs


def test_measures_plus_skipped_is_22():
    X, y = gaussian_blobs(3.0, n=60, seed=1)
    report = complexity_report(X, y)
    assert len(report.measures) + len(report.skipped) == 22
    assert 0.0 <= report.cs <= 1.0


def test_cs_is_mean_of_normalized_values():
    X, y = gaussian_blobs(2.0, n=60, seed=2)
    report = complexity_report(X, y)
    assert report.cs == pytest.approx(
        float(np.mean([mv.normalized for mv in report.measures])), abs=1e-15
    )


def test_row_permutation_invariance_bitwise():
    X, y = gaussian_blobs(1.5, n=80, d=4, seed=3)
    base = complexity_report(X, y)
    rng = np.random.default_rng(0)
    for _ in range(3):
        perm = rng.permutation(len(y))
        report = complexity_report(X[perm], y[perm])
        assert report.cs == base.cs  # bitwise
        for a, b in zip(base.measures, report.measures):
            assert a.normalized == b.normalized, a.id


def test_column_permutation_invariance_bitwise():
    X, y = gaussian_blobs(1.5, n=80, d=4, seed=4)
    base = complexity_report(X, y)
    rng = np.random.default_rng(1)
    for _ in range(3):
        perm = rng.permutation(X.shape[1])
        report = complexity_report(X[:, perm], y)
        assert report.cs == base.cs
        for a, b in zip(base.measures, report.measures):
            assert a.normalized == b.normalized, a.id


def test_canonicalize_is_idempotent_and_order_free():
    X, y = gaussian_blobs(1.0, n=30, d=3, seed=5)
    Xc, yc = canonicalize(X, y)
    rng = np.random.default_rng(2)
    rows = rng.permutation(len(y))
    cols = rng.permutation(X.shape[1])
    Xc2, yc2 = canonicalize(X[rows][:, cols], y[rows])
    assert np.array_equal(Xc, Xc2)
    assert np.array_equal(yc, yc2)
    Xc3, yc3 = canonicalize(Xc, yc)
    assert np.array_equal(Xc, Xc3)


def test_selection_restricts_columns():
    X, y = gaussian_blobs(6.0, n=60, d=4, seed=6)
    full = complexity_report(X, y)
    selected = complexity_report(X, y, selection=[0, 1])
    assert selected.m_used == 2
    assert full.m_used == 4
    t2 = selected.measure(MeasureId.T2)
    assert t2.normalized == 2 / 60


def test_report_metadata_fields():
    X, y = gaussian_blobs(4.0, n=60, seed=7)
    report = complexity_report(
        X, y, config=ComplexityConfig(seed=77), k_used=60, m_used=2
    )
    assert report.seed == 77
    assert report.k_used == 60
    assert report.m_used == 2
    assert report.ir.ir == 1.0


def test_low_confidence_flag_follows_skip_count():
    X, y = gaussian_blobs(3.0, n=60, seed=8)
    report = complexity_report(X, y)
    assert report.low_confidence == (len(report.skipped) > 6)


def test_single_class_rejected():
    X = np.zeros((10, 2))
    with pytest.raises(SingleClassError):
        complexity_report(X, np.ones(10, dtype=int))


def test_low_complexity_regime_scores_low():
    # Balanced, strongly separated, highly redundant features: the regime
    # where per-file scores land below 0.1-ish.
    rng = np.random.default_rng(0)
    n = 400
    y = np.array([0, 1] * (n // 2))
    base = np.where(y == 1, 120.0, 60.0) + rng.normal(0, 6, n)
    X = np.column_stack([base + rng.normal(0, 4, n) for _ in range(10)])
    report = complexity_report(X, y)
    assert report.cs < 0.15
    assert report.ir.ir == 1.0


def test_strictly_decreasing_cs_with_separation():
    previous = None
    for separation in (0.0, 1.0, 2.0, 4.0):
        X, y = gaussian_blobs(separation, n=200, d=2, seed=42)
        report = complexity_report(X, y)
        if previous is not None:
            assert report.cs < previous, f"separation {separation}"
        previous = report.cs
