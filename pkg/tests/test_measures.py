import math

import numpy as np
import pytest

from conftest import gaussian_blobs
from otdp.complexity import (
    FAMILIES,
    REGISTRY,
    MeasureContext,
    MeasureId,
    MeasureSkip,
    compute_measure,
    standardize,
)

BALANCED_XY = lambda seed=0, n=40, d=3: (  # noqa: E731
    standardize(np.random.default_rng(seed).normal(size=(n, d))),
    np.array([0, 1] * (n // 2)),
)


def test_registry_covers_22_measures_and_six_families():
    assert len(REGISTRY) == 22
    assert len({info.id for info in REGISTRY}) == 22
    by_family = {}
    for info in REGISTRY:
        by_family.setdefault(info.family, []).append(info.id)
    assert {f: len(ids) for f, ids in by_family.items()} == {
        "feature-based": 5,
        "linearity": 3,
        "neighbourhood": 6,
        "network": 3,
        "dimensionality": 3,
        "class-imbalance": 2,
    }
    assert set(FAMILIES) == {info.id for info in REGISTRY}


def test_standardize_closed_form():
    out = standardize(np.array([[1.0], [2.0], [3.0]]))
    assert out.ravel() == pytest.approx([-1.2247, 0.0, 1.2247], abs=1e-4)


def test_standardize_constant_column():
    assert standardize(np.array([[5.0], [5.0]])).tolist() == [[0.0], [0.0]]


def test_standardize_random_moments():
    rng = np.random.default_rng(0)
    X = standardize(rng.normal(3.0, 2.5, size=(50, 4)))
    assert np.abs(X.mean(axis=0)).max() < 1e-12
    assert np.abs(X.var(axis=0) - 1.0).max() < 1e-9


def test_f2_zero_when_ranges_disjoint():
    X = standardize(np.array([[0.0], [1.0], [5.0], [6.0]]))
    y = np.array([0, 0, 1, 1])
    assert compute_measure(X, y, MeasureId.F2).normalized == 0.0


def test_f2_one_when_distributions_identical():
    X = standardize(np.array([[0.0, 2.0], [1.0, 3.0], [0.0, 2.0], [1.0, 3.0]]))
    y = np.array([0, 0, 1, 1])
    assert compute_measure(X, y, MeasureId.F2).normalized == 1.0


def test_c1_c2_zero_on_balanced_labels():
    X, y = BALANCED_XY()
    # Closed-form oracle: entropy of (1/2, 1/2) is exactly 1 bit.
    entropy = -sum(p * math.log2(p) for p in (0.5, 0.5))
    assert entropy == 1.0
    assert compute_measure(X, y, MeasureId.C1).normalized == 0.0
    assert compute_measure(X, y, MeasureId.C2).normalized == 0.0


def test_c1_c2_grow_with_imbalance():
    rng = np.random.default_rng(4)
    X = standardize(rng.normal(size=(50, 2)))
    y = np.array([0] * 45 + [1] * 5)
    c1 = compute_measure(X, y, MeasureId.C1).normalized
    c2 = compute_measure(X, y, MeasureId.C2).normalized
    oracle_entropy = -(0.9 * math.log2(0.9) + 0.1 * math.log2(0.1))
    assert c1 == pytest.approx(1 - oracle_entropy, abs=1e-12)
    oracle_ratio = 0.5 * (45 / 5 + 5 / 45)
    assert c2 == pytest.approx(1 - 1 / oracle_ratio, abs=1e-12)


def test_t2_exact_ratio():
    X, y = BALANCED_XY(n=40, d=3)
    assert compute_measure(X, y, MeasureId.T2).normalized == 3 / 40


def test_t3_t4_pca_dimension():
    rng = np.random.default_rng(1)
    base = rng.normal(size=(60, 1))
    X = standardize(np.hstack([base, base + rng.normal(scale=1e-6, size=(60, 1))]))
    y = np.array([0, 1] * 30)
    # Two near-identical columns: one component explains ~everything.
    assert compute_measure(X, y, MeasureId.T3).normalized == pytest.approx(1 / 60)
    assert compute_measure(X, y, MeasureId.T4).normalized == pytest.approx(0.5)


def test_n1_half_on_two_cluster_fixture():
    X = standardize(np.array([[0.0], [1.0], [10.0], [11.0]]))
    y = np.array([0, 0, 1, 1])
    assert compute_measure(X, y, MeasureId.N1).normalized == 0.5


def test_n2_low_for_separated_clusters():
    X, y = map(np.asarray, gaussian_blobs(8.0, n=60, seed=2))
    value = compute_measure(standardize(X), y, MeasureId.N2).normalized
    assert value < 0.2


def test_n3_zero_for_separated_clusters():
    X, y = gaussian_blobs(8.0, n=60, seed=3)
    assert compute_measure(standardize(X), y, MeasureId.N3).normalized == 0.0


def test_t1_low_for_separated_high_for_mixed():
    X_easy, y_easy = gaussian_blobs(10.0, n=80, seed=5)
    easy = compute_measure(standardize(X_easy), y_easy, MeasureId.T1).normalized
    X_hard, y_hard = gaussian_blobs(0.0, n=80, seed=5)
    hard = compute_measure(standardize(X_hard), y_hard, MeasureId.T1).normalized
    assert easy < 0.2
    assert hard > 0.6


def test_lsc_floor_for_balanced_separated():
    # 1-D separation far beyond the cluster diameter: every local set holds
    # the whole class, the measure's floor of 0.5 for balanced labels.
    X, y = gaussian_blobs(50.0, n=80, d=1, seed=6)
    value = compute_measure(standardize(X), y, MeasureId.LSC).normalized
    assert value == pytest.approx(0.5, abs=1e-12)
    # overlap truncates local sets and lifts the value
    X2, y2 = gaussian_blobs(0.5, n=80, d=1, seed=6)
    assert compute_measure(standardize(X2), y2, MeasureId.LSC).normalized > 0.5


def test_f1v_skips_on_rank_deficient_scatter():
    # Two identical columns: within-class scatter is singular.
    base = np.array([[0.0], [1.0], [2.0], [3.0]])
    X = np.hstack([base, base])
    y = np.array([0, 0, 1, 1])
    with pytest.raises(MeasureSkip, match="rank-deficient"):
        compute_measure(standardize(X), y, MeasureId.F1V)


def test_l1_zero_on_separable():
    X, y = gaussian_blobs(10.0, n=60, seed=7)
    mv = compute_measure(standardize(X), y, MeasureId.L1)
    assert mv.normalized == 0.0
    assert compute_measure(standardize(X), y, MeasureId.L2).normalized == 0.0


def test_network_measures_empty_graph_is_max_complexity():
    # Two interleaved points per class, all nearest pairs cross-class and
    # epsilon tiny relative to the span: the pruned graph loses every edge.
    X = standardize(np.array([[0.0], [0.001], [100.0], [100.001]]))
    y = np.array([0, 1, 0, 1])
    ctx = MeasureContext(X, y, epsilon_scale=1e-6)
    from otdp.complexity.measures import measure_cls_coef, measure_density, measure_hubs

    assert measure_density(ctx).normalized == 1.0
    assert measure_cls_coef(ctx).normalized == 1.0
    assert measure_hubs(ctx).normalized == 1.0


def test_duplicating_points_leaves_f2_c1_c2_unchanged():
    X, y = gaussian_blobs(2.0, n=40, seed=8)
    Xs = standardize(X)
    X2 = np.vstack([Xs, Xs])
    y2 = np.concatenate([y, y])
    for mid in (MeasureId.F2, MeasureId.C1, MeasureId.C2):
        one = compute_measure(Xs, y, mid)
        two = compute_measure(X2, y2, mid)
        assert one.normalized == pytest.approx(two.normalized, abs=1e-12), mid


def test_feature_based_raws_ignore_duplicated_minority():
    # Same feature distribution, different class multiplicity: F2 fixed,
    # C1/C2 move (imbalance and geometry decouple).
    X = standardize(np.array([[0.0], [1.0], [2.0], [0.5], [1.5], [2.5]]))
    y_balanced = np.array([0, 0, 0, 1, 1, 1])
    X_dup = np.vstack([X, X[y_balanced == 1]])
    y_dup = np.concatenate([y_balanced, np.ones(3, dtype=int)])
    f2_a = compute_measure(X, y_balanced, MeasureId.F2).raw
    f2_b = compute_measure(X_dup, y_dup, MeasureId.F2).raw
    assert f2_a == pytest.approx(f2_b, abs=1e-12)
    c2_a = compute_measure(X, y_balanced, MeasureId.C2).normalized
    c2_b = compute_measure(X_dup, y_dup, MeasureId.C2).normalized
    assert c2_b > c2_a


@pytest.mark.parametrize("info", REGISTRY, ids=lambda i: i.id.value)
def test_every_measure_normalized_in_unit_interval(info):
    for seed in range(4):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(12, 60)) * 2
        d = int(rng.integers(1, 6))
        X = standardize(rng.normal(size=(n, d)))
        y = np.array([0, 1] * (n // 2))
        ctx = MeasureContext(X, y, seed=seed)
        try:
            mv = info.compute(ctx)
        except MeasureSkip:
            continue
        assert 0.0 <= mv.normalized <= 1.0, (info.id, seed)


def test_measure_preconditions():
    with pytest.raises(ValueError, match="at least 4"):
        compute_measure(np.zeros((3, 1)), np.array([0, 1, 0]), MeasureId.F1)
    from otdp.errors import SingleClassError

    with pytest.raises(SingleClassError):
        compute_measure(np.zeros((6, 1)), np.ones(6, dtype=int), MeasureId.F1)
