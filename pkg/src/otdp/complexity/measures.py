"""The 22 classification-complexity measures and their shared context.

Six families: feature-based (F1, F1v, F2, F3, F4), linearity (L1, L2, L3),
neighbourhood (N1, N2, N3, N4, T1, LSC), network (Density, ClsCoef, Hubs),
dimensionality (T2, T3, T4), and class imbalance (C1, C2).

Every measure returns a raw value plus a normalized value in [0, 1] where 1
is most complex; measures whose raw value shrinks with complexity are
inverted by a fixed monotone map, documented per measure in
docs/measures.md.  A measure that is undefined for the given data raises
MeasureSkip with a reason instead of producing NaN.

Inputs are assumed standardized (see `otdp.complexity.report.standardize`);
distances are Euclidean over those standardized features.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable

import numpy as np

from ..rng import derive_stream
from .graph import build_neighbor_graph, distance_matrix, minimum_spanning_tree, prune_cross_class
from .linear import Hyperplane, LinearClassifierConfig, train_linear_classifier

_SYNTH_TAGS = {"L3": 0x4C33, "N4": 0x4E34}


class MeasureId(Enum):
    F1 = "F1"
    F1V = "F1v"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    N1 = "N1"
    N2 = "N2"
    N3 = "N3"
    N4 = "N4"
    T1 = "T1"
    LSC = "LSC"
    DENSITY = "Density"
    CLS_COEF = "ClsCoef"
    HUBS = "Hubs"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    C1 = "C1"
    C2 = "C2"


FAMILIES: dict[MeasureId, str] = {
    MeasureId.F1: "feature-based",
    MeasureId.F1V: "feature-based",
    MeasureId.F2: "feature-based",
    MeasureId.F3: "feature-based",
    MeasureId.F4: "feature-based",
    MeasureId.L1: "linearity",
    MeasureId.L2: "linearity",
    MeasureId.L3: "linearity",
    MeasureId.N1: "neighbourhood",
    MeasureId.N2: "neighbourhood",
    MeasureId.N3: "neighbourhood",
    MeasureId.N4: "neighbourhood",
    MeasureId.T1: "neighbourhood",
    MeasureId.LSC: "neighbourhood",
    MeasureId.DENSITY: "network",
    MeasureId.CLS_COEF: "network",
    MeasureId.HUBS: "network",
    MeasureId.T2: "dimensionality",
    MeasureId.T3: "dimensionality",
    MeasureId.T4: "dimensionality",
    MeasureId.C1: "class-imbalance",
    MeasureId.C2: "class-imbalance",
}


@dataclass(frozen=True)
class MeasureValue:
    id: MeasureId
    raw: float
    normalized: float


class MeasureSkip(Exception):
    """Measure undefined for this data; carries the reason."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


def _value(mid: MeasureId, raw: float, normalized: float) -> MeasureValue:
    return MeasureValue(mid, float(raw), float(min(1.0, max(0.0, normalized))))


class MeasureContext:
    """Shared, lazily computed intermediates for one (X, y) instance.

    X must already be standardized; rows and columns are used in the order
    given, so callers wanting permutation-invariant results canonicalize
    first (the report path does).
    """

    def __init__(
        self,
        X: np.ndarray,
        y: np.ndarray,
        seed: int = 42,
        epsilon_scale: float = 0.15,
        classifier: LinearClassifierConfig = LinearClassifierConfig(),
        pca_variance: float = 0.95,
    ):
        self.X = np.asarray(X, dtype=np.float64)
        self.y = np.asarray(y)
        self.seed = seed
        self.epsilon_scale = epsilon_scale
        self.classifier_config = classifier
        self.pca_variance = pca_variance
        self.n, self.d = self.X.shape

    @cached_property
    def class_indices(self) -> tuple[np.ndarray, np.ndarray]:
        return np.flatnonzero(self.y == 0), np.flatnonzero(self.y == 1)

    @cached_property
    def distances(self) -> np.ndarray:
        return distance_matrix(self.X)

    @cached_property
    def same_class(self) -> np.ndarray:
        return self.y[:, None] == self.y[None, :]

    @cached_property
    def nearest_enemy_dist(self) -> np.ndarray:
        d = self.distances.copy()
        d[self.same_class] = np.inf
        return d.min(axis=1)

    @cached_property
    def nearest_same_dist(self) -> np.ndarray:
        d = self.distances.copy()
        d[~self.same_class] = np.inf
        np.fill_diagonal(d, np.inf)
        return d.min(axis=1)

    @cached_property
    def mst_edges(self) -> tuple[tuple[int, int], ...]:
        return minimum_spanning_tree(self.distances)

    @cached_property
    def hyperplane(self) -> Hyperplane:
        return train_linear_classifier(self.X, self.y, self.classifier_config)

    @cached_property
    def adjacency(self) -> np.ndarray:
        # Radius graph at epsilon_scale of the largest pairwise distance,
        # cross-class edges removed: the structure the network measures use.
        epsilon = self.epsilon_scale * float(self.distances.max())
        graph = build_neighbor_graph(distances=self.distances, epsilon=epsilon)
        return prune_cross_class(graph, self.y)

    @cached_property
    def pca_dims(self) -> int:
        cov = (self.X.T @ self.X) / self.n
        eigvals = np.linalg.eigvalsh(cov)[::-1]
        eigvals = np.maximum(eigvals, 0.0)
        total = eigvals.sum()
        if total <= 0.0:
            return 0
        cumulative = np.cumsum(eigvals) / total
        return int(np.searchsorted(cumulative, self.pca_variance - 1e-12) + 1)

    def synthetic(self, tag: str) -> tuple[np.ndarray, np.ndarray]:
        """Midpoints of seeded same-class pairs, one per original point."""
        rng = derive_stream(self.seed, _SYNTH_TAGS[tag])
        points = []
        labels = []
        for cls, idx in zip((0, 1), self.class_indices):
            count = idx.size
            for _ in range(count):
                a = idx[rng.below(count)]
                b = idx[rng.below(count)]
                points.append((self.X[a] + self.X[b]) / 2.0)
                labels.append(cls)
        return np.asarray(points), np.asarray(labels, dtype=np.int8)


# -- feature-based ----------------------------------------------------------


def measure_f1(ctx: MeasureContext) -> MeasureValue:
    """Maximum Fisher's discriminant ratio over individual features."""
    mu = ctx.X.mean(axis=0)
    num = np.zeros(ctx.d)
    den = np.zeros(ctx.d)
    for idx in ctx.class_indices:
        Xc = ctx.X[idx]
        mu_c = Xc.mean(axis=0)
        num += idx.size * (mu_c - mu) ** 2
        den += ((Xc - mu_c) ** 2).sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / den
    r[(num == 0) & (den == 0)] = 0.0
    r[(num > 0) & (den == 0)] = np.inf
    raw = float(r.max())
    return _value(MeasureId.F1, raw, 1.0 / (1.0 + raw))


def measure_f1v(ctx: MeasureContext) -> MeasureValue:
    """Fisher's ratio along the best discriminant direction."""
    idx0, idx1 = ctx.class_indices
    X0, X1 = ctx.X[idx0], ctx.X[idx1]
    mu0, mu1 = X0.mean(axis=0), X1.mean(axis=0)
    delta = mu0 - mu1
    s0 = (X0 - mu0).T @ (X0 - mu0) / idx0.size
    s1 = (X1 - mu1).T @ (X1 - mu1) / idx1.size
    within = (idx0.size * s0 + idx1.size * s1) / ctx.n
    if np.linalg.matrix_rank(within) < ctx.d:
        raise MeasureSkip("rank-deficient within-class scatter")
    direction_fit = float(delta @ np.linalg.solve(within, delta))
    raw = max(direction_fit, 0.0)
    return _value(MeasureId.F1V, raw, 1.0 / (1.0 + raw))


def _class_ranges(ctx: MeasureContext) -> tuple[np.ndarray, ...]:
    idx0, idx1 = ctx.class_indices
    min0, max0 = ctx.X[idx0].min(axis=0), ctx.X[idx0].max(axis=0)
    min1, max1 = ctx.X[idx1].min(axis=0), ctx.X[idx1].max(axis=0)
    overlap_lo = np.maximum(min0, min1)
    overlap_hi = np.minimum(max0, max1)
    full_lo = np.minimum(min0, min1)
    full_hi = np.maximum(max0, max1)
    return overlap_lo, overlap_hi, full_lo, full_hi


def measure_f2(ctx: MeasureContext) -> MeasureValue:
    """Volume of the per-feature class-range overlap (product of ratios)."""
    overlap_lo, overlap_hi, full_lo, full_hi = _class_ranges(ctx)
    span = full_hi - full_lo
    overlap = np.maximum(0.0, overlap_hi - overlap_lo)
    # A feature that is constant everywhere separates nothing: neutral factor.
    factors = np.where(span > 0, np.divide(overlap, np.where(span > 0, span, 1.0)), 1.0)
    raw = float(np.prod(factors))
    return _value(MeasureId.F2, raw, raw)


def measure_f3(ctx: MeasureContext) -> MeasureValue:
    """Smallest fraction of points any single feature leaves in the overlap."""
    overlap_lo, overlap_hi, _, _ = _class_ranges(ctx)
    best = 1.0
    for j in range(ctx.d):
        if overlap_lo[j] > overlap_hi[j]:
            count = 0
        else:
            col = ctx.X[:, j]
            count = int(((col >= overlap_lo[j]) & (col <= overlap_hi[j])).sum())
        best = min(best, count / ctx.n)
    return _value(MeasureId.F3, best, best)


def measure_f4(ctx: MeasureContext) -> MeasureValue:
    """Fraction of points no greedy sequence of features can disambiguate."""
    remaining = np.arange(ctx.n)
    features = list(range(ctx.d))
    while features and remaining.size:
        sub = ctx.X[remaining]
        ysub = ctx.y[remaining]
        mask0 = ysub == 0
        mask1 = ysub == 1
        if not mask0.any() or not mask1.any():
            remaining = remaining[:0]
            break
        best_feature = None
        best_count = None
        best_mask = None
        for f in features:
            col = sub[:, f]
            lo = max(col[mask0].min(), col[mask1].min())
            hi = min(col[mask0].max(), col[mask1].max())
            in_overlap = (col >= lo) & (col <= hi) if lo <= hi else np.zeros(col.size, dtype=bool)
            count = int(in_overlap.sum())
            if best_count is None or count < best_count:
                best_feature, best_count, best_mask = f, count, in_overlap
        remaining = remaining[best_mask]
        features.remove(best_feature)
    raw = remaining.size / ctx.n
    return _value(MeasureId.F4, raw, raw)


# -- linearity ---------------------------------------------------------------


def measure_l1(ctx: MeasureContext) -> MeasureValue:
    """Mean distance of misclassified points from the linear hyperplane."""
    hp = ctx.hyperplane
    scores = hp.scores(ctx.X)
    errors = (scores > 0).astype(np.int8) != ctx.y
    if not errors.any():
        return _value(MeasureId.L1, 0.0, 0.0)
    w_norm = float(np.linalg.norm(hp.weights))
    if w_norm < 1e-15:
        raise MeasureSkip("zero-weight hyperplane has no distance scale")
    raw = float(np.abs(scores[errors]).sum() / w_norm / ctx.n)
    return _value(MeasureId.L1, raw, raw / (1.0 + raw))


def measure_l2(ctx: MeasureContext) -> MeasureValue:
    """Training error rate of the linear classifier."""
    raw = ctx.hyperplane.training_error
    return _value(MeasureId.L2, raw, raw)


def measure_l3(ctx: MeasureContext) -> MeasureValue:
    """Linear classifier error on midpoint-interpolated synthetic points."""
    synth, labels = ctx.synthetic("L3")
    predictions = ctx.hyperplane.predict(synth)
    raw = float(np.mean(predictions != labels))
    return _value(MeasureId.L3, raw, raw)


# -- neighbourhood -----------------------------------------------------------


def measure_n1(ctx: MeasureContext) -> MeasureValue:
    """Fraction of points touching a cross-class edge of the MST."""
    borderline: set[int] = set()
    for a, b in ctx.mst_edges:
        if ctx.y[a] != ctx.y[b]:
            borderline.add(a)
            borderline.add(b)
    raw = len(borderline) / ctx.n
    return _value(MeasureId.N1, raw, raw)


def measure_n2(ctx: MeasureContext) -> MeasureValue:
    """Total intra-class vs extra-class nearest-neighbour distance."""
    idx0, idx1 = ctx.class_indices
    if idx0.size < 2 or idx1.size < 2:
        raise MeasureSkip("a class has fewer than 2 points")
    intra = float(ctx.nearest_same_dist.sum())
    extra = float(ctx.nearest_enemy_dist.sum())
    if extra == 0.0:
        if intra == 0.0:
            raise MeasureSkip("all points identical")
        return _value(MeasureId.N2, np.inf, 1.0)
    raw = intra / extra
    return _value(MeasureId.N2, raw, raw / (1.0 + raw))


def measure_n3(ctx: MeasureContext) -> MeasureValue:
    """Leave-one-out error of the 1-nearest-neighbour classifier."""
    d = ctx.distances.copy()
    np.fill_diagonal(d, np.inf)
    nearest = d.argmin(axis=1)
    raw = float(np.mean(ctx.y[nearest] != ctx.y))
    return _value(MeasureId.N3, raw, raw)


def measure_n4(ctx: MeasureContext) -> MeasureValue:
    """1-NN error on midpoint-interpolated synthetic points."""
    synth, labels = ctx.synthetic("N4")
    sq_x = np.sum(ctx.X * ctx.X, axis=1)
    sq_s = np.sum(synth * synth, axis=1)
    d2 = sq_s[:, None] + sq_x[None, :] - 2.0 * (synth @ ctx.X.T)
    nearest = d2.argmin(axis=1)
    raw = float(np.mean(ctx.y[nearest] != labels))
    return _value(MeasureId.N4, raw, raw)


def measure_t1(ctx: MeasureContext) -> MeasureValue:
    """Fraction of enemy-bounded hyperspheres needed to cover the data.

    Each point gets a sphere reaching its nearest enemy; spheres are kept
    greedily by descending radius, each keeper covering every same-class
    centre inside it.  Overlapping classes leave tiny spheres that cover
    nothing but themselves, driving the fraction towards 1.
    """
    radii = ctx.nearest_enemy_dist
    order = sorted(range(ctx.n), key=lambda i: (-radii[i], i))
    covered = np.zeros(ctx.n, dtype=bool)
    kept = 0
    for i in order:
        if covered[i]:
            continue
        kept += 1
        covered |= ctx.same_class[i] & (ctx.distances[i] <= radii[i])
    raw = kept / ctx.n
    return _value(MeasureId.T1, raw, raw)


def measure_lsc(ctx: MeasureContext) -> MeasureValue:
    """Complement of the mean local-set size (same-class points nearer than
    the nearest enemy)."""
    enemy = ctx.nearest_enemy_dist
    counts = (ctx.same_class & (ctx.distances < enemy[:, None])).sum(axis=1)
    raw = 1.0 - float(counts.sum()) / (ctx.n * ctx.n)
    return _value(MeasureId.LSC, raw, raw)


# -- network -----------------------------------------------------------------


def measure_density(ctx: MeasureContext) -> MeasureValue:
    """Complement of edge density in the pruned same-class kNN graph."""
    directed_sum = int(ctx.adjacency.sum())
    density = directed_sum / (ctx.n * (ctx.n - 1))
    return _value(MeasureId.DENSITY, density, 1.0 - density)


def measure_cls_coef(ctx: MeasureContext) -> MeasureValue:
    """Complement of the mean clustering coefficient of the pruned graph."""
    adj = ctx.adjacency
    cc = np.zeros(ctx.n)
    for i in range(ctx.n):
        nbrs = np.flatnonzero(adj[i])
        k = nbrs.size
        if k < 2:
            continue
        links = int(adj[np.ix_(nbrs, nbrs)].sum()) // 2
        cc[i] = 2.0 * links / (k * (k - 1))
    raw = float(cc.mean())
    return _value(MeasureId.CLS_COEF, raw, 1.0 - raw)


def measure_hubs(ctx: MeasureContext) -> MeasureValue:
    """Complement of the mean hub score (eigenvector centrality, scaled so
    the strongest hub is 1) of the pruned graph."""
    adj = ctx.adjacency.astype(np.float64)
    if adj.sum() == 0:
        return _value(MeasureId.HUBS, 0.0, 1.0)
    # Power iteration on A + I: same eigenvectors, strictly dominant
    # eigenvalue, so convergence does not oscillate on bipartite parts.
    shifted = adj + np.eye(ctx.n)
    v = np.full(ctx.n, 1.0 / np.sqrt(ctx.n))
    for _ in range(200):
        v = shifted @ v
        v /= np.linalg.norm(v)
    top = v.max()
    hub = v / top if top > 0 else np.zeros(ctx.n)
    raw = float(hub.mean())
    return _value(MeasureId.HUBS, raw, 1.0 - raw)


# -- dimensionality ----------------------------------------------------------


def measure_t2(ctx: MeasureContext) -> MeasureValue:
    """Features per point."""
    raw = ctx.d / ctx.n
    return _value(MeasureId.T2, raw, min(1.0, raw))


def measure_t3(ctx: MeasureContext) -> MeasureValue:
    """Principal components (95% variance) per point."""
    raw = ctx.pca_dims / ctx.n
    return _value(MeasureId.T3, raw, min(1.0, raw))


def measure_t4(ctx: MeasureContext) -> MeasureValue:
    """Share of the feature count needed for 95% of the variance."""
    raw = ctx.pca_dims / ctx.d
    return _value(MeasureId.T4, raw, raw)


# -- class imbalance ---------------------------------------------------------


def measure_c1(ctx: MeasureContext) -> MeasureValue:
    """Complement of the normalized class-proportion entropy."""
    idx0, idx1 = ctx.class_indices
    p = np.array([idx0.size, idx1.size], dtype=np.float64) / ctx.n
    entropy = float(-(p * np.log2(p)).sum())
    return _value(MeasureId.C1, entropy, 1.0 - entropy)


def measure_c2(ctx: MeasureContext) -> MeasureValue:
    """Rescaled imbalance ratio: 0 when balanced, approaching 1 as one class
    vanishes."""
    idx0, idx1 = ctx.class_indices
    n0, n1 = idx0.size, idx1.size
    raw = 0.5 * (n0 / n1 + n1 / n0)
    return _value(MeasureId.C2, raw, 1.0 - 1.0 / raw)


@dataclass(frozen=True)
class MeasureInfo:
    id: MeasureId
    family: str
    compute: Callable[[MeasureContext], MeasureValue]
    summary: str
    normalization: str


REGISTRY: tuple[MeasureInfo, ...] = (
    MeasureInfo(MeasureId.F1, FAMILIES[MeasureId.F1], measure_f1,
                "maximum Fisher's discriminant ratio over single features",
                "1/(1+raw); raw >= 0, larger raw = easier"),
    MeasureInfo(MeasureId.F1V, FAMILIES[MeasureId.F1V], measure_f1v,
                "Fisher's ratio along the best linear discriminant direction",
                "1/(1+raw); skipped on rank-deficient within-class scatter"),
    MeasureInfo(MeasureId.F2, FAMILIES[MeasureId.F2], measure_f2,
                "volume of the per-feature class-range overlap",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.F3, FAMILIES[MeasureId.F3], measure_f3,
                "smallest per-feature fraction of points inside the overlap",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.F4, FAMILIES[MeasureId.F4], measure_f4,
                "points left ambiguous after greedily consuming all features",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.L1, FAMILIES[MeasureId.L1], measure_l1,
                "mean distance of misclassified points to the linear hyperplane",
                "raw/(1+raw); raw >= 0"),
    MeasureInfo(MeasureId.L2, FAMILIES[MeasureId.L2], measure_l2,
                "training error rate of the linear classifier",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.L3, FAMILIES[MeasureId.L3], measure_l3,
                "linear classifier error on same-class midpoint interpolants",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.N1, FAMILIES[MeasureId.N1], measure_n1,
                "fraction of points on cross-class MST edges",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.N2, FAMILIES[MeasureId.N2], measure_n2,
                "intra-class vs extra-class nearest-neighbour distance ratio",
                "raw/(1+raw); raw >= 0"),
    MeasureInfo(MeasureId.N3, FAMILIES[MeasureId.N3], measure_n3,
                "leave-one-out 1-NN error rate",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.N4, FAMILIES[MeasureId.N4], measure_n4,
                "1-NN error on same-class midpoint interpolants",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.T1, FAMILIES[MeasureId.T1], measure_t1,
                "surviving enemy-bounded hyperspheres after absorption",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.LSC, FAMILIES[MeasureId.LSC], measure_lsc,
                "complement of the mean local-set cardinality",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.DENSITY, FAMILIES[MeasureId.DENSITY], measure_density,
                "edge density of the same-class kNN graph",
                "1 - raw; raw is graph density in [0,1]"),
    MeasureInfo(MeasureId.CLS_COEF, FAMILIES[MeasureId.CLS_COEF], measure_cls_coef,
                "mean clustering coefficient of the same-class kNN graph",
                "1 - raw; raw in [0,1]"),
    MeasureInfo(MeasureId.HUBS, FAMILIES[MeasureId.HUBS], measure_hubs,
                "mean hub score of the same-class kNN graph",
                "1 - raw; raw in [0,1]"),
    MeasureInfo(MeasureId.T2, FAMILIES[MeasureId.T2], measure_t2,
                "features per data point",
                "min(1, raw)"),
    MeasureInfo(MeasureId.T3, FAMILIES[MeasureId.T3], measure_t3,
                "principal components (95% variance) per data point",
                "min(1, raw)"),
    MeasureInfo(MeasureId.T4, FAMILIES[MeasureId.T4], measure_t4,
                "share of features needed for 95% of the variance",
                "identity; raw already in [0,1]"),
    MeasureInfo(MeasureId.C1, FAMILIES[MeasureId.C1], measure_c1,
                "class-proportion entropy",
                "1 - raw; raw is normalized entropy in [0,1]"),
    MeasureInfo(MeasureId.C2, FAMILIES[MeasureId.C2], measure_c2,
                "symmetrised class-count ratio",
                "1 - 1/raw; raw >= 1"),
)

MEASURE_BY_ID: dict[MeasureId, MeasureInfo] = {info.id: info for info in REGISTRY}

assert len(REGISTRY) == 22
