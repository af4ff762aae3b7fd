"""Distance-based structure: pairwise distances, kNN graphs, spanning trees.

Tie-breaking is everywhere deterministic (lowest index wins) so that the
measures built on these structures reproduce bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np


def distance_matrix(X: np.ndarray) -> np.ndarray:
    """Euclidean distances, symmetric with a zero diagonal."""
    X = np.asarray(X, dtype=np.float64)
    sq = np.sum(X * X, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    d = np.sqrt(d2)
    np.fill_diagonal(d, 0.0)
    return np.minimum(d, d.T)


@dataclass(frozen=True)
class NeighborGraph:
    """Directed nearest-neighbour structure over the sample.

    `out_edges[i]` lists i's neighbours: exactly `k` of them for a kNN graph
    (before any symmetrisation), or every point within the radius for an
    epsilon graph.
    """

    n: int
    out_edges: tuple[tuple[int, ...], ...]
    kind: Literal["knn", "epsilon"]


def build_neighbor_graph(
    X: np.ndarray | None = None,
    y: np.ndarray | None = None,
    k_graph: int = 5,
    epsilon: float | None = None,
    distances: np.ndarray | None = None,
) -> NeighborGraph:
    """kNN (default) or epsilon out-edges from points or a distance matrix.

    Distance ties resolve to the lowest index, so duplicate points get their
    lowest-indexed twins as neighbours.  `y` is accepted for signature parity
    with the pruning step (see `prune_cross_class`); edge construction itself
    is purely geometric.
    """
    if distances is None:
        if X is None:
            raise ValueError("need X or a distance matrix")
        distances = distance_matrix(X)
    n = distances.shape[0]
    if epsilon is not None:
        edges = tuple(
            tuple(j for j in np.flatnonzero(distances[i] <= epsilon) if j != i)
            for i in range(n)
        )
        return NeighborGraph(n, edges, "epsilon")
    if n < k_graph + 1:
        raise ValueError(f"kNN graph needs at least k_graph+1={k_graph + 1} points, got {n}")
    edges = []
    for i in range(n):
        order = np.argsort(distances[i], kind="stable")
        edges.append(tuple(int(j) for j in order if j != i)[:k_graph])
    return NeighborGraph(n, tuple(edges), "knn")


def prune_cross_class(graph: NeighborGraph, y: np.ndarray) -> np.ndarray:
    """Symmetrised adjacency with every edge between opposite classes removed.

    This is the graph the network measures run on: only same-class
    neighbourhood structure remains.
    """
    y = np.asarray(y)
    adj = np.zeros((graph.n, graph.n), dtype=bool)
    for i, nbrs in enumerate(graph.out_edges):
        for j in nbrs:
            adj[i, j] = True
            adj[j, i] = True
    same = y[:, None] == y[None, :]
    adj &= same
    np.fill_diagonal(adj, False)
    return adj


def minimum_spanning_tree(distances: np.ndarray) -> tuple[tuple[int, int], ...]:
    """Kruskal MST with ties broken by (min index, max index) order.

    Expects a symmetric non-negative matrix with a zero diagonal; returns the
    n-1 edges as (i, j) with i < j, in selection order.
    """
    d = np.asarray(distances, dtype=np.float64)
    n = d.shape[0]
    if n < 2:
        raise ValueError("minimum spanning tree needs at least 2 points")
    if d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    if (d < 0).any() or (np.diag(d) != 0).any() or not np.allclose(d, d.T):
        raise ValueError("distances must be symmetric, non-negative, zero on the diagonal")

    iu, ju = np.triu_indices(n, k=1)
    weights = d[iu, ju]
    order = np.lexsort((ju, iu, weights))

    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges: list[tuple[int, int]] = []
    for idx in order:
        a, b = int(iu[idx]), int(ju[idx])
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            edges.append((a, b))
            if len(edges) == n - 1:
                break
    return tuple(edges)
