# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._distances import DistanceMatrix

_NEWICK_SPECIAL_CHARACTERS = set(" ()[]':;,")


class ClusteringError(Exception):
    pass


class TooFewNodes(ClusteringError):
    def __init__(self, count: int, minimum: int):
        super().__init__(f"At least {minimum} node(s) are needed, got {count}.")


class UndefinedClusteringCoefficient(ClusteringError):
    def __init__(self):
        super().__init__(
            "No node has two or more neighbors, so the clustering coefficient is undefined."
        )


@dataclass(frozen=True)
class WeightedAdjacency:
    weights: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        weights = self.weights
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise ClusteringError(f"Adjacency must be a square matrix, got {weights.shape}.")
        if self.labels and len(self.labels) != len(weights):
            raise ClusteringError("Adjacency labels do not match the matrix size.")
        if not np.array_equal(weights, weights.T):
            raise ClusteringError("Adjacency must be symmetric.")
        if np.any(np.diag(weights) != 0):
            raise ClusteringError("Adjacency must have a zero diagonal.")
        if np.any(weights < 0) or np.any(weights > 1):
            raise ClusteringError("Adjacency weights must lie within [0, 1].")

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class ClusteringReport:
    labels: tuple[str, ...]
    per_node: tuple[Optional[float], ...]
    network: float


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """
    Single-link merge sequence in the usual linkage numbering:
    leaves are clusters 0 to N-1 and merge m creates cluster N+m.
    """

    labels: tuple[str, ...]
    merges: tuple[Merge, ...]


def weights_from_distances(d: DistanceMatrix) -> WeightedAdjacency:
    """
    Reciprocal distances scaled so that the closest pair gets weight 1.

    Pairs at distance zero are clamped to weight 1; if all distances are zero,
    every pair gets weight 1.
    """
    size = len(d)
    if size < 2:
        raise TooFewNodes(size, 2)

    distances = d.values.astype(np.float64)
    positive = distances > 0
    weights = np.ones_like(distances)
    if positive.any():
        smallest = distances[positive].min()
        np.divide(smallest, distances, out=weights, where=positive)
        np.minimum(weights, 1.0, out=weights)
    np.fill_diagonal(weights, 0.0)
    return WeightedAdjacency(weights=weights, labels=d.labels)


def node_clustering_coefficient(a: WeightedAdjacency, i: int) -> Optional[float]:
    """
    Weighted clustering coefficient of node ``i``, or ``None`` if fewer than
    two neighbors have positive weight.
    """
    weights = a.weights
    row = weights[i]
    # The zero diagonal removes every term with u == i, v == i or u == v
    possible = 0.5 * (row.sum() ** 2 - (row**2).sum())
    if possible == 0:
        return None
    closed = 0.5 * (row @ weights @ row)
    return float(min(1.0, closed / possible))


def clustering_report(a: WeightedAdjacency) -> ClusteringReport:
    per_node = tuple(node_clustering_coefficient(a, i) for i in range(len(a)))
    defined = [value for value in per_node if value is not None]
    if not defined:
        raise UndefinedClusteringCoefficient
    labels = a.labels or tuple(str(i) for i in range(len(a)))
    return ClusteringReport(
        labels=labels, per_node=per_node, network=math.fsum(defined) / len(defined)
    )


def network_clustering_coefficient(a: WeightedAdjacency) -> float:
    """
    Mean of the defined per-node coefficients.
    """
    return clustering_report(a).network


def single_link_dendrogram(d: DistanceMatrix) -> Dendrogram:
    """
    Agglomerate clusters by their smallest member distance.

    Pairs are processed by (distance, lower label, higher label), so ties
    resolve towards the clusters holding the smallest labels and the tree does
    not depend on the row order of ``d``.  Every cluster is represented by its
    smallest label, which becomes the left side of a merge.
    """
    size = len(d)
    if size < 2:
        raise TooFewNodes(size, 2)

    # leaves in label order; equal labels keep their row order
    by_label = sorted(range(size), key=lambda leaf: (d.labels[leaf], leaf))
    rank = np.empty(size, dtype=np.intp)
    rank[by_label] = np.arange(size)

    firsts, seconds = np.triu_indices(size, k=1)
    heights = d.values[firsts, seconds]
    lows = np.minimum(rank[firsts], rank[seconds])
    highs = np.maximum(rank[firsts], rank[seconds])
    order = np.lexsort((highs, lows, heights))

    parent = list(range(size))
    cluster_id = by_label
    cluster_size = [1] * size
    merges: list[Merge] = []

    def find(position: int) -> int:
        while parent[position] != position:
            parent[position] = parent[parent[position]]
            position = parent[position]
        return position

    for pair in order:
        left, right = sorted((find(int(lows[pair])), find(int(highs[pair]))))
        if left == right:
            continue
        merges.append(
            Merge(
                left=cluster_id[left],
                right=cluster_id[right],
                height=float(heights[pair]),
                size=cluster_size[left] + cluster_size[right],
            )
        )
        parent[right] = left
        cluster_size[left] += cluster_size[right]
        cluster_id[left] = size + len(merges) - 1
        if len(merges) == size - 1:
            break

    return Dendrogram(labels=d.labels, merges=tuple(merges))


def _newick_label(label: str) -> str:
    if not any(c in _NEWICK_SPECIAL_CHARACTERS for c in label):
        return label
    return "'" + label.replace("'", "''") + "'"


def _newick_length(value: float) -> str:
    return f"{value:.10g}"


def newick_export(d: Dendrogram) -> str:
    """
    Newick text of an ultrametric tree: every merge sits at half its height.
    """
    size = len(d.labels)
    if size < 2 or len(d.merges) != size - 1:
        raise TooFewNodes(size, 2)

    subtrees = {leaf: (_newick_label(label), 0.0) for leaf, label in enumerate(d.labels)}
    for index, merge in enumerate(d.merges):
        children = []
        for child in (merge.left, merge.right):
            text, height = subtrees.pop(child)
            children.append(f"{text}:{_newick_length((merge.height - height) / 2)}")
        subtrees[size + index] = (f"({','.join(children)})", merge.height)

    ((root, _),) = subtrees.values()
    return root + ";"
