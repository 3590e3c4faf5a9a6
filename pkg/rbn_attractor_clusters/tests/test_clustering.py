# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

from unittest import TestCase

import networkx as nx
import numpy as np
from parameterized import parameterized

from .._clustering import (
    ClusteringError,
    Dendrogram,
    Merge,
    TooFewNodes,
    UndefinedClusteringCoefficient,
    WeightedAdjacency,
    clustering_report,
    network_clustering_coefficient,
    newick_export,
    node_clustering_coefficient,
    single_link_dendrogram,
    weights_from_distances,
)
from .._distances import DistanceMatrix, Measure, attractor_labels


def _matrix(values, measure=Measure.MIN_HAMMING, labels=None):
    values = np.asarray(values)
    if labels is None:
        labels = attractor_labels(len(values))
    return DistanceMatrix(labels=tuple(labels), values=values, measure=measure)


def _adjacency(weights):
    return WeightedAdjacency(weights=np.asarray(weights, dtype=np.float64))


def _random_weights(rng, size, binary=False):
    if binary:
        upper = (rng.random((size, size)) < 0.5).astype(np.float64)
    else:
        upper = rng.random((size, size))
    upper = np.triu(upper, k=1)
    return upper + upper.T


def _triple_sum_coefficient(w, i):
    closed = possible = 0.0
    others = [u for u in range(len(w)) if u != i]
    for u in others:
        for v in others:
            if u != v:
                closed += w[i, u] * w[u, v] * w[v, i]
                possible += w[i, u] * w[i, v]
    return None if possible == 0 else closed / possible


class WeightsFromDistancesTest(TestCase):
    def test_reciprocal_scaled_by_smallest_distance(self):
        weights = weights_from_distances(_matrix([[0, 1, 2], [1, 0, 4], [2, 4, 0]])).weights
        self.assertEqual(weights.tolist(), [[0, 1, 0.5], [1, 0, 0.25], [0.5, 0.25, 0]])

    def test_equal_distances(self):
        weights = weights_from_distances(_matrix([[0, 7, 7], [7, 0, 7], [7, 7, 0]])).weights
        self.assertEqual(weights.tolist(), [[0, 1, 1], [1, 0, 1], [1, 1, 0]])

    def test_zero_distance_pair_is_clamped(self):
        weights = weights_from_distances(_matrix([[0, 0, 2], [0, 0, 4], [2, 4, 0]])).weights
        self.assertEqual(weights[0, 1], 1.0)
        self.assertEqual(weights[0, 2], 1.0)
        self.assertEqual(weights[1, 2], 0.5)

    def test_single_attractor_rejected(self):
        with self.assertRaises(TooFewNodes):
            weights_from_distances(_matrix([[0]]))

    def test_weights_out_of_range_rejected(self):
        with self.assertRaises(ClusteringError):
            _adjacency([[0, 2], [2, 0]])

    @parameterized.expand([(0.25,), (3.0,), (40.0,)])
    def test_scaling_distances_keeps_weights(self, c):
        rng = np.random.default_rng(17)
        for trial in range(50):
            size = int(rng.integers(2, 12))
            upper = np.triu(rng.random((size, size)) + 0.01, k=1)
            values = upper + upper.T
            plain = weights_from_distances(_matrix(values, measure=Measure.EUCLIDEAN)).weights
            scaled = weights_from_distances(_matrix(c * values, measure=Measure.EUCLIDEAN))
            with self.subTest(trial=trial):
                np.testing.assert_allclose(scaled.weights, plain, rtol=1e-12, atol=0)

    def test_larger_distance_never_gets_larger_weight(self):
        rng = np.random.default_rng(19)
        for trial in range(50):
            size = int(rng.integers(2, 12))
            upper = np.triu(rng.integers(0, 8, size=(size, size)), k=1)
            values = upper + upper.T
            weights = weights_from_distances(_matrix(values)).weights
            firsts, seconds = np.triu_indices(size, k=1)
            distances = values[firsts, seconds]
            pair_weights = weights[firsts, seconds]
            with self.subTest(trial=trial):
                for a in range(len(distances)):
                    for b in range(len(distances)):
                        if distances[a] < distances[b]:
                            self.assertGreaterEqual(pair_weights[a], pair_weights[b])


class ClusteringCoefficientTest(TestCase):
    def test_complete_graph(self):
        a = _adjacency(np.ones((3, 3)) - np.eye(3))
        self.assertEqual([node_clustering_coefficient(a, i) for i in range(3)], [1.0] * 3)
        self.assertEqual(network_clustering_coefficient(a), 1.0)

    def test_star(self):
        a = _adjacency([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
        self.assertEqual(node_clustering_coefficient(a, 0), 0.0)
        self.assertIsNone(node_clustering_coefficient(a, 1))
        self.assertIsNone(node_clustering_coefficient(a, 2))

    @parameterized.expand([(0.25,), (0.5,), (0.9,)])
    def test_uniform_weight(self, w):
        a = _adjacency(w * (np.ones((3, 3)) - np.eye(3)))
        self.assertAlmostEqual(network_clustering_coefficient(a), w, places=12)

    def test_mixed_graph_averages_defined_nodes(self):
        w = np.array(
            [
                [0, 1, 0.5, 0],
                [1, 0, 0.25, 0],
                [0.5, 0.25, 0, 1],
                [0, 0, 1, 0],
            ]
        )
        defined = [
            value
            for value in (_triple_sum_coefficient(w, i) for i in range(4))
            if value is not None
        ]
        report = clustering_report(_adjacency(w))
        self.assertIsNone(report.per_node[3])
        self.assertAlmostEqual(report.network, sum(defined) / len(defined), places=12)

    def test_matches_triple_sum(self):
        rng = np.random.default_rng(42)
        for trial in range(100):
            size = int(rng.integers(3, 21))
            w = _random_weights(rng, size)
            a = _adjacency(w)
            for i in range(size):
                with self.subTest(trial=trial, node=i):
                    self.assertAlmostEqual(
                        node_clustering_coefficient(a, i),
                        _triple_sum_coefficient(w, i),
                        delta=1e-12,
                    )

    def test_binary_weights_give_unweighted_coefficient(self):
        rng = np.random.default_rng(7)
        for trial in range(100):
            size = int(rng.integers(3, 21))
            w = _random_weights(rng, size, binary=True)
            a = _adjacency(w)
            expected = nx.clustering(nx.from_numpy_array(w))
            for i in range(size):
                with self.subTest(trial=trial, node=i):
                    actual = node_clustering_coefficient(a, i)
                    if w[i].sum() < 2:
                        self.assertIsNone(actual)
                    else:
                        self.assertAlmostEqual(actual, expected[i], delta=1e-12)

    def test_no_node_with_two_neighbors(self):
        a = _adjacency([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        with self.assertRaises(UndefinedClusteringCoefficient):
            network_clustering_coefficient(a)

    def test_report_carries_labels(self):
        report = clustering_report(
            weights_from_distances(_matrix([[0, 1, 2], [1, 0, 4], [2, 4, 0]]))
        )
        self.assertEqual(report.labels, ("A0", "A1", "A2"))


class SingleLinkDendrogramTest(TestCase):
    def test_three_leaves(self):
        d = single_link_dendrogram(_matrix([[0, 1, 5], [1, 0, 3], [5, 3, 0]]))
        self.assertEqual(
            d.merges,
            (
                Merge(left=0, right=1, height=1.0, size=2),
                Merge(left=3, right=2, height=3.0, size=3),
            ),
        )

    def test_two_leaves(self):
        d = single_link_dendrogram(_matrix([[0, 4], [4, 0]]))
        self.assertEqual(d.merges, (Merge(left=0, right=1, height=4.0, size=2),))

    def test_ties_prefer_lowest_leaves(self):
        d = single_link_dendrogram(
            _matrix([[0, 2, 9, 9], [2, 0, 9, 9], [9, 9, 0, 2], [9, 9, 2, 0]])
        )
        self.assertEqual(
            [(m.left, m.right, m.size) for m in d.merges], [(0, 1, 2), (2, 3, 2), (4, 5, 4)]
        )

    def test_ties_follow_label_order_not_row_order(self):
        values = np.ones((3, 3)) - np.eye(3)
        forward = single_link_dendrogram(_matrix(values, labels="ABC"))
        backward = single_link_dendrogram(_matrix(values, labels="CBA"))
        self.assertEqual(newick_export(forward), "((A:0.5,B:0.5):0,C:0.5);")
        self.assertEqual(newick_export(backward), "((A:0.5,B:0.5):0,C:0.5);")
        self.assertEqual(backward.merges[0], Merge(left=2, right=1, height=1.0, size=2))

    def test_invariant_under_row_permutation(self):
        rng = np.random.default_rng(31)
        for trial in range(100):
            size = int(rng.integers(2, 16))
            upper = np.triu(rng.integers(1, 4, size=(size, size)), k=1)
            values = upper + upper.T
            labels = attractor_labels(size)
            perm = rng.permutation(size)
            permuted = _matrix(values[np.ix_(perm, perm)], labels=[labels[i] for i in perm])
            with self.subTest(trial=trial):
                self.assertEqual(
                    newick_export(single_link_dendrogram(permuted)),
                    newick_export(single_link_dendrogram(_matrix(values, labels=labels))),
                )

    @parameterized.expand([(0.5,), (2.0,), (3.0,), (10.0,)])
    def test_scaling_distances_scales_heights(self, c):
        rng = np.random.default_rng(int(c * 10))
        for trial in range(30):
            size = int(rng.integers(2, 16))
            upper = np.triu(rng.integers(1, 6, size=(size, size)), k=1).astype(np.float64)
            values = upper + upper.T
            plain = single_link_dendrogram(_matrix(values, measure=Measure.EUCLIDEAN))
            scaled = single_link_dendrogram(_matrix(c * values, measure=Measure.EUCLIDEAN))
            with self.subTest(trial=trial):
                self.assertEqual(
                    [(m.left, m.right, m.size) for m in scaled.merges],
                    [(m.left, m.right, m.size) for m in plain.merges],
                )
                self.assertEqual(
                    [m.height for m in scaled.merges], [c * m.height for m in plain.merges]
                )

    def test_single_leaf_rejected(self):
        with self.assertRaises(TooFewNodes):
            single_link_dendrogram(_matrix([[0]]))

    def test_heights_match_minimum_spanning_tree(self):
        rng = np.random.default_rng(2024)
        for trial in range(100):
            size = int(rng.integers(2, 31))
            if trial % 2:
                upper = rng.integers(1, 6, size=(size, size)).astype(np.float64)
            else:
                upper = rng.random((size, size))
            upper = np.triu(upper, k=1)
            values = upper + upper.T
            tree = nx.minimum_spanning_tree(nx.from_numpy_array(values))
            expected = sorted(weight for _, _, weight in tree.edges(data="weight"))
            with self.subTest(trial=trial):
                d = single_link_dendrogram(_matrix(values, measure=Measure.EUCLIDEAN))
                self.assertEqual(sorted(m.height for m in d.merges), expected)
                self.assertEqual(d.merges[-1].size, size)


class NewickExportTest(TestCase):
    def test_two_leaves(self):
        d = Dendrogram(labels=("A", "B"), merges=(Merge(0, 1, 2.0, 2),))
        self.assertEqual(newick_export(d), "(A:1,B:1);")

    def test_three_leaves(self):
        d = single_link_dendrogram(_matrix([[0, 1, 5], [1, 0, 3], [5, 3, 0]], labels="ABC"))
        self.assertEqual(newick_export(d), "((A:0.5,B:0.5):1,C:1.5);")

    def test_labels_with_special_characters_are_quoted(self):
        d = Dendrogram(labels=("a b", "it's"), merges=(Merge(0, 1, 1.0, 2),))
        self.assertEqual(newick_export(d), "('a b':0.5,'it''s':0.5);")

    def test_single_leaf_rejected(self):
        with self.assertRaises(TooFewNodes):
            newick_export(Dendrogram(labels=("A",), merges=()))
