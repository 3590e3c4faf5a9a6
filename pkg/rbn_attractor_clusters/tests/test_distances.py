# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import math
from fractions import Fraction
from unittest import TestCase

import numpy as np
from parameterized import parameterized

from .._attractors import AttractorSet, exhaustive_attractors
from .._distances import (
    ActivationVector,
    DimensionMismatch,
    DistanceError,
    DistanceMatrix,
    EmptyAttractorSet,
    Measure,
    activation_vector,
    distance_matrix,
    euclidean,
    hamming,
    min_hamming,
    pseudo_hamming,
)
from .helpers import attractor, oracle_networks, state


def _brute_min_hamming(a, b):
    return min(
        sum(x != y for x, y in zip(str(s), str(t))) for s in a.states for t in b.states
    )


def _brute_activation(a):
    return [
        Fraction(sum(str(s)[j] == "1" for s in a.states), a.period) for j in range(a.n)
    ]


class HammingTest(TestCase):
    @parameterized.expand(
        [
            ("000", "000", 0),
            ("000", "111", 3),
            ("0110", "0011", 2),
        ]
    )
    def test_states(self, left, right, expected):
        self.assertEqual(hamming(state(left), state(right)), expected)

    def test_length_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            hamming(state("01"), state("011"))

    def test_min_hamming_fixed_points(self):
        self.assertEqual(min_hamming(attractor("000"), attractor("111")), 3)

    def test_min_hamming_takes_closest_pair(self):
        self.assertEqual(min_hamming(attractor("00", "11"), attractor("01")), 1)

    def test_min_hamming_to_itself(self):
        a = attractor("0110", "1011", "1100")
        self.assertEqual(min_hamming(a, a), 0)

    def test_min_hamming_is_symmetric(self):
        a = attractor("000111", "111000", "101010")
        b = attractor("010101", "110011")
        self.assertEqual(min_hamming(a, b), min_hamming(b, a))
        self.assertEqual(min_hamming(a, b), _brute_min_hamming(a, b))

    def test_min_hamming_wide_states(self):
        a = attractor("1" * 70)
        b = attractor("0" * 70, "0" * 35 + "1" * 35)
        self.assertEqual(min_hamming(a, b), 35)


class ActivationVectorTest(TestCase):
    def test_symmetric_cycle(self):
        v = activation_vector(attractor("01", "10"))
        self.assertEqual(v.entries, (Fraction(1, 2), Fraction(1, 2)))

    def test_fixed_point(self):
        self.assertEqual(activation_vector(attractor("110")).entries, (1, 1, 0))

    def test_counts_over_period(self):
        v = activation_vector(attractor("10", "10", "00", "11"))
        self.assertEqual(v.entries[0], Fraction(3, 4))

    def test_equal_fractions_from_different_periods(self):
        v = ActivationVector(counts=(1, 2), period=2)
        w = ActivationVector(counts=(2, 4), period=4)
        self.assertEqual(v, w)
        self.assertEqual(hash(v), hash(w))

    def test_invalid_counts_rejected(self):
        with self.assertRaises(DistanceError):
            ActivationVector(counts=(3,), period=2)


class ActivationDistanceTest(TestCase):
    def test_euclidean_corners(self):
        v = ActivationVector.from_fractions([0, 0, 0])
        w = ActivationVector.from_fractions([1, 1, 1])
        self.assertAlmostEqual(euclidean(v, w), math.sqrt(3), places=12)

    def test_euclidean_to_itself(self):
        v = ActivationVector.from_fractions([Fraction(1, 3), Fraction(2, 5)])
        self.assertEqual(euclidean(v, v), 0.0)

    def test_euclidean_single_coordinate(self):
        v = ActivationVector.from_fractions([Fraction(1, 2), 1])
        w = ActivationVector.from_fractions([0, 1])
        self.assertEqual(euclidean(v, w), 0.5)

    def test_pseudo_hamming(self):
        v = ActivationVector.from_fractions([Fraction(1, 2), 1, 0])
        w = ActivationVector.from_fractions([Fraction(1, 2), 0, 0])
        self.assertEqual(pseudo_hamming(v, w), 1)

    def test_pseudo_hamming_compares_reduced_fractions(self):
        v = ActivationVector(counts=(1,), period=2)
        w = ActivationVector(counts=(2,), period=4)
        self.assertEqual(pseudo_hamming(v, w), 0)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            pseudo_hamming(
                ActivationVector.from_fractions([0]), ActivationVector.from_fractions([0, 1])
            )


class DistanceMatrixTest(TestCase):
    @parameterized.expand([(measure,) for measure in Measure])
    def test_single_attractor(self, measure):
        single = AttractorSet.from_hits(3, {attractor("010"): 5})
        matrix = distance_matrix(single, measure)
        self.assertEqual(matrix.labels, ("A0",))
        self.assertEqual(matrix.values.tolist(), [[0]])

    def test_two_fixed_points(self):
        pair = AttractorSet.from_hits(3, {attractor("000"): 1, attractor("111"): 1})
        matrix = distance_matrix(pair, Measure.MIN_HAMMING)
        self.assertEqual(matrix.values.tolist(), [[0, 3], [3, 0]])
        self.assertEqual(matrix.upper_triangle().tolist(), [3])

    def test_empty_set_rejected(self):
        with self.assertRaises(EmptyAttractorSet):
            distance_matrix(AttractorSet.from_hits(3, {}), Measure.EUCLIDEAN)

    def test_asymmetric_matrix_rejected(self):
        with self.assertRaises(DistanceError):
            DistanceMatrix(
                labels=("A0", "A1"),
                values=np.array([[0, 1], [2, 0]]),
                measure=Measure.MIN_HAMMING,
            )

    def test_matches_pairwise_recomputation(self):
        for index, net in enumerate(oracle_networks(200)):
            attractor_set = exhaustive_attractors(net)
            attractors = attractor_set.attractors
            vectors = [_brute_activation(a) for a in attractors]
            matrices = {m: distance_matrix(attractor_set, m).values for m in Measure}
            with self.subTest(network=index):
                for i in range(len(attractors)):
                    for j in range(len(attractors)):
                        self.assertEqual(
                            matrices[Measure.MIN_HAMMING][i, j],
                            _brute_min_hamming(attractors[i], attractors[j]),
                        )
                        self.assertEqual(
                            matrices[Measure.PSEUDO_HAMMING][i, j],
                            sum(x != y for x, y in zip(vectors[i], vectors[j])),
                        )
                        squares = sum((x - y) ** 2 for x, y in zip(vectors[i], vectors[j]))
                        self.assertAlmostEqual(
                            matrices[Measure.EUCLIDEAN][i, j],
                            math.sqrt(squares),
                            delta=1e-12,
                        )


def _random_text(rng, n):
    return "".join(rng.choice(("0", "1"), size=n))


def _random_vector(rng, n):
    period = int(rng.integers(1, 7))
    counts = rng.integers(0, period + 1, size=n)
    return ActivationVector(counts=tuple(int(c) for c in counts), period=period)


class MetricPropertiesTest(TestCase):
    def test_hamming_triangle_inequality(self):
        rng = np.random.default_rng(11)
        for trial in range(300):
            n = int(rng.integers(1, 80))
            s, t, u = (state(_random_text(rng, n)) for _ in range(3))
            with self.subTest(trial=trial):
                self.assertLessEqual(hamming(s, u), hamming(s, t) + hamming(t, u))

    def test_euclidean_triangle_inequality(self):
        rng = np.random.default_rng(12)
        for trial in range(300):
            n = int(rng.integers(1, 30))
            v, w, x = (_random_vector(rng, n) for _ in range(3))
            with self.subTest(trial=trial):
                self.assertLessEqual(euclidean(v, x), euclidean(v, w) + euclidean(w, x) + 1e-12)

    def test_pseudo_hamming_agrees_with_euclidean_on_identity(self):
        rng = np.random.default_rng(13)
        for trial in range(300):
            n = int(rng.integers(1, 6))
            v, w = _random_vector(rng, n), _random_vector(rng, n)
            with self.subTest(trial=trial):
                self.assertEqual(pseudo_hamming(v, w) == 0, euclidean(v, w) == 0)
                self.assertLessEqual(pseudo_hamming(v, w), n)
                self.assertEqual(pseudo_hamming(v, v), 0)

    def test_distinct_attractors_are_at_least_one_apart(self):
        for index, net in enumerate(oracle_networks(50, seed=99)):
            attractors = exhaustive_attractors(net).attractors
            with self.subTest(network=index):
                for i, a in enumerate(attractors):
                    for b in attractors[i + 1 :]:
                        self.assertGreaterEqual(min_hamming(a, b), 1)
