# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

from unittest import TestCase

from parameterized import parameterized

from .._seeding import derive_seed, network_seed, sampling_seed


class DeriveSeedTest(TestCase):
    def test_deterministic(self):
        self.assertEqual(derive_seed(42, 1, 2), derive_seed(42, 1, 2))

    def test_result_is_unsigned_64_bit(self):
        for low in range(100):
            self.assertTrue(0 <= derive_seed(2**64 - 1, 2**32 - 1, low) < 2**64)

    def test_distinct_indices_give_distinct_seeds(self):
        seeds = {network_seed(7, b, i) for b in range(10) for i in range(1000)}
        self.assertEqual(len(seeds), 10 * 1000)

    def test_streams_differ(self):
        seed = network_seed(7, 0, 3)
        self.assertNotEqual(sampling_seed(seed), seed)
        self.assertNotEqual(network_seed(7, 1, 0), network_seed(7, 0, 1))
        self.assertNotEqual(network_seed(7, 0, 0), network_seed(8, 0, 0))

    @parameterized.expand(
        [
            ("negative root", -1, 0, 0),
            ("root too large", 2**64, 0, 0),
            ("index too large", 0, 2**32, 0),
            ("negative index", 0, 0, -1),
        ]
    )
    def test_out_of_range_rejected(self, _label, root, high, low):
        with self.assertRaises(ValueError):
            derive_seed(root, high, low)
