# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

_MASK = 2**64 - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_INDEX_LIMIT = 2**32


def _splitmix64_finalize(value: int) -> int:
    value = ((value ^ (value >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    value = ((value ^ (value >> 27)) * 0x94D049BB133111EB) & _MASK
    return value ^ (value >> 31)


def derive_seed(root_seed: int, high: int, low: int) -> int:
    """
    Derive a 64-bit seed from a root seed and two indices below 2**32.

    The seed is the SplitMix64 finalizer applied to
    ``root_seed + ((high << 32) | low) * 0x9E3779B97F4A7C15 (mod 2**64)``.
    Every step is a bijection on 64-bit integers, so for a fixed root seed
    distinct index pairs always yield distinct seeds.
    """
    if not 0 <= root_seed <= _MASK:
        raise ValueError(f"Seed {root_seed} is not an unsigned 64-bit integer.")
    if not (0 <= high < _INDEX_LIMIT and 0 <= low < _INDEX_LIMIT):
        raise ValueError(f"Indices ({high}, {low}) must lie within [0, 2**32).")
    key = (high << 32) | low
    return _splitmix64_finalize((root_seed + key * _GOLDEN_GAMMA) & _MASK)


def network_seed(root_seed: int, bias_index: int, network_index: int) -> int:
    return derive_seed(root_seed, bias_index, network_index)


def sampling_seed(network_seed: int) -> int:
    """
    Seed for drawing initial states of a network, independent of its generation stream.
    """
    return derive_seed(network_seed, 0, 0)
