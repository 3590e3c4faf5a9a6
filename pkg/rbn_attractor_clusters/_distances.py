# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._attractors import Attractor, AttractorSet
from ._network import NetworkState

# Set bits per byte value
_POPCOUNT = np.array([bin(value).count("1") for value in range(256)], dtype=np.uint8)

# Upper bound on the byte count of one block of pairwise XORs in min_hamming
_MIN_HAMMING_BLOCK_BYTES = 1 << 22


class DistanceError(Exception):
    pass


class DimensionMismatch(DistanceError):
    def __init__(self, left: int, right: int):
        super().__init__(f"Cannot compare objects of {left} and {right} variable(s).")


class EmptyAttractorSet(DistanceError):
    def __init__(self):
        super().__init__("A distance matrix needs at least one attractor.")


class Measure(Enum):
    MIN_HAMMING = "min-hamming"
    EUCLIDEAN = "euclidean"
    PSEUDO_HAMMING = "pseudo-hamming"

    @property
    def is_integral(self) -> bool:
        return self is not Measure.EUCLIDEAN


@dataclass(frozen=True)
class ActivationVector:
    """
    Per-variable fraction of attractor states in which the variable is 1.

    Stored as counts over a common period; entries compare as reduced fractions.
    """

    counts: tuple[int, ...]
    period: int

    def __post_init__(self):
        if self.period < 1:
            raise DistanceError(f"Period must be positive, got {self.period}.")
        if any(not 0 <= count <= self.period for count in self.counts):
            raise DistanceError("Activation counts must lie within [0, period].")

    @classmethod
    def from_fractions(cls, entries) -> "ActivationVector":
        entries = [Fraction(entry) for entry in entries]
        period = math.lcm(*(entry.denominator for entry in entries)) if entries else 1
        return cls(
            counts=tuple(int(entry * period) for entry in entries),
            period=period,
        )

    @cached_property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(count, self.period) for count in self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ActivationVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)


def _check_same_length(left, right):
    if len(left) != len(right):
        raise DimensionMismatch(len(left), len(right))


def hamming(s: NetworkState, s2: NetworkState) -> int:
    _check_same_length(s, s2)
    return bin(s.code ^ s2.code).count("1")


def min_hamming(a: Attractor, b: Attractor) -> int:
    """
    Smallest Hamming distance between any state of ``a`` and any state of ``b``.
    """
    if a.n != b.n:
        raise DimensionMismatch(a.n, b.n)
    if a == b:
        return 0

    right = b.packed[np.newaxis, :, :]
    rows_per_block = max(1, _MIN_HAMMING_BLOCK_BYTES // b.packed.size)
    best = a.n
    for start in range(0, a.period, rows_per_block):
        left = a.packed[start : start + rows_per_block, np.newaxis, :]
        distances = _POPCOUNT[left ^ right].sum(axis=2, dtype=np.int64)
        best = min(best, int(distances.min()))
        if best <= 1:
            break
    return best


def activation_vector(a: Attractor) -> ActivationVector:
    counts = a.matrix.sum(axis=0, dtype=np.int64)
    return ActivationVector(counts=tuple(int(count) for count in counts), period=a.period)


def _cross_differences(v: ActivationVector, w: ActivationVector) -> np.ndarray:
    # v_l - w_l == (c_l * period_w - d_l * period_v) / (period_v * period_w)
    _check_same_length(v, w)
    left = np.array(v.counts, dtype=np.int64) * w.period
    right = np.array(w.counts, dtype=np.int64) * v.period
    return left - right


def euclidean(v: ActivationVector, w: ActivationVector) -> float:
    numerator = sum(int(difference) ** 2 for difference in _cross_differences(v, w))
    return math.sqrt(numerator) / (v.period * w.period)


def pseudo_hamming(v: ActivationVector, w: ActivationVector) -> int:
    return int(np.count_nonzero(_cross_differences(v, w)))


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple[str, ...]
    values: np.ndarray
    measure: Measure

    def __post_init__(self):
        size = len(self.labels)
        if self.values.shape != (size, size):
            raise DistanceError(
                f"Matrix of shape {self.values.shape} does not match {size} label(s)."
            )
        if not np.array_equal(self.values, self.values.T):
            raise DistanceError("Distance matrices must be symmetric.")
        if np.any(np.diag(self.values) != 0) or np.any(self.values < 0):
            raise DistanceError("Distance matrices need a zero diagonal and no negative entries.")

    def __len__(self) -> int:
        return len(self.labels)

    def upper_triangle(self) -> np.ndarray:
        return self.values[np.triu_indices(len(self), k=1)]


def attractor_labels(count: int) -> tuple[str, ...]:
    return tuple(f"A{index}" for index in range(count))


def distance_matrix(attractor_set: AttractorSet, measure: Measure) -> DistanceMatrix:
    """
    Pairwise distances between the attractors of a set, in the set's order.
    """
    attractors = attractor_set.attractors
    if not attractors:
        raise EmptyAttractorSet

    if measure is Measure.MIN_HAMMING:
        items = attractors
        distance = min_hamming
    else:
        items = [activation_vector(attractor) for attractor in attractors]
        distance = euclidean if measure is Measure.EUCLIDEAN else pseudo_hamming

    size = len(items)
    dtype = np.int64 if measure.is_integral else np.float64
    values = np.zeros((size, size), dtype=dtype)
    for i in range(size):
        for j in range(i + 1, size):
            values[i, j] = values[j, i] = distance(items[i], items[j])

    return DistanceMatrix(labels=attractor_labels(size), values=values, measure=measure)
