# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import math
from collections.abc import Sequence
from dataclasses import astuple, dataclass

import numpy as np

from ._distances import DistanceMatrix

SUMMARY_COLUMNS = ("Min.", "1st Qu.", "Median", "Mean", "3rd Qu.", "Max.")


class StatisticsError(Exception):
    pass


class EmptySample(StatisticsError):
    def __init__(self):
        super().__init__("Cannot summarize an empty sample.")


class MixedMeasures(StatisticsError):
    def __init__(self, measures):
        names = ", ".join(sorted(measure.value for measure in measures))
        super().__init__(f"Cannot pool distances of different measures: {names}.")


class ValueOutOfRange(StatisticsError):
    def __init__(self, value):
        super().__init__(f"Value {value} is outside [0, 1].")


@dataclass(frozen=True)
class SummaryStats:
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def bins(self):
        return zip(self.edges[:-1], self.edges[1:], self.counts)


def pool_distances(matrices: Sequence[DistanceMatrix]) -> list[float]:
    """
    Upper-triangle entries of all matrices, matrix by matrix, row by row.
    """
    measures = {matrix.measure for matrix in matrices}
    if len(measures) > 1:
        raise MixedMeasures(measures)
    pooled: list[float] = []
    for matrix in matrices:
        pooled.extend(matrix.upper_triangle().tolist())
    return pooled


def summary(values: Sequence[float]) -> SummaryStats:
    """
    Six-number summary with quartiles interpolated linearly
    between order statistics at position (n - 1) p.
    """
    if len(values) == 0:
        raise EmptySample
    sample = np.asarray(values, dtype=np.float64)
    lowest, highest = float(sample.min()), float(sample.max())
    q1, median, q3 = (float(q) for q in np.quantile(sample, (0.25, 0.5, 0.75)))
    mean = math.fsum(sample.tolist()) / len(sample)
    return SummaryStats(
        min=lowest,
        q1=q1,
        median=median,
        mean=min(max(mean, lowest), highest),
        q3=q3,
        max=highest,
    )


def mean_of_summaries(summaries: Sequence[SummaryStats]) -> SummaryStats:
    """
    Column-wise mean of per-network summaries.
    """
    if not summaries:
        raise EmptySample
    columns = zip(*(s.as_tuple() for s in summaries))
    return SummaryStats(*(math.fsum(column) / len(summaries) for column in columns))


def clustering_histogram(values: Sequence[float], bins: int) -> Histogram:
    """
    Uniform bins over [0, 1], right-open except for the last one.
    """
    if bins < 1:
        raise StatisticsError(f"Bin count must be at least 1, got {bins}.")
    for value in values:
        if not 0.0 <= value <= 1.0:
            raise ValueOutOfRange(value)
    counts, edges = np.histogram(np.asarray(values, dtype=np.float64), bins=bins, range=(0.0, 1.0))
    return Histogram(
        edges=tuple(float(edge) for edge in edges),
        counts=tuple(int(count) for count in counts),
    )
