# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ._network import BooleanNetwork, NetworkState, StateLengthMismatch, pack_bits

EXHAUSTIVE_NODE_LIMIT = 20
_ENUMERATION_CHUNK = 1 << 16


class AttractorError(Exception):
    pass


class EmptyCycle(AttractorError):
    def __init__(self):
        super().__init__("A cycle needs at least one state.")


class InvalidSearchConfig(AttractorError):
    pass


class TooManyNodesForEnumeration(AttractorError):
    def __init__(self, n: int, limit: int):
        super().__init__(
            f"Enumerating all 2^{n} states is not supported"
            f" for networks with more than {limit} nodes."
        )


@dataclass(frozen=True)
class SearchConfig:
    max_steps: int
    memory_cap: Optional[int] = None

    def __post_init__(self):
        if self.max_steps < 1:
            raise InvalidSearchConfig(f"Step budget must be at least 1, got {self.max_steps}.")
        if self.memory_cap is not None and self.memory_cap < 1:
            raise InvalidSearchConfig(f"Memory cap must be at least 1, got {self.memory_cap}.")


@dataclass(frozen=True)
class Attractor:
    """
    A cycle of states in canonical rotation, i.e. starting at its smallest state.
    """

    states: tuple[NetworkState, ...]

    def __post_init__(self):
        if not self.states:
            raise EmptyCycle

    @property
    def period(self) -> int:
        return len(self.states)

    @property
    def n(self) -> int:
        return self.states[0].n

    @property
    def first(self) -> NetworkState:
        return self.states[0]

    @cached_property
    def matrix(self) -> np.ndarray:
        """
        The states as a (period, n) matrix of 0s and 1s.
        """
        return np.array([state.bits for state in self.states], dtype=np.uint8)

    @cached_property
    def packed(self) -> np.ndarray:
        """
        The states as a (period, ceil(n / 8)) matrix of packed bytes.
        """
        return np.packbits(self.matrix, axis=1)


def canonicalize(cycle: Sequence[NetworkState]) -> Attractor:
    if not cycle:
        raise EmptyCycle
    cycle = list(cycle)
    smallest = min(range(len(cycle)), key=cycle.__getitem__)
    return Attractor(states=tuple(cycle[smallest:] + cycle[:smallest]))


def _state_from_bits(bits: np.ndarray, n: int) -> NetworkState:
    return NetworkState(code=pack_bits(bits), n=n)


def _trace(net: BooleanNetwork, bits: np.ndarray, cfg: SearchConfig) -> Optional[Attractor]:
    next_bits = net.next_bits
    memory_cap = cfg.memory_cap
    seen = {bits.tobytes(): 0}

    for t in range(1, cfg.max_steps + 1):
        bits = next_bits(bits)
        key = bits.tobytes()
        first_visit = seen.get(key)
        if first_visit is not None:
            cycle = []
            for _ in range(t - first_visit):
                cycle.append(_state_from_bits(bits, net.n))
                bits = next_bits(bits)
            return canonicalize(cycle)
        if memory_cap is not None and len(seen) >= memory_cap:
            return None
        seen[key] = t

    return None


def find_attractor(
    net: BooleanNetwork, initial: NetworkState, cfg: SearchConfig
) -> Optional[Attractor]:
    """
    Follow the trajectory from ``initial`` until a state repeats.

    Returns ``None`` if no state repeated within ``cfg.max_steps`` steps
    or if more than ``cfg.memory_cap`` states would have to be remembered.
    """
    if len(initial) != net.n:
        raise StateLengthMismatch(net.n, len(initial))
    return _trace(net, initial.bits, cfg)


@dataclass(frozen=True)
class AttractorSet:
    n: int
    attractors: tuple[Attractor, ...]
    basin_hits: tuple[int, ...]
    not_found: int = 0

    def __post_init__(self):
        if len(self.attractors) != len(self.basin_hits):
            raise AttractorError("Every attractor needs exactly one basin hit count.")
        firsts = [attractor.first for attractor in self.attractors]
        if firsts != sorted(set(firsts)):
            raise AttractorError("Attractors must be distinct and ordered by first state.")
        if any(attractor.n != self.n for attractor in self.attractors):
            raise AttractorError(f"All attractors must have {self.n} variable(s).")

    @classmethod
    def from_hits(
        cls, n: int, hits: Mapping[Attractor, int], not_found: int = 0
    ) -> "AttractorSet":
        ordered = sorted(hits, key=lambda attractor: attractor.first)
        return cls(
            n=n,
            attractors=tuple(ordered),
            basin_hits=tuple(hits[attractor] for attractor in ordered),
            not_found=not_found,
        )

    def __len__(self) -> int:
        return len(self.attractors)

    @property
    def sample_count(self) -> int:
        return sum(self.basin_hits) + self.not_found

    def merged(self, other: "AttractorSet") -> "AttractorSet":
        if other.n != self.n:
            raise AttractorError(f"Cannot merge attractor sets over {self.n} and {other.n} nodes.")
        hits = Counter(dict(zip(self.attractors, self.basin_hits)))
        hits.update(dict(zip(other.attractors, other.basin_hits)))
        return AttractorSet.from_hits(self.n, hits, self.not_found + other.not_found)


def collect_attractors(
    net: BooleanNetwork, initial_states: np.ndarray, cfg: SearchConfig
) -> AttractorSet:
    """
    Run ``find_attractor`` from every row of an (m, n) matrix of 0/1 states.
    """
    initial_states = np.asarray(initial_states, dtype=np.uint8)
    if initial_states.ndim != 2 or initial_states.shape[1] != net.n:
        raise StateLengthMismatch(net.n, initial_states.shape[-1])

    hits: Counter = Counter()
    not_found = 0
    for bits in initial_states:
        attractor = _trace(net, bits, cfg)
        if attractor is None:
            not_found += 1
        else:
            hits[attractor] += 1

    return AttractorSet.from_hits(net.n, hits, not_found)


def sample_attractors(
    net: BooleanNetwork, num_samples: int, cfg: SearchConfig, seed: int
) -> AttractorSet:
    """
    Sample initial states uniformly with replacement from a PCG64 stream
    and collect the attractors they reach.
    """
    if num_samples < 1:
        raise InvalidSearchConfig(f"Sample count must be at least 1, got {num_samples}.")
    rng = np.random.Generator(np.random.PCG64(seed))
    initial_states = rng.integers(0, 2, size=(num_samples, net.n), dtype=np.uint8)
    return collect_attractors(net, initial_states, cfg)


def all_state_bits(n: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """
    States with codes in [start, stop) as rows of 0s and 1s, x_0 first.
    """
    if stop is None:
        stop = 1 << n
    codes = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, np.newaxis] >> shifts) & 1).astype(np.uint8)


def _successor_codes(net: BooleanNetwork) -> list[int]:
    size = 1 << net.n
    place_values = 1 << np.arange(net.n - 1, -1, -1, dtype=np.int64)
    successors = np.empty(size, dtype=np.int64)
    for start in range(0, size, _ENUMERATION_CHUNK):
        stop = min(start + _ENUMERATION_CHUNK, size)
        successors[start:stop] = net.next_bits_many(all_state_bits(net.n, start, stop)).astype(
            np.int64
        ) @ place_values
    return successors.tolist()


def exhaustive_attractors(
    net: BooleanNetwork, limit: int = EXHAUSTIVE_NODE_LIMIT
) -> AttractorSet:
    """
    Complete attractor set with exact basin sizes, from all 2^n states.
    """
    if net.n > limit:
        raise TooManyNodesForEnumeration(net.n, limit)

    successors = _successor_codes(net)
    assignment = [-1] * len(successors)
    cycles: list[list[int]] = []
    basin_sizes: list[int] = []

    for start in range(len(successors)):
        if assignment[start] >= 0:
            continue

        path: list[int] = []
        position: dict[int, int] = {}
        code = start
        while assignment[code] < 0 and code not in position:
            position[code] = len(path)
            path.append(code)
            code = successors[code]

        if assignment[code] >= 0:
            index = assignment[code]
        else:
            index = len(cycles)
            cycles.append(path[position[code] :])
            basin_sizes.append(0)

        for visited in path:
            assignment[visited] = index
        basin_sizes[index] += len(path)

    hits = {
        canonicalize([NetworkState(code=code, n=net.n) for code in cycle]): basin_size
        for cycle, basin_size in zip(cycles, basin_sizes)
    }
    return AttractorSet.from_hits(net.n, hits)
