# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

_MAX_SEED = 2**64 - 1
_CRITICAL_TOLERANCE = 1e-6


class NetworkError(Exception):
    pass


class InvalidGenerationParams(NetworkError):
    pass


class InvalidNetwork(NetworkError):
    pass


class StateLengthMismatch(NetworkError):
    def __init__(self, expected: int, actual: int):
        super().__init__(f"State has {actual} variable(s) but {expected} were expected.")


def pack_bits(bits) -> int:
    """
    Pack a 0/1 vector into an integer with element 0 as the most significant bit.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    padding = -len(bits) % 8
    return int.from_bytes(np.packbits(bits).tobytes(), "big") >> padding


def unpack_bits(code: int, n: int) -> np.ndarray:
    padding = -n % 8
    raw = (code << padding).to_bytes((n + padding) // 8, "big")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:n]


@dataclass(frozen=True, order=True)
class NetworkState:
    """
    Values of all n Boolean variables at one point in time.

    The variables are packed into ``code`` with x_0 as the most significant
    of n bits, so that ordering by code is lexicographic ordering
    with bit index 0 first.
    """

    code: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidNetwork(f"States need at least one variable, got {self.n}.")
        if not 0 <= self.code < (1 << self.n):
            raise InvalidNetwork(f"Code {self.code} does not fit into {self.n} bit(s).")

    @classmethod
    def from_bits(cls, bits) -> "NetworkState":
        bits = np.asarray(bits)
        if bits.ndim != 1 or not np.isin(bits, (0, 1)).all():
            raise InvalidNetwork("States must be one-dimensional vectors of 0s and 1s.")
        return cls(code=pack_bits(bits), n=len(bits))

    @classmethod
    def from_string(cls, text: str) -> "NetworkState":
        if not text or set(text) - {"0", "1"}:
            raise InvalidNetwork(f"State {text!r} is not a non-empty string of 0s and 1s.")
        return cls(code=int(text, 2), n=len(text))

    @property
    def bits(self) -> np.ndarray:
        return unpack_bits(self.code, self.n)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, j: int) -> bool:
        if not 0 <= j < self.n:
            raise IndexError(j)
        return bool((self.code >> (self.n - 1 - j)) & 1)

    def __str__(self) -> str:
        return format(self.code, f"0{self.n}b")


@dataclass(frozen=True)
class NodeFunction:
    """
    Truth table of one node.

    Entry ``table[idx]`` is used where ``idx`` has the value of the first
    listed input as its least significant bit.
    """

    inputs: tuple[int, ...]
    table: tuple[int, ...]

    def __post_init__(self):
        k = len(self.inputs)
        if len(self.table) != 1 << k:
            raise InvalidNetwork(
                f"Truth table has {len(self.table)} entries but {1 << k} are needed"
                f" for {k} input(s)."
            )
        if len(set(self.inputs)) != k:
            raise InvalidNetwork(f"Inputs {list(self.inputs)} are not pairwise distinct.")
        if any(entry not in (0, 1) for entry in self.table):
            raise InvalidNetwork("Truth table entries must be 0 or 1.")

    @property
    def k(self) -> int:
        return len(self.inputs)

    @property
    def table_string(self) -> str:
        return "".join(str(entry) for entry in self.table)


@dataclass(frozen=True)
class _UpdateKernel:
    inputs: np.ndarray  # (n, k) input indices
    weights: np.ndarray  # (k,) powers of two, first input least significant
    tables: np.ndarray  # (n, 2**k) truth tables
    rows: np.ndarray  # (n,) node indices


@dataclass(frozen=True)
class BooleanNetwork:
    n: int
    k: int
    nodes: tuple[NodeFunction, ...]
    bias: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidNetwork(f"A network needs at least one node, got {self.n}.")
        if not 1 <= self.k <= self.n:
            raise InvalidNetwork(f"In-degree k={self.k} is outside [1, n] for n={self.n}.")
        if len(self.nodes) != self.n:
            raise InvalidNetwork(f"Expected {self.n} node(s), got {len(self.nodes)}.")
        for i, node in enumerate(self.nodes):
            if node.k != self.k:
                raise InvalidNetwork(f"Node {i} has {node.k} input(s) instead of {self.k}.")
            if any(not 0 <= j < self.n for j in node.inputs):
                raise InvalidNetwork(f"Node {i} refers to an input outside [0, {self.n}).")

    @cached_property
    def _kernel(self) -> _UpdateKernel:
        return _UpdateKernel(
            inputs=np.array([node.inputs for node in self.nodes], dtype=np.intp).reshape(
                self.n, self.k
            ),
            weights=(1 << np.arange(self.k, dtype=np.int64)),
            tables=np.array([node.table for node in self.nodes], dtype=np.uint8),
            rows=np.arange(self.n, dtype=np.intp),
        )

    def next_bits(self, bits: np.ndarray) -> np.ndarray:
        """
        Synchronous update of a single 0/1 state vector.
        """
        kernel = self._kernel
        return kernel.tables[kernel.rows, bits[kernel.inputs] @ kernel.weights]

    def next_bits_many(self, matrix: np.ndarray) -> np.ndarray:
        """
        Synchronous update of every row of an (m, n) matrix of states.
        """
        kernel = self._kernel
        indices = matrix[:, kernel.inputs] @ kernel.weights
        return kernel.tables[kernel.rows[np.newaxis, :], indices]


@dataclass(frozen=True)
class GenerationParams:
    n: int
    k: int
    bias: float
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGenerationParams(f"Node count must be positive, got {self.n}.")
        if not 1 <= self.k <= self.n:
            raise InvalidGenerationParams(
                f"In-degree k={self.k} is outside [1, n] for n={self.n}."
            )
        if not 0.0 <= self.bias <= 1.0:
            raise InvalidGenerationParams(f"Bias {self.bias} is outside [0, 1].")
        if not 0 <= self.seed <= _MAX_SEED:
            raise InvalidGenerationParams(f"Seed {self.seed} is not an unsigned 64-bit integer.")


def generate_rbn(params: GenerationParams) -> BooleanNetwork:
    """
    Draw a Random Boolean Network from a PCG64 stream seeded with ``params.seed``.

    For node 0 to n-1, the k distinct inputs are drawn first (self-inputs allowed),
    then the 2**k table entries in index order, each being 1 with probability bias.
    """
    rng = np.random.Generator(np.random.PCG64(params.seed))
    nodes = []
    for _ in range(params.n):
        inputs = rng.choice(params.n, size=params.k, replace=False)
        table = rng.random(1 << params.k) < params.bias
        nodes.append(
            NodeFunction(
                inputs=tuple(int(j) for j in inputs),
                table=tuple(int(entry) for entry in table),
            )
        )
    return BooleanNetwork(
        n=params.n, k=params.k, nodes=tuple(nodes), bias=params.bias, seed=params.seed
    )


def eval_node(node: NodeFunction, state: NetworkState) -> bool:
    if any(j >= len(state) for j in node.inputs):
        raise StateLengthMismatch(max(node.inputs) + 1, len(state))
    index = sum(int(state[j]) << position for position, j in enumerate(node.inputs))
    return bool(node.table[index])


def step(net: BooleanNetwork, state: NetworkState) -> NetworkState:
    if len(state) != net.n:
        raise StateLengthMismatch(net.n, len(state))
    return NetworkState(code=pack_bits(net.next_bits(state.bits)), n=net.n)


def critical_bias(k: int) -> float:
    """
    Bias p >= 0.5 on the critical line 2 p (1 - p) = 1 / k.
    """
    if k < 2:
        raise InvalidGenerationParams(f"No critical bias exists for k={k}; k must be at least 2.")
    return (1.0 + math.sqrt(1.0 - 2.0 / k)) / 2.0


def classify_regime(k: int, bias: float) -> str:
    sensitivity = 2.0 * bias * (1.0 - bias) * k
    if abs(sensitivity - 1.0) <= _CRITICAL_TOLERANCE:
        return "critical"
    return "chaotic" if sensitivity > 1.0 else "ordered"
