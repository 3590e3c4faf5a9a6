# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import os

import numpy as np

from .._attractors import Attractor, canonicalize
from .._confirm import Confirmation
from .._messenger import Messenger
from .._network import (
    BooleanNetwork,
    GenerationParams,
    NetworkState,
    NodeFunction,
    generate_rbn,
)

_IDENTITY_TABLE = (0, 1)
_NOT_TABLE = (1, 0)


def state(text: str) -> NetworkState:
    return NetworkState.from_string(text)


def attractor(*texts: str) -> Attractor:
    return canonicalize([state(text) for text in texts])


def identity_network(n: int) -> BooleanNetwork:
    nodes = tuple(NodeFunction(inputs=(i,), table=_IDENTITY_TABLE) for i in range(n))
    return BooleanNetwork(n=n, k=1, nodes=nodes)


def not_network() -> BooleanNetwork:
    return BooleanNetwork(n=1, k=1, nodes=(NodeFunction(inputs=(0,), table=_NOT_TABLE),))


def swap_network() -> BooleanNetwork:
    nodes = (
        NodeFunction(inputs=(1,), table=_IDENTITY_TABLE),
        NodeFunction(inputs=(0,), table=_IDENTITY_TABLE),
    )
    return BooleanNetwork(n=2, k=1, nodes=nodes)


def oracle_networks(count: int, seed: int = 1234):
    """
    Small random networks with n in [4, 10], k in [1, 3] and bias in {0.5, 0.7, 0.85}.
    """
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(4, 11))
        params = GenerationParams(
            n=n,
            k=int(rng.integers(1, 4)),
            bias=float(rng.choice((0.5, 0.7, 0.85))),
            seed=int(rng.integers(0, 2**63)),
        )
        yield generate_rbn(params)


def create_messenger(verbose=False) -> Messenger:
    return Messenger(colorize=False, verbose=verbose)


def create_confirmation(ask=False) -> Confirmation:
    return Confirmation(messenger=create_messenger(), ask=ask)


def read_tree(directory: str) -> dict:
    """
    Map of relative path to file content for every file below ``directory``.
    """
    tree = {}
    for root, _, files in os.walk(directory):
        for name in files:
            path = os.path.join(root, name)
            with open(path, "rb") as f:
                tree[os.path.relpath(path, directory)] = f.read()
    return tree
