"""Deterministic random stream derivation.

A trial owns one master seed. Independent streams are derived by stable
mixing of (seed, domain, index) through numpy's SeedSequence, so draws made
by one robot never perturb another robot's sequence and adding robots does
not reshuffle existing streams.
"""

from __future__ import annotations

import numpy as np

_WORLD_DOMAIN = 0
_ROBOT_DOMAIN = 1

MAX_SEED = 2**63 - 1


def world_stream(seed: int) -> np.random.Generator:
    """Stream used for world initialization (placement, headings, target)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_WORLD_DOMAIN,))
    return np.random.default_rng(ss)


def robot_stream(seed: int, robot_id: int) -> np.random.Generator:
    """Per-robot stream used for controller draws (rotation durations)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_ROBOT_DOMAIN, robot_id))
    return np.random.default_rng(ss)


def derive_seed(*parts: int) -> int:
    """Collapse a tuple of non-negative integers into a fresh 63-bit seed."""
    ss = np.random.SeedSequence(entropy=list(parts))
    return int(ss.generate_state(1, np.uint64)[0]) & MAX_SEED
