"""Deterministic, splittable random streams.

Every stochastic routine takes an explicit seed and derives its generator
through :func:`derive_rng`, so a trial's stream depends only on the master
seed and the trial's key (mode, cell, trial index, hypothesis), never on
execution order. That makes experiment runs reproducible under concurrency
and lets any single trial be replayed in isolation.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master_seed: int, *parts) -> int:
    """Collapse (master_seed, *parts) into a stable 128-bit integer seed.

    Parts are stringified with repr, so ints, floats and short strings all
    key distinctly; repr of a Python float is shortest-roundtrip and stable
    across platforms.
    """
    message = repr((int(master_seed),) + tuple(repr(p) for p in parts))
    digest = hashlib.sha256(message.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "big")


def derive_rng(master_seed: int, *parts) -> np.random.Generator:
    """Child generator for the stream keyed by (master_seed, *parts)."""
    return np.random.default_rng(derive_seed(master_seed, *parts))
