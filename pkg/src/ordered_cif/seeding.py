"""Deterministic stream derivation for replicated computations.

Every randomized routine takes a user seed and derives one generator per
replicate from (seed, path components).  Work split across any number of
workers therefore reproduces bit for bit: the draw for replicate r never
depends on which worker runs it or in what order.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConfigError

THREADS_ENV = "ORDERED_CIF_THREADS"


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator for one node of the replication tree."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def resolve_workers(requested: int | None = None) -> int:
    """Worker count: explicit argument, else the ORDERED_CIF_THREADS
    environment variable, else 1.  Results never depend on the value."""
    if requested is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None:
            return 1
        try:
            requested = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if requested < 1:
        raise ConfigError(f"worker count must be >= 1, got {requested}")
    return requested


def chunk_ranges(total: int, workers: int) -> list[range]:
    """Split replicate indices 0..total-1 into contiguous chunks."""
    workers = max(1, min(workers, total)) if total else 1
    bounds = np.linspace(0, total, workers + 1).astype(int)
    return [range(bounds[i], bounds[i + 1]) for i in range(workers) if bounds[i] < bounds[i + 1]]
