"""Seeded random streams, one per subsystem, derived from the trial seed.

A trial owns a single root seed; every consumer asks for a named stream so
that adding a consumer never perturbs the draws seen by existing ones.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _derive(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class TrialRandom:
    """Root of all randomness for one trial."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._streams: dict[str, np.random.Generator] = {}

    def stream(self, label: str) -> np.random.Generator:
        gen = self._streams.get(label)
        if gen is None:
            gen = np.random.Generator(np.random.PCG64(_derive(self.seed, label)))
            self._streams[label] = gen
        return gen
