"""Named, hash-derived random streams.

Every stochastic component draws from a stream keyed by a stable path
(e.g. ``(seed, "scenario", 12)``), so results never depend on call
order, worker count, or scheduling.  SHA-256 of the repr makes the
derivation platform-independent.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stream_seed(root_seed: int, *path: object) -> int:
    digest = hashlib.sha256(repr((int(root_seed),) + path).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def substream(root_seed: int, *path: object) -> np.random.Generator:
    return np.random.default_rng(stream_seed(root_seed, *path))
