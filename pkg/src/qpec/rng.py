"""Named deterministic random streams.

Every stochastic operation in the package draws from a stream derived from
``(seed, *tags)``.  Philox is counter-based, so distinct tags give independent
generators and a run is reproducible bit-for-bit from its seed no matter how
the work is batched or threaded.
"""

from __future__ import annotations

import hashlib
import secrets

import numpy as np


def stream(seed: int, *tags: object) -> np.random.Generator:
    """Generator for the stream named by ``tags``, keyed off ``seed``."""
    label = "/".join(repr(t) for t in tags)
    digest = hashlib.sha256(f"{seed}|{label}".encode()).digest()
    key = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def fresh_seed() -> int:
    """Entropy-sourced seed for runs that did not supply one."""
    return secrets.randbits(63)
