"""Counter-based RNG streams keyed by work-unit identity.

Every stochastic work unit gets its own Philox generator derived from the
master seed plus a tuple of unit keys, so the variates drawn for a unit do
not depend on execution order or worker count.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["unit_rng"]


def _key_words(part) -> tuple[int, ...]:
    if isinstance(part, (int, np.integer)):
        v = int(part)
        if 0 <= v < 2**32:
            return (v,)
        digest = hashlib.blake2b(str(v).encode(), digest_size=8).digest()
    else:
        digest = hashlib.blake2b(str(part).encode(), digest_size=8).digest()
    word = int.from_bytes(digest, "little")
    return (word & 0xFFFFFFFF, word >> 32)


def unit_rng(master_seed: int, *unit_key) -> np.random.Generator:
    """Deterministic generator for the work unit identified by unit_key."""
    words: list[int] = []
    for part in unit_key:
        words.extend(_key_words(part))
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(words))
    return np.random.Generator(np.random.Philox(seq))
