"""Named deterministic random streams.

Every random choice in the package is drawn from a Philox counter-based
generator keyed by ``(master seed, purpose tag, *indices)``.  The tag is
hashed with BLAKE2b, so introducing a new tag never perturbs existing
streams, and indexed streams (one per layout, one per matching round, one
per bipartite pair, ...) do not depend on the order in which they are
opened.  This is what makes a parallel execution of the pipeline equal the
sequential reference run bit for bit.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _tag_entropy(tag: str) -> int:
    digest = hashlib.blake2b(tag.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _seed_sequence(seed: int, tag: str, indices: tuple[int, ...]) -> np.random.SeedSequence:
    for idx in indices:
        if idx < 0:
            raise ValueError(f"stream index must be non-negative, got {idx}")
    entropy = [int(seed) & _MASK64, _tag_entropy(tag), *indices]
    return np.random.SeedSequence(entropy)


def stream(seed: int, tag: str, *indices: int) -> np.random.Generator:
    """Open the generator for stream ``(seed, tag, *indices)``."""
    return np.random.Generator(np.random.Philox(_seed_sequence(seed, tag, indices)))


def derive_seed(seed: int, tag: str, *indices: int) -> int:
    """Derive a 64-bit child seed for a sub-computation.

    Used by the pipelines to hand independent master seeds to nested
    components (labeling, per-pair matching extraction, ...).
    """
    state = _seed_sequence(seed, tag, indices).generate_state(1, np.uint64)
    return int(state[0])
