"""Deterministic seed derivation and counter-based uniform streams.

All randomness in the package flows from explicit integer seeds.  Child
seeds are derived by hashing (master seed, tags), so corpus items, Monte
Carlo trials, and walk paths each get a reproducible stream that does not
depend on evaluation order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master: int, *tags) -> int:
    """Stable 63-bit child seed from a master seed plus context tags."""
    blob = repr((int(master),) + tags).encode("utf-8")
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big") >> 1


def uniform_block(seed: int, width: int, start: int, count: int) -> np.ndarray:
    """Rows [start, start+count) of the uniform matrix keyed by `seed`.

    Row t holds the `width` uniforms assigned to trial t.  The matrix is a
    pure function of (seed, t): entries are consecutive outputs of a
    counter-based generator, so any chunking or parallel split over trial
    ranges reproduces the same values.
    """
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    offset = start * width
    bit_gen = np.random.Philox(key=seed)
    # advance() steps the 128-bit counter, worth four 64-bit doubles each
    bit_gen.advance(offset // 4)
    gen = np.random.Generator(bit_gen)
    if offset % 4:
        gen.random(offset % 4)
    return gen.random((count, width))
