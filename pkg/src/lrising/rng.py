"""Deterministic counter-based randomness.

Every random draw in the package comes from a Philox4x64 stream whose
128-bit key is the pair (seed, i): substream i of a 64-bit experiment seed.
Philox is counter-based, so streams are cheap to construct, independent by
key, and reproducible regardless of chunking, thread count, or platform.

sample_signs generates i.i.d. +-1 matrices where row i is drawn entirely
from substream (seed, start + i); vectorized consumers (boundary-energy
sampling, metastate histograms) therefore produce identical numbers whether
they batch 10 or 10^4 samples at a time.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

_U64 = (1 << 64) - 1


def substream(seed: int, index: int) -> Generator:
    """Generator for substream ``index`` of ``seed``: Philox key (seed, index)."""
    if not (0 <= seed <= _U64):
        raise ValueError("seed must fit in 64 bits")
    if not (0 <= index <= _U64):
        raise ValueError("substream index must fit in 64 bits")
    return Generator(Philox(key=np.array([seed, index], dtype=np.uint64)))


def raw_bits(seed: int, index: int, n_words: int) -> np.ndarray:
    """First n_words raw 64-bit outputs of substream (seed, index)."""
    bg = Philox(key=np.array([seed, index], dtype=np.uint64))
    return bg.random_raw(n_words)


def sample_signs(seed: int, start: int, count: int, n: int) -> np.ndarray:
    """(count, n) float64 matrix of i.i.d. +-1; row i from substream (seed, start+i)."""
    n_words = (n + 63) // 64
    buf = np.empty((count, n_words), dtype=np.uint64)
    for i in range(count):
        buf[i] = raw_bits(seed, start + i, n_words)
    bits = np.unpackbits(buf.view(np.uint8), axis=1, count=n)
    return (2.0 * bits - 1.0).astype(np.float64)
