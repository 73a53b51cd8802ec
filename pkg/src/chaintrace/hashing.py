"""64-bit mixing primitives for chunk placement and synthetic data.

Everything here is plain integer arithmetic mod 2**64 (a splitmix64-style
finalizer), so results are identical across platforms, Python versions, and
NumPy versions.  The counter-based stream makes random draws addressable by
index, which keeps generated ledgers byte-reproducible.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """Avalanche a 64-bit integer."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX_A) & MASK64
    x = ((x ^ (x >> 27)) * _MIX_B) & MASK64
    return x ^ (x >> 31)


def mix64_array(values: np.ndarray) -> np.ndarray:
    """Vectorised :func:`mix64` over a uint64 array (wrapping arithmetic)."""
    x = values.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX_A)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX_B)
    x ^= x >> np.uint64(31)
    return x


def stream_value(seed: int, index: int) -> int:
    """index-th 64-bit value of the counter stream for ``seed``."""
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


def stream_unit(seed: int, index: int) -> float:
    """index-th stream value mapped to [0, 1)."""
    return (stream_value(seed, index) >> 11) * 2.0**-53


def stream_array(seed: int, start: int, count: int) -> np.ndarray:
    """Stream values ``start .. start+count-1`` as a uint64 array."""
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    counters *= np.uint64(GOLDEN)
    counters += np.uint64(seed & MASK64)
    return mix64_array(counters)


def stream_unit_array(seed: int, start: int, count: int) -> np.ndarray:
    """Stream values ``start .. start+count-1`` mapped to [0, 1) as float64."""
    return (stream_array(seed, start, count) >> np.uint64(11)) * 2.0**-53
