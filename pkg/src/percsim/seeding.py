"""Counter-based randomness with O(1) access by absolute index.

Coupling-from-the-past needs the *same* random update at absolute time -t
every time a chain is restarted from an earlier horizon.  A stateful
generator would force us to cache or replay entire streams; instead every
draw is a pure function of (seed, index) via the SplitMix64 output mix,
which passes BigCrush and costs a handful of integer ops.  All arithmetic
is explicit 64-bit, so streams are reproducible across platforms and
interpreter versions.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15  # 2^64 / phi, the SplitMix64 increment


def mix64(z: int) -> int:
    """SplitMix64 finalizer: bijective avalanche mix of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_u64(seed: int, index: int) -> int:
    """The ``index``-th 64-bit word of the stream keyed by ``seed``.

    ``index`` may be any Python int (CFTP uses negative absolute times);
    it is folded into the counter before mixing.
    """
    return mix64((seed + ((index + 1) * _GOLDEN)) & MASK64)


def stream_uniform(seed: int, index: int) -> float:
    """Uniform float in [0, 1) from word ``index``, 53-bit mantissa."""
    return (stream_u64(seed, index) >> 11) * 2.0**-53


def pick_index(word: int, n: int) -> int:
    """Map a 64-bit word to {0, ..., n-1} (Lemire multiply-shift).

    Bias is O(n / 2^64), negligible for the window sizes used here, and
    unlike modulo the result is monotone in ``word``.
    """
    return ((word & MASK64) * n) >> 64


def derive_seed(master: int, index: int) -> int:
    """Independent child seed ``index`` of ``master`` (replica streams)."""
    return stream_u64(master, index)
