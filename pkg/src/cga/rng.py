"""Deterministic random-stream derivation.

All randomness in this package flows from a single 64-bit master seed
through two published constructions:

* ``splitmix64(seed, index)`` — the index-th output of the SplitMix64
  sequence seeded at ``seed`` (Steele, Lea & Flood's finalizer with the
  golden-gamma increment).  Used to derive per-trial seeds from an
  experiment master seed; O(1) random access.

* Philox-4x64 substreams keyed by ``(splitmix64(seed, a), splitmix64(seed ^
  STREAM_SALT, b))`` for a stream label ``(a, b)``.  Both key halves are
  injective in their label coordinate, so distinct labels are guaranteed
  distinct keys.  Philox is counter-based, so a substream's output depends
  only on its key — generation order and thread assignment cannot change
  the bytes produced.

Stream labels used by this package: the graph sampler owns ``(j, i)`` with
height class j >= 1 and block index i; label class 0 is reserved for
auxiliary draws (the reference per-pair sampler, candidate-set sampling).
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
STREAM_SALT = 0x5851F42D4C957F2D

MAX_SEED = _MASK64


def check_seed(seed: int) -> int:
    if not isinstance(seed, int) or not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return seed


def splitmix64(seed: int, index: int = 0) -> int:
    """Output ``index`` of the SplitMix64 stream seeded with ``seed``."""
    z = (seed + (index + 1) * _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def substream_key(seed: int, a: int, b: int) -> tuple[int, int]:
    """The Philox key of stream label (a, b) under the given master seed."""
    return splitmix64(seed, a), splitmix64(seed ^ STREAM_SALT, b)


def substream(seed: int, a: int, b: int) -> np.random.Generator:
    """A fresh generator positioned at the start of stream label (a, b)."""
    k0, k1 = substream_key(seed, a, b)
    return np.random.Generator(np.random.Philox(key=(k0 << 64) | k1))


class SubstreamSampler:
    """A reusable Philox generator that can be repositioned to any stream.

    Repositioning rewrites the Philox key and zeroes the counter and output
    buffer, which reproduces exactly the stream of a freshly constructed
    generator with the same key, while avoiding per-stream object
    construction.  Not thread-safe; use one instance per worker.
    """

    def __init__(self) -> None:
        self._bitgen = np.random.Philox(key=0)
        self.gen = np.random.Generator(self._bitgen)
        self._template = self._bitgen.state

    def reset(self, seed: int, a: int, b: int) -> np.random.Generator:
        k0, k1 = substream_key(seed, a, b)
        st = self._template
        st["state"]["counter"][:] = 0
        st["state"]["key"][0] = k1  # numpy stores the low word first
        st["state"]["key"][1] = k0
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        st["uinteger"] = 0
        self._bitgen.state = st
        return self.gen
