"""Portable 64-bit hashing used for partition assignment and seed derivation.

The vertex hash is the splitmix64 finalizer applied to ``x + (seed + 1) * GOLDEN``
(all arithmetic mod 2**64):

    z = x + (seed + 1) * 0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

Pairs hash as ``mix(mix(a, seed) ^ b, seed)``.
"""

from __future__ import annotations

import hashlib

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def mix64(x: np.ndarray | int, seed: int = 0) -> np.ndarray:
    """Vectorized splitmix64 finalizer, seeded. Returns uint64."""
    with np.errstate(over="ignore"):
        z = np.asarray(x).astype(np.uint64) + np.uint64(((seed + 1) * 0x9E3779B97F4A7C15) & _MASK)
        z = (z ^ (z >> np.uint64(30))) * M1
        z = (z ^ (z >> np.uint64(27))) * M2
        return z ^ (z >> np.uint64(31))


def mix64_int(x: int, seed: int = 0) -> int:
    """Pure-Python reference of :func:`mix64` for a single value."""
    z = (x + (seed + 1) * 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def pair_hash(a: np.ndarray, b: np.ndarray, seed: int = 0) -> np.ndarray:
    return mix64(mix64(a, seed) ^ np.asarray(b).astype(np.uint64), seed)


def bucket(h: np.ndarray, k: int) -> np.ndarray:
    return (h % np.uint64(k)).astype(np.int64)


def derive_seed(*parts: object) -> int:
    """Stable 63-bit seed from arbitrary printable parts."""
    text = "|".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") & ((1 << 63) - 1)
