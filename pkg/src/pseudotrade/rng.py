"""Seed derivation and the random source used throughout the package.

Random numbers come from numpy's ``PCG64`` bit generator. Independent
sub-streams are keyed by labels: ``child_seed(seed, *labels)`` folds each
label into the seed with the SplitMix64 finalizer, so a stream depends only
on the base seed and the label path, never on call order.

Labels are hashed with 64-bit FNV-1a over their UTF-8 ``str()`` form. Integer
labels are hashed the same way (as decimal text) so ``("run", 3)`` and
``("run", "3")`` name the same stream.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def splitmix64(x: int) -> int:
    """SplitMix64 output function applied to ``x + golden gamma``."""
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def fnv1a64(label) -> int:
    h = _FNV_OFFSET
    for byte in str(label).encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & MASK64
    return h


def mix(seed: int, label) -> int:
    """Derive a child seed from ``seed`` and one label."""
    return splitmix64((seed & MASK64) ^ fnv1a64(label))


def child_seed(seed: int, *labels) -> int:
    for label in labels:
        seed = mix(seed, label)
    return seed


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def make_rng(seed: int, *labels) -> np.random.Generator:
    """PCG64 generator for the sub-stream ``labels`` of ``seed``."""
    return np.random.Generator(np.random.PCG64(child_seed(check_seed(seed), *labels)))
