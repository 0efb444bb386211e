"""Keyed deterministic randomness.

Every random decision that must not depend on stream order (vertex colors,
membership in the sampled set, dummy coins, per-vertex reservoir choices) is a
pure function of ``(seed, tag, *ids)``. Sequential per-edge coins use
``random.Random`` seeded from a derived key instead, which is cheaper.
"""

import random

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / (1 << 53)

# purpose tags
TAG_COLOR = 1
TAG_KEEP = 2
TAG_FLIP = 3
TAG_MEMBER = 4
TAG_DUMMY = 5
TAG_RES_IN = 6
TAG_RES_OUT = 7
TAG_B = 8
TAG_C = 9
TAG_LADDER = 10
TAG_FIXTURE = 11


def _mix(z):
    # splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def keyed_uint(seed, *keys):
    """64-bit hash of ``seed`` and integer ``keys``."""
    h = _mix((seed + _GOLDEN) & _MASK)
    for k in keys:
        h = _mix((h ^ (k & _MASK)) + _GOLDEN & _MASK)
    return h


def keyed_uniform(seed, *keys):
    """Uniform float in [0, 1) determined by ``seed`` and ``keys``."""
    return (keyed_uint(seed, *keys) >> 11) * _INV_2_53


def derived_rng(seed, *keys):
    """A ``random.Random`` whose state is a function of ``seed`` and ``keys``."""
    return random.Random(keyed_uint(seed, *keys))
