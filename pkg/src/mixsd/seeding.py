"""Deterministic seed derivation and a counter-based uniform generator.

Everything here is pure integer arithmetic so that streams are identical
across platforms and across process restarts.  Python's built-in hash()
is never used (it is salted per process).
"""

from __future__ import annotations

import hashlib

_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One SplitMix64 step: maps a 64-bit state to a well-mixed 64-bit value."""
    z = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def stable_hash64(*parts: int | str) -> int:
    """Collision-resistant 64-bit digest of a heterogeneous key tuple."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, int):
            h.update(b"i")
            h.update(part.to_bytes(16, "little", signed=True))
        else:
            raw = part.encode("utf-8")
            h.update(b"s")
            h.update(len(raw).to_bytes(8, "little"))
            h.update(raw)
    return int.from_bytes(h.digest(), "little")


def derive_seed(seed: int, *scope: int | str) -> int:
    """Child seed for an independent named stream under a master seed."""
    return stable_hash64(seed, *scope)


def counter_unit(key: int, counter: int) -> float:
    """Uniform float in [0, 1) for (key, counter); order-independent per draw."""
    mixed = splitmix64((key ^ splitmix64(counter & _MASK64)) & _MASK64)
    return (mixed >> 11) * (1.0 / (1 << 53))


def counter_bernoulli(key: int, counter: int, p: float) -> bool:
    """True with probability p, from the counter-based stream."""
    return counter_unit(key, counter) < p
