"""Deterministic derivation of independent random streams from one seed.

Every stochastic component draws from its own ``random.Random`` stream,
derived from the master seed plus a label and counters (for example
``stream(seed, "mutate", generation, child_index)``).  Streams therefore
never share state, so the order in which work is scheduled -- including
parallel fitness evaluation -- cannot change what any stream produces.

Derivation hashes the canonical text of the parts with SHA-256, which is
stable across processes and platforms (unlike ``hash()``).
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(master: int, *parts: int | str) -> int:
    """Mix a master seed and labels/counters into a new 64-bit seed."""
    text = ":".join([str(master), *map(str, parts)])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def stream(master: int, *parts: int | str) -> random.Random:
    """A fresh Random instance for the (master, parts) coordinate."""
    return random.Random(derive_seed(master, *parts))
