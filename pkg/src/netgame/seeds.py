"""Deterministic seed derivation.

All randomness in the package flows from one user-supplied seed. Child
seeds are derived by hashing the master seed together with a label and
optional indices (e.g. ``derive_seed(master, "trial", 17)``), so runs are
replayable and independent sub-streams never collide.
"""

from __future__ import annotations

import hashlib


def derive_seed(master: int, *parts: int | str) -> int:
    """Derive a 64-bit child seed from a master seed and a label path."""
    payload = repr((int(master),) + parts).encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "big")
