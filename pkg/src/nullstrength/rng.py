"""Seeded, order-independent random streams.

Every stochastic routine takes an :class:`RngSeed`.  Child seeds are derived
by hashing keys into the stream id, so work units (groups, configuration
pairs, iterations) get independent streams no matter which process or in
which order they run.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


def _hash64(*parts: object) -> int:
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class RngSeed:
    """A reproducible stream address: ``(master_seed, stream_id)``."""

    master_seed: int = 0
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name in ("master_seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= value <= _MASK64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {value!r}")

    def derive(self, *keys: object) -> RngSeed:
        """Return the child seed addressed by ``keys``."""
        return RngSeed(self.master_seed, _hash64(self.stream_id, *keys))

    def generator(self, substream: int = 0) -> np.random.Generator:
        """A fresh PCG64 generator for this address.

        ``substream`` selects one of several independent generators sharing the
        address (e.g. control and experiment group).
        """
        seq = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_id), substream))
        return np.random.Generator(np.random.PCG64(seq))

    def to_dict(self) -> dict[str, int]:
        return {"master_seed": int(self.master_seed), "stream_id": int(self.stream_id)}


def as_seed(seed: RngSeed | int | None) -> RngSeed:
    """Coerce an int (master seed) or ``None`` (seed 0) to an :class:`RngSeed`."""
    if seed is None:
        return RngSeed()
    if isinstance(seed, RngSeed):
        return seed
    return RngSeed(int(seed))
