"""Seeded stream of uniforms on [0, 1).

Values come from numpy's PCG64 bit generator seeded through ``SeedSequence``;
each double uses 53 random bits (``Generator.random``).  The stream is read
through a block buffer so scalar reads and the compiled bulk sampler see one
and the same sequence.  A stream has a single owner and is not thread safe.
"""
from __future__ import annotations

import numpy as np

BLOCK = 1 << 16
_SEED_LIMIT = 1 << 64


def _check_seed(seed):
    if not isinstance(seed, (int, np.integer)) or not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


class RngStream:
    """Deterministic stream of uniforms in [0, 1).

    Equal seeds give bit-identical sequences.
    """

    def __init__(self, seed: int = 1, *, _seed_seq: np.random.SeedSequence | None = None):
        self.seed = _check_seed(seed)
        seq = _seed_seq if _seed_seq is not None else np.random.SeedSequence(self.seed)
        self._gen = np.random.Generator(np.random.PCG64(seq))
        self._buf = np.empty(0)
        self._pos = 0
        self.consumed = 0

    @classmethod
    def for_worker(cls, seed: int, worker: int) -> "RngStream":
        """Independent stream for parallel worker ``worker``.

        Mixing is ``SeedSequence(seed, spawn_key=(worker,))``, the same
        derivation ``SeedSequence.spawn`` uses for its children.
        """
        if worker < 0:
            raise ValueError("worker index must be nonnegative")
        seed = _check_seed(seed)
        return cls(seed, _seed_seq=np.random.SeedSequence(seed, spawn_key=(int(worker),)))

    def _window(self, need: int):
        """Return (buffer, position) with at least ``need`` unread values."""
        left = self._buf.size - self._pos
        if left < need:
            fresh = self._gen.random(max(BLOCK, need - left))
            self._buf = np.concatenate((self._buf[self._pos:], fresh))
            self._pos = 0
        return self._buf, self._pos

    def _advance(self, pos: int) -> None:
        self.consumed += pos - self._pos
        self._pos = pos

    def uniform(self) -> float:
        buf, pos = self._window(1)
        self._advance(pos + 1)
        return float(buf[pos])

    def uniforms(self, count: int) -> np.ndarray:
        """Next ``count`` values as an array (a copy)."""
        buf, pos = self._window(count)
        self._advance(pos + count)
        return buf[pos:pos + count].copy()
