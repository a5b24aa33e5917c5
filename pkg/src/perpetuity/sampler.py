"""Coupling-from-the-past sampler with a multigamma coupler.

Going back in time, each step couples all chains with probability 1/8 (the
mass of the common density component), so the most recent coupling lies a
Geometric(1/8) number ``N >= 0`` of steps in the past.  There every chain sits
at ``U/4``; ``N`` quantile updates then carry it to time 0.

Uniform consumption per sample, all consecutive from one stream:
one for ``N``, one for the coupled value, then ``N`` update values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .kernel import INVERSE_COEFFICIENTS, _inverse_g, inverse_G
from .rng import BLOCK, RngStream

MAX_SAMPLES = 10**9
_LOG_NO_COUPLE = math.log(7.0 / 8.0)
_TINY = 5e-324


class SampleLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class SampleTrace:
    """Full chain from the coupling time up to time 0.

    ``path[0]`` is the coupled value and ``path[k+1] = inverse_G(path[k],
    uniforms[k])``; ``len(path) == n + 1``.
    """

    n: int
    coupled_value: float
    path: tuple
    uniforms: tuple

    @property
    def value(self) -> float:
        return self.path[-1]


@numba.njit(cache=True)
def _geometric(u):
    if u <= 0.0:
        u = _TINY
    return int(math.floor(math.log(u) / _LOG_NO_COUPLE))


def geometric_from_uniform(u: float) -> int:
    """Inverse-CDF map from a uniform to Geometric(1/8) on {0, 1, ...}."""
    if u <= 0.0:
        u = _TINY
    return math.floor(math.log(u) / _LOG_NO_COUPLE)


def draw_geometric(stream: RngStream) -> int:
    return geometric_from_uniform(stream.uniform())


def update(x: float, b: int, u: float) -> float:
    """One coupled transition: ``u/4`` when ``b == 1``, else ``inverse_G(x, u)``."""
    if b:
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"u={u!r} outside [0, 1)")
        return 0.25 * u
    return inverse_G(x, u)


def sample_one(stream: RngStream) -> float:
    n = draw_geometric(stream)
    x = 0.25 * stream.uniform()
    for _ in range(n):
        x = update(x, 0, stream.uniform())
    return x


def sample_traced(stream: RngStream) -> SampleTrace:
    n = draw_geometric(stream)
    x = 0.25 * stream.uniform()
    path = [x]
    us = stream.uniforms(n).tolist()
    for u in us:
        x = update(x, 0, u)
        path.append(x)
    return SampleTrace(n, path[0], tuple(path), tuple(us))


@numba.njit(cache=True)
def _sample_block(buf, pos, out, steps, i, c):
    """Fill ``out[i:]`` until done or the buffer cannot hold a whole sample."""
    size = buf.size
    count = out.size
    while i < count and pos < size:
        n = _geometric(buf[pos])
        if pos + 2 + n > size:
            break
        x = 0.25 * buf[pos + 1]
        for k in range(n):
            x = _inverse_g(x, buf[pos + 2 + k], c)
        out[i] = x
        steps[i] = n
        pos += n + 2
        i += 1
    return i, pos


def sample_with_steps(stream: RngStream, count: int, *, limit: int = MAX_SAMPLES):
    """Draw ``count`` samples; also return each sample's backoff ``N``.

    Produces exactly what ``count`` calls of ``sample_one`` on the same stream
    would, through the compiled loop.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count > limit:
        raise SampleLimitError(f"count {count} exceeds the limit {limit}")
    out = np.empty(count)
    steps = np.empty(count, dtype=np.int64)
    i = 0
    while i < count:
        buf, pos = stream._window(BLOCK)
        i, new_pos = _sample_block(buf, pos, out, steps, i, INVERSE_COEFFICIENTS)
        stream._advance(new_pos)
    return out, steps


def sample_many(stream: RngStream, count: int, *, limit: int = MAX_SAMPLES) -> np.ndarray:
    return sample_with_steps(stream, count, limit=limit)[0]
