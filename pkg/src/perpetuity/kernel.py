"""Closed-form transition kernel of the chain X -> U*X + U*(1-U) on [0, 1].

For a state ``x`` the next value has density ``density_phi(x, .)`` supported on
``[0, b_x)`` with ``b_x = ((1+x)/2)**2``.  That density is split as
``r + g_x`` where ``r = 1/2`` on ``[0, 1/4)`` does not depend on ``x``; the
normalised remainder ``g_x / (7/8)`` has CDF ``cdf_G`` and the explicit
six-piece quantile function ``inverse_G``.

The scalar public functions validate their arguments and raise
:class:`DomainError`.  ``_inverse_g`` is the numba-compiled core shared with
the sampler's hot loop.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numba
import numpy as np

# radicands this far below zero are floating-point noise at a breakpoint
RADICAND_SLACK = 1e-12

COUPLING_MASS = 0.125
_SUPPORT_R = 0.25

# Coefficients of the six quantile pieces, one independent entry per literal.
#   piece 1/4: -c0*z + sqrt(c1*z + (c2 - x)**2) + c3*x - c4
#   piece 2:   -c0*z + c1*sqrt(c2*z + c3 + x*(x + c4)) - c5
#   piece 5:   (c1 + c2*x - c3*z) * (c4 + c5*z) / c0
#   piece 3/6: (c1 + c2*x - c3*z) * (c4 + c5*x + c6*z) / c0
INVERSE_COEFFICIENTS = np.array([
    1.75, 7.0, 1.0, 1.0, 1.0,                 # 0..4   piece 1
    1.75, 2.0, 7.0, 9.0, 2.0, 6.0,            # 5..10  piece 2
    256.0, 15.0, 8.0, 7.0, 1.0, 8.0, 7.0,     # 11..17 piece 3
    1.75, 7.0, 1.0, 1.0, 1.0,                 # 18..22 piece 4
    64.0, 7.0, 8.0, 7.0, 1.0, 7.0,            # 23..28 piece 5
    256.0, 15.0, 8.0, 7.0, 1.0, 8.0, 7.0,     # 29..35 piece 6
])


class DomainError(ValueError):
    """Argument outside the domain of a kernel function."""


class Regime(enum.Enum):
    LOW = "low"      # x <= 1/4
    HIGH = "high"    # x > 1/4


@dataclass(frozen=True)
class Breakpoints:
    """Cut points in z separating the pieces of ``inverse_G``.

    LOW: ``cut1 = 4x/7``, ``cut2 = 1 - (8/7) sqrt(x(x+2))``.
    HIGH: ``cut1 = (3 + 4x - 4 sqrt(x(x+2)))/7``, ``cut2 = (8x - 1)/7``.
    """

    regime: Regime
    cut1: float
    cut2: float


def _check_unit(name, value):
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name}={value!r} outside [0, 1]")


def _guarded_sqrt(v):
    if v < 0.0:
        if v < -RADICAND_SLACK:
            raise DomainError(f"negative radicand {v!r}")
        return 0.0
    return math.sqrt(v)


def _radicand(x, y):
    # (1+x)^2 - 4y, arranged to be exact at y == x
    return (1.0 - x) ** 2 + 4.0 * (x - y)


def upper_endpoint(x: float) -> float:
    """Right end ``b_x = ((1+x)/2)**2`` of the support of the transition."""
    _check_unit("x", x)
    return ((1.0 + x) / 2.0) ** 2


def density_phi(x: float, t: float) -> float:
    """Transition density at ``t`` from state ``x``; zero for ``t >= b_x``."""
    _check_unit("x", x)
    _check_unit("t", t)
    b = ((1.0 + x) / 2.0) ** 2
    if t >= b:
        return 0.0
    coef = 1.0 if t < x else 2.0
    return coef / _guarded_sqrt(_radicand(x, t))


def cdf_F(x: float, y: float) -> float:
    """CDF of ``U*x + U*(1-U)`` at ``y``."""
    _check_unit("x", x)
    _check_unit("y", y)
    b = ((1.0 + x) / 2.0) ** 2
    if y >= b:
        return 1.0
    root = _guarded_sqrt(_radicand(x, y))
    # rationalised forms of (1 + x - root)/2 and 1 - root, free of cancellation near 0
    if y < x:
        return 2.0 * y / (1.0 + x + root)
    return (x * (2.0 - x) + 4.0 * (y - x)) / (1.0 + root)


def dominating_r(t: float) -> float:
    """State-independent lower bound of the transition density."""
    _check_unit("t", t)
    return 0.5 if t < _SUPPORT_R else 0.0


def cdf_G(x: float, y: float) -> float:
    """CDF of the non-coupling part ``(phi_x - r) / (7/8)``."""
    f = cdf_F(x, y)
    g = (f - 0.5 * min(y, _SUPPORT_R)) / (1.0 - COUPLING_MASS)
    return min(max(g, 0.0), 1.0)


def breakpoints(x: float) -> Breakpoints:
    _check_unit("x", x)
    root = math.sqrt(x * (x + 2.0))
    if x <= _SUPPORT_R:
        return Breakpoints(Regime.LOW, 4.0 * x / 7.0, 1.0 - 8.0 / 7.0 * root)
    return Breakpoints(Regime.HIGH, (3.0 + 4.0 * x - 4.0 * root) / 7.0,
                       (8.0 * x - 1.0) / 7.0)


@numba.njit(cache=True)
def _root(v):
    if v < 0.0:
        if v < -RADICAND_SLACK:
            raise ValueError("negative radicand in quantile function")
        return 0.0
    return math.sqrt(v)


@numba.njit(cache=True)
def _piece_sqrt(x, z, c, k):
    return -c[k] * z + _root(c[k + 1] * z + (c[k + 2] - x) ** 2) + c[k + 3] * x - c[k + 4]


@numba.njit(cache=True)
def _piece_upper(x, z, c, k):
    return (c[k + 1] + c[k + 2] * x - c[k + 3] * z) * (c[k + 4] + c[k + 5] * x + c[k + 6] * z) / c[k]


@numba.njit(cache=True)
def _inverse_g(x, z, c):
    root = math.sqrt(x * (x + 2.0))
    if x <= 0.25:
        if z <= 4.0 * x / 7.0:
            y = _piece_sqrt(x, z, c, 0)
        elif z <= 1.0 - 8.0 / 7.0 * root:
            y = -c[5] * z + c[6] * _root(c[7] * z + c[8] + x * (x + c[9])) - c[10]
        else:
            y = _piece_upper(x, z, c, 11)
    else:
        if z <= (3.0 + 4.0 * x - 4.0 * root) / 7.0:
            y = _piece_sqrt(x, z, c, 18)
        elif z <= (8.0 * x - 1.0) / 7.0:
            y = (c[24] + c[25] * x - c[26] * z) * (c[27] + c[28] * z) / c[23]
        else:
            y = _piece_upper(x, z, c, 29)
    b = (0.5 * (1.0 + x)) ** 2
    if y < 0.0:
        return 0.0
    if y > b:
        return b
    return y


def _checked_inverse(x, z, c):
    _check_unit("x", x)
    _check_unit("z", z)
    try:
        return _inverse_g(float(x), float(z), c)
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def inverse_G(x: float, z: float) -> float:
    """Quantile function of ``cdf_G``; the result is clamped into ``[0, b_x]``."""
    return _checked_inverse(x, z, INVERSE_COEFFICIENTS)


def inverse_G_with(coefficients):
    """Quantile function built from an explicit coefficient table.

    Only useful for mutation testing; ``inverse_G`` uses ``INVERSE_COEFFICIENTS``.
    """
    c = np.ascontiguousarray(coefficients, dtype=np.float64)
    if c.shape != INVERSE_COEFFICIENTS.shape:
        raise ValueError(f"expected {INVERSE_COEFFICIENTS.size} coefficients")
    return lambda x, z: _checked_inverse(x, z, c)
