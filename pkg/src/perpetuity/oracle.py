"""Independent checks of the kernel and the sampler.

Nothing here uses the closed-form quantile function to produce a reference:
inversion is checked against bisection on ``cdf_G``, the sampler against a
long forward run of ``X -> U*X + U*(1-U)``, moments against the exact values
obtained by taking expectations in the fixed-point equation.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernel
from .kernel import cdf_F, cdf_G, density_phi, dominating_r, upper_endpoint
from .rng import RngStream
from .sampler import sample_with_steps
from .stats import empirical_moments, ks_two_sample

MAX_BISECTION_STEPS = 200
ROUND_TRIP_COUNT = 10**4
KS_COUNT = 10**5
# tolerances of the statistical checks hold at this sample size
REFERENCE_N = 10**6


class BisectionError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    bisection_tol: float = 1e-12
    burn_in: int = 100
    start_state: float = 0.0

    def __post_init__(self):
        if not self.bisection_tol > 0:
            raise ValueError("bisection_tol must be positive")
        if self.burn_in < 1:
            raise ValueError("burn_in must be >= 1")
        if not 0.0 <= self.start_state <= 1.0:
            raise ValueError("start_state must lie in [0, 1]")


def inverse_G_bisection(x: float, z: float, tol: float = 1e-12) -> float:
    """Solve ``cdf_G(x, y) = z`` for y on ``[0, b_x]`` by bisection."""
    if not 0.0 <= z <= 1.0:
        raise kernel.DomainError(f"z={z!r} outside [0, 1]")
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.0, upper_endpoint(x)
    for _ in range(MAX_BISECTION_STEPS):
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if cdf_G(x, mid) < z:
            lo = mid
        else:
            hi = mid
    raise BisectionError(f"no convergence for x={x!r}, z={z!r}")


def forward_chain_sample(stream: RngStream, config: OracleConfig = OracleConfig()) -> float:
    x = config.start_state
    for _ in range(config.burn_in):
        u = stream.uniform()
        x = u * x + u * (1.0 - u)
    return x


def forward_chain_samples(stream: RngStream, count: int,
                          config: OracleConfig = OracleConfig(), chunk: int = 10**4) -> np.ndarray:
    """``count`` independent restarts; same values as repeated ``forward_chain_sample``."""
    out = np.empty(count)
    for start in range(0, count, chunk):
        m = min(chunk, count - start)
        u = stream.uniforms(m * config.burn_in).reshape(m, config.burn_in)
        x = np.full(m, float(config.start_state))
        for j in range(config.burn_in):
            uj = u[:, j]
            x = uj * x + uj * (1.0 - uj)
        out[start:start + m] = x
    return out


def _uniform_moment(k):
    return Fraction(1, k + 1)


def exact_moments_fractions():
    """(E[Y], E[Y^2], Var Y) as exact fractions.

    Squaring Y = UY + U(1-U) and taking expectations with Y independent of U:
    E[Y] = E[U] E[Y] + E[U - U^2],
    E[Y^2] = E[U^2] E[Y^2] + 2 E[U^2 - U^3] E[Y] + E[U^2 - 2U^3 + U^4].
    """
    m = _uniform_moment
    mean = (m(1) - m(2)) / (1 - m(1))
    second = (2 * (m(2) - m(3)) * mean + m(2) - 2 * m(3) + m(4)) / (1 - m(2))
    return mean, second, second - mean**2


def exact_moments():
    return tuple(float(v) for v in exact_moments_fractions())


@dataclass(frozen=True)
class Check:
    """One named check.

    ``kind`` is ``"max"`` (measured <= tolerance), ``"min"`` (measured >=
    tolerance) or ``"abs"`` (|measured - target| <= tolerance).
    """

    name: str
    measured: float
    tolerance: float
    kind: str = "max"
    target: float | None = None

    @property
    def passed(self) -> bool:
        if math.isnan(self.measured):
            return False
        if self.kind == "max":
            return self.measured <= self.tolerance
        if self.kind == "min":
            return self.measured >= self.tolerance
        return abs(self.measured - self.target) <= self.tolerance

    def describe(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        if self.kind == "abs":
            rule = f"target {self.target:.12g} +/- {self.tolerance:.6g}"
        else:
            rule = ("<= " if self.kind == "max" else ">= ") + f"{self.tolerance:.6g}"
        return f"{flag} {self.name}: measured {self.measured:.12g} ({rule})"


@dataclass
class Report:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [c.describe() for c in self.checks]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check_name", "measured", "tolerance", "pass"])
        for c in self.checks:
            w.writerow([c.name, repr(c.measured), repr(c.tolerance), str(c.passed).lower()])
        return buf.getvalue()


# ---- kernel checks ---------------------------------------------------------

def _grid(step=1.0 / 512):
    return np.arange(0, int(round(1 / step)) + 1) * step


def coupler_checks(step=1.0 / 512):
    grid = _grid(step).tolist()
    low_t = np.linspace(0.0, 0.25 - 1e-9, int(round(0.25 / step)) + 1).tolist()
    gap = min(density_phi(x, t) - dominating_r(t) for x in grid for t in grid)
    floor = min(density_phi(x, t) for x in grid for t in low_t)
    # midpoint rule on cells aligned with the jump at 1/4 is exact
    mids = ((np.arange(512) + 0.5) / 512).tolist()
    mass = sum(dominating_r(t) for t in mids) / 512
    return [
        Check("decomposition_min_phi_minus_r", gap, -1e-12, "min"),
        Check("density_lower_bound_on_quarter", floor, 0.5, "min"),
        Check("dominating_mass", mass, 0.0, "abs", kernel.COUPLING_MASS),
    ]


def cdf_density_check(n_x=65, n_y=513, delta=1e-3, h=1e-6):
    worst = 0.0
    for x in np.linspace(0.0, 1.0, n_x).tolist():
        b = upper_endpoint(x)
        for y in np.linspace(0.0, b - delta, n_y)[1:].tolist():
            if abs(y - x) < 10 * h:
                continue
            slope = (cdf_F(x, y + h) - cdf_F(x, y - h)) / (2 * h)
            phi = density_phi(x, y)
            worst = max(worst, abs(slope - phi) / (1.0 + phi))
    return Check("cdf_density_consistency", worst, 1e-4)


def breakpoint_checks(step=1.0 / 512):
    worst = 0.0
    for x in _grid(step).tolist():
        bp = kernel.breakpoints(x)
        worst = max(worst, abs(cdf_G(x, min(x, 0.25)) - bp.cut1),
                    abs(cdf_G(x, max(x, 0.25)) - bp.cut2))
    return Check("breakpoint_coherence", worst, 1e-12)


def random_points(seed, count=ROUND_TRIP_COUNT):
    """Random (x, z) and (x, y < b_x) pairs for the inversion checks."""
    u = RngStream.for_worker(seed, 3).uniforms(4 * count).reshape(4, count)
    xs, zs, xs2 = u[0], u[1], u[2]
    ys = u[3] * ((1.0 + xs2) / 2.0) ** 2
    return xs, zs, xs2, ys


def bisection_reference(xs, zs, tol=1e-12):
    return np.array([inverse_G_bisection(x, z, tol) for x, z in zip(xs.tolist(), zs.tolist())])


def inversion_checks(inverse=kernel.inverse_G, seed=1, count=ROUND_TRIP_COUNT, reference=None):
    """Round trips through ``cdf_G`` and agreement with bisection.

    ``reference`` may hold a precomputed ``bisection_reference`` for the same
    points; it does not depend on ``inverse``.
    """
    xs, zs, xs2, ys = random_points(seed, count)
    if reference is None:
        reference = bisection_reference(xs, zs)
    inv = np.array([inverse(x, z) for x, z in zip(xs.tolist(), zs.tolist())])
    err_a = max(abs(cdf_G(x, y) - z) for x, y, z in zip(xs.tolist(), inv.tolist(), zs.tolist()))
    err_b = max(abs(inverse(x, cdf_G(x, y)) - y) for x, y in zip(xs2.tolist(), ys.tolist()))
    return [
        Check("round_trip_G_of_inverse", err_a, 1e-9),
        Check("round_trip_inverse_of_G", err_b, 1e-9),
        Check("inverse_vs_bisection", float(np.max(np.abs(inv - reference))), 1e-9),
    ]


def shape_checks(inverse=kernel.inverse_G, n_z=1025, n_x=129):
    zs = np.linspace(0.0, 1.0, n_z).tolist()
    jump = max(abs(inverse(0.25 - 1e-9, z) - inverse(0.25 + 1e-9, z)) for z in zs)
    steps = []
    for x in np.linspace(0.0, 1.0, n_x).tolist():
        ys = [inverse(x, z) for z in zs]
        steps.append(min(b - a for a, b in zip(ys, ys[1:])))
    return [
        Check("regime_boundary_continuity", jump, 1e-6),
        Check("inverse_monotone_min_step", min(steps), -1e-12, "min"),
    ]


# ---- sampler checks --------------------------------------------------------

def sampler_checks(seed, n):
    scale = max(1.0, math.sqrt(REFERENCE_N / n))
    mean, _, var = exact_moments()
    samples, steps = sample_with_steps(RngStream(seed), n)
    m, v = empirical_moments(samples)
    coupled = samples[steps == 0]
    perfect = sample_with_steps(RngStream.for_worker(seed, 1), KS_COUNT)[0]
    forward = forward_chain_samples(RngStream.for_worker(seed, 2), KS_COUNT)
    return [
        Check("sample_mean", m, 0.0008 * scale, "abs", mean),
        Check("sample_variance", v, 0.001 * scale, "abs", var),
        Check("coupling_frequency", float(np.mean(steps == 0)), 0.002 * scale, "abs", 0.125),
        Check("mean_backoff_N", float(np.mean(steps)), 0.05 * scale, "abs", 7.0),
        Check("mean_uniforms_per_sample", float(np.mean(steps + 1)), 0.05 * scale, "abs", 8.0),
        Check("sample_max_below_one", float(samples.max()), 1.0 - 2**-53, "max"),
        Check("sample_min_nonnegative", float(samples.min()), 0.0, "min"),
        Check("coupled_max_below_quarter",
              float(coupled.max()) if coupled.size else 0.0, 0.25 - 2**-55, "max"),
        Check("ks_perfect_vs_forward", ks_two_sample(perfect, forward), 0.01),
    ]


def run_validation_suite(seed: int = 1, n: int = REFERENCE_N, inverse=None) -> Report:
    """Run every kernel and sampler check.

    Statistical tolerances are stated for ``n = 10**6`` and widen by
    ``sqrt(10**6 / n)`` below that.  ``inverse`` replaces the quantile function
    in the kernel checks (for mutation testing); the sampler always uses the
    built-in one.
    """
    if n < ROUND_TRIP_COUNT:
        raise ValueError(f"n must be at least {ROUND_TRIP_COUNT}")
    inverse = inverse or kernel.inverse_G
    report = Report()
    report.checks += coupler_checks()
    report.checks.append(cdf_density_check())
    report.checks.append(breakpoint_checks())
    report.checks += inversion_checks(inverse, seed)
    report.checks += shape_checks(inverse)
    report.checks += sampler_checks(seed, n)
    return report
