"""Histograms, the two-sample Kolmogorov-Smirnov distance and sample moments."""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np


class EmptySampleError(ValueError):
    pass


@dataclass(frozen=True)
class HistogramSpec:
    bins: int = 200
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if self.bins < 1:
            raise ValueError("bins must be >= 1")
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.bins

    def edges(self) -> np.ndarray:
        # lo + (hi - lo) * i / bins keeps edges like i/bins exact on [0, 1]
        return self.lo + (self.hi - self.lo) * (np.arange(self.bins + 1) / self.bins)


@dataclass(frozen=True)
class Histogram:
    """Area-normalised histogram: ``sum(densities) * width`` is the in-range fraction."""

    spec: HistogramSpec
    densities: np.ndarray
    count_total: int
    outside_count: int

    def area(self) -> float:
        return float(np.sum(self.densities) * self.spec.width)

    def to_csv(self) -> str:
        edges = self.spec.edges()
        buf = io.StringIO()
        buf.write("bin_lo,bin_hi,density\n")
        for lo, hi, d in zip(edges[:-1].tolist(), edges[1:].tolist(), self.densities.tolist()):
            buf.write(f"{lo!r},{hi!r},{d!r}\n")
        return buf.getvalue()


def build_histogram(samples, spec: HistogramSpec = HistogramSpec()) -> Histogram:
    """Bin ``samples`` into ``spec.bins`` half-open bins on ``[lo, hi)``.

    Values outside ``[lo, hi)``, ``hi`` itself included, are only counted in
    ``outside_count``; densities are still divided by the total count.
    """
    a = np.asarray(samples, dtype=np.float64).ravel()
    if a.size == 0:
        raise EmptySampleError("cannot build a histogram from no samples")
    inside = a[(a >= spec.lo) & (a < spec.hi)]
    idx = np.floor((inside - spec.lo) / spec.width).astype(np.int64)
    np.clip(idx, 0, spec.bins - 1, out=idx)
    counts = np.bincount(idx, minlength=spec.bins)
    return Histogram(spec, counts / (a.size * spec.width), int(a.size),
                     int(a.size - inside.size))


def ks_two_sample(a, b) -> float:
    """Exact sup-distance between the empirical CDFs of ``a`` and ``b``."""
    xa = np.sort(np.asarray(a, dtype=np.float64).ravel())
    xb = np.sort(np.asarray(b, dtype=np.float64).ravel())
    if xa.size == 0 or xb.size == 0:
        raise EmptySampleError("both samples must be non-empty")
    # both ECDFs only jump at sample points; evaluate right-continuous values there
    pts = np.concatenate((xa, xb))
    fa = np.searchsorted(xa, pts, side="right") / xa.size
    fb = np.searchsorted(xb, pts, side="right") / xb.size
    return float(np.max(np.abs(fa - fb)))


def empirical_moments(samples):
    """Sample mean and unbiased variance (two-pass)."""
    a = np.asarray(samples, dtype=np.float64).ravel()
    if a.size < 2:
        raise EmptySampleError("need at least two samples")
    mean = float(np.mean(a))
    dev = a - mean
    return mean, float(np.dot(dev, dev) / (a.size - 1))
