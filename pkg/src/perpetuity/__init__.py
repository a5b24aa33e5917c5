"""Perfect simulation of the limit law of Quickselect key exchanges.

The law is the unique fixed point of ``Y = U*Y + U*(1-U)`` in distribution,
with ``U`` uniform on [0, 1] independent of ``Y``.
"""
from .kernel import (
    Breakpoints, DomainError, Regime, breakpoints, cdf_F, cdf_G, density_phi,
    dominating_r, inverse_G, upper_endpoint,
)
from .rng import RngStream
from .sampler import (
    SampleLimitError, SampleTrace, draw_geometric, sample_many, sample_one,
    sample_traced, sample_with_steps, update,
)

__all__ = [
    "Breakpoints", "DomainError", "Regime", "RngStream", "SampleLimitError",
    "SampleTrace", "breakpoints", "cdf_F", "cdf_G", "density_phi",
    "dominating_r", "draw_geometric", "inverse_G", "sample_many", "sample_one",
    "sample_traced", "sample_with_steps", "update", "upper_endpoint",
]
