"""Secrecy metrics under the product channel attack.

Eve scales her uplink symbols and pilots by a synthetic fading coefficient.
The base station's estimate of Eve's channel then looks more faded than it
really is, and the base station picks downlink rates above the true secrecy
capacity. This package computes the true average secrecy capacity, the
compromised rate and their gap, both analytically and by Monte Carlo.
"""

from .analytics import (
    SecrecyReport,
    asc_loss,
    avg_capacity_bob,
    avg_capacity_eve,
    ccdf_bob,
    ccdf_eve,
    excess_rate,
    excess_rate_asymptote,
    secrecy_rate,
)
from .channel import AttackKind, RngStream, ScenarioParams
from .montecarlo import McEstimate, estimate_avg_rate, estimate_rates, leakage_fraction
from .quadrature import QuadResult, integrate_semi_infinite

__version__ = "0.1.0"
