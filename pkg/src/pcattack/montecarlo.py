"""Monte-Carlo estimators of the average secrecy rates.

Samples are drawn in fixed-size blocks. Block ``k`` always uses
``RngStream(seed, k)`` and block statistics are merged in block order, so an
estimate depends only on ``(params, kind, n, seed, block_size)`` and not on
how many threads ran it.

Rates use the positive part ``[log2(1+snr_b) - log2(1+snr_e)]^+``, which is
the quantity the cCDF-integral analytics average.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import AttackKind, RngStream, sample_snrs

__all__ = [
    "McEstimate",
    "BS_VIEW",
    "TRUE_VIEW",
    "instantaneous_rate",
    "estimate_avg_rate",
    "estimate_rates",
    "leakage_fraction",
    "empirical_ccdf",
    "simulate_snrs",
]

BS_VIEW = "bs_view"
TRUE_VIEW = "true_view"
DEFAULT_SAMPLES = 1_000_000
DEFAULT_BLOCK = 1 << 16
MIN_SAMPLES = 10_000

_INV_LN2 = 1.0 / math.log(2.0)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_samples: int
    seed: int


def instantaneous_rate(snr_b, snr_e_design):
    """``max(0, log2(1+snr_b) - log2(1+snr_e_design))``; scalars or arrays.

    With the true Eve SNR this is the instantaneous secrecy capacity; with
    the attacked estimate it is the rate the base station picks.
    """
    diff = (np.log1p(snr_b) - np.log1p(snr_e_design)) * _INV_LN2
    out = np.maximum(diff, 0.0)
    return float(out) if np.ndim(out) == 0 else out


class _Moments:
    """Count, mean and centred sum of squares; merged with Chan's update."""

    __slots__ = ("n", "mean", "m2")

    def __init__(self, n=0, mean=0.0, m2=0.0):
        self.n, self.mean, self.m2 = n, mean, m2

    @classmethod
    def of(cls, values):
        mean = float(np.mean(values))
        dev = values - mean
        return cls(len(values), mean, float(np.dot(dev, dev)))

    def merge(self, other):
        if self.n == 0:
            return _Moments(other.n, other.mean, other.m2)
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        m2 = self.m2 + other.m2 + delta * delta * self.n * other.n / n
        return _Moments(n, mean, m2)

    def estimate(self, seed):
        var = self.m2 / (self.n - 1) if self.n > 1 else 0.0
        return McEstimate(self.mean, math.sqrt(var / self.n), self.n, seed)


def _check_run(n, seed, block_size):
    if n < MIN_SAMPLES:
        raise ValueError(f"n must be >= {MIN_SAMPLES}, got {n}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in 64 unsigned bits")
    if block_size < 1:
        raise ValueError("block_size must be >= 1")


def _run_blocks(params, kind, n, seed, block_size, workers, statistic):
    """Apply ``statistic(SnrBatch) -> tuple of arrays`` blockwise; merge in order."""
    n_blocks = -(-n // block_size)

    def one(k):
        size = min(block_size, n - k * block_size)
        batch = sample_snrs(params, kind, RngStream(seed, k), size)
        return [_Moments.of(v) for v in statistic(batch)]

    if workers and workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_block = list(pool.map(one, range(n_blocks)))
    else:
        per_block = [one(k) for k in range(n_blocks)]
    totals = [_Moments() for _ in per_block[0]]
    for block in per_block:
        totals = [t.merge(b) for t, b in zip(totals, block)]
    return [t.estimate(seed) for t in totals]


def estimate_avg_rate(params, kind, design_view=TRUE_VIEW, n=DEFAULT_SAMPLES, seed=42,
                      *, block_size=DEFAULT_BLOCK, workers=1):
    """Estimate the average secrecy capacity or the average compromised rate.

    ``design_view="true_view"`` designs against Eve's true SNR (average
    secrecy capacity); ``"bs_view"`` uses the base station's attacked
    estimate (average compromised secrecy rate).
    """
    kind = AttackKind.parse(kind)
    if design_view not in (BS_VIEW, TRUE_VIEW):
        raise ValueError(f"design_view must be {BS_VIEW!r} or {TRUE_VIEW!r}")
    _check_run(n, seed, block_size)
    field = "snr_e_hat" if design_view == BS_VIEW else "snr_e"
    (est,) = _run_blocks(
        params, kind, n, seed, block_size, workers,
        lambda b: (instantaneous_rate(b.snr_b, getattr(b, field)),),
    )
    return est


def estimate_rates(params, kind, n=DEFAULT_SAMPLES, seed=42, *,
                   block_size=DEFAULT_BLOCK, workers=1):
    """Both views from one set of realizations: ``(secrecy capacity, compromised rate)``."""
    kind = AttackKind.parse(kind)
    _check_run(n, seed, block_size)
    cs, rs = _run_blocks(
        params, kind, n, seed, block_size, workers,
        lambda b: (instantaneous_rate(b.snr_b, b.snr_e),
                   instantaneous_rate(b.snr_b, b.snr_e_hat)),
    )
    return cs, rs


def leakage_fraction(params, kind, n=DEFAULT_SAMPLES, seed=42, *,
                     block_size=DEFAULT_BLOCK, workers=1):
    """Fraction of realizations where the chosen rate exceeds the secrecy capacity."""
    kind = AttackKind.parse(kind)
    if kind is AttackKind.NONE:
        raise ValueError("leakage is only defined under an attack")
    _check_run(n, seed, block_size)

    def stat(b):
        chosen = instantaneous_rate(b.snr_b, b.snr_e_hat)
        true = instantaneous_rate(b.snr_b, b.snr_e)
        return ((chosen > true).astype(np.float64),)

    (est,) = _run_blocks(params, kind, n, seed, block_size, workers, stat)
    return est


def simulate_snrs(params, kind, n, seed=42, *, block_size=DEFAULT_BLOCK):
    """Concatenated ``(snr_b, snr_e, snr_e_hat)`` arrays, same block layout as the estimators."""
    parts = []
    for k in range(-(-n // block_size)):
        size = min(block_size, n - k * block_size)
        parts.append(sample_snrs(params, kind, RngStream(seed, k), size))
    return tuple(np.concatenate([getattr(p, f) for p in parts])
                 for f in ("snr_b", "snr_e", "snr_e_hat"))


def empirical_ccdf(samples, x_grid):
    """Fraction of ``samples`` strictly greater than each grid point."""
    data = np.sort(np.asarray(samples, dtype=np.float64).ravel())
    if data.size == 0:
        raise ValueError("empirical_ccdf needs at least one sample")
    grid = np.asarray(x_grid, dtype=np.float64)
    above = data.size - np.searchsorted(data, grid, side="right")
    return above / data.size
