"""Random channel, beamforming and SNR generation.

Channels are drawn as explicit complex Gaussian vectors and pushed through
maximum ratio transmission (MRT), rather than sampled from the scalar gain
laws those vectors imply; the scalar laws are kept as test oracles.

Only ``|theta|^2`` of the synthetic symbol reaches any SNR, so its phase is
never drawn. No noise samples are drawn either: SNRs are the simulation
currency.

Random numbers come from numpy's Philox4x64 counter-based generator, keyed
through ``SeedSequence(seed, spawn_key=(stream_id,))``. A stream is fully
determined by ``(seed, stream_id)``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AttackKind",
    "ScenarioParams",
    "ChannelRealization",
    "SnrBatch",
    "RngStream",
    "DegenerateChannelError",
    "db_to_linear",
    "linear_to_db",
    "sample_channel_vector",
    "mrt_equivalent_gains",
    "sample_theta_power",
    "snr_realization",
    "sample_snrs",
]

UNIFORM_THETA_MAX = math.sqrt(3.0)


class DegenerateChannelError(ArithmeticError):
    """Bob's channel vector is identically zero, so MRT is undefined."""


def db_to_linear(db):
    """Power ratio from decibels, ``10**(db/10)``. Used for every conversion."""
    return 10.0 ** (db / 10.0)


def linear_to_db(value):
    return 10.0 * math.log10(value)


class AttackKind(enum.Enum):
    """Distribution of the synthetic symbol magnitude ``|theta_E|``."""

    NONE = "none"
    RAYLEIGH = "rayleigh"
    UNIFORM = "uniform"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        aliases = {"rayleightheta": "rayleigh", "uniformtheta": "uniform", "": "none"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(
                f"unknown attack kind {text!r}; expected one of none, rayleigh, uniform"
            ) from None

    @property
    def code(self):
        """Integer tag used by the cCDF kernels."""
        return {"none": 0, "rayleigh": 1, "uniform": 2}[self.value]


@dataclass(frozen=True)
class ScenarioParams:
    """Antenna count and average SNRs of one operating point.

    ``gamma0_db`` is the legitimate average SNR a single-antenna transmitter
    would give; under MRT Bob's average SNR is ``M`` times that. Eve's
    average SNR does not depend on ``M``.
    """

    m: int
    gamma0_db: float
    gammaE_db: float

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ValueError(f"M must be an integer >= 1, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        for name in ("gamma0_db", "gammaE_db"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_link_budget(cls, m, pt_watts, n0_watts, r_b_m, r_e_m, alpha):
        """Derive SNRs from ``gamma = P_T * R**-alpha / N0``."""
        for name, v in (("pt_watts", pt_watts), ("n0_watts", n0_watts),
                        ("r_b_m", r_b_m), ("r_e_m", r_e_m)):
            if not v > 0:
                raise ValueError(f"{name} must be > 0, got {v!r}")
        g0 = pt_watts * r_b_m ** (-alpha) / n0_watts
        ge = pt_watts * r_e_m ** (-alpha) / n0_watts
        return cls(m, linear_to_db(g0), linear_to_db(ge))

    @classmethod
    def from_gamma_b_db(cls, m, gammaB_db, gammaE_db):
        return cls(m, gammaB_db - linear_to_db(m), gammaE_db)

    @property
    def gamma0(self):
        return db_to_linear(self.gamma0_db)

    @property
    def gamma_b(self):
        """Bob's average SNR (linear), ``M * gamma0``."""
        return self.m * self.gamma0

    @property
    def gammaB_db(self):
        return self.gamma0_db + linear_to_db(self.m)

    @property
    def gamma_e(self):
        return db_to_linear(self.gammaE_db)


class RngStream:
    """Reproducible random stream identified by ``(seed, stream_id)``.

    Holds generator state, so one instance must not be shared between
    concurrent workers; give each worker its own ``stream_id``.
    """

    def __init__(self, seed, stream_id=0):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if stream_id < 0:
            raise ValueError("stream_id must be >= 0")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.Philox(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class ChannelRealization:
    h_b: np.ndarray
    h_e: np.ndarray
    g_b: float
    g_e: float
    theta_pow: float
    snr_b: float
    snr_e: float
    snr_e_hat: float


@dataclass(frozen=True)
class SnrBatch:
    """Vectorised counterpart of :class:`ChannelRealization` (no vectors kept)."""

    g_b: np.ndarray
    g_e: np.ndarray
    theta_pow: np.ndarray
    snr_b: np.ndarray
    snr_e: np.ndarray
    snr_e_hat: np.ndarray

    def __len__(self):
        return len(self.snr_b)


def sample_channel_vector(m, rng, size=None):
    """Draw i.i.d. CN(0, 1) entries: real and imaginary parts N(0, 1/2).

    Returns shape ``(m,)``, or ``(size, m)`` when ``size`` is given.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    shape = (m, 2) if size is None else (size, m, 2)
    parts = rng.generator.standard_normal(shape)
    parts *= math.sqrt(0.5)
    return parts.view(np.complex128)[..., 0]


def mrt_equivalent_gains(h_b, h_e):
    """Squared equivalent gains of Bob and Eve under MRT towards Bob.

    With ``w = h_b / ||h_b||`` this returns ``(|h_b^H w|^2, |h_e^H w|^2)``.
    Accepts single vectors or stacks of row vectors.
    """
    h_b = np.asarray(h_b, dtype=np.complex128)
    h_e = np.asarray(h_e, dtype=np.complex128)
    if h_b.shape != h_e.shape or h_b.shape[-1] < 1:
        raise ValueError(f"channel shapes differ or are empty: {h_b.shape} vs {h_e.shape}")
    norm = np.sqrt(np.einsum("...i,...i->...", h_b.conj(), h_b).real)
    if np.any(norm == 0.0):
        raise DegenerateChannelError("||h_b|| = 0: MRT beamformer undefined")
    w = h_b / norm[..., None]
    eq_b = np.einsum("...i,...i->...", h_b.conj(), w)
    eq_e = np.einsum("...i,...i->...", h_e.conj(), w)
    g_b = eq_b.real ** 2 + eq_b.imag ** 2
    g_e = eq_e.real ** 2 + eq_e.imag ** 2
    if g_b.ndim == 0:
        return float(g_b), float(g_e)
    return g_b, g_e


def sample_theta_power(kind, rng, size=None):
    """Draw ``|theta_E|^2``; every kind has unit mean.

    ``NONE`` is identically one and consumes no random numbers.
    """
    kind = AttackKind.parse(kind)
    if kind is AttackKind.NONE:
        return 1.0 if size is None else np.ones(size)
    gen = rng.generator
    if kind is AttackKind.RAYLEIGH:
        # Rayleigh magnitude with unit power => exponential power
        out = gen.standard_exponential(size)
    else:
        amp = UNIFORM_THETA_MAX * gen.random(size)
        out = amp * amp
    return float(out) if size is None else out


def sample_snrs(params, kind, rng, size):
    """Draw ``size`` independent realizations as arrays.

    Draw order per call: Bob's vectors, Eve's vectors, then the synthetic
    symbols, so channel draws are shared across attack kinds for a given
    stream.
    """
    kind = AttackKind.parse(kind)
    h_b = sample_channel_vector(params.m, rng, size)
    h_e = sample_channel_vector(params.m, rng, size)
    g_b, g_e = mrt_equivalent_gains(h_b, h_e)
    theta_pow = sample_theta_power(kind, rng, size)
    snr_b = params.gamma0 * g_b
    snr_e = params.gamma_e * g_e
    return SnrBatch(g_b, g_e, theta_pow, snr_b, snr_e, theta_pow * snr_e)


def snr_realization(params, kind, rng):
    """One quasi-static realization with every derived quantity filled in."""
    kind = AttackKind.parse(kind)
    h_b = sample_channel_vector(params.m, rng)
    h_e = sample_channel_vector(params.m, rng)
    g_b, g_e = mrt_equivalent_gains(h_b, h_e)
    theta_pow = sample_theta_power(kind, rng)
    snr_e = params.gamma_e * g_e
    return ChannelRealization(
        h_b=h_b,
        h_e=h_e,
        g_b=g_b,
        g_e=g_e,
        theta_pow=theta_pow,
        snr_b=params.gamma0 * g_b,
        snr_e=snr_e,
        snr_e_hat=theta_pow * snr_e,
    )
