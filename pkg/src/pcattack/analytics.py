"""Analytic secrecy metrics: cCDFs, average capacities and secrecy losses.

Every average capacity here is the cCDF integral

    C = (1/ln 2) * int_0^inf Fbar(x) / (1 + x) dx,

and the average secrecy capacity splits as ``C_S = C_B - L`` with the loss
``L = (1/ln 2) * int Fbar_E(x) Fbar_B(x) / (1 + x) dx``. Swapping Eve's true
cCDF for the one the base station sees under the attack gives the
compromised rate ``R_S = C_B - L_hat``; the excess rate is ``L - L_hat``.

The unattacked quantities have closed forms in E_n and Gamma(-n, .). The
attacked ones are integrated numerically. Both use log2 throughout.
"""

import math
from dataclasses import dataclass

from . import specfun
from .channel import AttackKind
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, integrate_semi_infinite

__all__ = [
    "SecrecyReport",
    "ccdf_bob",
    "ccdf_eve",
    "avg_capacity_bob",
    "avg_capacity_eve",
    "asc_loss",
    "secrecy_rate",
    "excess_rate",
    "excess_rate_asymptote",
]

LN2 = math.log(2.0)
CLOSED = "closed"
QUADRATURE = "quadrature"
_METHODS = (CLOSED, QUADRATURE)

_CUTOFF = 745.0


@dataclass(frozen=True)
class SecrecyReport:
    """Average rates at one operating point, in bps/Hz.

    ``rate`` is the true secrecy capacity when ``attack`` is NONE and the
    compromised secrecy rate otherwise; ``rate == c_bar_b - loss``.
    """

    c_bar_b: float
    loss: float
    rate: float
    method: str
    attack: AttackKind

    @property
    def anomalous(self):
        """True when numerical error has pushed the rate below zero."""
        return self.rate < 0.0


def _ccdf_bob(x, gb, m):
    if x == 0.0:
        return 1.0
    y = m * x / gb
    if y > _CUTOFF + 40.0 * m:
        return 0.0
    if y < 600.0:
        term = math.exp(-y)
        total = term
        for n in range(1, m):
            term *= y / n
            total += term
        return min(total, 1.0)
    # e^-y alone underflows; keep each term in log space
    ly = math.log(y)
    return math.fsum(math.exp(-y + n * ly - math.lgamma(n + 1.0)) for n in range(m))


def _ccdf_eve(x, ge, code):
    if x == 0.0:
        return 1.0
    if code == 0:
        z = x / ge
        return math.exp(-z) if z < _CUTOFF else 0.0
    if code == 1:
        v = 2.0 * math.sqrt(x / ge)
        if v <= 2.0:
            return v * specfun._k1_series(v)
        if v > _CUTOFF:
            return 0.0
        return v * specfun.k1_scaled(v) * math.exp(-v)
    return specfun.ierfc_sqrtpi(math.sqrt(x / (3.0 * ge)))


def _check_x(x):
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"cCDF argument must be >= 0, got {x!r}")
    return x


def _check_snr(name, v):
    v = float(v)
    if not (v > 0.0 and math.isfinite(v)):
        raise ValueError(f"{name} must be finite and > 0, got {v!r}")
    return v


def _check_m(m):
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise ValueError(f"M must be an integer >= 1, got {m!r}")
    return int(m)


def ccdf_bob(x, gamma_b_bar, m):
    """Survival function of Bob's SNR under MRT.

    Gamma with shape ``m`` and mean ``gamma_b_bar``:
    ``exp(-m x/gb) * sum_{n<m} (m x/gb)^n / n!``.
    """
    return _ccdf_bob(_check_x(x), _check_snr("gamma_b_bar", gamma_b_bar), _check_m(m))


def ccdf_eve(x, gamma_e_bar, kind):
    """Survival function of Eve's SNR as seen by the base station.

    NONE gives the exponential law ``exp(-x/ge)``. RAYLEIGH gives
    ``2 sqrt(x/ge) K_1(2 sqrt(x/ge))`` and UNIFORM gives
    ``exp(-x/(3ge)) - sqrt(pi x/(3ge)) erfc(sqrt(x/(3ge)))``.
    """
    kind = AttackKind.parse(kind)
    return _ccdf_eve(_check_x(x), _check_snr("gamma_e_bar", gamma_e_bar), kind.code)


def _quad(integrand, rel_tol, abs_tol):
    return integrate_semi_infinite(integrand, rel_tol, abs_tol).value / LN2


def avg_capacity_bob(gamma_b_bar, m, method=CLOSED,
                     rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL):
    """Bob's ergodic capacity under MRT, in bps/Hz.

    Closed form ``(1/ln2) e^{m/gb} sum_{n<m} E_{n+1}(m/gb)``, with each
    ``e^a E_n(a)`` taken as one scaled evaluation.
    """
    gb = _check_snr("gamma_b_bar", gamma_b_bar)
    m = _check_m(m)
    if method == QUADRATURE:
        return _quad(lambda x: _ccdf_bob(x, gb, m) / (1.0 + x), rel_tol, abs_tol)
    if method != CLOSED:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    a = m / gb
    return math.fsum(specfun.expn_scaled(n + 1, a) for n in range(m)) / LN2


def avg_capacity_eve(gamma_e_bar, kind, method=None,
                     rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL):
    """Average of ``log2(1 + snr)`` for Eve's SNR as seen by the base station.

    Closed form ``e^{1/ge} E_1(1/ge) / ln2`` without the attack; quadrature
    of the cCDF integral for attacked kinds.
    """
    ge = _check_snr("gamma_e_bar", gamma_e_bar)
    kind = AttackKind.parse(kind)
    method = _resolve_method(method, kind)
    if method == CLOSED:
        return specfun.expn_scaled(1, 1.0 / ge) / LN2
    code = kind.code
    return _quad(lambda x: _ccdf_eve(x, ge, code) / (1.0 + x), rel_tol, abs_tol)


def _resolve_method(method, kind):
    if method is None:
        return CLOSED if kind is AttackKind.NONE else QUADRATURE
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    if method == CLOSED and kind is not AttackKind.NONE:
        raise ValueError(f"no closed form for the {kind.value} attack; use quadrature")
    return method


def asc_loss(gamma_b_bar, gamma_e_bar, m, kind=AttackKind.NONE, method=None,
             rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL):
    """Average secrecy capacity loss ``L`` (or ``L_hat`` under attack).

    ``method`` defaults to the closed form when there is one. The closed form
    is ``(1/ln2) e^{b+c} sum_{n<m} b^n Gamma(-n, b+c)`` with ``b = m/gb`` and
    ``c = 1/ge``; since ``Gamma(-n, a) = a^-n E_{n+1}(a)`` each term is
    ``(b/a)^n * e^a E_{n+1}(a)``.
    """
    gb = _check_snr("gamma_b_bar", gamma_b_bar)
    ge = _check_snr("gamma_e_bar", gamma_e_bar)
    m = _check_m(m)
    kind = AttackKind.parse(kind)
    method = _resolve_method(method, kind)
    if method == CLOSED:
        b = m / gb
        a = b + 1.0 / ge
        ratio = b / a
        return math.fsum(ratio ** n * specfun.expn_scaled(n + 1, a) for n in range(m)) / LN2
    code = kind.code

    def integrand(x):
        fb = _ccdf_bob(x, gb, m)
        if fb == 0.0:
            return 0.0
        return fb * _ccdf_eve(x, ge, code) / (1.0 + x)

    return _quad(integrand, rel_tol, abs_tol)


def secrecy_rate(params, kind=AttackKind.NONE):
    """Average secrecy capacity (NONE) or average compromised rate (attacked)."""
    kind = AttackKind.parse(kind)
    method = _resolve_method(None, kind)
    c_bar_b = avg_capacity_bob(params.gamma_b, params.m)
    loss = asc_loss(params.gamma_b, params.gamma_e, params.m, kind, method)
    return SecrecyReport(c_bar_b=c_bar_b, loss=loss, rate=c_bar_b - loss,
                         method=method, attack=kind)


def excess_rate(params, kind):
    """Excess secrecy rate ``L - L_hat``: how far the compromised rate overshoots."""
    kind = AttackKind.parse(kind)
    if kind is AttackKind.NONE:
        raise ValueError("excess rate is defined only for an attacked kind")
    loss = asc_loss(params.gamma_b, params.gamma_e, params.m, AttackKind.NONE)
    loss_hat = asc_loss(params.gamma_b, params.gamma_e, params.m, kind)
    return loss - loss_hat


def excess_rate_asymptote(gamma_e_bar, kind):
    """High Bob-SNR limit of the excess rate, ``C_E - C_E_hat``.

    Depends only on Eve's statistics, not on ``M`` or Bob's SNR.
    """
    kind = AttackKind.parse(kind)
    if kind is AttackKind.NONE:
        raise ValueError("excess rate asymptote is defined only for an attacked kind")
    return avg_capacity_eve(gamma_e_bar, AttackKind.NONE) - avg_capacity_eve(gamma_e_bar, kind)
