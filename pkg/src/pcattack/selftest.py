"""Fast invariant checks behind the ``selftest`` CLI verb (a few seconds)."""

import math

import numpy as np

from . import analytics, specfun
from .channel import AttackKind, ScenarioParams
from .montecarlo import empirical_ccdf, estimate_rates, simulate_snrs


def _rel(a, b):
    return abs(a - b) / abs(b)


def check_exponential_integral_recurrence():
    worst = 0.0
    for n in range(1, 17):
        for x in (0.01, 0.1, 1.0, 10.0):
            lhs = specfun.exp_integral_en(n + 1, x)
            rhs = (math.exp(-x) - x * specfun.exp_integral_en(n, x)) / n
            worst = max(worst, _rel(lhs, rhs))
    return worst <= 1e-12, f"max rel {worst:.2e}"


def check_incomplete_gamma_identity():
    worst = 0.0
    for n in range(0, 9):
        for x in (0.01, 0.1, 1.0, 10.0, 50.0):
            lhs = specfun.upper_incomplete_gamma_negint(n, x) * x ** n
            worst = max(worst, _rel(lhs, specfun.exp_integral_en(n + 1, x)))
    return worst <= 1e-12, f"max rel {worst:.2e}"


def check_erfc_reflection():
    worst = max(abs(specfun.erfc(x) + specfun.erfc(-x) - 2.0) for x in np.linspace(0, 6, 61))
    return worst <= 1e-15, f"max abs {worst:.2e}"


def check_closed_vs_quadrature():
    worst = 0.0
    for m in (1, 4):
        for gb_db in (-10, 10, 30):
            gb = 10 ** (gb_db / 10)
            ge = 10 ** 0.5
            closed = analytics.asc_loss(gb, ge, m, AttackKind.NONE, "closed")
            quad = analytics.asc_loss(gb, ge, m, AttackKind.NONE, "quadrature")
            worst = max(worst, _rel(quad, closed))
    return worst <= 1e-8, f"max rel {worst:.2e}"


def check_ccdf_shapes():
    xs = np.concatenate(([0.0], np.logspace(-3, 4, 200)))
    for kind in AttackKind:
        vals = [analytics.ccdf_eve(x, 3.0, kind) for x in xs]
        if vals[0] != 1.0 or any(b > a for a, b in zip(vals, vals[1:])) or vals[-1] > 1e-6:
            return False, f"{kind.value} cCDF not a survival function"
    return True, "all kinds start at 1, decrease, vanish"


def check_attack_success():
    for kind in (AttackKind.RAYLEIGH, AttackKind.UNIFORM):
        for g0 in (0.0, 15.0, 30.0):
            p = ScenarioParams(2, g0, 5.0)
            if not analytics.excess_rate(p, kind) > 0:
                return False, f"excess rate <= 0 at {p} {kind.value}"
    return True, "excess rate > 0"


def check_mc_agreement():
    p = ScenarioParams(2, 10.0, 5.0)
    cs, rs = estimate_rates(p, AttackKind.RAYLEIGH, n=200_000, seed=7)
    a_cs = analytics.secrecy_rate(p).rate
    a_rs = analytics.secrecy_rate(p, AttackKind.RAYLEIGH).rate
    z = max(abs(cs.mean - a_cs) / cs.stderr, abs(rs.mean - a_rs) / rs.stderr)
    return z <= 4.0, f"max |z| {z:.2f}"


def check_distribution():
    p = ScenarioParams(1, 0.0, 0.0)
    n = 200_000
    _, _, e_hat = simulate_snrs(p, AttackKind.RAYLEIGH, n, seed=3)
    emp = float(empirical_ccdf(e_hat, [1.0])[0])
    ref = analytics.ccdf_eve(1.0, 1.0, AttackKind.RAYLEIGH)
    sigma = math.sqrt(ref * (1 - ref) / n)
    return abs(emp - ref) <= 4 * sigma, f"empirical {emp:.4f} vs {ref:.4f}"


CHECKS = (
    ("E_n recurrence", check_exponential_integral_recurrence),
    ("Gamma(-n,x) identity", check_incomplete_gamma_identity),
    ("erfc reflection", check_erfc_reflection),
    ("closed form vs quadrature", check_closed_vs_quadrature),
    ("cCDF shapes", check_ccdf_shapes),
    ("attack success", check_attack_success),
    ("MC vs analytics", check_mc_agreement),
    ("attacked Eve SNR law", check_distribution),
)


def run():
    """Run every check; returns ``[(name, passed, detail), ...]``."""
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # report, don't abort the remaining checks
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
