"""Wall-clock timings of the main hot paths.

Run with ``python3 benchmarks/bench_hot_paths.py``. The split between RNG
time and arithmetic time in the Monte-Carlo estimator is what decides
whether a compiled kernel would pay off.
"""

import time

from pcattack.analytics import asc_loss, excess_rate
from pcattack.channel import AttackKind, RngStream, ScenarioParams, db_to_linear
from pcattack.experiments import parse_config, run_sweep
from pcattack.montecarlo import estimate_rates


def timed(label, fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    print(f"{label:<48s} {best * 1e3:10.1f} ms")
    return best


def quad_grid():
    for m in (1, 2, 4, 8):
        for gb in range(-10, 31, 5):
            for ge in (5, 10, 15):
                asc_loss(db_to_linear(gb), db_to_linear(ge), m, method="quadrature")


def attacked_grid():
    for m in (1, 2, 4, 8):
        for g0 in range(0, 31):
            excess_rate(ScenarioParams(m, g0, 5.0), AttackKind.UNIFORM)


def rng_only(n=1_000_000, m=8):
    g = RngStream(1).generator
    g.standard_normal((n, m, 2))
    g.standard_normal((n, m, 2))
    g.standard_exponential(n)


def main():
    timed("quadrature loss, 108-point grid", quad_grid)
    timed("uniform-attack excess rate, 124 points", attacked_grid)
    p = ScenarioParams(8, 10.0, 5.0)
    mc = timed("MC estimate_rates, M=8, n=1e6", lambda: estimate_rates(p, "rayleigh", n=1_000_000))
    rng = timed("  of which raw RNG draws", rng_only)
    print(f"RNG share of MC time: {rng / mc:.0%}")
    cfg = parse_config("mc_samples = 0", preset="fig3")
    timed("fig3 preset sweep (analytic only)", lambda: run_sweep(cfg), repeat=1)


if __name__ == "__main__":
    main()
