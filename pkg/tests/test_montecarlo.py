import math

import numpy as np
import pytest

from pcattack.analytics import ccdf_bob, ccdf_eve, secrecy_rate
from pcattack.channel import AttackKind, ScenarioParams
from pcattack.montecarlo import (
    BS_VIEW,
    TRUE_VIEW,
    empirical_ccdf,
    estimate_avg_rate,
    estimate_rates,
    instantaneous_rate,
    leakage_fraction,
    simulate_snrs,
)


class TestInstantaneousRate:
    def test_examples(self):
        assert instantaneous_rate(3.0, 1.0) == pytest.approx(1.0, rel=1e-15)
        assert instantaneous_rate(1.0, 3.0) == 0.0
        assert instantaneous_rate(7.0, 0.0) == pytest.approx(3.0, rel=1e-15)

    def test_array(self):
        out = instantaneous_rate(np.array([3.0, 1.0]), np.array([1.0, 3.0]))
        np.testing.assert_allclose(out, [1.0, 0.0])

    def test_tiny_snrs_keep_precision(self):
        assert instantaneous_rate(2e-12, 1e-12) == pytest.approx(1e-12 / math.log(2), rel=1e-6)


class TestEstimators:
    def test_views_coincide_without_attack(self):
        p = ScenarioParams(2, 5.0, 5.0)
        a = estimate_avg_rate(p, "none", BS_VIEW, n=50_000, seed=3)
        b = estimate_avg_rate(p, "none", TRUE_VIEW, n=50_000, seed=3)
        assert a == b

    @pytest.mark.parametrize("m, g0", [(1, 0.0), (4, 20.0)])
    def test_fig1_point_against_analytics(self, m, g0):
        p = ScenarioParams(m, g0, 5.0)
        cs, rs = estimate_rates(p, "rayleigh", n=400_000, seed=8)
        assert abs(cs.mean - secrecy_rate(p).rate) <= 3 * cs.stderr
        assert abs(rs.mean - secrecy_rate(p, "rayleigh").rate) <= 3 * rs.stderr

    def test_uniform_bs_view(self):
        p = ScenarioParams(1, 10.0, 15.0)
        est = estimate_avg_rate(p, "uniform", BS_VIEW, n=400_000, seed=21)
        assert abs(est.mean - secrecy_rate(p, "uniform").rate) <= 3 * est.stderr

    def test_matches_single_view_estimator(self):
        p = ScenarioParams(2, 3.0, 1.0)
        cs, rs = estimate_rates(p, "uniform", n=70_000, seed=4)
        assert cs == estimate_avg_rate(p, "uniform", TRUE_VIEW, n=70_000, seed=4)
        assert rs == estimate_avg_rate(p, "uniform", BS_VIEW, n=70_000, seed=4)

    def test_independent_of_workers(self):
        p = ScenarioParams(4, 10.0, 5.0)
        one = estimate_rates(p, "rayleigh", n=300_000, seed=1, workers=1)
        four = estimate_rates(p, "rayleigh", n=300_000, seed=1, workers=4)
        assert one == four

    def test_seed_changes_result(self):
        p = ScenarioParams(1, 0.0, 0.0)
        a = estimate_avg_rate(p, "none", n=20_000, seed=1)
        b = estimate_avg_rate(p, "none", n=20_000, seed=2)
        assert a.mean != b.mean and a.seed == 1

    def test_stderr_shrinks_as_root_n(self):
        p = ScenarioParams(2, 10.0, 5.0)
        small = estimate_avg_rate(p, "rayleigh", BS_VIEW, n=40_000, seed=5)
        large = estimate_avg_rate(p, "rayleigh", BS_VIEW, n=640_000, seed=5)
        assert small.stderr / large.stderr == pytest.approx(4.0, rel=0.2)

    def test_mean_agrees_with_plain_numpy(self):
        p = ScenarioParams(3, 4.0, 2.0)
        b, _, e_hat = simulate_snrs(p, "uniform", 100_000, seed=6)
        r = instantaneous_rate(b, e_hat)
        est = estimate_avg_rate(p, "uniform", BS_VIEW, n=100_000, seed=6)
        assert est.mean == pytest.approx(r.mean(), rel=1e-12)
        assert est.stderr == pytest.approx(r.std(ddof=1) / math.sqrt(r.size), rel=1e-9)
        assert est.n_samples == 100_000

    def test_rate_below_bob_capacity(self):
        # Jensen: E[log2(1+X)] <= log2(1+E[X])
        p = ScenarioParams(2, 10.0, 5.0)
        est = estimate_avg_rate(p, "rayleigh", BS_VIEW, n=100_000, seed=9)
        assert est.mean < math.log2(1 + p.gamma_b)

    @pytest.mark.parametrize("kw", [dict(n=100), dict(seed=-1), dict(block_size=0)])
    def test_bad_run_arguments(self, kw):
        args = dict(n=20_000, seed=1)
        args.update(kw)
        with pytest.raises(ValueError):
            estimate_avg_rate(ScenarioParams(1, 0.0, 0.0), "none", **args)

    def test_bad_view(self):
        with pytest.raises(ValueError):
            estimate_avg_rate(ScenarioParams(1, 0.0, 0.0), "none", "eve_view", n=20_000)


class TestLeakage:
    @pytest.mark.parametrize("kind, limit", [("rayleigh", 1 - math.exp(-1)),
                                             ("uniform", 1 / math.sqrt(3))])
    def test_approaches_underestimate_probability(self, kind, limit):
        # with a strong Bob, leakage happens exactly when |theta|^2 < 1
        high = leakage_fraction(ScenarioParams(4, 40.0, 0.0), kind, n=200_000, seed=2)
        low = leakage_fraction(ScenarioParams(4, 0.0, 0.0), kind, n=200_000, seed=2)
        assert high.mean <= limit + 3 * high.stderr
        assert high.mean == pytest.approx(limit, abs=0.01)
        assert 0 < low.mean < high.mean

    def test_none_rejected(self):
        with pytest.raises(ValueError):
            leakage_fraction(ScenarioParams(1, 0.0, 0.0), "none", n=20_000)


class TestEmpiricalCcdf:
    def test_examples(self):
        np.testing.assert_allclose(empirical_ccdf([1, 2, 3, 4], [0, 2, 2.5, 4]),
                                   [1.0, 0.5, 0.5, 0.0])

    def test_empty(self):
        with pytest.raises(ValueError):
            empirical_ccdf([], [1.0])

    def test_nonincreasing(self):
        rng = np.random.default_rng(0)
        v = empirical_ccdf(rng.standard_exponential(1000), np.linspace(0, 5, 200))
        assert np.all(np.diff(v) <= 0)

    def test_bob_and_attacked_eve_laws(self):
        n = 400_000
        p = ScenarioParams(4, 3.0, 6.0)
        b, _, e_hat = simulate_snrs(p, "uniform", n, seed=13)
        for x in (2.0, 8.0, 20.0):
            ref = ccdf_bob(x, p.gamma_b, p.m)
            assert abs(empirical_ccdf(b, [x])[0] - ref) <= 3 * math.sqrt(ref * (1 - ref) / n)
            ref = ccdf_eve(x, p.gamma_e, AttackKind.UNIFORM)
            assert abs(empirical_ccdf(e_hat, [x])[0] - ref) <= 3 * math.sqrt(ref * (1 - ref) / n)
