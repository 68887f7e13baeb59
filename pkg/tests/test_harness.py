import math

import numpy as np
import pytest
from scipy import stats

from nullstrength.candidates import NullRegion, StatisticId
from nullstrength.deltam import Scale
from nullstrength.errors import RegimeUnattainable
from nullstrength.harness import (
    DESIGNS,
    SIMULTANEOUS,
    ConfigPair,
    Design,
    Regime,
    comparison_error,
    covariation_from_values,
    covariation_study,
    default_series,
    evaluate_batch,
    expected_t_ratio,
    fixed,
    generate_config_pairs,
    in_regime,
    integrated_error,
    relative_series,
    run_investigation,
    sample_summaries,
    scaled_errors,
    shared,
    verify_designation_independence,
)
from nullstrength.measures import MeasureId, PopulationConfig, Winner, ground_truth


def cfg(mu_dm, sigma_d=2.0, n=20, alpha=0.05, mu_x=20.0):
    v = sigma_d**2 / 2
    return PopulationConfig(mu_x, mu_x + mu_dm, v, v, n, n, alpha)


class TestExpectedTRatio:
    def test_symmetric_null(self):
        assert abs(expected_t_ratio(cfg(0.0), 2000, seed=1)) < 0.1

    def test_noncentral_mean_oracle(self):
        c = cfg(3.0, sigma_d=2.0, n=20)
        ncp = 3.0 / c.sigma_dm
        # Welch t has approximately the noncentral-t mean with df = m + n - 2
        mean_t = stats.nct(38, ncp).mean()
        crit = abs(stats.t.ppf(0.05, 39))
        assert expected_t_ratio(c, 4000, seed=2) == pytest.approx(mean_t / crit, rel=0.03)
        assert expected_t_ratio(c, 200, seed=2) > 1

    def test_classification_boundary(self):
        assert in_regime(1.0, Regime.NULL) and not in_regime(1.0, Regime.POSITIVE)
        assert in_regime(-1.01, Regime.POSITIVE)

    def test_requires_samples(self):
        with pytest.raises(ValueError):
            expected_t_ratio(cfg(0.0), 10)


class TestSampleSummaries:
    def test_moments(self):
        c = cfg(1.0, sigma_d=math.sqrt(8.0), n=10)
        x, y = sample_summaries(c, 50_000, np.random.default_rng(0))
        assert x.mean.mean() == pytest.approx(20.0, abs=0.01)
        assert np.var(y.mean) == pytest.approx(4.0 / 10, rel=0.03)
        assert np.mean(x.sd**2) == pytest.approx(4.0, rel=0.01)


class TestGeneratePairs:
    @pytest.mark.parametrize("key", list(DESIGNS))
    def test_every_design_generates(self, key):
        family, regime, inv = key
        pairs = generate_config_pairs(inv, regime, 20, seed=3, family=family)
        assert len(pairs) == 20
        for p in pairs:
            assert (p.exp1.mu_x, p.exp2.mu_x) == (20.0, 200.0)
            for m in p.scored_measures:
                assert ground_truth(p.exp1, p.exp2, m) is not Winner.TIE

    def test_winner_share_is_fair(self):
        pairs = generate_config_pairs("abs_mu_dm", "null", 1000, seed=4)
        wins = sum(ground_truth(p.exp1, p.exp2, MeasureId.ABS_MU_DM) is Winner.EXP1 for p in pairs)
        assert stats.binomtest(wins, 1000, 0.5).pvalue > 0.001

    def test_regime_verified(self):
        pairs = generate_config_pairs("abs_mu_dm", "positive", 30, seed=5)
        for p in pairs:
            assert abs(expected_t_ratio(p.exp1, 2000, seed=0)) > 0.9
            assert abs(expected_t_ratio(p.exp2, 2000, seed=0)) > 0.9

    def test_windows(self):
        pairs = generate_config_pairs("mu_dm", "null", 200, seed=6)
        effects = np.array([[abs(p.exp1.mu_dm), abs(p.exp2.mu_dm)] for p in pairs])
        assert effects.min() >= 0.5 and effects.max() <= 4.5

    def test_deterministic(self):
        a = generate_config_pairs("sigma_d", "null", 10, seed=7)
        b = generate_config_pairs("sigma_d", "null", 10, seed=7)
        assert a == b

    def test_unattainable(self):
        impossible = Design(shared((50, 60)), shared((0.1, 0.2)), fixed(30))
        with pytest.raises(RegimeUnattainable):
            generate_config_pairs("abs_mu_dm", "null", 1, seed=0, design=impossible, max_tries=20)

    def test_relative_family_scales_with_control(self):
        p = generate_config_pairs("abs_r_mu_dm", "null", 5, seed=1)[0]
        assert p.family is Scale.RELATIVE
        r1 = abs(p.exp1.mu_dm) / p.exp1.mu_x
        assert 0.02 <= r1 <= 0.18


class TestDesignationIndependence:
    def test_simultaneous_pairs_are_independent(self):
        pairs = generate_config_pairs(SIMULTANEOUS, "null", 300, seed=8)
        for ref in pairs[0].scored_measures:
            checks = verify_designation_independence(pairs, ref)
            for chk in checks.values():
                assert chk.degenerate or chk.p_value > 1e-3

    def test_shared_parameters_are_degenerate(self):
        pairs = generate_config_pairs("abs_mu_dm", "null", 50, seed=8)
        checks = verify_designation_independence(pairs)
        assert checks[MeasureId.DF_D].degenerate and checks[MeasureId.SIGMA_D].degenerate

    def test_correlated_designations_detected(self):
        rng = np.random.default_rng(0)
        pairs = []
        for i in range(1000):
            a_first = rng.random() < 0.5
            same = rng.random() < 0.9
            mu1, mu2 = (1.0, 2.0) if a_first else (2.0, 1.0)
            s1, s2 = (1.0, 2.0) if (a_first == same) else (2.0, 1.0)
            pairs.append(ConfigPair(cfg(mu1, s1), cfg(mu2, s2), MeasureId.ABS_MU_DM, Regime.NULL))
        checks = verify_designation_independence(pairs)
        assert checks[MeasureId.SIGMA_D].p_value < 1e-6

    def test_needs_enough_pairs(self):
        with pytest.raises(ValueError):
            verify_designation_independence(generate_config_pairs("abs_mu_dm", "null", 5, seed=0))


class TestComparisonError:
    def test_rnd_is_coin_flip(self):
        pair = generate_config_pairs("abs_mu_dm", "null", 1, seed=1)[0]
        err = comparison_error(StatisticId.RND, pair, m_samples=4000, seed=1)
        assert err == pytest.approx(0.5, abs=2 / math.sqrt(4000))

    def test_xbar_dm_separated(self):
        pair = ConfigPair(cfg(0.5, 2.0, 30), cfg(4.5, 2.0, 30, mu_x=200.0), MeasureId.ABS_MU_DM, Regime.NULL)
        assert comparison_error(StatisticId.XBAR_DM, pair, m_samples=10_000, seed=2) < 0.2

    def test_antisymmetric(self):
        pairs = generate_config_pairs("abs_mu_dm", "null", 5, seed=3)
        for i, p in enumerate(pairs):
            for sid in (StatisticId.XBAR_DM, StatisticId.P_N, StatisticId.DELTA_M):
                a = comparison_error(sid, p, m_samples=50, seed=4, k=1000, pair_index=i)
                b = comparison_error(sid, p.swapped(), m_samples=50, seed=4, k=1000, pair_index=i)
                assert a == b

    def test_requires_samples(self):
        pair = generate_config_pairs("abs_mu_dm", "null", 1, seed=1)[0]
        with pytest.raises(ValueError):
            comparison_error(StatisticId.RND, pair, m_samples=10)


class TestEvaluateBatch:
    def test_failures_are_nan(self):
        c = PopulationConfig(0.5, 1.0, 4.0, 4.0, 4, 4, 0.05)
        x, y = sample_summaries(c, 20, np.random.default_rng(0))
        out = evaluate_batch([StatisticId.R_DELTA_M, StatisticId.DELTA_M], x, y, 0.05, NullRegion(-1, 1), 1000, 0)
        assert np.isnan(out[StatisticId.R_DELTA_M]).any()
        assert np.isfinite(out[StatisticId.DELTA_M]).all()


class TestIntegratedError:
    def test_rnd_calibrated(self):
        r = integrated_error(StatisticId.RND, "abs_mu_dm", "null", 200, 50, seed=1, workers=1)
        assert 0.45 <= r.error_rate <= 0.55
        assert r.n_incorrect == round(r.error_rate * 200 * 50)

    def test_worker_count_does_not_change_results(self):
        kw = dict(statistics=[StatisticId.DELTA_M, StatisticId.XBAR_DM], n_configs=12, m_samples=8, seed=5, k=1000)
        one = run_investigation("df_d", "null", workers=1, **kw)
        three = run_investigation("df_d", "null", workers=3, **kw)
        assert [r.to_dict() for r in one] == [r.to_dict() for r in three]

    def test_report_schema(self):
        r = run_investigation("alpha_dm", "null", [StatisticId.XBAR_DM], 5, 5, seed=0, workers=1)[0]
        d = r.to_dict()
        for key in ("statistic", "measure", "regime", "error_rate", "n_configs", "m_samples", "binomial_p", "seed"):
            assert key in d
        assert d["binomial_p"] == pytest.approx(stats.binomtest(r.n_incorrect, 25, 0.5).pvalue)

    def test_simultaneous_scores_four_measures(self):
        reports = run_investigation(SIMULTANEOUS, "null", [StatisticId.RND], 5, 5, seed=0, workers=1)
        assert {r.measure for r in reports} == set(MeasureId) - {MeasureId.ABS_R_MU_DM, MeasureId.R_SIGMA_D}

    def test_min_configs(self):
        with pytest.raises(ValueError):
            integrated_error(StatisticId.RND, "abs_mu_dm", "null", 10, 50)

    def test_scaled_view(self):
        reports = run_investigation(
            "abs_mu_dm", "null", [StatisticId.XBAR_DM, StatisticId.RND], 30, 20, seed=0, workers=1
        )
        view = scaled_errors(reports)
        best = min(view.values())
        assert best == pytest.approx(-1.0)


class TestCovariation:
    def test_monotone_increasing(self):
        vals = np.arange(8, dtype=float)[:, None] + np.random.default_rng(0).normal(0, 0.01, (8, 50))
        res = covariation_from_values(vals, StatisticId.S_DM, MeasureId.SIGMA_D, n_boot=200)
        assert res.rho == 1.0

    def test_rnd_ci_contains_zero(self):
        res = covariation_study(
            StatisticId.RND, MeasureId.ABS_MU_DM, default_series(MeasureId.ABS_MU_DM), m_samples=1000, seed=3
        )
        assert res.ci[0] <= 0.0 <= res.ci[1]

    def test_delta_m_decreases_along_mu_series(self):
        res = covariation_study(
            StatisticId.DELTA_M, MeasureId.ABS_MU_DM, default_series(MeasureId.ABS_MU_DM), 200, k=1000, seed=1
        )
        assert res.rho == -1.0

    @pytest.mark.parametrize("measure", list(MeasureId))
    def test_series_ordered_toward_stronger_null(self, measure):
        make = relative_series if measure.relative else default_series
        series = make(measure)
        assert len(series) == 8
        for a, b in zip(series, series[1:]):
            assert ground_truth(b, a, measure) is Winner.EXP1

    def test_short_series_rejected(self):
        with pytest.raises(ValueError):
            covariation_study(StatisticId.RND, MeasureId.ABS_MU_DM, default_series(MeasureId.ABS_MU_DM)[:4])
