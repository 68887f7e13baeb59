import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nullstrength.errors import TieGroundTruth
from nullstrength.measures import MeasureId, PopulationConfig, Winner, ground_truth, loss, measures


def cfg(**kw):
    base = dict(mu_x=20.0, mu_y=21.0, var_x=9.0, var_y=16.0, m=6, n=6, alpha_dm=0.05)
    base.update(kw)
    return PopulationConfig(**base)


configs = st.builds(
    PopulationConfig,
    st.floats(1, 100),
    st.floats(-100, 200),
    st.floats(0.1, 50),
    st.floats(0.1, 50),
    st.integers(2, 50),
    st.integers(2, 50),
    st.floats(0.01, 0.3),
)


class TestMeasures:
    def test_values(self):
        m = measures(cfg())
        assert m[MeasureId.SIGMA_D] == 5.0
        assert m[MeasureId.DF_D] == 10
        assert m[MeasureId.ABS_MU_DM] == 1.0

    def test_relative(self):
        m = measures(cfg(mu_y=22.0))
        assert m[MeasureId.ABS_R_MU_DM] == pytest.approx(0.1)
        assert m[MeasureId.R_SIGMA_D] == pytest.approx(0.25)

    def test_relative_absent_without_positive_control(self):
        assert MeasureId.ABS_R_MU_DM not in measures(cfg(mu_x=-1.0))

    @pytest.mark.parametrize("kw", [{"var_x": 0.0}, {"m": 1}, {"n": 2.5}, {"alpha_dm": 1.0}])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            cfg(**kw)

    def test_directions(self):
        signs = [MeasureId(m).stronger_null_direction for m in
                 ("abs_mu_dm", "sigma_d", "df_d", "alpha_dm", "abs_r_mu_dm", "r_sigma_d")]
        assert signs == ["lower", "lower", "higher", "higher", "lower", "lower"]

    @pytest.mark.parametrize("alias, canonical", [("mu_dm", "abs_mu_dm"), ("r_mu_dm", "abs_r_mu_dm"), ("df_d", "df_d")])
    def test_aliases(self, alias, canonical):
        assert MeasureId.parse(alias).value == canonical


class TestGroundTruth:
    def test_mu_dm(self):
        assert ground_truth(cfg(mu_y=21.0), cfg(mu_y=22.0), MeasureId.ABS_MU_DM) is Winner.EXP1

    def test_sign_ignored(self):
        assert ground_truth(cfg(mu_y=19.0), cfg(mu_y=22.0), MeasureId.ABS_MU_DM) is Winner.EXP1

    def test_alpha(self):
        assert ground_truth(cfg(alpha_dm=0.05), cfg(alpha_dm=0.01), MeasureId.ALPHA_DM) is Winner.EXP1

    def test_df(self):
        assert ground_truth(cfg(m=10), cfg(m=6), MeasureId.DF_D) is Winner.EXP1

    def test_tie(self):
        for m in MeasureId:
            assert ground_truth(cfg(), cfg(), m) is Winner.TIE

    @pytest.mark.parametrize(
        "measure, stronger",
        [
            (MeasureId.ABS_MU_DM, {"mu_y": 20.5}),
            (MeasureId.SIGMA_D, {"var_y": 4.0}),
            (MeasureId.DF_D, {"n": 12}),
            (MeasureId.ALPHA_DM, {"alpha_dm": 0.1}),
            (MeasureId.ABS_R_MU_DM, {"mu_y": 20.5}),
            (MeasureId.R_SIGMA_D, {"var_x": 1.0}),
        ],
    )
    def test_perturbation_in_stronger_direction(self, measure, stronger):
        assert ground_truth(cfg(**stronger), cfg(), measure) is Winner.EXP1
        assert ground_truth(cfg(), cfg(**stronger), measure) is Winner.EXP2

    @given(configs, configs, st.sampled_from(list(MeasureId)))
    def test_antisymmetric(self, a, b, measure):
        assert ground_truth(a, b, measure) is ground_truth(b, a, measure).swapped()


class TestLoss:
    def test_values(self):
        assert loss(Winner.EXP1, Winner.EXP1) == 0
        assert loss(Winner.EXP1, Winner.EXP2) == 1

    def test_tie_error(self):
        with pytest.raises(TieGroundTruth):
            loss(Winner.TIE, Winner.EXP1)

    def test_balanced_random_expected_loss(self):
        # exhaustive 2x2 with P(prediction = exp1) = 0.5 and balanced truth
        cells = [loss(g, p) * 0.25 for g, p in itertools.product([Winner.EXP1, Winner.EXP2], repeat=2)]
        assert sum(cells) == 0.5


class TestRoundingTies:
    def test_equal_relative_spread_on_different_controls_ties(self):
        a = PopulationConfig(20.0, 20.0 + 0.1 * 20.0, (0.3 * 20.0) ** 2 / 2, (0.3 * 20.0) ** 2 / 2, 10, 10)
        b = PopulationConfig(200.0, 200.0 + 0.1 * 200.0, (0.3 * 200.0) ** 2 / 2, (0.3 * 200.0) ** 2 / 2, 10, 10)
        assert ground_truth(a, b, MeasureId.R_SIGMA_D) is Winner.TIE
        assert ground_truth(a, b, MeasureId.ABS_R_MU_DM) is Winner.TIE

    def test_small_real_differences_resolved(self):
        a = PopulationConfig(20.0, 21.0, 1.0, 1.0, 10, 10)
        b = a.with_(mu_y=21.0 + 1e-6)
        assert ground_truth(a, b, MeasureId.ABS_MU_DM) is Winner.EXP1
