"""Both kernel backends: distribution, selection and cross-backend agreement."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats

from nullstrength import kernels

BACKENDS = kernels.backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return BACKENDS[request.param]


def test_active_backend_is_known():
    assert kernels.BACKEND in BACKENDS


class TestStandardT:
    @pytest.mark.parametrize("df", [1.0, 2.0, 5.0, 30.0, 1e4])
    def test_matches_t_cdf(self, backend, df):
        k = 40_000
        draws = backend.standard_t(np.random.default_rng(11), df, k)
        res = stats.kstest(draws, stats.t(df).cdf)
        # sup distance of the ECDF from the true CDF
        assert res.statistic < 2.0 / math.sqrt(k)

    def test_length_and_dtype(self, backend):
        out = backend.standard_t(np.random.default_rng(0), 4.0, 1234)
        assert out.shape == (1234,) and out.dtype == np.float64

    def test_reproducible(self, backend):
        a = backend.standard_t(np.random.default_rng(3), 6.0, 1000)
        b = backend.standard_t(np.random.default_rng(3), 6.0, 1000)
        np.testing.assert_array_equal(a, b)

    def test_large_df_approaches_normal(self, backend):
        draws = backend.standard_t(np.random.default_rng(5), 1e9, 50_000)
        assert stats.kstest(draws, "norm").statistic < 2.0 / math.sqrt(50_000)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
class TestBackendAgreement:
    """The backends consume the stream identically; values agree to rounding."""

    @pytest.mark.parametrize("df", [1.0, 3.0, 9.0, 47.0, 1e6])
    def test_same_variates(self, df):
        a = BACKENDS["python"].standard_t(np.random.default_rng(21), df, 5000)
        b = BACKENDS["cython"].standard_t(np.random.default_rng(21), df, 5000)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-300)

    @pytest.mark.parametrize("relative", [False, True])
    def test_selection_identical(self, relative):
        rng = np.random.default_rng(4)
        x = 10 + rng.standard_normal(3001)
        y = 10.3 + rng.standard_normal(3001)
        for rank in (1, 17, 2850, 3001):
            assert BACKENDS["python"].diff_abs_kth(x, y, rank, relative) == BACKENDS["cython"].diff_abs_kth(
                x, y, rank, relative
            )
        assert BACKENDS["python"].count_abs_within(x, y, 0.5, relative) == BACKENDS["cython"].count_abs_within(
            x, y, 0.5, relative
        )


class TestSelection:
    @settings(max_examples=60, deadline=None)
    @given(arrays(np.float64, st.integers(1, 300), elements=st.floats(-1e6, 1e6)), st.data())
    def test_abs_kth_is_sorted_order_statistic(self, values, data):
        rank = data.draw(st.integers(1, values.size))
        for mod in BACKENDS.values():
            assert mod.abs_kth(values, rank) == np.sort(np.abs(values))[rank - 1]

    def test_diff_abs_kth_relative(self, backend):
        x = np.array([2.0, 4.0, 5.0, 10.0])
        y = np.array([3.0, 2.0, 5.0, 13.0])
        # |(y - x) / x| = 0.5, 0.5, 0, 0.3
        assert backend.diff_abs_kth(x, y, 2, True) == pytest.approx(0.3)
        assert backend.diff_abs_kth(x, y, 4, True) == 0.5
        assert backend.diff_abs_kth(x, y, 1, False) == 0.0

    def test_count_abs_within_inclusive(self, backend):
        x = np.zeros(4)
        y = np.array([-1.0, 0.5, 1.0, 1.5])
        assert backend.count_abs_within(x, y, 1.0, False) == 3

    def test_inputs_not_mutated(self, backend):
        x = np.array([3.0, -1.0, 2.0])
        y = np.zeros(3)
        before = x.copy()
        backend.abs_kth(x, 2)
        backend.diff_abs_kth(x, y, 2, False)
        np.testing.assert_array_equal(x, before)
