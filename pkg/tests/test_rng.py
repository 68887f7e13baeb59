import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nullstrength.rng import RngSeed, as_seed


class TestRngSeed:
    def test_same_address_same_stream(self):
        a = RngSeed(7, 3).generator().random(5)
        b = RngSeed(7, 3).generator().random(5)
        np.testing.assert_array_equal(a, b)

    def test_substreams_differ(self):
        s = RngSeed(7)
        assert s.generator(0).random() != s.generator(1).random()

    def test_master_seed_matters(self):
        assert RngSeed(1).generator().random() != RngSeed(2).generator().random()

    def test_derive_is_deterministic_and_key_sensitive(self):
        s = RngSeed(5)
        assert s.derive("a", 1) == s.derive("a", 1)
        assert s.derive("a", 1) != s.derive("a", 2)
        assert s.derive("a", 1) != s.derive(1, "a")
        assert s.derive("a").master_seed == 5

    def test_derive_chains_from_stream(self):
        assert RngSeed(5, 1).derive("k") != RngSeed(5, 2).derive("k")

    @pytest.mark.parametrize("bad", [-1, 1 << 64, 1.5, "3"])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            RngSeed(bad)

    def test_to_dict(self):
        assert RngSeed(3, 9).to_dict() == {"master_seed": 3, "stream_id": 9}

    @pytest.mark.parametrize("seed, expected", [(None, RngSeed()), (4, RngSeed(4)), (RngSeed(2, 8), RngSeed(2, 8))])
    def test_as_seed(self, seed, expected):
        assert as_seed(seed) == expected

    @given(st.integers(0, 2**64 - 1), st.text(max_size=8))
    def test_derived_ids_are_64_bit(self, master, key):
        child = RngSeed(master).derive(key)
        assert 0 <= child.stream_id < 2**64
