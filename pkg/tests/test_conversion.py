import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from morerep.conversion import (
    ConversionConfig,
    MatchResult,
    NormBounds,
    Strategy,
    compute_norm_bounds,
    convert,
    convert_gmv,
    convert_mv,
    convert_naive,
    gmv_good,
    gmv_normalize,
)


def match(h, a, date=0):
    return MatchResult(date, "home", "away", h, a)


def goods(pair):
    about_home, about_away = pair
    return about_home.value["G"], about_away.value["G"]


class TestMatchResult:
    @pytest.mark.parametrize("h,a", [(-1, 0), (0, -2), (1.5, 0), (True, 0)])
    def test_bad_goals(self, h, a):
        with pytest.raises(ValueError):
            match(h, a)

    def test_self_play(self):
        with pytest.raises(ValueError):
            MatchResult(0, "x", "x", 1, 0)

    def test_margin(self):
        assert match(3, 1).margin == 2


class TestNaive:
    def test_home_win(self):
        about_home, about_away = convert_naive(match(3, 1, date=42))
        assert about_home.value.probs == (0.0, 1.0)
        assert about_away.value.probs == (1.0, 0.0)
        assert (about_home.rater, about_home.ratee, about_home.time) == ("away", "home", 42)
        assert (about_away.rater, about_away.ratee, about_away.time) == ("home", "away", 42)

    def test_draw(self):
        assert goods(convert_naive(match(2, 2))) == (0.5, 0.5)

    def test_margin_ignored(self):
        assert convert_naive(match(0, 3)) == convert_naive(match(2, 3))


class TestMV:
    def test_goalless(self):
        assert goods(convert_mv(match(0, 0))) == (0.5, 0.5)

    def test_two_one(self):
        about_home, about_away = convert_mv(match(2, 1))
        assert about_home.value.probs == pytest.approx((1 / 3, 2 / 3), abs=1e-15)
        assert about_away.value.probs == pytest.approx((2 / 3, 1 / 3), abs=1e-15)

    def test_clean_sheets_saturate(self):
        assert convert_mv(match(1, 0)) == convert_mv(match(4, 0))
        assert goods(convert_mv(match(4, 0)))[0] == 1.0


class TestGMV:
    def test_goalless(self):
        assert goods(convert_gmv(match(0, 0))) == (0.5, 0.5)

    def test_four_nil(self):
        about_home, about_away = convert_gmv(match(4, 0))
        assert about_home.value.probs == pytest.approx((1 / 6, 5 / 6), abs=1e-15)
        assert about_away.value.probs == pytest.approx((5 / 6, 1 / 6), abs=1e-15)

    def test_small_gift_matches_mv(self):
        cfg = ConversionConfig(Strategy.GMV, x=1e-9, normalize=False)
        assert goods(convert_gmv(match(2, 1), cfg)) == pytest.approx((2 / 3, 1 / 3), abs=1e-6)

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_non_positive_gift(self, x):
        with pytest.raises(ValueError):
            ConversionConfig(Strategy.GMV, x=x)

    def test_exact_rational(self):
        for h, a in itertools.product(range(6), repeat=2):
            assert gmv_good(h, a, 1.0) == pytest.approx(float(Fraction(h + 1, h + a + 2)), abs=1e-15)


SCORES = list(itertools.product(range(21), repeat=2))
CONVERTERS = {
    "naive": convert_naive,
    "mv": convert_mv,
    "gmv": lambda m: convert_gmv(m, ConversionConfig(normalize=False)),
}


class TestSweep:
    @pytest.mark.parametrize("name", sorted(CONVERTERS))
    def test_valid_and_mutually_consistent(self, name):
        conv = CONVERTERS[name]
        for h, a in SCORES:
            about_home, about_away = conv(match(h, a))
            for op in (about_home, about_away):
                assert all(0.0 <= v <= 1.0 for v in op.value.probs)
                assert sum(op.value.probs) == pytest.approx(1.0, abs=1e-12)
            assert about_home.value["G"] == pytest.approx(about_away.value["B"], abs=1e-15)

    def test_gmv_strictly_inside_unit_interval(self):
        for h, a in SCORES:
            p = gmv_good(h, a, 1.0)
            assert 0.0 < p < 1.0

    @given(st.integers(0, 30), st.integers(0, 30), st.floats(0.01, 100))
    def test_gmv_monotone(self, h, a, x):
        p = gmv_good(h, a, x)
        assert gmv_good(h + 1, a, x) > p
        assert gmv_good(h, a + 1, x) < p

    @pytest.mark.parametrize("h,a", SCORES[::7])
    def test_large_gift_tends_to_half(self, h, a):
        assert gmv_good(h, a, 1e6) == pytest.approx(0.5, abs=1e-5)

    @pytest.mark.parametrize("h,a", SCORES)
    def test_tiny_gift_tends_to_mv(self, h, a):
        mv = goods(convert_mv(match(h, a)))
        gmv = goods(convert_gmv(match(h, a), ConversionConfig(x=1e-9, normalize=False)))
        assert gmv == pytest.approx(mv, abs=1e-6)


class TestNormalization:
    def test_bounds_single_match(self):
        b = compute_norm_bounds([match(1, 0)], ConversionConfig())
        assert (b.m, b.M) == pytest.approx((1 / 3, 2 / 3), abs=1e-15)

    def test_bounds_all_goalless(self):
        b = compute_norm_bounds([match(0, 0), match(0, 0)], ConversionConfig())
        assert b.m == b.M == 0.5

    def test_bounds_fixture(self):
        b = compute_norm_bounds([match(4, 0), match(1, 1)], ConversionConfig())
        assert (b.m, b.M) == pytest.approx((1 / 6, 5 / 6), abs=1e-15)

    def test_bounds_empty(self):
        with pytest.raises(ValueError):
            compute_norm_bounds([], ConversionConfig())

    def test_invalid_bounds(self):
        with pytest.raises(ValueError):
            NormBounds(0.7, 0.3)

    def test_endpoints_and_midpoint(self):
        b = NormBounds(1 / 6, 5 / 6)
        assert gmv_normalize(b.m, b) == 0.0
        assert gmv_normalize(b.M, b) == 1.0
        assert gmv_normalize(0.5, b) == pytest.approx(0.5, abs=1e-15)

    def test_degenerate(self):
        assert gmv_normalize(0.5, NormBounds(0.5, 0.5)) == 0.5

    def test_clamped_with_warning(self, caplog):
        assert gmv_normalize(0.9, NormBounds(0.2, 0.8)) == 1.0
        assert "clamping" in caplog.text

    def test_normalized_conversion(self):
        matches = [match(4, 0), match(1, 1), match(2, 1)]
        cfg = ConversionConfig()
        b = compute_norm_bounds(matches, cfg)
        assert goods(convert(matches[0], cfg, b)) == pytest.approx((1.0, 0.0), abs=1e-15)
        home, away = goods(convert(matches[2], cfg, b))
        assert home == pytest.approx((0.6 - 1 / 6) / (2 / 3), abs=1e-12)
        assert home + away == pytest.approx(1.0, abs=1e-12)

    def test_dispatch_without_normalize(self):
        cfg = ConversionConfig(normalize=False)
        b = NormBounds(0.4, 0.6)
        assert convert(match(4, 0), cfg, b) == convert_gmv(match(4, 0), cfg)

    def test_dispatch_strategies(self):
        m = match(2, 1)
        assert convert(m, ConversionConfig(Strategy.NAIVE)) == convert_naive(m)
        assert convert(m, ConversionConfig("mv")) == convert_mv(m)
