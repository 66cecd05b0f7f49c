import random

import pytest
from hypothesis import given, settings, strategies as st

from vitalcep.thresholds import (
    AvgConfidenceModel,
    ConstantModel,
    DEFAULT_RANGES,
    DomainError,
    EwmaAccumulator,
    EwmaModel,
    InsufficientHistoryError,
    RiskLevel,
    SampleHistory,
    SmaModel,
    StepModel,
    WmaModel,
    alpha_from_n,
    avg_confidence,
    classify,
    ewma,
    ewma_step,
    parse_model_config,
    sma,
    step_model,
    wma,
)
from vitalcep.errors import VitalcepError


class TestSampleHistory:
    def test_ticks_strictly_increase(self):
        history = SampleHistory([(1, 80.0)])
        with pytest.raises(ValueError):
            history.append(1, 81.0)

    def test_last_requires_enough_samples(self):
        with pytest.raises(InsufficientHistoryError):
            SampleHistory([(1, 80.0)]).last(2)


class TestSma:
    def test_mean_of_window(self):
        assert sma([80, 90, 100], 3) == pytest.approx(90.0)

    def test_p_one_is_newest(self):
        assert sma([1, 2, 42], 1) == 42

    def test_oldest_excluded(self):
        # brute force over the last p values
        values = [70, 80, 90, 100]
        assert sma(values, 3) == pytest.approx(sum(values[-3:]) / 3)
        assert sma(values, 3) == pytest.approx(90.0)

    def test_insufficient_history(self):
        with pytest.raises(InsufficientHistoryError):
            sma([1.0], 2)


class TestWma:
    def test_constant_series(self):
        assert wma([7, 7, 7], 3) == pytest.approx(7.0)

    def test_hand_evaluated_weights(self):
        # newest->oldest (100, 90, 80): (2*100 + 1*90 + 0*80) / 3
        assert wma([80, 90, 100], 3) == pytest.approx(290 / 3, abs=1e-9)

    def test_p_one_invalid(self):
        with pytest.raises(ValueError):
            wma([1, 2], 1)

    def test_oldest_sample_has_zero_weight(self):
        assert wma([10**9, 90, 100], 3) == wma([0, 90, 100], 3)

    def test_shifted_weighting_counts_oldest(self):
        # weights 3,2,1 newest->oldest: (3*100 + 2*90 + 1*80) / 6
        assert wma([80, 90, 100], 3, weighting="shifted") == pytest.approx(560 / 6)


class TestEwma:
    def test_alpha_one_passes_current(self):
        assert ewma_step(80, 100, 1.0) == 100

    def test_hand_evaluated_step(self):
        assert ewma_step(80, 100, 0.5) == pytest.approx(90.0, abs=1e-9)

    def test_fixpoint(self):
        assert ewma_step(66.0, 66.0, 0.3) == pytest.approx(66.0)

    def test_alpha_bounds(self):
        with pytest.raises(ValueError):
            ewma_step(1, 2, 0.0)
        with pytest.raises(ValueError):
            ewma_step(1, 2, 1.5)

    def test_series_starts_at_first_value(self):
        assert ewma([100], 0.5) == 100
        assert ewma([80, 100], 0.5) == pytest.approx(90.0)

    def test_alpha_from_n(self):
        assert alpha_from_n(3) == pytest.approx(0.5)
        assert alpha_from_n(1) == pytest.approx(1.0)
        assert alpha_from_n(9) == pytest.approx(0.2)
        with pytest.raises(ValueError):
            alpha_from_n(0)

    def test_alpha_from_one_observation_reproduces_series(self):
        rng = random.Random(5)
        series = [rng.uniform(0, 200) for _ in range(50)]
        alpha = alpha_from_n(1)
        acc = EwmaAccumulator(alpha)
        assert [acc.update(v) for v in series] == series


class TestStepModel:
    def test_single_interval_constant(self):
        for x in (0, 5, 10):
            assert step_model([0, 10], [42], x) == 42

    def test_right_continuous_at_boundary(self):
        assert step_model([0, 10, 20], [1, 2], 10) == 2
        assert step_model([0, 10, 20], [1, 2], 9.999) == 1

    def test_last_interval_closed(self):
        assert step_model([0, 10, 20], [1, 2], 20) == 2

    def test_out_of_domain(self):
        with pytest.raises(DomainError):
            step_model([0, 20], [1], 25)

    def test_bad_boundaries(self):
        with pytest.raises(ValueError):
            step_model([0, 0], [1], 0)
        with pytest.raises(ValueError):
            step_model([0, 10], [1, 2], 5)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0, 9.99), st.floats(0, 9.99))
    def test_piecewise_constant(self, a, b):
        bounds = [0, 10, 20]
        values = [3, 7]
        assert step_model(bounds, values, a) == step_model(bounds, values, b)


class TestAvgConfidence:
    def test_constant_series_is_mean(self):
        assert avg_confidence([50, 50, 50], 3, 1.96) == pytest.approx(50.0)

    def test_hand_computed(self):
        # mean 100, sample std sqrt(200), stderr 10 -> 100 + 1.96*10
        assert avg_confidence([90, 110], 2, 1.96) == pytest.approx(119.6, abs=1e-9)

    def test_z_zero_reduces_to_sma(self):
        values = [88, 92, 95, 103]
        assert avg_confidence(values, 3, 0.0) == pytest.approx(sma(values, 3))

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            avg_confidence([1, 2], 1, 1.0)


def brute_sma(window):
    return sum(window) / len(window)


def brute_wma(window):
    p = len(window)
    newest_first = window[::-1]
    num = sum((p - i) * newest_first[i - 1] for i in range(1, p + 1))
    return num / (p * (p - 1) / 2)


def brute_ewma(series, alpha):
    acc = series[0]
    for v in series[1:]:
        acc = alpha * v + (1 - alpha) * acc
    return acc


class TestMovingAverageProperties:
    @settings(max_examples=80, deadline=None)
    @given(
        st.lists(st.floats(-1000, 1000), min_size=2, max_size=40),
        st.floats(-500, 500),
        st.floats(0.1, 10),
    )
    def test_translation_and_scale_equivariance(self, values, c, s):
        p = len(values)
        shifted = [v + c for v in values]
        scaled = [v * s for v in values]
        assert sma(shifted, p) == pytest.approx(sma(values, p) + c, abs=1e-9)
        assert wma(shifted, p) == pytest.approx(wma(values, p) + c, abs=1e-9)
        assert ewma(shifted, 0.3) == pytest.approx(ewma(values, 0.3) + c, abs=1e-9)
        assert sma(scaled, p) == pytest.approx(sma(values, p) * s, abs=1e-6)
        assert wma(scaled, p) == pytest.approx(wma(values, p) * s, abs=1e-6)
        assert ewma(scaled, 0.3) == pytest.approx(ewma(values, 0.3) * s, abs=1e-6)

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.floats(-1000, 1000), min_size=2, max_size=40))
    def test_averages_stay_within_window_bounds(self, values):
        p = len(values)
        lo, hi = min(values), max(values)
        assert lo - 1e-9 <= sma(values, p) <= hi + 1e-9
        assert lo - 1e-9 <= wma(values, p) <= hi + 1e-9
        assert lo - 1e-9 <= ewma(values, 0.4) <= hi + 1e-9

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=50),
        st.floats(0.05, 1.0),
    )
    def test_matches_brute_force(self, values, alpha):
        p = len(values)
        assert sma(values, p) == pytest.approx(brute_sma(values), abs=1e-9, rel=1e-12)
        assert wma(values, p) == pytest.approx(brute_wma(values), abs=1e-9, rel=1e-12)
        assert ewma(values, alpha) == pytest.approx(
            brute_ewma(values, alpha), abs=1e-9, rel=1e-12
        )


class TestClassify:
    @pytest.mark.parametrize(
        "param,value,expected",
        [
            ("HR", 80, RiskLevel.LOW),
            ("HR", 100, RiskLevel.LOW),  # boundary resolves to the milder band
            ("HR", 110, RiskLevel.MODERATE),
            ("HR", 120, RiskLevel.MODERATE),
            ("HR", 121, RiskLevel.HIGH),
            ("HR", 50, RiskLevel.LOW),  # non-risk side of normal
            ("SpO2", 97, RiskLevel.LOW),
            ("SpO2", 95, RiskLevel.LOW),
            ("SpO2", 92, RiskLevel.MODERATE),
            ("SpO2", 90, RiskLevel.MODERATE),
            ("SpO2", 88, RiskLevel.HIGH),
            ("PWV", 7, RiskLevel.LOW),
            ("PWV", 9, RiskLevel.LOW),
            ("PWV", 10, RiskLevel.MODERATE),
            ("PWV", 13, RiskLevel.HIGH),
            ("PRV", 60, RiskLevel.LOW),
            ("PRV", 50, RiskLevel.MODERATE),
            ("PRV", 30, RiskLevel.MODERATE),
            ("PRV", 29, RiskLevel.HIGH),
            ("RR", 16, RiskLevel.LOW),
            ("RR", 20, RiskLevel.LOW),
            ("RR", 24, RiskLevel.MODERATE),
            ("RR", 25, RiskLevel.HIGH),
            ("SBP", 120, RiskLevel.LOW),
            ("SBP", 140, RiskLevel.MODERATE),
            ("SBP", 141, RiskLevel.HIGH),
            ("DBP", 80, RiskLevel.LOW),
            ("DBP", 90, RiskLevel.MODERATE),
            ("DBP", 95, RiskLevel.HIGH),
            ("HRV", 51, RiskLevel.LOW),
            ("HRV", 40, RiskLevel.MODERATE),
            ("HRV", 20, RiskLevel.HIGH),
            ("PI", 2.5, RiskLevel.LOW),
            ("PI", 2.0, RiskLevel.MODERATE),
            ("PI", 0.5, RiskLevel.MODERATE),
            ("PI", 0.4, RiskLevel.HIGH),
        ],
    )
    def test_band_table(self, param, value, expected):
        assert classify(param, value) is expected

    def test_unknown_parameter_is_named(self):
        with pytest.raises(VitalcepError, match="XYZ"):
            classify("XYZ", 1.0)

    def test_risk_levels_totally_ordered(self):
        assert RiskLevel.LOW < RiskLevel.MODERATE < RiskLevel.HIGH

    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from(sorted(DEFAULT_RANGES)), st.data())
    def test_monotone_along_risk_direction(self, param, data):
        a = data.draw(st.floats(0.1, 300))
        b = data.draw(st.floats(0.1, 300))
        band = DEFAULT_RANGES[param]
        downward = band.high.hi is not None  # high band is bounded above
        lower, higher = min(a, b), max(a, b)
        if downward:
            assert classify(param, lower) >= classify(param, higher)
        else:
            assert classify(param, lower) <= classify(param, higher)


class TestModelObjects:
    def test_constant(self):
        assert ConstantModel(100).threshold([1, 2, 3]) == 100

    def test_step_uses_newest(self):
        model = StepModel((0, 10, 20), (1, 2))
        assert model.threshold([0, 15]) == 2

    def test_sma_wma_avg_models(self):
        history = [80, 90, 100]
        assert SmaModel(3).threshold(history) == pytest.approx(90)
        assert WmaModel(3).threshold(history) == pytest.approx(290 / 3)
        assert AvgConfidenceModel(2, 0.0).threshold(history) == pytest.approx(95)

    def test_ewma_model_initial_override(self):
        assert EwmaModel(0.5, initial=0.0).threshold([100]) == pytest.approx(50.0)

    def test_min_samples(self):
        assert SmaModel(4).min_samples == 4
        assert ConstantModel(5).min_samples == 0


class TestModelConfig:
    @pytest.mark.parametrize(
        "text,kind",
        [
            ("model=constant c=100", ConstantModel),
            ("model=step boundaries=0,10,20 values=1,2", StepModel),
            ("model=avg_confidence p=5 z=1.96", AvgConfidenceModel),
            ("model=sma p=5", SmaModel),
            ("model=wma p=5", WmaModel),
            ("model=ewma n=5 initial=first", EwmaModel),
            ("model=ewma alpha=0.25", EwmaModel),
        ],
    )
    def test_variants(self, text, kind):
        assert isinstance(parse_model_config(text), kind)

    def test_ewma_n_maps_to_alpha(self):
        model = parse_model_config("model=ewma n=3")
        assert model.alpha == pytest.approx(0.5)

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            parse_model_config("model=magic p=3")

    def test_unknown_key_named(self):
        with pytest.raises(ValueError, match="q"):
            parse_model_config("model=sma p=3 q=9")

    def test_missing_model(self):
        with pytest.raises(ValueError):
            parse_model_config("p=3")
