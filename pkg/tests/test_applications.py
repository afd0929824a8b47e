"""Tests for the application adapters."""

import numpy as np
import pytest

from effdof import (
    AdjustmentConfig,
    DegenerateSynthesisError,
    JackknifeDeviations,
    RubinVariance,
    SynthesisError,
    WelchInput,
    adjusted_df,
    brr_df,
    jackknife_components,
    jackknife_df,
    rubin_components,
    rubin_df,
    welch_components,
    welch_df,
)


class TestRubin:
    def test_component_construction(self):
        inputs = RubinVariance(4.0, 10, 1.0, 5)
        first, second = rubin_components(inputs)
        assert (first.weight, first.s2, first.df) == (1.0, 4.0, 10)
        assert second.weight == pytest.approx(6.0 / 5.0)
        assert (second.s2, second.df) == (1.0, 4)

    def test_hand_evaluated_value(self):
        # components (1, 4, 10) and (1.2, 1, 4): ratio 27.04 / (16/12 + 1.44/6),
        # nu_bar_w = 14.8/2.2, shrink 1 + 2.24/(2*nu_bar_w)
        expected = (27.04 / (16.0 / 12.0 + 1.44 / 6.0)) / (1.0 + 2.24 / (2.0 * (14.8 / 2.2)))
        value = rubin_df(RubinVariance(4.0, 10, 1.0, 5)).value
        assert value == pytest.approx(expected, rel=1e-12)
        assert value == pytest.approx(14.733510312436186, rel=1e-12)

    def test_zero_imputation_variance(self):
        # The zero component stays in the synthesis: K = 2 still drives the shrink.
        inputs = RubinVariance(4.0, 10, 0.0, 5)
        nu_bar = 14.8 / 2.2
        expected = 12.0 / (1.0 + 2.24 / (2.0 * nu_bar))
        assert rubin_df(inputs).value == pytest.approx(expected, rel=1e-12)

    def test_many_imputations_approach_equal_weights(self):
        big_m = rubin_df(RubinVariance(4.0, 10, 1.0, 10 ** 6),
                         AdjustmentConfig(2.24, 0)).value
        # m -> infinity sends the weight (m+1)/m to 1; compare against unit
        # weights with the same d.f. pair.
        from effdof import VarianceComponent
        equal = adjusted_df([VarianceComponent(1.0, 4.0, 10),
                             VarianceComponent(1.0, 1.0, 10 ** 6 - 1)],
                            AdjustmentConfig(2.24, 0)).value
        assert abs(big_m - equal) / equal < 1e-4

    def test_both_variances_zero(self):
        with pytest.raises(DegenerateSynthesisError):
            rubin_df(RubinVariance(0.0, 10, 0.0, 5))

    @pytest.mark.parametrize("kwargs", [
        {"sampling_s2": 1.0, "sampling_df": 10, "imputation_s2": 1.0, "m": 1},
        {"sampling_s2": 1.0, "sampling_df": 0, "imputation_s2": 1.0, "m": 5},
        {"sampling_s2": -1.0, "sampling_df": 10, "imputation_s2": 1.0, "m": 5},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(SynthesisError):
            RubinVariance(**kwargs)

    def test_scale_invariance(self):
        base = rubin_df(RubinVariance(4.0, 10, 1.0, 5)).value
        scaled = rubin_df(RubinVariance(4.0e3, 10, 1.0e3, 5)).value
        assert scaled == pytest.approx(base, rel=1e-12)


class TestWelch:
    def test_symmetric_case(self):
        # equal variances and sizes, nu = 9 both: 2*(nu+2) / (1 + 2.24/18)
        value = welch_df(WelchInput(3.0, 3.0, 10, 10, 9, 9)).value
        assert value == pytest.approx(22.0 / (1.0 + 2.24 / 18.0), rel=1e-12)
        assert value == pytest.approx(19.565217391304348, rel=1e-12)

    def test_symmetric_case_without_shrink(self):
        value = welch_df(WelchInput(3.0, 3.0, 10, 10, 9, 9), AdjustmentConfig(0.0, 0)).value
        assert value == pytest.approx(22.0, rel=1e-12)

    def test_sample_size_rescaling_invariance(self):
        base = welch_df(WelchInput(2.5, 4.0, 12, 30, 11, 29)).value
        scaled = welch_df(WelchInput(2.5, 4.0, 120, 300, 11, 29)).value
        assert scaled == pytest.approx(base, rel=1e-12)

    def test_component_construction(self):
        first, second = welch_components(WelchInput(2.5, 4.0, 12, 30, 11, 29))
        assert first.weight == pytest.approx(1.0 / 12.0)
        assert second.weight == pytest.approx(1.0 / 30.0)
        assert (first.df, second.df) == (11, 29)

    def test_df_cannot_exceed_sample_size_minus_one(self):
        with pytest.raises(SynthesisError, match="df1"):
            WelchInput(1.0, 1.0, 10, 10, 10, 9)

    def test_from_samples_uses_n_minus_one(self):
        inputs = WelchInput.from_samples(2.5, 12, 4.0, 30)
        assert (inputs.df1, inputs.df2) == (11, 29)

    def test_both_variances_zero(self):
        with pytest.raises(DegenerateSynthesisError):
            welch_df(WelchInput(0.0, 0.0, 10, 10, 9, 9))


class TestJackknife:
    def test_equal_deviations(self):
        # K equal deviations: ratio K, value 3*K / (1 + C/K)
        value = jackknife_df(JackknifeDeviations((0.5,) * 10)).value
        assert value == pytest.approx(30.0 / 1.224, rel=1e-12)

    def test_single_dominant_deviation(self):
        # One deviation carries all the variance: ratio -> 1, value -> 3/(1 + C/2)
        value = jackknife_df(JackknifeDeviations((2.0, 2.0e-9))).value
        assert value == pytest.approx(3.0 / (1.0 + 2.24 / 2.0), rel=1e-8)

    def test_definitional_equivalence(self):
        devs = JackknifeDeviations((0.4, -1.1, 0.9, 0.2), 2.69)
        direct = jackknife_df(devs).value
        via_components = adjusted_df(jackknife_components(devs),
                                     AdjustmentConfig(2.69, 0)).value
        assert direct == via_components

    def test_scaling_invariance_including_sign(self):
        base = jackknife_df(JackknifeDeviations((0.4, -1.1, 0.9, 0.2))).value
        scaled = jackknife_df(JackknifeDeviations((-1.2, 3.3, -2.7, -0.6))).value
        assert scaled == pytest.approx(base, rel=1e-12)

    def test_all_zero_deviations(self):
        with pytest.raises(DegenerateSynthesisError):
            jackknife_df(JackknifeDeviations((0.0, 0.0, 0.0)))

    def test_needs_two_deviations(self):
        with pytest.raises(SynthesisError):
            JackknifeDeviations((1.0,))

    def test_components_have_unit_weight_single_df(self):
        for comp in jackknife_components(JackknifeDeviations((0.3, -0.7))):
            assert comp.weight == 1.0 and comp.df == 1


class TestBrr:
    def test_rejected_with_guidance(self):
        with pytest.raises(SynthesisError, match="jackknife"):
            brr_df([0.1, 0.2])


class TestAdaptersDelegateExactly:
    """Adapters must equal the core estimator on their documented components."""

    def test_rubin_random_inputs(self):
        rng = np.random.default_rng(71)
        for _ in range(300):
            inputs = RubinVariance(float(10.0 ** rng.uniform(-3, 3)),
                                   int(rng.integers(1, 60)),
                                   float(10.0 ** rng.uniform(-3, 3)),
                                   int(rng.integers(2, 40)))
            config = AdjustmentConfig(float(rng.uniform(0, 4)), int(rng.integers(0, 2)))
            assert rubin_df(inputs, config).value == \
                adjusted_df(rubin_components(inputs), config).value

    def test_welch_random_inputs(self):
        rng = np.random.default_rng(72)
        for _ in range(300):
            n1, n2 = int(rng.integers(2, 500)), int(rng.integers(2, 500))
            inputs = WelchInput(float(10.0 ** rng.uniform(-3, 3)),
                                float(10.0 ** rng.uniform(-3, 3)),
                                n1, n2,
                                int(rng.integers(1, n1)), int(rng.integers(1, n2)))
            config = AdjustmentConfig(float(rng.uniform(0, 4)), int(rng.integers(0, 2)))
            assert welch_df(inputs, config).value == \
                adjusted_df(welch_components(inputs), config).value

    def test_jackknife_random_inputs(self):
        rng = np.random.default_rng(73)
        for _ in range(300):
            k = int(rng.integers(2, 40))
            inputs = JackknifeDeviations(tuple(rng.normal(0, 1, size=k)),
                                         float(rng.uniform(0, 4)))
            assert jackknife_df(inputs).value == \
                adjusted_df(jackknife_components(inputs),
                            AdjustmentConfig(inputs.constant, 0)).value
