"""Tests for the effective-d.f. estimator family.

Expected values in this module are hand evaluations of the defining ratios,
written out as the arithmetic expressions they came from.
"""

import math

import numpy as np
import pytest

from effdof import (
    AdjustmentConfig,
    DegenerateSynthesisError,
    EstimatorVariant,
    NoComponentsError,
    SynthesisError,
    VarianceComponent,
    adjusted_df,
    recommended_df,
    satterthwaite_df,
    vondavier2025_df,
    weighted_mean_df,
)
from conftest import make_components


def comps(*triples):
    return [VarianceComponent(w, s2, df) for w, s2, df in triples]


class TestVarianceComponent:
    def test_accepts_valid_triple(self):
        c = VarianceComponent(1.2, 0.0, 7)
        assert (c.weight, c.s2, c.df) == (1.2, 0.0, 7)

    @pytest.mark.parametrize("weight", [0.0, -1.0, float("nan"), float("inf")])
    def test_rejects_bad_weight(self, weight):
        with pytest.raises(SynthesisError):
            VarianceComponent(weight, 1.0, 1)

    def test_rejects_negative_s2(self):
        with pytest.raises(SynthesisError):
            VarianceComponent(1.0, -0.5, 1)

    @pytest.mark.parametrize("df", [0, -3, 1.5, True, "4"])
    def test_rejects_bad_df(self, df):
        with pytest.raises(SynthesisError):
            VarianceComponent(1.0, 1.0, df)

    def test_numpy_integer_df_accepted(self):
        c = VarianceComponent(1.0, 1.0, np.int64(4))
        assert c.df == 4 and isinstance(c.df, int)


class TestAdjustmentConfig:
    def test_zero_constant_is_legal(self):
        assert AdjustmentConfig(0.0, 0).c == 0.0

    def test_rejects_negative_constant(self):
        with pytest.raises(SynthesisError):
            AdjustmentConfig(-0.1, 0)

    def test_rejects_bad_offset(self):
        with pytest.raises(SynthesisError):
            AdjustmentConfig(2.24, 2)


class TestWeightedMeanDf:
    def test_equal_components(self):
        assert weighted_mean_df(comps((1, 1, 1), (1, 1, 1))) == 1.0

    def test_weighted_average(self):
        # (1*10 + 1.2*4) / (1 + 1.2) = 14.8 / 2.2
        value = weighted_mean_df(comps((1, 1, 10), (1.2, 1, 4)))
        assert value == pytest.approx(14.8 / 2.2, rel=1e-15)

    def test_constant_df_is_weight_invariant(self):
        assert weighted_mean_df(comps((3, 1, 5), (1, 1, 5))) == 5.0

    def test_empty_list(self):
        with pytest.raises(NoComponentsError, match="no components"):
            weighted_mean_df([])


class TestSatterthwaite:
    def test_single_component_returns_own_df(self):
        assert satterthwaite_df(comps((1, 5, 3))).value == 3.0

    def test_equal_pair_attains_two(self):
        # The K=2 ratio is maximal (= 2) exactly when the two s2 are equal.
        assert satterthwaite_df(comps((1, 1, 1), (1, 1, 1))).value == 2.0

    def test_hand_evaluated_ratio(self):
        # numerator (1*2 + 1.25*3)^2 = 33.0625
        # denominator 1*4/4 + 1.5625*9/6 = 3.34375
        est = satterthwaite_df(comps((1, 2, 4), (1.25, 3, 6)))
        assert est.value == pytest.approx(33.0625 / 3.34375, rel=1e-12)

    def test_identical_components_give_k_nu(self):
        assert satterthwaite_df(comps(*[(1, 2, 7)] * 4)).value == 28.0

    def test_all_zero_variances(self):
        with pytest.raises(DegenerateSynthesisError, match="degenerate synthesis"):
            satterthwaite_df(comps((1, 0, 3), (2, 0, 5)))

    def test_method_label(self):
        est = satterthwaite_df(comps((1, 1, 1)))
        assert est.method == "satterthwaite" and est.config is None

    def test_zero_s2_components_contribute_nothing(self):
        with_zero = satterthwaite_df(comps((1, 2, 4), (5, 0, 9), (1.25, 3, 6)))
        without = satterthwaite_df(comps((1, 2, 4), (1.25, 3, 6)))
        assert with_zero.value == pytest.approx(without.value, rel=1e-15)


class TestAdjusted:
    def test_equal_pair_recommended_constant(self):
        # (1 + 2.24/2)^-1 * (4 / (2/3)) = 6 / 2.12
        est = adjusted_df(comps((1, 1, 1), (1, 1, 1)), AdjustmentConfig(2.24, 0))
        assert est.value == pytest.approx(6.0 / 2.12, rel=1e-12)

    def test_equal_pair_offset_variant_hits_two(self):
        # (1 + 2)^-1 * 6 = 2, the design point of the offset adjustment
        est = adjusted_df(comps((1, 1, 1), (1, 1, 1)), AdjustmentConfig(2.0, 1))
        assert est.value == 2.0

    @pytest.mark.parametrize("nu", [1, 2, 5, 12, 49])
    def test_single_component_denominator_only(self, nu):
        # c = 0 leaves only the nu + 2 denominator: a single component gives nu + 2
        est = adjusted_df(comps((1, 3.7, nu)), AdjustmentConfig(0.0, 0))
        assert est.value == pytest.approx(nu + 2.0, rel=1e-15)

    def test_weighted_pair_hand_evaluation(self):
        # numerator (1*4 + 1.2*1)^2 = 27.04, denominator 16/12 + 1.44/6,
        # nu_bar_w = 14.8/2.2, shrink 1 + 2.24/(2*nu_bar_w)
        expected = (27.04 / (16.0 / 12.0 + 1.44 / 6.0)) / (1.0 + 2.24 / (2.0 * (14.8 / 2.2)))
        est = adjusted_df(comps((1, 4, 10), (1.2, 1, 4)), AdjustmentConfig(2.24, 0))
        assert est.value == pytest.approx(expected, rel=1e-12)
        assert est.value == pytest.approx(14.733510312436186, rel=1e-12)

    def test_offset_needs_two_components(self):
        with pytest.raises(SynthesisError, match="offset exceeds component count"):
            adjusted_df(comps((1, 1, 3)), AdjustmentConfig(2.0, 1))

    def test_config_type_checked(self):
        with pytest.raises(TypeError):
            adjusted_df(comps((1, 1, 1), (1, 1, 1)), (2.24, 0))

    def test_method_carries_config(self):
        cfg = AdjustmentConfig(2.69, 0)
        est = adjusted_df(comps((1, 1, 1), (1, 1, 1)), cfg)
        assert est.method == "adjusted" and est.config == cfg


class TestConvenienceWrappers:
    def test_vd2025_equal_pair(self):
        assert vondavier2025_df(comps((1, 1, 1), (1, 1, 1))).value == 2.0

    def test_vd2025_single_component_rejected(self):
        with pytest.raises(SynthesisError, match="offset exceeds component count"):
            vondavier2025_df(comps((1, 2, 3)))

    def test_vd2025_identical_triple(self):
        # (1 + 2/(2*4))^-1 * (36 / (3*4/6)) = 0.8 * 18 = 14.4
        assert vondavier2025_df(comps(*[(1, 2, 4)] * 3)).value == 14.4

    def test_vd2025_label(self):
        est = vondavier2025_df(comps((1, 1, 1), (1, 1, 1)))
        assert est.method == "vd2025"
        assert est.config == AdjustmentConfig(2.0, 1)

    def test_recommended_equal_pair(self):
        est = recommended_df(comps((1, 1, 1), (1, 1, 1)))
        assert est.value == pytest.approx(6.0 / 2.12, rel=1e-12)
        assert est.config == AdjustmentConfig(2.24, 0)

    def test_recommended_many_identical_components(self):
        # 160 identical single components: ratio (160^2)/(160/82) = 82*160,
        # shrink 1 + 2.24/12800. Determinism on identical inputs exceeds
        # K*nu = 12800; the Monte Carlo mean over independent draws does not.
        est = recommended_df(comps(*[(1, 1, 80)] * 160))
        assert est.value == pytest.approx(13120.0 / (1.0 + 2.24 / 12800.0), rel=1e-12)
        assert est.value > 160 * 80


class TestEstimatorVariant:
    def test_tag_is_parameter_canonical(self):
        assert EstimatorVariant.von_davier_2025().tag == EstimatorVariant.adjusted(2.0, 1).tag
        assert EstimatorVariant.satterthwaite().tag == "satterthwaite"

    def test_evaluate_dispatches(self):
        cs = comps((1, 1, 1), (1, 1, 1))
        assert EstimatorVariant.satterthwaite().evaluate(cs).value == 2.0
        assert EstimatorVariant.von_davier_2025().evaluate(cs).value == 2.0
        assert EstimatorVariant.recommended().evaluate(cs).value == pytest.approx(6.0 / 2.12)

    def test_invalid_combinations_rejected(self):
        with pytest.raises(ValueError):
            EstimatorVariant("satterthwaite", AdjustmentConfig(1.0, 0))
        with pytest.raises(ValueError):
            EstimatorVariant("adjusted", None)
        with pytest.raises(ValueError):
            EstimatorVariant("mystery")


def _all_variant_values(components):
    values = [satterthwaite_df(components).value,
              adjusted_df(components, AdjustmentConfig(2.24, 0)).value,
              adjusted_df(components, AdjustmentConfig(0.0, 0)).value]
    if len(components) >= 2:
        values.append(vondavier2025_df(components).value)
    return values


class TestInvariants:
    def test_weight_rescaling_invariance(self):
        rng = np.random.default_rng(101)
        for _ in range(300):
            components = make_components(rng, allow_zero_s2=True)
            factor = float(10.0 ** rng.uniform(-6.0, 6.0))
            scaled = [VarianceComponent(c.weight * factor, c.s2, c.df) for c in components]
            for base, other in zip(_all_variant_values(components), _all_variant_values(scaled)):
                assert other == pytest.approx(base, rel=1e-12)

    def test_variance_rescaling_invariance(self):
        rng = np.random.default_rng(202)
        for _ in range(300):
            components = make_components(rng, allow_zero_s2=True)
            factor = float(10.0 ** rng.uniform(-6.0, 6.0))
            scaled = [VarianceComponent(c.weight, c.s2 / factor, c.df) for c in components]
            for base, other in zip(_all_variant_values(components), _all_variant_values(scaled)):
                assert other == pytest.approx(base, rel=1e-12)

    def test_offset_equivalence_exact(self):
        # Folding the offset into the constant p=1 -> c * K / (K - 1) is an
        # algebraic identity and must hold bitwise here.
        rng = np.random.default_rng(303)
        for _ in range(300):
            components = make_components(rng, k=int(rng.integers(2, 9)))
            c = float(rng.uniform(0.0, 4.0))
            k = len(components)
            with_offset = adjusted_df(components, AdjustmentConfig(c, 1)).value
            folded = adjusted_df(components, AdjustmentConfig(c * k / (k - 1.0), 0)).value
            assert with_offset == folded

    def test_satterthwaite_upper_bound(self):
        rng = np.random.default_rng(404)
        for _ in range(300):
            components = make_components(rng, allow_zero_s2=True)
            total_df = sum(c.df for c in components)
            value = satterthwaite_df(components).value
            assert value <= total_df * (1.0 + 1e-12)

    def test_k2_single_df_ratio_bounds(self):
        rng = np.random.default_rng(505)
        for _ in range(500):
            s1 = float(10.0 ** rng.uniform(-6.0, 6.0))
            s2 = 0.0 if rng.random() < 0.05 else float(10.0 ** rng.uniform(-6.0, 6.0))
            value = satterthwaite_df(comps((1, s1, 1), (1, s2, 1))).value
            assert 1.0 - 1e-12 <= value <= 2.0 + 1e-12

    def test_limit_recovery_for_large_df(self):
        # With equal d.f. the adjusted/classic ratio is (nu+2)/(nu*shrink);
        # it must approach 1 from above, monotonically in nu.
        cfg = AdjustmentConfig(2.24, 0)
        gaps = []
        for nu in (10, 100, 1000, 10000):
            components = comps((1, 2.5, nu), (1.4, 1.0, nu), (0.7, 3.3, nu))
            ratio = (adjusted_df(components, cfg).value
                     / satterthwaite_df(components).value)
            assert ratio > 1.0
            gaps.append(ratio - 1.0)
        assert gaps == sorted(gaps, reverse=True)
        assert gaps[-1] < 3e-4

    def test_identical_components_identity(self):
        rng = np.random.default_rng(606)
        for _ in range(200):
            k = int(rng.integers(1, 30))
            nu = int(rng.integers(1, 80))
            s2 = float(10.0 ** rng.uniform(-3.0, 3.0))
            w = float(10.0 ** rng.uniform(-2.0, 2.0))
            value = satterthwaite_df(comps(*[(w, s2, nu)] * k)).value
            assert value == pytest.approx(k * nu, rel=1e-12)

    def test_extreme_magnitudes_do_not_overflow(self):
        # The internal normalization keeps fourth powers in range even when
        # raw s2**2 would overflow a double.
        big = comps((1, 1e200, 3), (2, 5e199, 7))
        assert math.isfinite(satterthwaite_df(big).value)
        small = comps((1, 1e-200, 3), (2, 5e-201, 7))
        assert math.isfinite(recommended_df(small).value)
        assert satterthwaite_df(big).value == pytest.approx(
            satterthwaite_df(comps((1, 1.0, 3), (2, 0.5, 7))).value, rel=1e-12)
