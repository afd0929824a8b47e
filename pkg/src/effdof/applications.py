"""Adapters that build variance components for common composite-variance settings.

Each adapter documents how its inputs map onto (weight, s2, df) triples and
then delegates to the adjusted estimator; the adapters contain no estimation
math of their own. The component constructions are exposed as functions so
callers can inspect or reuse them.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

from .estimators import (
    RECOMMENDED_C,
    AdjustmentConfig,
    DfEstimate,
    SynthesisError,
    VarianceComponent,
    adjusted_df,
)

__all__ = [
    "JackknifeDeviations",
    "RubinVariance",
    "WelchInput",
    "brr_df",
    "jackknife_components",
    "jackknife_df",
    "rubin_components",
    "rubin_df",
    "welch_components",
    "welch_df",
]

_DEFAULT_CONFIG = AdjustmentConfig(RECOMMENDED_C, 0)


def _require_int(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise SynthesisError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise SynthesisError(f"{name} must be >= {minimum}, got {value!r}")
    return int(value)


def _require_nonneg(value, name: str) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise SynthesisError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(x) or x < 0.0:
        raise SynthesisError(f"{name} must be finite and >= 0, got {value!r}")
    return x


@dataclass(frozen=True)
class RubinVariance:
    """Inputs of the multiple-imputation total variance.

    Total variance = sampling variance + ((m + 1) / m) * imputation variance,
    so the synthesis weights are (1, (m + 1) / m). The imputation variance is
    a sample variance across m per-imputation estimates and therefore carries
    m - 1 degrees of freedom.
    """

    sampling_s2: float
    sampling_df: int
    imputation_s2: float
    m: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "sampling_s2", _require_nonneg(self.sampling_s2, "sampling_s2"))
        object.__setattr__(self, "sampling_df", _require_int(self.sampling_df, "sampling_df", 1))
        object.__setattr__(self, "imputation_s2",
                           _require_nonneg(self.imputation_s2, "imputation_s2"))
        object.__setattr__(self, "m", _require_int(self.m, "m", 2))


def rubin_components(inputs: RubinVariance) -> list[VarianceComponent]:
    """Component list for the multiple-imputation total variance."""
    return [
        VarianceComponent(1.0, inputs.sampling_s2, inputs.sampling_df),
        VarianceComponent((inputs.m + 1) / inputs.m, inputs.imputation_s2, inputs.m - 1),
    ]


def rubin_df(inputs: RubinVariance, config: AdjustmentConfig | None = None) -> DfEstimate:
    """Adjusted effective d.f. of the multiple-imputation total variance."""
    return adjusted_df(rubin_components(inputs), config or _DEFAULT_CONFIG)


@dataclass(frozen=True)
class WelchInput:
    """Two-sample inputs for the unequal-variance (Welch) pooled d.f.

    The pooled variance weights each sample variance by 1 / N_k. Component
    d.f. may be passed explicitly but can never exceed N_k - 1.
    """

    s2_1: float
    s2_2: float
    n1: int
    n2: int
    df1: int
    df2: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "s2_1", _require_nonneg(self.s2_1, "s2_1"))
        object.__setattr__(self, "s2_2", _require_nonneg(self.s2_2, "s2_2"))
        object.__setattr__(self, "n1", _require_int(self.n1, "n1", 2))
        object.__setattr__(self, "n2", _require_int(self.n2, "n2", 2))
        object.__setattr__(self, "df1", _require_int(self.df1, "df1", 1))
        object.__setattr__(self, "df2", _require_int(self.df2, "df2", 1))
        if self.df1 > self.n1 - 1:
            raise SynthesisError(f"df1 must be <= n1 - 1 = {self.n1 - 1}, got {self.df1}")
        if self.df2 > self.n2 - 1:
            raise SynthesisError(f"df2 must be <= n2 - 1 = {self.n2 - 1}, got {self.df2}")

    @classmethod
    def from_samples(cls, s2_1: float, n1: int, s2_2: float, n2: int) -> "WelchInput":
        """Convenience constructor with df_k = N_k - 1."""
        return cls(s2_1, s2_2, n1, n2, int(n1) - 1, int(n2) - 1)


def welch_components(inputs: WelchInput) -> list[VarianceComponent]:
    """Component list for the sample-size weighted pooled variance."""
    return [
        VarianceComponent(1.0 / inputs.n1, inputs.s2_1, inputs.df1),
        VarianceComponent(1.0 / inputs.n2, inputs.s2_2, inputs.df2),
    ]


def welch_df(inputs: WelchInput, config: AdjustmentConfig | None = None) -> DfEstimate:
    """Adjusted effective d.f. for the two-sample unequal-variance test."""
    return adjusted_df(welch_components(inputs), config or _DEFAULT_CONFIG)


@dataclass(frozen=True)
class JackknifeDeviations:
    """Precomputed jackknife deviations (overall estimate minus each replicate).

    Each squared deviation is an independent single-d.f. variance
    contribution, so the synthesis uses unit weights and df = 1 throughout.
    The constant defaults to the recommended 2.24.
    """

    deviations: tuple[float, ...]
    constant: float = RECOMMENDED_C

    def __post_init__(self) -> None:
        devs = tuple(float(d) for d in self.deviations)
        if len(devs) < 2:
            raise SynthesisError(f"need at least 2 deviations, got {len(devs)}")
        for d in devs:
            if not math.isfinite(d):
                raise SynthesisError(f"deviations must be finite, got {d!r}")
        if not math.isfinite(float(self.constant)) or float(self.constant) < 0.0:
            raise SynthesisError(f"constant must be finite and >= 0, got {self.constant!r}")
        object.__setattr__(self, "deviations", devs)
        object.__setattr__(self, "constant", float(self.constant))


def jackknife_components(inputs: JackknifeDeviations) -> list[VarianceComponent]:
    """Component list with one unit-weight, single-d.f. term per deviation."""
    return [VarianceComponent(1.0, d * d, 1) for d in inputs.deviations]


def jackknife_df(inputs: JackknifeDeviations) -> DfEstimate:
    """Adjusted effective d.f. of a jackknife variance estimate.

    With df = 1 everywhere the denominator terms are d^4 / 3, so this equals
    3 / (1 + C / K) times the classic ratio of the squared deviations.
    """
    return adjusted_df(jackknife_components(inputs), AdjustmentConfig(inputs.constant, 0))


def brr_df(*_args, **_kwargs) -> DfEstimate:
    """Balanced repeated replication is not supported.

    BRR half-sample estimates are linear combinations of the same cluster
    means, so their squared deviations are correlated and the independence
    assumption behind these estimators does not hold. Compute jackknife
    pseudo-values instead and use jackknife_df.
    """
    raise SynthesisError(
        "BRR components are correlated; compute jackknife deviations and use jackknife_df"
    )
