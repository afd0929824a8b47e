"""Effective degrees of freedom for weighted syntheses of variance components.

A synthesis is a weighted sum ``sum_k w_k * S_k^2`` of independent variance
estimates, each carrying its own degrees of freedom ``nu_k``. The classic
moment-matching estimate of the effective d.f. of that sum,

    (sum_k w_k S_k^2)^2 / sum_k (w_k S_k^2)^2 / nu_k,

is biased downward when the component d.f. are small. The adjusted variants
implemented here replace ``nu_k`` with ``nu_k + 2`` in the denominator and
divide the ratio by a shrink term ``1 + c / ((K - p) * nu_bar_w)``, where
``nu_bar_w`` is the weighted mean of the component d.f. Both corrections
vanish as the component d.f. or the number of components grow, so every
variant agrees with the classic estimator in the large-sample limit.

Every estimator is invariant under rescaling all weights by a common
positive constant, and under rescaling all component variances by a common
positive constant. The implementation exploits the latter: variances are
normalized by the largest one before the fourth powers are formed, which
makes overflow practically impossible.

All functions are pure and safe to call from any number of threads.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

__all__ = [
    "ADJUSTED",
    "RECOMMENDED_C",
    "SATTERTHWAITE",
    "VON_DAVIER_2025",
    "AdjustmentConfig",
    "DegenerateSynthesisError",
    "DfEstimate",
    "EstimatorVariant",
    "NoComponentsError",
    "SynthesisError",
    "VarianceComponent",
    "adjusted_df",
    "recommended_df",
    "satterthwaite_df",
    "vondavier2025_df",
    "weighted_mean_df",
]

#: Default correction constant for the p = 0 adjusted estimator.
RECOMMENDED_C = 2.24

# Method labels carried by DfEstimate and the CLI.
SATTERTHWAITE = "satterthwaite"
VON_DAVIER_2025 = "vd2025"
ADJUSTED = "adjusted"


class SynthesisError(ValueError):
    """Invalid or degenerate input to an effective-d.f. computation."""


class NoComponentsError(SynthesisError):
    """The component list is empty."""


class DegenerateSynthesisError(SynthesisError):
    """Every component variance is zero, so the defining ratio is 0/0."""


def _finite(value, name: str) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise SynthesisError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(x):
        raise SynthesisError(f"{name} must be finite, got {value!r}")
    return x


@dataclass(frozen=True)
class VarianceComponent:
    """One synthesis component: positive weight, variance estimate, integer d.f.

    Zero weights are rejected; a zero-weight component contributes nothing to
    the synthesis and should be dropped by the caller. Negative weights could
    produce a negative synthesized variance and are rejected outright.
    Component d.f. must be positive integers, matching the chi-square model
    under which the adjustment was derived. ``s2 = 0`` is accepted (the
    component then contributes nothing to either sum).
    """

    weight: float
    s2: float
    df: int

    def __post_init__(self) -> None:
        w = _finite(self.weight, "weight")
        if w <= 0.0:
            raise SynthesisError(f"weight must be > 0, got {self.weight!r}")
        s2 = _finite(self.s2, "s2")
        if s2 < 0.0:
            raise SynthesisError(f"s2 must be >= 0, got {self.s2!r}")
        if isinstance(self.df, bool) or not isinstance(self.df, numbers.Integral):
            raise SynthesisError(f"df must be a positive integer, got {self.df!r}")
        if self.df < 1:
            raise SynthesisError(f"df must be >= 1, got {self.df!r}")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "s2", s2)
        object.__setattr__(self, "df", int(self.df))


@dataclass(frozen=True)
class AdjustmentConfig:
    """Parameters of the shrink term ``1 + c / ((K - p) * nu_bar_w)``.

    ``c = 0`` is legal and selects the denominator-only variant (the
    ``nu_k + 2`` denominator with no numerator shrinkage). The offset ``p``
    must be 0 or 1; with ``p = 1`` the synthesis needs at least two
    components.
    """

    c: float
    p: int = 0

    def __post_init__(self) -> None:
        c = _finite(self.c, "c")
        if c < 0.0:
            raise SynthesisError(f"c must be >= 0, got {self.c!r}")
        if self.p not in (0, 1):
            raise SynthesisError(f"p must be 0 or 1, got {self.p!r}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "p", int(self.p))


@dataclass(frozen=True)
class DfEstimate:
    """An estimated effective d.f. together with the method that produced it."""

    value: float
    method: str
    config: AdjustmentConfig | None = None


def _as_components(components) -> tuple[VarianceComponent, ...]:
    comps = tuple(components)
    if not comps:
        raise NoComponentsError("no components")
    for item in comps:
        if not isinstance(item, VarianceComponent):
            raise TypeError(f"expected VarianceComponent, got {type(item).__name__}")
    return comps


def _ratio_terms(comps: tuple[VarianceComponent, ...], plus_two: bool) -> tuple[float, float]:
    # Normalizing by the largest s2 leaves the ratio invariant and keeps the
    # fourth powers well inside double range.
    scale = max(c.s2 for c in comps)
    if scale == 0.0:
        raise DegenerateSynthesisError("degenerate synthesis: all component variances are zero")
    offset = 2 if plus_two else 0
    num = sum(c.weight * (c.s2 / scale) for c in comps) ** 2
    den = sum((c.weight * (c.s2 / scale)) ** 2 / (c.df + offset) for c in comps)
    return num, den


def weighted_mean_df(components) -> float:
    """Weighted average of the component d.f.: ``sum(w * df) / sum(w)``.

    Equals the plain arithmetic mean of the d.f. when all weights are equal.
    """
    comps = _as_components(components)
    wsum = sum(c.weight for c in comps)
    return sum(c.weight * c.df for c in comps) / wsum


def satterthwaite_df(components) -> DfEstimate:
    """Classic moment-matching effective d.f. of a weighted synthesis.

    Returns ``(sum_k w_k S_k^2)^2 / sum_k (w_k S_k^2)^2 / nu_k``. A single
    component recovers its own d.f.; K identical components give ``K * nu``.
    The value never exceeds ``sum_k nu_k`` (Cauchy-Schwarz).
    """
    comps = _as_components(components)
    num, den = _ratio_terms(comps, plus_two=False)
    return DfEstimate(num / den, SATTERTHWAITE)


def adjusted_df(components, config: AdjustmentConfig) -> DfEstimate:
    """Bias-corrected effective d.f. with the ``nu_k + 2`` denominator.

    The ratio ``(sum_k w_k S_k^2)^2 / sum_k (w_k S_k^2)^2 / (nu_k + 2)`` is
    divided by ``1 + c_eff / (K * nu_bar_w)`` where ``c_eff = c`` for p = 0
    and ``c_eff = c * K / (K - 1)`` for p = 1. The two offset
    parameterizations are algebraically identical under that substitution, so
    folding the offset into the constant keeps the documented equivalence
    exact in floating point as well.
    """
    comps = _as_components(components)
    if not isinstance(config, AdjustmentConfig):
        raise TypeError(f"expected AdjustmentConfig, got {type(config).__name__}")
    k = len(comps)
    if config.p == 1 and k < 2:
        raise SynthesisError("offset exceeds component count")
    num, den = _ratio_terms(comps, plus_two=True)
    nu_bar = weighted_mean_df(comps)
    c_eff = config.c if config.p == 0 else config.c * k / (k - 1.0)
    shrink = 1.0 + c_eff / (k * nu_bar)
    return DfEstimate((num / den) / shrink, ADJUSTED, config)


def vondavier2025_df(components) -> DfEstimate:
    """Adjusted estimate with c = 2 and offset p = 1 (von Davier, 2025).

    Requires at least two components.
    """
    est = adjusted_df(components, AdjustmentConfig(2.0, 1))
    return DfEstimate(est.value, VON_DAVIER_2025, est.config)


def recommended_df(components) -> DfEstimate:
    """Adjusted estimate at the recommended constant c = 2.24 with p = 0."""
    return adjusted_df(components, AdjustmentConfig(RECOMMENDED_C, 0))


@dataclass(frozen=True)
class EstimatorVariant:
    """Selector for one estimator of the family.

    Used wherever a method has to travel as data: simulation tables, the
    calibration study, and the CLI. Variants with identical parameters (for
    example vd2025 and adjusted(c=2, p=1)) share the same stream ``tag`` and
    therefore produce identical simulation results.
    """

    method: str
    config: AdjustmentConfig | None = None

    def __post_init__(self) -> None:
        if self.method == SATTERTHWAITE:
            if self.config is not None:
                raise ValueError("satterthwaite takes no adjustment config")
        elif self.method in (VON_DAVIER_2025, ADJUSTED):
            if self.config is None:
                raise ValueError(f"{self.method} requires an adjustment config")
        else:
            raise ValueError(f"unknown method {self.method!r}")

    @classmethod
    def satterthwaite(cls) -> "EstimatorVariant":
        return cls(SATTERTHWAITE)

    @classmethod
    def adjusted(cls, c: float, p: int = 0) -> "EstimatorVariant":
        return cls(ADJUSTED, AdjustmentConfig(c, p))

    @classmethod
    def von_davier_2025(cls) -> "EstimatorVariant":
        return cls(VON_DAVIER_2025, AdjustmentConfig(2.0, 1))

    @classmethod
    def recommended(cls) -> "EstimatorVariant":
        return cls(ADJUSTED, AdjustmentConfig(RECOMMENDED_C, 0))

    @property
    def tag(self) -> str:
        """Stable identifier; parameter-identical variants share a tag."""
        if self.method == SATTERTHWAITE:
            return SATTERTHWAITE
        return f"adjusted(c={self.config.c!r},p={self.config.p})"

    @property
    def label(self) -> str:
        """Short human-readable name for table headers."""
        if self.method == SATTERTHWAITE:
            return SATTERTHWAITE
        if self.method == VON_DAVIER_2025:
            return VON_DAVIER_2025
        return f"adjusted(c={self.config.c:g}, p={self.config.p})"

    def evaluate(self, components) -> DfEstimate:
        """Apply this variant to a list of components."""
        if self.method == SATTERTHWAITE:
            return satterthwaite_df(components)
        if self.method == VON_DAVIER_2025:
            return vondavier2025_df(components)
        return adjusted_df(components, self.config)
