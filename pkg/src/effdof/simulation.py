"""Monte Carlo study of the effective-d.f. estimators on chi-square components.

Each study cell fixes a component count K and a per-component d.f. nu, draws
K independent chi-square(nu) variates per replicate (unit weights unless
stated otherwise), evaluates the chosen estimator, and records the sample
mean together with its standard error. The reference value for a cell is
``K * nu``, the effective d.f. of the synthesis when the population variances
are known.

Chi-square variates are formed exactly as sums of squared independent
standard normal deviates, not via a gamma sampler, so that the single-d.f.
tail behavior is the one the estimators are exposed to in the small-d.f.
regime this study targets.

Every cell derives its own random substream deterministically from
``(seed, K, nu, method tag)``. Tables are therefore bit-reproducible for a
fixed seed no matter the evaluation order or the number of worker threads,
and streams are never shared across cells.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .estimators import SATTERTHWAITE, EstimatorVariant, SynthesisError

__all__ = [
    "DEFAULT_REPLICATES",
    "DEFAULT_SEED",
    "CellStat",
    "MeanDfTable",
    "SimulationGrid",
    "generate_table",
    "pseudo_x2",
    "ratio_mean_k2_nu1",
    "ratio_samples_k2_nu1",
    "sample_chi2",
    "sample_chi2_matrix",
    "simulate_mean_df",
    "substream",
]

DEFAULT_SEED = 1
DEFAULT_REPLICATES = 10_000

_MASK64 = (1 << 64) - 1
# Upper bound on normal deviates drawn per chunk; keeps peak memory ~32 MB.
_CHUNK_SCALARS = 4_000_000


def substream(seed: int, k: int, nu: int, tag: str) -> np.random.Generator:
    """Deterministic per-cell generator, independent of evaluation order."""
    tag_id = int.from_bytes(hashlib.blake2b(tag.encode("utf-8"), digest_size=8).digest(), "big")
    entropy = [int(seed) & _MASK64, int(k), int(nu), tag_id]
    return np.random.default_rng(np.random.SeedSequence(entropy))


@dataclass(frozen=True)
class SimulationGrid:
    """Cross product of component counts and component d.f. for one study."""

    k_values: tuple[int, ...]
    nu_values: tuple[int, ...]
    replicates: int = DEFAULT_REPLICATES
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        ks = tuple(sorted({int(k) for k in self.k_values}))
        nus = tuple(sorted({int(nu) for nu in self.nu_values}))
        if not ks or not nus:
            raise ValueError("grid value sets must be nonempty")
        if ks[0] < 2:
            raise ValueError(f"component counts must be >= 2, got {ks[0]}")
        if nus[0] < 1:
            raise ValueError(f"component d.f. must be >= 1, got {nus[0]}")
        if int(self.replicates) < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        object.__setattr__(self, "k_values", ks)
        object.__setattr__(self, "nu_values", nus)
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "seed", int(self.seed))

    def cells(self) -> list[tuple[int, int]]:
        """All (K, nu) pairs in row-major order."""
        return [(k, nu) for k in self.k_values for nu in self.nu_values]


@dataclass(frozen=True)
class CellStat:
    """Monte Carlo summary for one (K, nu) cell."""

    mean: float
    std_error: float
    expected: float


@dataclass(frozen=True)
class MeanDfTable:
    """Mean estimated d.f. per grid cell for one estimator variant."""

    grid: SimulationGrid
    method: EstimatorVariant
    cells: dict[tuple[int, int], CellStat] = field(repr=False)


def sample_chi2(df: int, rng: np.random.Generator) -> float:
    """One chi-square(df) draw, formed as the sum of df squared N(0,1) deviates."""
    if int(df) < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    z = rng.standard_normal(int(df))
    # einsum keeps the summation order identical to sample_chi2_matrix, so a
    # loop over this function replays a matrix cell draw bit for bit.
    return float(np.einsum("i,i->", z, z))


def sample_chi2_matrix(rng: np.random.Generator, n: int, k: int, nu: int) -> np.ndarray:
    """(n, k) matrix of independent chi-square(nu) draws from one stream."""
    z = rng.standard_normal((n, k, nu))
    return np.einsum("rkn,rkn->rk", z, z)


def _evaluate_rows(s2: np.ndarray, nu: int, method: EstimatorVariant,
                   weights: np.ndarray | None) -> np.ndarray:
    """Vectorized estimator values, one per row of component draws."""
    if weights is not None:
        s2 = s2 * weights
    num = s2.sum(axis=1) ** 2
    sq = np.square(s2)
    if method.method == SATTERTHWAITE:
        return num / (sq.sum(axis=1) / nu)
    k = s2.shape[1]
    cfg = method.config
    # All components share df = nu, so the weighted mean d.f. is nu exactly.
    c_eff = cfg.c if cfg.p == 0 else cfg.c * k / (k - 1.0)
    shrink = 1.0 + c_eff / (k * float(nu))
    return (num / (sq.sum(axis=1) / (nu + 2.0))) / shrink


def simulate_mean_df(k: int, nu: int, method: EstimatorVariant, replicates: int,
                     rng: np.random.Generator, weights=None) -> CellStat:
    """Sample mean and standard error of one estimator at a (K, nu) cell.

    Draws K independent chi-square(nu) components per replicate and evaluates
    the estimator on them. ``weights`` defaults to unit weights, which is the
    configuration of the reference tables; a weight vector of length K is
    accepted for exploratory runs, in which case ``expected`` is the
    population-value effective d.f. ``nu * sum(w)^2 / sum(w^2)``.
    """
    k, nu, replicates = int(k), int(nu), int(replicates)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    if replicates < 2:
        raise ValueError(f"replicates must be >= 2, got {replicates}")
    if method.config is not None and method.config.p == 1 and k < 2:
        raise SynthesisError("offset exceeds component count")
    w = None
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.shape != (k,):
            raise ValueError(f"weights must have shape ({k},), got {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("weights must be finite and > 0")
    if w is None:
        expected = float(k * nu)
    else:
        expected = float(nu * w.sum() ** 2 / np.square(w).sum())

    values = np.empty(replicates)
    chunk = max(1, _CHUNK_SCALARS // (k * nu))
    done = 0
    while done < replicates:
        m = min(chunk, replicates - done)
        s2 = sample_chi2_matrix(rng, m, k, nu)
        values[done:done + m] = _evaluate_rows(s2, nu, method, w)
        done += m
    mean = float(values.mean())
    std_error = float(values.std(ddof=1) / math.sqrt(replicates))
    return CellStat(mean, std_error, expected)


def ratio_samples_k2_nu1(replicates: int, rng: np.random.Generator) -> np.ndarray:
    """Raw draws of the two-component single-d.f. ratio (Z1^2+Z2^2)^2 / (Z1^4+Z2^4).

    The ratio lies in [1, 2] for every pair of reals; the clip below only
    removes floating-point excursions at the equal-components boundary.
    """
    replicates = int(replicates)
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    out = np.empty(replicates)
    chunk = max(1, _CHUNK_SCALARS // 2)
    done = 0
    while done < replicates:
        m = min(chunk, replicates - done)
        s = np.square(rng.standard_normal((m, 2)))
        num = (s[:, 0] + s[:, 1]) ** 2
        den = s[:, 0] ** 2 + s[:, 1] ** 2
        np.clip(num / den, 1.0, 2.0, out=out[done:done + m])
        done += m
    return out


def ratio_mean_k2_nu1(replicates: int, rng: np.random.Generator) -> float:
    """Monte Carlo mean of the two-component single-d.f. ratio.

    Converges to sqrt(2): in polar coordinates the radius cancels and the
    angular average of the ratio is exactly 2^(1/2).
    """
    if int(replicates) < 2:
        raise ValueError(f"replicates must be >= 2, got {replicates}")
    return float(ratio_samples_k2_nu1(replicates, rng).mean())


def generate_table(grid: SimulationGrid, method: EstimatorVariant,
                   max_workers: int = 1) -> MeanDfTable:
    """Mean estimated d.f. per grid cell, bit-reproducible for a fixed seed.

    Cells are independent work units; with ``max_workers > 1`` they are
    evaluated in a thread pool. Each cell draws from its own substream, so
    the result does not depend on scheduling or worker count.
    """
    pairs = grid.cells()

    def one_cell(pair: tuple[int, int]) -> CellStat:
        k, nu = pair
        rng = substream(grid.seed, k, nu, method.tag)
        return simulate_mean_df(k, nu, method, grid.replicates, rng)

    if max_workers and int(max_workers) > 1:
        with ThreadPoolExecutor(max_workers=int(max_workers)) as pool:
            stats = list(pool.map(one_cell, pairs))
    else:
        stats = [one_cell(pair) for pair in pairs]
    return MeanDfTable(grid, method, dict(zip(pairs, stats)))


def pseudo_x2(table: MeanDfTable) -> float:
    """Discrepancy of a table from its reference values.

    Sums ``(mean - K*nu)^2 / (K*nu)`` over every grid cell; zero exactly when
    every cell mean equals its reference value.
    """
    total = 0.0
    for pair in table.grid.cells():
        try:
            cell = table.cells[pair]
        except KeyError:
            raise ValueError(f"table is missing cell {pair}") from None
        total += (cell.mean - cell.expected) ** 2 / cell.expected
    return total
