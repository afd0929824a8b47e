"""Selection of the correction constant by minimizing a pseudo chi-square.

For a dense grid of component counts K in {2..K_max} and component d.f. nu
in {1..nu_max}, the study measures how far the p = 0 adjusted estimator's
Monte Carlo mean sits from the reference value K*nu, aggregated as

    X2(C) = sum_cells (M(C; K, nu) - K*nu)^2 / (K*nu),

then smooths the sampled (C, X2) curve with a cross-validated polynomial and
reports the constant minimizing the fitted polynomial.

All constants are evaluated on the same component draws (common random
numbers): within a cell the shrink term is deterministic, so the mean for
any C is the cell's mean unshrunk ratio divided by ``1 + C / (K * nu)``.
This makes the sampled curve smooth in C, which is what the polynomial
smoother relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .estimators import EstimatorVariant
from .simulation import DEFAULT_REPLICATES, DEFAULT_SEED, SimulationGrid, simulate_mean_df, substream

__all__ = [
    "CalibrationCurve",
    "CalibrationError",
    "PolynomialFit",
    "convergence_study",
    "curve_rows",
    "default_c_grid",
    "evaluate_x2_curve",
    "find_c_opt",
    "fit_polynomial_cv",
    "run_calibration",
    "study_summary",
]

#: Open interval the constant search was designed for.
DEFAULT_C_INTERVAL = (2.0, 3.2)

# Fixed tag so curve evaluation reuses one substream per cell across all C.
_CRN_TAG = "crn"


class CalibrationError(ValueError):
    """Invalid input to the calibration pipeline."""


@dataclass(frozen=True)
class PolynomialFit:
    """Cross-validated least-squares polynomial, ascending powers of x."""

    degree: int
    coefficients: tuple[float, ...]
    r_squared: float


@dataclass(frozen=True)
class CalibrationCurve:
    """Sampled discrepancy curve with its polynomial smoother and minimizer."""

    c_points: tuple[float, ...]
    x2_points: tuple[float, ...]
    fitted_degree: int
    coefficients: tuple[float, ...]
    r_squared: float
    c_opt: float
    x2_min: float


def default_c_grid(start: float = 2.01, stop: float = 3.19, step: float = 0.01) -> list[float]:
    """Evenly spaced constants covering the search interval."""
    start, stop, step = float(start), float(stop), float(step)
    if step <= 0.0:
        raise CalibrationError(f"step must be > 0, got {step}")
    if start >= stop or step > (stop - start):
        raise CalibrationError("empty C grid: step exceeds the search interval")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def evaluate_x2_curve(c_grid, grid: SimulationGrid, seed: int | None = None,
                      c_interval: tuple[float, float] | None = DEFAULT_C_INTERVAL,
                      max_workers: int = 1) -> list[tuple[float, float]]:
    """Pseudo chi-square of the p = 0 adjusted estimator for each constant.

    Returns (C, X2) pairs sorted by C. Every constant must lie strictly
    inside ``c_interval`` (pass None to disable the check). The component
    draws are shared across constants, so the curve is smooth in C.
    """
    cs = sorted({float(c) for c in c_grid})
    if not cs:
        raise CalibrationError("empty c_grid")
    if c_interval is not None:
        lo, hi = float(c_interval[0]), float(c_interval[1])
        for c in cs:
            if not lo < c < hi:
                raise CalibrationError(f"constant {c} outside the open interval ({lo}, {hi})")
    use_seed = grid.seed if seed is None else int(seed)
    # Mean of the denominator-only variant (c = 0); the per-C mean is this
    # value divided by the deterministic shrink term of the cell.
    base_variant = EstimatorVariant.adjusted(0.0, 0)

    def one_cell(pair: tuple[int, int]) -> float:
        k, nu = pair
        rng = substream(use_seed, k, nu, _CRN_TAG)
        return simulate_mean_df(k, nu, base_variant, grid.replicates, rng).mean

    pairs = grid.cells()
    if max_workers and int(max_workers) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=int(max_workers)) as pool:
            base_means = list(pool.map(one_cell, pairs))
    else:
        base_means = [one_cell(pair) for pair in pairs]

    points = []
    for c in cs:
        x2 = 0.0
        for (k, nu), base in zip(pairs, base_means):
            reference = float(k * nu)
            mean_c = base / (1.0 + c / (k * float(nu)))
            x2 += (mean_c - reference) ** 2 / reference
        points.append((c, x2))
    return points


def fit_polynomial_cv(points, max_degree: int = 6, folds: int = 10,
                      seed: int = 0) -> PolynomialFit:
    """Least-squares polynomial with the degree chosen by k-fold cross validation.

    Candidate degrees run from 1 to ``max_degree``; the winner minimizes the
    mean RMSE over folds, with ties (within 1e-12) resolved to the smallest
    degree. Folds are formed by shuffling the points once with ``seed`` and
    dealing them round-robin, so the partition is deterministic. The winning
    degree is refit on all points; reported coefficients are in the original
    coordinates (the fit itself uses a scaled abscissa for conditioning) and
    ``r_squared`` is 1 - SSE/SST of that final fit.
    """
    pts = list(points)
    n = len(pts)
    if int(max_degree) < 1:
        raise CalibrationError(f"max_degree must be >= 1, got {max_degree}")
    if int(folds) < 2:
        raise CalibrationError(f"folds must be >= 2, got {folds}")
    if n < int(folds):
        raise CalibrationError(f"need at least {folds} points, got {n}")
    xs = np.asarray([p[0] for p in pts], dtype=float)
    ys = np.asarray([p[1] for p in pts], dtype=float)

    order = np.random.default_rng(int(seed)).permutation(n)
    fold_ids = np.empty(n, dtype=int)
    fold_ids[order] = np.arange(n) % int(folds)

    cv_rmse = []
    for degree in range(1, int(max_degree) + 1):
        errs = []
        for f in range(int(folds)):
            train = fold_ids != f
            if int(train.sum()) < degree + 1:
                errs = None
                break
            fit = Polynomial.fit(xs[train], ys[train], deg=degree)
            resid = fit(xs[~train]) - ys[~train]
            errs.append(math.sqrt(float(np.mean(resid ** 2))))
        cv_rmse.append(math.inf if errs is None else float(np.mean(errs)))

    best = min(cv_rmse)
    if not math.isfinite(best):
        raise CalibrationError("no degree is estimable with the given folds")
    degree = 1 + next(i for i, v in enumerate(cv_rmse) if v <= best + 1e-12)

    final, diagnostics = Polynomial.fit(xs, ys, deg=degree, full=True)
    rank = int(diagnostics[1])
    if rank < degree + 1:
        raise CalibrationError(f"rank-deficient design at degree {degree}")
    coefficients = tuple(float(c) for c in final.convert().coef)
    pred = Polynomial(coefficients)(xs)
    sst = float(np.sum((ys - ys.mean()) ** 2))
    sse = float(np.sum((ys - pred) ** 2))
    r_squared = 1.0 if sst == 0.0 and sse == 0.0 else 1.0 - sse / sst
    return PolynomialFit(degree, coefficients, r_squared)


def find_c_opt(coefficients, interval: tuple[float, float]) -> tuple[float, float]:
    """Global minimum of a polynomial over a closed interval.

    Dense evaluation at step <= 1e-4 plus the real critical points of the
    polynomial; exact ties resolve to the smaller abscissa. The returned
    value is never larger than the polynomial at any dense-grid point.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise CalibrationError(f"invalid interval ({lo}, {hi})")
    coefs = [float(c) for c in coefficients]
    if len(coefs) < 2:
        raise CalibrationError("polynomial degree must be >= 1")
    poly = Polynomial(coefs)

    n = max(2, int(math.ceil((hi - lo) / 1e-4)) + 1)
    xs = np.linspace(lo, hi, n)
    ys = poly(xs)
    candidates = [lo, hi, float(xs[int(np.argmin(ys))])]
    for root in np.atleast_1d(poly.deriv().roots()):
        if abs(root.imag) < 1e-9 and lo <= root.real <= hi:
            candidates.append(float(root.real))

    c_opt, x2_min = lo, math.inf
    for c in sorted(candidates):
        value = float(poly(c))
        if value < x2_min:
            c_opt, x2_min = c, value
    return c_opt, x2_min


def run_calibration(grid: SimulationGrid, c_grid=None, seed: int | None = None,
                    folds: int = 10, max_degree: int = 6,
                    c_interval: tuple[float, float] | None = DEFAULT_C_INTERVAL,
                    max_workers: int = 1) -> CalibrationCurve:
    """Evaluate the discrepancy curve, smooth it, and locate the optimum."""
    cs = default_c_grid() if c_grid is None else c_grid
    points = evaluate_x2_curve(cs, grid, seed=seed, c_interval=c_interval,
                               max_workers=max_workers)
    fit_seed = grid.seed if seed is None else int(seed)
    fit = fit_polynomial_cv(points, max_degree=max_degree, folds=folds, seed=fit_seed)
    c_opt, x2_min = find_c_opt(fit.coefficients, (points[0][0], points[-1][0]))
    return CalibrationCurve(
        c_points=tuple(c for c, _ in points),
        x2_points=tuple(v for _, v in points),
        fitted_degree=fit.degree,
        coefficients=fit.coefficients,
        r_squared=fit.r_squared,
        c_opt=c_opt,
        x2_min=x2_min,
    )


def convergence_study(sizes, c_grid=None, replicates: int = DEFAULT_REPLICATES,
                      seed: int = DEFAULT_SEED, folds: int = 10,
                      max_degree: int = 6, max_workers: int = 1) -> list[CalibrationCurve]:
    """One calibration per (K_max, nu_max) size, for trend inspection.

    Sizes beyond roughly (20, 20) take minutes to hours at the default
    replicate count; the optimum grows slowly and flattens as the ranges
    widen, so the small sizes already show the trend.
    """
    sizes = list(sizes)
    if not sizes:
        raise CalibrationError("no study sizes given")
    curves = []
    for k_max, nu_max in sizes:
        grid = SimulationGrid(tuple(range(2, int(k_max) + 1)),
                              tuple(range(1, int(nu_max) + 1)),
                              replicates=replicates, seed=seed)
        curves.append(run_calibration(grid, c_grid, folds=folds,
                                      max_degree=max_degree, max_workers=max_workers))
    return curves


def curve_rows(curve: CalibrationCurve) -> list[tuple[str, str]]:
    """CSV-ready rows of the sampled curve, header included."""
    rows = [("C", "X2")]
    for c, x2 in zip(curve.c_points, curve.x2_points):
        rows.append((repr(c), repr(x2)))
    return rows


def study_summary(size: tuple[int, int], curve: CalibrationCurve) -> dict:
    """JSON-ready summary of one calibration run."""
    return {
        "size": [int(size[0]), int(size[1])],
        "degree": curve.fitted_degree,
        "r_squared": curve.r_squared,
        "c_opt": curve.c_opt,
        "x2_min": curve.x2_min,
    }
