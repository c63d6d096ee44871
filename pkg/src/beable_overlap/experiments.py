"""Named experiments built from the samplers and overlap functionals.

Each driver assembles one study and returns an ExperimentResult: a sorted
row table plus experiment-specific extras for the JSON summary. The row
streams are deterministic: row i of the sorted parameter list consumes
stream i of the master seed, auxiliary estimates (reference estimators,
side curves) consume streams offset by the row count, and single-value
experiments use stream 0. Rows are independent, so a worker pool may
compute them concurrently without changing any number.

Analytic anchors used below, each derived by direct integration:
  - two-dimensional real states: polar angles give 1/2 - 2/pi^2;
  - two-dimensional complex states: the squared modulus of the first
    coordinate is uniform on [0, 1], and the two coordinate terms
    contribute 1/6 each, so the mean overlap is exactly 1/3;
  - the crossed-mode pair (one excited mode each, see below): the polar
    integral of (2/pi) q1^2 exp(-r^2) over |q1| < |q2| is 1/2 - 1/pi;
  - displaced unit-variance Gaussian densities at distance 2: the product
    comparison reduces to sum(q_i) > n, with probability Phi(-sqrt(n)).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateWeightsError,
    InsufficientSignalError,
    InvalidDimensionError,
    InvalidParameterError,
)
from .grids import (
    GridFunction,
    ProductState,
    excited_mode_amplitude,
    gaussian_density_amplitude,
)
from .overlap import overlap_grid, overlap_product_mc
from .sampling import (
    SeedSpec,
    StateKind,
    chunk_generator,
    chunk_plan,
    complex_amplitude_block,
    cube_block,
    real_amplitude_block,
)
from .stats import (
    EMPTY_MOMENTS,
    FitResult,
    OverlapEstimate,
    estimate_from_moments,
    fit_log_linear,
    from_values,
    merge,
)

EXACT_TWO_DIM_REAL_OVERLAP = 0.5 - 2.0 / math.pi**2
EXACT_TWO_DIM_COMPLEX_OVERLAP = 1.0 / 3.0
EXACT_CROSSED_MODE_OVERLAP = 0.5 - 1.0 / math.pi
CUBE_OVERLAP_LIMIT = 0.25


@dataclass(frozen=True)
class BoundReport:
    """Closed-form overlap bound at one epsilon, plus its optimum over a scan."""

    dimension: int
    epsilon: float
    value: float
    optimal_epsilon: float
    optimal_value: float
    kind: StateKind


@dataclass(frozen=True)
class ExperimentRow:
    parameter: int
    estimate: Optional[OverlapEstimate]
    analytic: Optional[float] = None
    bound: Optional[float] = None


@dataclass
class ExperimentResult:
    name: str
    rows: tuple[ExperimentRow, ...]
    config: dict
    extras: dict

    def __post_init__(self):
        parameters = [row.parameter for row in self.rows]
        if parameters != sorted(set(parameters)):
            raise InvalidParameterError("rows must be strictly sorted by parameter")


def _check_dimension(n: int):
    if n < 1:
        raise InvalidDimensionError(f"dimension must be at least 1, got {n}")


def _check_samples(samples: int):
    if samples < 2:
        raise InvalidParameterError(f"need at least 2 samples, got {samples}")


def estimate_real_overlap(n: int, samples: int, seed: SeedSpec) -> OverlapEstimate:
    """Mean overlap of two independent uniform states on the real sphere."""
    _check_dimension(n)
    _check_samples(samples)
    moments = EMPTY_MOMENTS
    for chunk, count in chunk_plan(samples):
        gen = chunk_generator(seed, chunk)
        a0 = np.abs(real_amplitude_block(gen, count, n))
        a1 = np.abs(real_amplitude_block(gen, count, n))
        values = np.where(a0 < a1, a0 * a0, 0.0).sum(axis=1)
        moments = merge(moments, from_values(values))
    return estimate_from_moments(moments, seed)


def estimate_complex_overlap(n: int, samples: int, seed: SeedSpec) -> OverlapEstimate:
    """Same as estimate_real_overlap for uniform complex states.

    Squared moduli are compared after cross-multiplying each side by the
    other state's total squared modulus. Recomputing |z| from a normalized
    vector lands a few ulps off 1, so the naive comparison at n = 1 breaks
    exact ties at random instead of returning 0; the cross-multiplied form
    is symmetric in the rounding and keeps that case exact.
    """
    _check_dimension(n)
    _check_samples(samples)
    moments = EMPTY_MOMENTS
    for chunk, count in chunk_plan(samples):
        gen = chunk_generator(seed, chunk)
        z0 = complex_amplitude_block(gen, count, n)
        z1 = complex_amplitude_block(gen, count, n)
        m0 = z0.real**2 + z0.imag**2
        m1 = z1.real**2 + z1.imag**2
        t0 = m0.sum(axis=1, keepdims=True)
        t1 = m1.sum(axis=1, keepdims=True)
        dominated = np.where(m0 * t1 < m1 * t0, m0, 0.0).sum(axis=1)
        moments = merge(moments, from_values(dominated / t0[:, 0]))
    return estimate_from_moments(moments, seed)


def estimate_cube_overlap(n: int, samples: int, seed: SeedSpec) -> OverlapEstimate:
    """Mean of the dominated squared-coordinate fraction for cube point pairs.

    For two points uniform in [-1, 1]^n, this is the sum over coordinates
    of chi[|x0_i| < |x1_i|] x0_i^2, normalized by |x0|^2. It tends to 1/4
    from above as n grows (per coordinate, E[chi x^2] / E[x^2] = 1/4).
    """
    _check_dimension(n)
    _check_samples(samples)
    moments = EMPTY_MOMENTS
    for chunk, count in chunk_plan(samples):
        gen = chunk_generator(seed, chunk)
        x0 = cube_block(gen, count, n)
        x1 = cube_block(gen, count, n)
        squares = x0 * x0
        dominated = np.where(np.abs(x0) < np.abs(x1), squares, 0.0).sum(axis=1)
        values = dominated / squares.sum(axis=1)
        moments = merge(moments, from_values(values))
    return estimate_from_moments(moments, seed)


def estimate_reweighted_overlap(n: int, samples: int, seed: SeedSpec) -> OverlapEstimate:
    """Cube-sampled, self-normalized cross-check of estimate_real_overlap.

    Cube points are projected onto the sphere and each state is weighted by
    (max-norm / 2-norm)^n, the shape of the cone volume joining a cube
    neighborhood to its spherical projection. The overall constant of that
    weight is unknown here, so the estimate is the ratio of weighted sums,
    which cancels it. The standard error is the delta-method expression for
    a ratio, not the plain sample formula (weights vary per sample).
    Intended for small n: the weight spread grows quickly with dimension.
    """
    _check_dimension(n)
    _check_samples(samples)
    sum_w = 0.0
    sum_wv = 0.0
    sum_w2 = 0.0
    sum_w2v = 0.0
    sum_w2v2 = 0.0
    for chunk, count in chunk_plan(samples):
        gen = chunk_generator(seed, chunk)
        x0 = cube_block(gen, count, n)
        x1 = cube_block(gen, count, n)
        norm0 = np.sqrt((x0 * x0).sum(axis=1))
        norm1 = np.sqrt((x1 * x1).sum(axis=1))
        a0 = np.abs(x0) / norm0[:, None]
        a1 = np.abs(x1) / norm1[:, None]
        v = np.where(a0 < a1, a0 * a0, 0.0).sum(axis=1)
        w = (np.abs(x0).max(axis=1) / norm0) ** n * (np.abs(x1).max(axis=1) / norm1) ** n
        sum_w += float(w.sum())
        sum_wv += float((w * v).sum())
        w2 = w * w
        sum_w2 += float(w2.sum())
        sum_w2v += float((w2 * v).sum())
        sum_w2v2 += float((w2 * v * v).sum())
    if sum_w == 0.0:
        raise DegenerateWeightsError("all importance weights vanished")
    theta = sum_wv / sum_w
    variance = sum_w2v2 - 2.0 * theta * sum_w2v + theta * theta * sum_w2
    stderr = math.sqrt(max(0.0, variance)) / sum_w
    return OverlapEstimate(theta, stderr, samples, seed)


def localized_fraction(
    n: int, epsilon: float, samples: int, seed: SeedSpec
) -> OverlapEstimate:
    """Fraction of uniform sphere states with max-norm at least (1 - epsilon)."""
    _check_dimension(n)
    _check_samples(samples)
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    threshold = 1.0 - epsilon
    moments = EMPTY_MOMENTS
    for chunk, count in chunk_plan(samples):
        gen = chunk_generator(seed, chunk)
        peak = np.abs(real_amplitude_block(gen, count, n)).max(axis=1)
        moments = merge(moments, from_values((peak >= threshold).astype(float)))
    return estimate_from_moments(moments, seed)


_EPSILON_GRID = np.geomspace(1e-6, 1.0, 202)[1:-1]  # 200 log-uniform interior points


def _bound_formula(n: int, epsilon, kind: StateKind):
    if kind is StateKind.REAL:
        return 1.0 / n + 2.0 * epsilon + n**2 * (1.0 - epsilon) ** n
    return 1.0 / n + 2.0 * epsilon + (2 * n) ** 2 * (1.0 - epsilon) ** (2 * n)


def optimal_bound(n: int, kind: StateKind) -> tuple[float, float]:
    """(epsilon, value) minimizing the closed-form bound over the scan grid."""
    _check_dimension(n)
    values = _bound_formula(n, _EPSILON_GRID, kind)
    best = int(np.argmin(values))
    return float(_EPSILON_GRID[best]), float(values[best])


def overlap_bound(n: int, epsilon: float, kind: StateKind) -> BoundReport:
    """Closed-form upper bound on the mean random-state overlap.

    The bound splits states into a localized part (max-norm within epsilon
    of the 2-norm, at most a 2*epsilon + 1/n contribution) and a remainder
    suppressed like n^2 (1-epsilon)^n (real) or (2n)^2 (1-epsilon)^(2n)
    (complex). The report carries the value at the requested epsilon and
    the best value over a fixed 200-point log grid.
    """
    _check_dimension(n)
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    value = float(_bound_formula(n, epsilon, kind))
    best_epsilon, best_value = optimal_bound(n, kind)
    return BoundReport(n, epsilon, value, best_epsilon, best_value, kind)


def crossed_mode_overlap(step: float, extent: float) -> float:
    """Quadrature overlap of two states that each excite one of two modes.

    State 0 carries amplitude |q1| exp(-(q1^2+q2^2)/2) (first mode excited),
    state 1 the mirror image. Every further mode factorizes out of the
    comparison, so the overlap reduces to the plane integral of
    (2/pi) q1^2 exp(-(q1^2+q2^2)) over |q1| < |q2|, evaluated with the
    trapezoid rule on [-extent, extent]^2.

    The integrand jumps across the diagonals, and the diagonals run exactly
    through grid nodes; a node on a jump counts with the mean of the two
    one-sided values (chi = 1/2), which keeps the trapezoid rule at its
    smooth-case accuracy. The node axis is built as step * k for integer k,
    making mirrored nodes exactly equal in floating point, so the tie nodes
    are detected bitwise.
    """
    if not 0.0 < step <= 0.01:
        raise InvalidParameterError(f"step must lie in (0, 0.01], got {step}")
    if extent < 8.0:
        raise InvalidParameterError(f"extent must be at least 8, got {extent}")
    half = int(round(extent / step))
    axis = step * np.arange(-half, half + 1)
    weights = np.full(axis.size, step)
    weights[0] = weights[-1] = 0.5 * step
    magnitude = np.abs(axis)
    gauss = np.exp(-axis * axis)
    row_factor = (2.0 / math.pi) * axis * axis * gauss * weights
    col_factor = gauss * weights
    total = 0.0
    block = 256
    for start in range(0, axis.size, block):
        stop = min(start + block, axis.size)
        m0 = magnitude[start:stop, None]
        chi = (m0 < magnitude[None, :]).astype(float)
        chi += 0.5 * (m0 == magnitude[None, :])
        total += float(row_factor[start:stop] @ (chi * col_factor).sum(axis=1))
    return total


def displaced_gaussian_pair() -> tuple[GridFunction, GridFunction]:
    """Default decay factors: amplitudes of unit normal densities at 0 and 2."""
    return (
        gaussian_density_amplitude(0.0, 1.0, -8.0, 0.001, 18001),
        gaussian_density_amplitude(2.0, 1.0, -8.0, 0.001, 18001),
    )


def _crossed_mode_states(step: float, extent: float) -> tuple[ProductState, ProductState]:
    count = 2 * int(round(extent / step)) + 1
    excited = excited_mode_amplitude(-extent, step, count)
    ground = gaussian_density_amplitude(0.0, 0.5, -extent, step, count)
    return ProductState((excited, ground)), ProductState((ground, excited))


def _normal_upper_tail(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def _sorted_dims(dims: Sequence[int]) -> list[int]:
    if not dims:
        raise InvalidParameterError("need at least one dimension")
    for n in dims:
        _check_dimension(n)
    return sorted(set(int(n) for n in dims))


def _run_rows(tasks: Sequence[Callable[[], ExperimentRow]], workers: int) -> tuple:
    """Evaluate independent row tasks, optionally on a thread pool.

    Results keep task order, and every task owns its seed streams, so the
    output is identical for any worker count.
    """
    if workers <= 1:
        return tuple(task() for task in tasks)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return tuple(pool.map(lambda task: task(), tasks))


def run_figure1(
    dims: Sequence[int], samples: int, seed: int, workers: int = 1
) -> ExperimentResult:
    """Random-state overlap curve over dimension, with its companion curves.

    Rows hold the real-state overlap estimates, the exact two-dimensional
    value as the analytic reference, and the optimized closed-form bound.
    The cube-integral curve for the same dims rides along in the extras.
    """
    dims = _sorted_dims(dims)

    def row_task(index: int, n: int) -> Callable[[], ExperimentRow]:
        def work() -> ExperimentRow:
            estimate = estimate_real_overlap(n, samples, SeedSpec(seed, index))
            analytic = EXACT_TWO_DIM_REAL_OVERLAP if n == 2 else None
            return ExperimentRow(n, estimate, analytic, optimal_bound(n, StateKind.REAL)[1])

        return work

    def side_task(index: int, n: int) -> Callable[[], dict]:
        def work() -> dict:
            est = estimate_cube_overlap(n, samples, SeedSpec(seed, len(dims) + index))
            return {"parameter": n, "mean": est.mean, "stderr": est.stderr}

        return work

    rows = _run_rows([row_task(i, n) for i, n in enumerate(dims)], workers)
    cube_curve = list(_run_rows([side_task(i, n) for i, n in enumerate(dims)], workers))
    config = {"dims": dims, "samples": samples, "seed": seed}
    extras = {"cube_curve": cube_curve, "cube_limit": CUBE_OVERLAP_LIMIT}
    return ExperimentResult("figure1", rows, config, extras)


def run_ec_curve(
    dims: Sequence[int], samples: int, seed: int, workers: int = 1
) -> ExperimentResult:
    """Complex-state analogue of run_figure1 (no side curve)."""
    dims = _sorted_dims(dims)

    def row_task(index: int, n: int) -> Callable[[], ExperimentRow]:
        def work() -> ExperimentRow:
            estimate = estimate_complex_overlap(n, samples, SeedSpec(seed, index))
            analytic = EXACT_TWO_DIM_COMPLEX_OVERLAP if n == 2 else None
            return ExperimentRow(
                n, estimate, analytic, optimal_bound(n, StateKind.COMPLEX)[1]
            )

        return work

    rows = _run_rows([row_task(i, n) for i, n in enumerate(dims)], workers)
    config = {"dims": dims, "samples": samples, "seed": seed}
    return ExperimentResult("ec-curve", rows, config, {})


def run_integral_f(
    dims: Sequence[int], samples: int, seed: int, workers: int = 1
) -> ExperimentResult:
    """Cube-integral curve over dimension; exactly 1/2 at one dimension."""
    dims = _sorted_dims(dims)

    def row_task(index: int, n: int) -> Callable[[], ExperimentRow]:
        def work() -> ExperimentRow:
            estimate = estimate_cube_overlap(n, samples, SeedSpec(seed, index))
            return ExperimentRow(n, estimate, 0.5 if n == 1 else None, None)

        return work

    rows = _run_rows([row_task(i, n) for i, n in enumerate(dims)], workers)
    config = {"dims": dims, "samples": samples, "seed": seed}
    return ExperimentResult("integral-f", rows, config, {"limit": CUBE_OVERLAP_LIMIT})


def run_cube_check(
    dims: Sequence[int], samples: int, seed: int, workers: int = 1
) -> ExperimentResult:
    """Reweighted cube estimator against the sphere estimator, per dimension.

    The row estimate is the reweighted one; the sphere reference mean lands
    in the analytic column, and the extras carry both estimates with the
    agreement z-scores.
    """
    dims = _sorted_dims(dims)

    def row_task(index: int, n: int) -> Callable[[], tuple[ExperimentRow, dict]]:
        def work() -> tuple[ExperimentRow, dict]:
            reweighted = estimate_reweighted_overlap(n, samples, SeedSpec(seed, index))
            reference = estimate_real_overlap(n, samples, SeedSpec(seed, len(dims) + index))
            combined = math.hypot(reweighted.stderr, reference.stderr)
            z = (reweighted.mean - reference.mean) / combined if combined > 0.0 else 0.0
            detail = {
                "parameter": n,
                "reweighted_mean": reweighted.mean,
                "reweighted_stderr": reweighted.stderr,
                "reference_mean": reference.mean,
                "reference_stderr": reference.stderr,
                "z_score": z,
            }
            return ExperimentRow(n, reweighted, reference.mean, None), detail

        return work

    pairs = _run_rows([row_task(i, n) for i, n in enumerate(dims)], workers)
    rows = tuple(row for row, _ in pairs)
    config = {"dims": dims, "samples": samples, "seed": seed}
    return ExperimentResult(
        "cube-check", rows, config, {"comparison": [detail for _, detail in pairs]}
    )


def run_localized(
    dims: Sequence[int], epsilon: float, samples: int, seed: int, workers: int = 1
) -> ExperimentResult:
    """Localized-state fraction against dimension at one epsilon."""
    dims = _sorted_dims(dims)

    def row_task(index: int, n: int) -> Callable[[], ExperimentRow]:
        def work() -> ExperimentRow:
            return ExperimentRow(
                n, localized_fraction(n, epsilon, samples, SeedSpec(seed, index))
            )

        return work

    rows = _run_rows([row_task(i, n) for i, n in enumerate(dims)], workers)
    config = {"dims": dims, "epsilon": epsilon, "samples": samples, "seed": seed}
    return ExperimentResult("localized", rows, config, {})


def run_bound(dims: Sequence[int], epsilon: float, workers: int = 1) -> ExperimentResult:
    """Closed-form bound table; no sampling involved.

    Rows carry no Monte Carlo estimate: the analytic column holds the real
    bound at the requested epsilon and the bound column its scan optimum.
    Complex-kind reports appear in the extras.
    """
    dims = _sorted_dims(dims)
    rows = []
    reports = []
    for n in dims:
        real = overlap_bound(n, epsilon, StateKind.REAL)
        cplx = overlap_bound(n, epsilon, StateKind.COMPLEX)
        rows.append(ExperimentRow(n, None, real.value, real.optimal_value))
        reports.append(
            {
                "parameter": n,
                "real_value": real.value,
                "real_optimal_epsilon": real.optimal_epsilon,
                "real_optimal_value": real.optimal_value,
                "complex_value": cplx.value,
                "complex_optimal_epsilon": cplx.optimal_epsilon,
                "complex_optimal_value": cplx.optimal_value,
            }
        )
    config = {"dims": dims, "epsilon": epsilon}
    return ExperimentResult("bound", tuple(rows), config, {"reports": reports})


def run_counterexample(
    samples: int,
    seed: int,
    step: float = 0.005,
    extent: float = 10.0,
    mc_grid_step: float = 0.002,
) -> ExperimentResult:
    """Dimension-independent overlap of the crossed-mode pair.

    The quadrature value is the headline number; a Monte Carlo re-estimate
    over the equivalent two-factor product states (finer factor grids, so
    discretization bias stays well under the sampling error) rides along as
    the row estimate.
    """
    quadrature = crossed_mode_overlap(step, extent)
    p0, p1 = _crossed_mode_states(mc_grid_step, extent)
    mc = overlap_product_mc(p0, p1, samples, SeedSpec(seed, 0))
    row = ExperimentRow(2, mc, EXACT_CROSSED_MODE_OVERLAP, None)
    config = {
        "samples": samples,
        "seed": seed,
        "step": step,
        "extent": extent,
        "mc_grid_step": mc_grid_step,
    }
    extras = {
        "quadrature_value": quadrature,
        "closed_form": EXACT_CROSSED_MODE_OVERLAP,
    }
    return ExperimentResult("counterexample", (row,), config, extras)


def run_product_decay(
    counts: Sequence[int],
    samples: int,
    seed: int,
    factor_pair: Optional[tuple[GridFunction, GridFunction]] = None,
    workers: int = 1,
) -> ExperimentResult:
    """Overlap of n identical factor copies, with a log-linear decay fit.

    Only rows whose mean clears 10 standard errors enter the fit; growing n
    drives the overlap under the Monte Carlo noise floor, and a logarithm
    of statistical zero would poison the regression. Fewer than two such
    rows raise InsufficientSignalError.
    """
    counts = _sorted_dims(counts)
    default_pair = factor_pair is None
    f0, f1 = displaced_gaussian_pair() if default_pair else factor_pair

    def row_task(index: int, n: int) -> Callable[[], ExperimentRow]:
        def work() -> ExperimentRow:
            estimate = overlap_product_mc(
                ProductState((f0,) * n), ProductState((f1,) * n), samples,
                SeedSpec(seed, index),
            )
            analytic = _normal_upper_tail(math.sqrt(n)) if default_pair else None
            return ExperimentRow(n, estimate, analytic, None)

        return work

    rows = _run_rows([row_task(i, n) for i, n in enumerate(counts)], workers)
    usable = [
        (row.parameter, row.estimate.mean, row.estimate.stderr)
        for row in rows
        if row.estimate.mean > 10.0 * row.estimate.stderr
    ]
    if len(usable) < 2:
        raise InsufficientSignalError(
            f"only {len(usable)} rows exceed 10 standard errors; cannot fit a decay rate"
        )
    fit = fit_log_linear(usable)
    config = {
        "counts": counts,
        "samples": samples,
        "seed": seed,
        "default_factor_pair": default_pair,
    }
    extras = {"fit": _fit_dict(fit), "fitted_counts": [n for n, _, _ in usable]}
    return ExperimentResult("product-decay", rows, config, extras)


def product_decay(
    factor_pair: tuple[GridFunction, GridFunction],
    n_max: int,
    samples: int,
    seed: int,
    workers: int = 1,
) -> ExperimentResult:
    """run_product_decay over every factor count from 1 up to n_max."""
    if n_max < 2:
        raise InvalidParameterError(f"n_max must be at least 2, got {n_max}")
    return run_product_decay(range(1, n_max + 1), samples, seed, factor_pair, workers)


def run_pair_overlap(
    grid0: GridFunction, grid1: GridFunction, samples: int, seed: int
) -> ExperimentResult:
    """Ad-hoc single-pair overlap: quadrature value plus a Monte Carlo check."""
    quadrature = overlap_grid(grid0, grid1)
    mc = overlap_product_mc(
        ProductState((grid0,)), ProductState((grid1,)), samples, SeedSpec(seed, 0)
    )
    row = ExperimentRow(1, mc, quadrature, None)
    config = {"samples": samples, "seed": seed}
    return ExperimentResult("overlap", (row,), config, {"quadrature_value": quadrature})


def _fit_dict(fit: FitResult) -> dict:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "slope_stderr": fit.slope_stderr,
        "r_squared": fit.r_squared,
        "points_used": fit.points_used,
    }
