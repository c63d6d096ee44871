"""Estimator oracles, bound checks, and experiment driver behavior."""

import math

import numpy as np
import pytest

from beable_overlap.errors import (
    InsufficientSignalError,
    InvalidDimensionError,
    InvalidParameterError,
)
from beable_overlap.experiments import (
    CUBE_OVERLAP_LIMIT,
    EXACT_CROSSED_MODE_OVERLAP,
    EXACT_TWO_DIM_COMPLEX_OVERLAP,
    EXACT_TWO_DIM_REAL_OVERLAP,
    ExperimentResult,
    ExperimentRow,
    crossed_mode_overlap,
    displaced_gaussian_pair,
    estimate_complex_overlap,
    estimate_cube_overlap,
    estimate_real_overlap,
    estimate_reweighted_overlap,
    localized_fraction,
    optimal_bound,
    overlap_bound,
    product_decay,
    run_bound,
    run_counterexample,
    run_cube_check,
    run_ec_curve,
    run_figure1,
    run_integral_f,
    run_localized,
    run_product_decay,
)
from beable_overlap.sampling import SeedSpec, StateKind
from beable_overlap.stats import OverlapEstimate

SEED = SeedSpec(0, 0)


def _combined(*estimates):
    return math.hypot(*(e.stderr for e in estimates))


def test_real_overlap_one_dimension_is_exactly_zero():
    est = estimate_real_overlap(1, 10_000, SEED)
    assert est.mean == 0.0
    assert est.stderr == 0.0


def test_real_overlap_two_dim_matches_angle_quadrature():
    # midpoint quadrature over the two polar angles; |cos|^2 and |sin|^2
    # carry all the dependence, so a quarter period per angle suffices
    m = 2048
    theta = (np.arange(m) + 0.5) * (0.5 * np.pi / m)
    c = np.cos(theta) ** 2
    s = 1.0 - c
    # ties sit exactly on the diagonal cells; the jump-mean rule restores
    # half their mass (c + s = 1 there), which upgrades the sum to O(1/m^2)
    quad = (
        np.where(c[:, None] < c[None, :], c[:, None], 0.0)
        + np.where(s[:, None] < s[None, :], s[:, None], 0.0)
    ).mean() + 0.5 / m
    assert abs(quad - EXACT_TWO_DIM_REAL_OVERLAP) < 1e-4
    est = estimate_real_overlap(2, 200_000, SEED)
    assert abs(est.mean - quad) < 3 * est.stderr


def test_complex_overlap_one_dimension_is_exactly_zero():
    est = estimate_complex_overlap(1, 10_000, SEED)
    assert est.mean == 0.0


def test_complex_overlap_two_dim_matches_uniform_quadrature():
    # for two complex amplitudes the first squared modulus is uniform on
    # [0, 1]; the overlap reduces to a two-variable midpoint quadrature
    m = 2048
    u = (np.arange(m) + 0.5) / m
    u0 = u[:, None]
    u1 = u[None, :]
    # same diagonal-tie correction as the real case: u0 + (1 - u0) = 1 there
    quad = (
        np.where(u0 < u1, u0, 0.0) + np.where(u1 < u0, 1.0 - u0, 0.0)
    ).mean() + 0.5 / m
    assert abs(quad - EXACT_TWO_DIM_COMPLEX_OVERLAP) < 1e-4
    est = estimate_complex_overlap(2, 200_000, SEED)
    assert abs(est.mean - quad) < 3 * est.stderr
    repeat = estimate_complex_overlap(2, 200_000, SEED)
    assert repeat.mean == est.mean
    assert 0.0 < est.mean < 0.5


def test_cube_overlap_one_dimension_is_a_coin_flip():
    est = estimate_cube_overlap(1, 100_000, SEED)
    assert abs(est.mean - 0.5) < 3 * est.stderr


def test_cube_overlap_plateau():
    # the curve settles just above 1/4; the margin covers the residual
    # 0.15/n approach term at these dimensions
    for n in (128, 256):
        est = estimate_cube_overlap(n, 100_000, SeedSpec(0, n))
        assert abs(est.mean - CUBE_OVERLAP_LIMIT) <= max(0.002, 5 * est.stderr)


def test_reweighted_overlap_two_dim_hits_exact_value():
    est = estimate_reweighted_overlap(2, 200_000, SEED)
    assert abs(est.mean - EXACT_TWO_DIM_REAL_OVERLAP) < 3 * est.stderr


def test_reweighted_overlap_one_dimension_zero():
    est = estimate_reweighted_overlap(1, 10_000, SEED)
    assert est.mean == 0.0
    assert est.stderr == 0.0


def test_reweighted_consistent_with_sphere_sampler():
    for n in (2, 4, 8):
        cube = estimate_reweighted_overlap(n, 100_000, SeedSpec(1, n))
        sphere = estimate_real_overlap(n, 100_000, SeedSpec(2, n))
        assert abs(cube.mean - sphere.mean) < 3 * _combined(cube, sphere)


def test_localized_fraction_one_dimension_is_one():
    est = localized_fraction(1, 0.3, 5_000, SEED)
    assert est.mean == 1.0


def test_localized_fraction_vacuous_threshold():
    # (1 - eps) far below 1/sqrt(N) makes the condition always true
    est = localized_fraction(16, 0.999, 5_000, SEED)
    assert est.mean == 1.0


def test_localized_fraction_epsilon_validation():
    with pytest.raises(InvalidParameterError):
        localized_fraction(4, 0.0, 100, SEED)
    with pytest.raises(InvalidParameterError):
        localized_fraction(4, 1.0, 100, SEED)


def test_localized_fraction_against_independent_generator():
    ours = localized_fraction(16, 0.5, 100_000, SEED)
    rng = np.random.default_rng(999)  # a different generator family on purpose
    draws = rng.standard_normal((100_000, 16))
    peaks = np.abs(draws).max(axis=1) / np.sqrt((draws**2).sum(axis=1))
    hits = (peaks >= 0.5).astype(float)
    oracle_se = hits.std(ddof=1) / math.sqrt(hits.size)
    assert abs(ours.mean - hits.mean()) < 5 * math.hypot(ours.stderr, oracle_se)


def test_bound_value_direct_arithmetic():
    report = overlap_bound(100, 0.1, StateKind.REAL)
    assert report.value == pytest.approx(0.01 + 0.2 + 1e4 * 0.9**100, rel=1e-12)
    complex_report = overlap_bound(100, 0.1, StateKind.COMPLEX)
    assert complex_report.value == pytest.approx(
        0.01 + 0.2 + 200**2 * 0.9**200, rel=1e-12
    )
    assert report.optimal_value <= report.value + 1e-15
    with pytest.raises(InvalidParameterError):
        overlap_bound(100, 0.0, StateKind.REAL)
    with pytest.raises(InvalidParameterError):
        overlap_bound(100, 1.0, StateKind.REAL)
    with pytest.raises(InvalidDimensionError):
        overlap_bound(0, 0.1, StateKind.REAL)


def test_bound_large_dimension_limit():
    report = overlap_bound(10**7, 0.1, StateKind.REAL)
    assert abs(report.value - 0.2) < 1e-5


def test_optimal_bound_non_increasing():
    values = [optimal_bound(2**k, StateKind.REAL)[1] for k in range(1, 13)]
    assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))
    complex_values = [optimal_bound(2**k, StateKind.COMPLEX)[1] for k in range(1, 13)]
    assert all(b <= a + 1e-15 for a, b in zip(complex_values, complex_values[1:]))


def test_optimal_bound_dominates_scan():
    for n in (4, 64, 1024):
        best_eps, best = optimal_bound(n, StateKind.REAL)
        for eps in (1e-5, 1e-3, 0.01, 0.1, 0.5):
            assert best <= overlap_bound(n, eps, StateKind.REAL).value + 1e-15
        assert 0.0 < best_eps < 1.0


def test_crossed_mode_quadrature_matches_closed_form():
    value = crossed_mode_overlap(0.005, 10.0)
    assert abs(value - EXACT_CROSSED_MODE_OVERLAP) < 1e-5
    finer = crossed_mode_overlap(0.0025, 10.0)
    assert abs(finer - value) < 1e-5


def test_crossed_mode_parameter_validation():
    with pytest.raises(InvalidParameterError):
        crossed_mode_overlap(0.02, 10.0)
    with pytest.raises(InvalidParameterError):
        crossed_mode_overlap(0.005, 4.0)


def test_counterexample_driver_mc_agreement():
    result = run_counterexample(50_000, 0)
    row = result.rows[0]
    quad = result.extras["quadrature_value"]
    assert abs(row.estimate.mean - quad) < 3 * row.estimate.stderr
    assert row.analytic == EXACT_CROSSED_MODE_OVERLAP
    assert result.extras["closed_form"] == EXACT_CROSSED_MODE_OVERLAP


def test_figure1_rows_and_worker_independence():
    serial = run_figure1((8, 2, 4), 20_000, seed=5, workers=1)
    threaded = run_figure1((2, 4, 8), 20_000, seed=5, workers=4)
    assert [row.parameter for row in serial.rows] == [2, 4, 8]
    for a, b in zip(serial.rows, threaded.rows):
        assert a.estimate.mean == b.estimate.mean
        assert a.estimate.stderr == b.estimate.stderr
    assert serial.rows[0].analytic == EXACT_TWO_DIM_REAL_OVERLAP
    assert all(row.analytic is None for row in serial.rows[1:])
    assert all(row.bound is not None for row in serial.rows)
    assert serial.extras["cube_curve"] == threaded.extras["cube_curve"]
    assert [p["parameter"] for p in serial.extras["cube_curve"]] == [2, 4, 8]


def test_figure1_rejects_bad_dims():
    with pytest.raises(InvalidParameterError):
        run_figure1((), 100, 0)
    with pytest.raises(InvalidDimensionError):
        run_figure1((2, 0), 100, 0)


def test_ec_curve_anchor():
    result = run_ec_curve((2, 4), 20_000, 0)
    assert result.rows[0].analytic == EXACT_TWO_DIM_COMPLEX_OVERLAP
    assert result.rows[1].analytic is None
    assert result.name == "ec-curve"


def test_integral_f_anchor_and_limit():
    result = run_integral_f((1, 2), 20_000, 0)
    assert result.rows[0].analytic == 0.5
    assert result.extras["limit"] == CUBE_OVERLAP_LIMIT
    assert abs(result.rows[0].estimate.mean - 0.5) < 4 * result.rows[0].estimate.stderr


def test_cube_check_reports_z_scores():
    result = run_cube_check((2, 3), 50_000, 0)
    for detail in result.extras["comparison"]:
        assert abs(detail["z_score"]) < 5.0
    for row in result.rows:
        assert row.analytic is not None  # the sphere reference mean


def test_run_localized_row_values():
    result = run_localized((2, 4), 0.5, 20_000, 0)
    assert all(0.0 <= row.estimate.mean <= 1.0 for row in result.rows)
    with pytest.raises(InvalidParameterError):
        run_localized((2,), 1.5, 100, 0)


def test_run_bound_rows_are_analytic_only():
    result = run_bound((2, 16, 256), 0.1)
    assert all(row.estimate is None for row in result.rows)
    assert all(row.analytic is not None and row.bound is not None for row in result.rows)
    report = result.extras["reports"][0]
    assert {"complex_value", "complex_optimal_value"} <= set(report)


def test_product_decay_identical_pair_has_no_signal():
    f0, _ = displaced_gaussian_pair()
    with pytest.raises(InsufficientSignalError):
        run_product_decay((1, 2, 3), 2_000, 0, factor_pair=(f0, f0))


def test_product_decay_fit_and_analytic_column():
    result = run_product_decay((1, 2, 3, 4), 20_000, 0)
    fit = result.extras["fit"]
    assert fit["slope"] < 0.0
    assert fit["r_squared"] > 0.9
    for row in result.rows:
        expected = 0.5 * math.erfc(math.sqrt(row.parameter) / math.sqrt(2.0))
        assert row.analytic == pytest.approx(expected, rel=1e-12)
        assert abs(row.estimate.mean - expected) < 4 * row.estimate.stderr
    assert result.extras["fitted_counts"] == [1, 2, 3, 4]


def test_product_decay_custom_pair_has_no_analytic_column():
    pair = displaced_gaussian_pair()
    result = run_product_decay((1, 2), 5_000, 0, factor_pair=pair)
    assert all(row.analytic is None for row in result.rows)


def test_product_decay_n_max_wrapper():
    result = product_decay(displaced_gaussian_pair(), 3, 20_000, 0)
    assert [row.parameter for row in result.rows] == [1, 2, 3]
    with pytest.raises(InvalidParameterError):
        product_decay(displaced_gaussian_pair(), 1, 100, 0)


def test_vanishing_limit_trend_holds_for_both_kinds():
    small_dims = (2, 4, 8)
    large = 1024
    real_small = [estimate_real_overlap(n, 20_000, SeedSpec(0, n)) for n in small_dims]
    real_large = estimate_real_overlap(large, 20_000, SeedSpec(0, large))
    floor = min(est.mean for est in real_small)
    sigma = max(_combined(real_large, est) for est in real_small)
    assert real_large.mean < floor - 3 * sigma
    cplx_small = [estimate_complex_overlap(n, 20_000, SeedSpec(0, n)) for n in small_dims]
    cplx_large = estimate_complex_overlap(large, 20_000, SeedSpec(0, large))
    floor_c = min(est.mean for est in cplx_small)
    sigma_c = max(_combined(cplx_large, est) for est in cplx_small)
    assert cplx_large.mean < floor_c - 3 * sigma_c


def test_experiment_result_requires_sorted_unique_rows():
    est = OverlapEstimate(0.1, 0.01, 100, SEED)
    rows = (ExperimentRow(4, est), ExperimentRow(2, est))
    with pytest.raises(InvalidParameterError):
        ExperimentResult("x", rows, {}, {})
    dup = (ExperimentRow(2, est), ExperimentRow(2, est))
    with pytest.raises(InvalidParameterError):
        ExperimentResult("x", dup, {}, {})


def test_estimators_validate_sample_count():
    for fn in (estimate_real_overlap, estimate_complex_overlap, estimate_cube_overlap):
        with pytest.raises(InvalidParameterError):
            fn(2, 1, SEED)
