"""Overlap functionals in every representation the toolkit supports.

The overlap of state 0 against state 1 is the probability mass of |psi_0|^2
sitting where |psi_1| strictly dominates |psi_0|. Ties contribute nothing:
the comparison is a strict "<" everywhere in this module, and the tie set
has measure zero for all continuous families of interest.

Representations:
  - discrete coordinate states (StateVector): an exact finite sum;
  - tabulated 1-D factors (GridFunction): trapezoidal quadrature;
  - product states over independent subsystems: Monte Carlo, sampling each
    coordinate from the squared factor of state 0 and testing the product
    comparison through a sum of log ratios;
  - indicator-valued ("binary") factors: the exact product rule.

Also here: the geometry helpers for product states, the distance between
the two product maxima and the value of the pointwise minimum at its ridge
crossing.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    AmbiguousCrossingError,
    AmbiguousMaximumError,
    IncompatibleGridsError,
    IncompatibleStatesError,
    InvalidParameterError,
    NoCrossingError,
)
from .grids import BinaryState, GridFunction, ProductState
from .sampling import SeedSpec, StateVector, chunk_generator, chunk_plan
from .stats import EMPTY_MOMENTS, OverlapEstimate, estimate_from_moments, from_values, merge


def overlap_discrete(state0: StateVector, state1: StateVector) -> float:
    """Sum of |psi_0^i|^2 over coordinates where |psi_1^i| strictly dominates."""
    if state0.kind is not state1.kind:
        raise IncompatibleStatesError(
            f"kind mismatch: {state0.kind.value} vs {state1.kind.value}"
        )
    if state0.dimension != state1.dimension:
        raise IncompatibleStatesError(
            f"dimension mismatch: {state0.dimension} vs {state1.dimension}"
        )
    m0 = np.abs(state0.amplitudes)
    m1 = np.abs(state1.amplitudes)
    return float(np.where(m0 < m1, m0 * m0, 0.0).sum())


def overlap_grid(f0: GridFunction, f1: GridFunction) -> float:
    """Trapezoidal quadrature of chi[f0 < f1] * f0^2 on the shared grid."""
    if not f0.same_grid(f1):
        raise IncompatibleGridsError("grid mismatch (start, step, or node count)")
    integrand = np.where(f0.values < f1.values, f0.values * f0.values, 0.0)
    return float(np.trapezoid(integrand, dx=f0.step))


class _FactorTables(NamedTuple):
    nodes: np.ndarray
    values0: np.ndarray
    values1: np.ndarray
    cdf: np.ndarray


def _factor_tables(f0: GridFunction, f1: GridFunction) -> _FactorTables:
    density = f0.values * f0.values
    segments = 0.5 * (density[:-1] + density[1:]) * f0.step
    cdf = np.concatenate(([0.0], np.cumsum(segments)))
    cdf /= cdf[-1]
    return _FactorTables(f0.nodes, f0.values, f1.values, cdf)


def _inverse_cdf(nodes: np.ndarray, cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    # Linear interpolation of the cumulative trapezoid sums; flat (zero
    # density) segments get probability zero, the guard only avoids 0/0.
    idx = np.clip(np.searchsorted(cdf, u, side="right"), 1, cdf.size - 1)
    lo = cdf[idx - 1]
    width = cdf[idx] - lo
    frac = np.where(width > 0.0, (u - lo) / np.where(width > 0.0, width, 1.0), 0.0)
    step = nodes[1] - nodes[0]
    return nodes[idx - 1] + frac * step


def _check_product_pair(p0: ProductState, p1: ProductState):
    if p0.system_count != p1.system_count:
        raise IncompatibleStatesError(
            f"factor count mismatch: {p0.system_count} vs {p1.system_count}"
        )
    for i, (f0, f1) in enumerate(zip(p0.factors, p1.factors)):
        if not f0.same_grid(f1):
            raise IncompatibleStatesError(f"factor {i} grids differ")


def overlap_product_mc(
    p0: ProductState, p1: ProductState, samples: int, seed: SeedSpec
) -> OverlapEstimate:
    """Monte Carlo overlap of two product states.

    Each coordinate q_i is drawn from the squared factor of p0 by inverse
    CDF on its grid. The product comparison prod f0 < prod f1 is evaluated
    as sign(sum log(f1_i(q_i) / f0_i(q_i))), with the zero conventions: any
    vanishing f1 factor forces the indicator to 0 (the right side of the
    strict comparison is 0), otherwise any vanishing f0 factor forces 1.
    """
    _check_product_pair(p0, p1)
    tables = [_factor_tables(f0, f1) for f0, f1 in zip(p0.factors, p1.factors)]
    n = len(tables)
    moments = EMPTY_MOMENTS
    for chunk, count in chunk_plan(samples):
        gen = chunk_generator(seed, chunk)
        u = gen.random((count, n))
        log_ratio = np.zeros(count)
        force_zero = np.zeros(count, dtype=bool)
        force_one = np.zeros(count, dtype=bool)
        for i, tab in enumerate(tables):
            q = _inverse_cdf(tab.nodes, tab.cdf, u[:, i])
            a = np.interp(q, tab.nodes, tab.values0)
            b = np.interp(q, tab.nodes, tab.values1)
            force_zero |= (b == 0.0) & (a > 0.0)
            force_one |= (a == 0.0) & (b > 0.0)
            both = (a > 0.0) & (b > 0.0)
            term = np.zeros(count)
            term[both] = np.log(b[both] / a[both])
            log_ratio += term
        indicator = np.where(
            force_zero, 0.0, np.where(force_one, 1.0, (log_ratio > 0.0).astype(float))
        )
        moments = merge(moments, from_values(indicator))
    return estimate_from_moments(moments, seed)


def overlap_binary(b0: BinaryState, b1: BinaryState, probabilities: Sequence[float]) -> float:
    """Exact product rule for indicator-valued factors.

    probabilities[i] is the chance that subsystem i of a configuration drawn
    from b0 lands where b1's factor is the larger; independence across
    subsystems turns the joint overlap into a plain product.
    """
    if b0.system_count != b1.system_count or b0.system_count != len(probabilities):
        raise IncompatibleStatesError(
            f"system count mismatch: {b0.system_count}, {b1.system_count}, "
            f"{len(probabilities)}"
        )
    for p in probabilities:
        if not 0.0 <= p <= 1.0:
            raise InvalidParameterError(f"overlap probability {p} outside [0, 1]")
    return math.prod(probabilities)


def _unique_argmax(grid: GridFunction) -> int:
    values = grid.values
    top = values.max()
    candidates = np.flatnonzero(values >= top * (1.0 - 1e-12))
    if candidates.size != 1:
        raise AmbiguousMaximumError(
            f"{candidates.size} nodes tie for the maximum within 1e-12 relative"
        )
    return int(candidates[0])


class MaximaDistance(NamedTuple):
    distance: float
    per_factor: tuple[float, ...]


def maxima_distance(p0: ProductState, p1: ProductState) -> MaximaDistance:
    """Euclidean distance between the argmax nodes of two product states."""
    _check_product_pair(p0, p1)
    per_factor = []
    for f0, f1 in zip(p0.factors, p1.factors):
        i0 = _unique_argmax(f0)
        i1 = _unique_argmax(f1)
        per_factor.append(abs(i0 - i1) * f0.step)
    total = math.sqrt(sum(d * d for d in per_factor))
    return MaximaDistance(total, tuple(per_factor))


def ridge_value(f0: GridFunction, f1: GridFunction, n: int) -> tuple[float, float]:
    """Crossing of two factors between their maxima, and min(f0, f1)^n there.

    Along the line joining the maxima of two products of n identical factor
    copies, the pointwise minimum of the two product amplitudes peaks where
    the factors cross; its value there is the crossing amplitude to the
    n-th power. The crossing is located by bisection on the interpolated
    difference, to 1e-10 in q.
    """
    if n < 1:
        raise InvalidParameterError("power must be a positive integer")
    if not f0.same_grid(f1):
        raise IncompatibleGridsError("grid mismatch (start, step, or node count)")
    i0 = _unique_argmax(f0)
    i1 = _unique_argmax(f1)
    if i0 == i1:
        raise AmbiguousCrossingError("the two maxima coincide; no isolated crossing")
    lo_i, hi_i = sorted((i0, i1))
    diff = f0.values[lo_i : hi_i + 1] - f1.values[lo_i : hi_i + 1]
    signs = np.sign(diff)
    nonzero = np.flatnonzero(signs)
    flips = np.flatnonzero(signs[nonzero][1:] != signs[nonzero][:-1])
    if flips.size == 0:
        raise NoCrossingError("the factor difference keeps one sign between the maxima")
    if flips.size > 1:
        raise AmbiguousCrossingError(
            f"the factor difference changes sign {flips.size} times between the maxima"
        )
    nodes = f0.nodes
    a = nodes[lo_i + nonzero[flips[0]]]
    b = nodes[lo_i + nonzero[flips[0] + 1]]
    d_a = float(f0.evaluate(a) - f1.evaluate(a))
    while b - a > 1e-10:
        mid = 0.5 * (a + b)
        d_mid = float(f0.evaluate(mid) - f1.evaluate(mid))
        if d_mid == 0.0:
            a = b = mid
            break
        if (d_mid > 0.0) == (d_a > 0.0):
            a, d_a = mid, d_mid
        else:
            b = mid
    crossing = 0.5 * (a + b)
    return crossing, float(f0.evaluate(crossing)) ** n
