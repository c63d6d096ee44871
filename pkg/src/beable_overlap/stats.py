"""Streaming moments, overlap estimates, and log-linear decay fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import InsufficientDataError, InvalidParameterError, InvalidPointError
from .sampling import SeedSpec


@dataclass(frozen=True)
class RunningMoments:
    """Count, mean and sum of squared deviations of a value stream."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @property
    def variance(self) -> float:
        """Sample variance (ddof=1); zero until two values are seen."""
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)

    @property
    def stderr(self) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count * (self.count - 1)))


EMPTY_MOMENTS = RunningMoments()


def accumulate(moments: RunningMoments, value: float) -> RunningMoments:
    """Single-observation Welford update."""
    count = moments.count + 1
    delta = value - moments.mean
    mean = moments.mean + delta / count
    m2 = moments.m2 + delta * (value - mean)
    return RunningMoments(count, mean, m2)


def merge(a: RunningMoments, b: RunningMoments) -> RunningMoments:
    """Combine moments of two disjoint streams (parallel merge formula)."""
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    count = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * (b.count / count)
    m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / count)
    return RunningMoments(count, mean, m2)


def from_values(values: np.ndarray) -> RunningMoments:
    """Moments of a whole block at once; the chunked estimators' workhorse."""
    values = np.asarray(values, dtype=float)
    n = values.size
    if n == 0:
        return EMPTY_MOMENTS
    mean = float(values.mean())
    m2 = float(((values - mean) ** 2).sum())
    return RunningMoments(n, mean, m2)


@dataclass(frozen=True)
class OverlapEstimate:
    """A Monte Carlo overlap estimate and the stream that produced it."""

    mean: float
    stderr: float
    samples: int
    seed: SeedSpec

    def __post_init__(self):
        if not -1e-9 <= self.mean <= 1.0 + 1e-9:
            raise InvalidParameterError(f"overlap mean {self.mean} outside [0, 1]")
        if self.stderr < 0.0:
            raise InvalidParameterError("standard error must be non-negative")
        if self.samples < 1:
            raise InvalidParameterError("sample count must be positive")


def estimate_from_moments(moments: RunningMoments, seed: SeedSpec) -> OverlapEstimate:
    return OverlapEstimate(moments.mean, moments.stderr, moments.count, seed)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    slope_stderr: float
    r_squared: float
    points_used: int


def fit_log_linear(points: Iterable[tuple[int, float, Optional[float]]]) -> FitResult:
    """Ordinary least squares of log(value) against n.

    Points are (n, value, value stderr) triples; the stderr entry is carried
    for the caller's bookkeeping and does not weight the fit. Values must be
    strictly positive. The slope standard error comes from the residuals;
    r squared is 0 for centered data with no spread.
    """
    pts = list(points)
    if len(pts) < 2:
        raise InsufficientDataError(f"need at least 2 points, got {len(pts)}")
    for n, value, _ in pts:
        if value <= 0.0:
            raise InvalidPointError(f"value at n={n} is not positive: {value}")
    x = np.array([float(n) for n, _, _ in pts])
    y = np.log(np.array([value for _, value, _ in pts]))
    k = len(pts)
    xbar = x.mean()
    ybar = y.mean()
    sxx = float(((x - xbar) ** 2).sum())
    if sxx == 0.0:
        raise InsufficientDataError("all points share one abscissa")
    slope = float(((x - xbar) * (y - ybar)).sum()) / sxx
    intercept = float(ybar) - slope * float(xbar)
    residuals = y - (intercept + slope * x)
    ss_res = float((residuals**2).sum())
    ss_tot = float(((y - ybar) ** 2).sum())
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 0.0
    slope_stderr = math.sqrt(ss_res / ((k - 2) * sxx)) if k > 2 else 0.0
    return FitResult(slope, intercept, slope_stderr, max(0.0, min(1.0, r_squared)), k)
