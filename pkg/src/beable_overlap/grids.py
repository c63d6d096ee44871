"""Tabulated wave-function factors on uniform 1-D grids.

A GridFunction stores |psi(q)| at the nodes q_i = start + i*step and is kept
normalized so that the trapezoidal integral of its square is 1. Product
states are ordered tuples of such factors, one per beable subsystem. Binary
states record only the support fraction of each indicator-valued factor.

File format for import/export: a header line `# step=<s> nodes=<k>` followed
by two whitespace-separated columns (q, value), one node per line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    GridParseError,
    InvalidParameterError,
    NotNormalizedError,
)

NORM_TOLERANCE = 1e-8


def _trapezoid_norm_sq(values: np.ndarray, step: float) -> float:
    return float(np.trapezoid(values * values, dx=step))


@dataclass(frozen=True)
class GridFunction:
    """Non-negative amplitude samples on a uniform grid, unit L2 norm."""

    start: float
    step: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.step <= 0.0:
            raise InvalidParameterError("grid step must be positive")
        if values.ndim != 1 or values.size < 2:
            raise InvalidParameterError("a grid needs at least 2 nodes")
        if values.min() < 0.0:
            raise InvalidParameterError("amplitude values must be non-negative")
        norm_sq = _trapezoid_norm_sq(values, self.step)
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise NotNormalizedError(
                f"squared integral is {norm_sq!r}, further than {NORM_TOLERANCE} from 1"
            )

    @property
    def count(self) -> int:
        return self.values.size

    @property
    def nodes(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    def evaluate(self, q) -> np.ndarray:
        """Linear interpolation between nodes; zero outside the grid."""
        return np.interp(q, self.nodes, self.values, left=0.0, right=0.0)

    def same_grid(self, other: "GridFunction") -> bool:
        return (
            self.start == other.start
            and self.step == other.step
            and self.count == other.count
        )


def normalized_grid(start: float, step: float, values) -> GridFunction:
    """Build a GridFunction from raw non-negative samples, rescaling to unit norm."""
    values = np.asarray(values, dtype=float)
    norm_sq = _trapezoid_norm_sq(values, step)
    if norm_sq <= 0.0:
        raise InvalidParameterError("cannot normalize an identically zero table")
    return GridFunction(start, step, values / np.sqrt(norm_sq))


def grid_from_callable(start: float, step: float, count: int, fn) -> GridFunction:
    """Sample fn on the grid, clip negatives to zero, normalize."""
    q = start + step * np.arange(count)
    return normalized_grid(start, step, np.maximum(np.asarray(fn(q), dtype=float), 0.0))


def gaussian_density_amplitude(
    mean: float, variance: float, start: float, step: float, count: int
) -> GridFunction:
    """Amplitude whose square is the normal density with the given moments."""
    if variance <= 0.0:
        raise InvalidParameterError("variance must be positive")
    return grid_from_callable(
        start, step, count, lambda q: np.exp(-((q - mean) ** 2) / (4.0 * variance))
    )


def excited_mode_amplitude(start: float, step: float, count: int) -> GridFunction:
    """First excited oscillator amplitude magnitude, |q| exp(-q^2/2), normalized."""
    return grid_from_callable(start, step, count, lambda q: np.abs(q) * np.exp(-q * q / 2.0))


def boxcar_amplitude(
    start: float, step: float, count: int, support_start: float, support_end: float
) -> GridFunction:
    """Constant amplitude on [support_start, support_end), zero elsewhere."""
    if support_end <= support_start:
        raise InvalidParameterError("support must have positive width")
    return grid_from_callable(
        start, step, count, lambda q: ((q >= support_start) & (q < support_end)).astype(float)
    )


@dataclass(frozen=True)
class ProductState:
    """Ordered factors of a product wave function over independent subsystems."""

    factors: tuple[GridFunction, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise InvalidParameterError("a product state needs at least one factor")

    @property
    def system_count(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class BinaryState:
    """Support fractions of indicator-valued factors (each in (0, 1])."""

    support_fractions: tuple[float, ...]

    def __post_init__(self):
        fractions = tuple(float(p) for p in self.support_fractions)
        object.__setattr__(self, "support_fractions", fractions)
        for p in fractions:
            if not 0.0 < p <= 1.0:
                raise InvalidParameterError(f"support fraction {p} outside (0, 1]")

    @property
    def system_count(self) -> int:
        return len(self.support_fractions)


def write_grid_file(path, grid: GridFunction) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# step={grid.step:.17g} nodes={grid.count}\n")
        for q, v in zip(grid.nodes, grid.values):
            fh.write(f"{q:.17g} {v:.17g}\n")


def read_grid_file(path) -> GridFunction:
    """Parse a two-column grid file, renormalizing small norm drift.

    A squared-integral deviation below 1e-3 (e.g. from truncated decimals)
    is silently corrected; anything larger raises NotNormalizedError.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines or not lines[0].lstrip().startswith("#"):
        raise GridParseError("missing header line '# step=<s> nodes=<k>'", line=1)
    header = lines[0].lstrip("#").split()
    fields = dict(part.split("=", 1) for part in header if "=" in part)
    try:
        step = float(fields["step"])
        count = int(fields["nodes"])
    except (KeyError, ValueError):
        raise GridParseError("header must carry step=<s> and nodes=<k>", line=1) from None
    qs: list[float] = []
    vs: list[float] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        parts = text.split()
        if len(parts) != 2:
            raise GridParseError(f"expected 2 columns, got {len(parts)}", line=lineno)
        try:
            q, v = float(parts[0]), float(parts[1])
        except ValueError:
            raise GridParseError("non-numeric token", line=lineno) from None
        if v < 0.0:
            raise GridParseError(f"negative amplitude {v}", line=lineno)
        qs.append(q)
        vs.append(v)
    if len(vs) != count:
        raise GridParseError(f"header promises {count} nodes, file has {len(vs)}")
    values = np.array(vs)
    norm_sq = _trapezoid_norm_sq(values, step)
    if abs(norm_sq - 1.0) >= 1e-3:
        raise NotNormalizedError(
            f"squared integral {norm_sq!r} deviates from 1 by {abs(norm_sq - 1.0):.2e} (>= 1e-3)"
        )
    if abs(norm_sq - 1.0) > NORM_TOLERANCE:
        values = values / np.sqrt(norm_sq)
    return GridFunction(qs[0], step, values)
