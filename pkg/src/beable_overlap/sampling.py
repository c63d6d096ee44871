"""Deterministic sampling of random states and cube points.

Uniform states on the real unit sphere are drawn by normalizing independent
standard normals; complex states normalize 2N normals and pair them into
moduli. Cube points are coordinatewise uniform on [-1, 1].

Reproducibility contract: every draw is addressed by (master seed, stream
index, chunk index). Chunk c of a stream is generated by a counter-based
Philox generator keyed with SeedSequence((master, stream, c)), so any part
of a sample stream can be regenerated in isolation. Estimators consume
fixed-size chunks in index order, which makes results independent of how
work is distributed over threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .errors import InvalidDimensionError, InvalidParameterError

CHUNK_SAMPLES = 4096


class StateKind(Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class SeedSpec:
    """Address of one deterministic sample stream."""

    master: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.master < 2**64:
            raise InvalidParameterError("master seed must fit in 64 unsigned bits")
        if self.stream < 0:
            raise InvalidParameterError("stream index must be non-negative")

    def with_stream(self, stream: int) -> "SeedSpec":
        return SeedSpec(self.master, stream)


@dataclass(frozen=True)
class StateVector:
    """Unit-norm state with real or complex amplitudes."""

    amplitudes: np.ndarray
    kind: StateKind

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidDimensionError("amplitudes must be a non-empty 1-D sequence")
        norm_sq = float((np.abs(amps) ** 2).sum())
        if abs(norm_sq - 1.0) > 1e-12:
            raise InvalidParameterError(f"state norm^2 deviates from 1 by {norm_sq - 1.0:.3e}")

    @property
    def dimension(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class CubePoint:
    """A raw integration point in the cube [-1, 1]^N (not normalized)."""

    coordinates: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coordinates, dtype=float)
        object.__setattr__(self, "coordinates", coords)
        if coords.ndim != 1 or coords.size == 0:
            raise InvalidDimensionError("coordinates must be a non-empty 1-D sequence")
        if np.abs(coords).max() > 1.0:
            raise InvalidParameterError("cube coordinates must lie in [-1, 1]")

    @property
    def dimension(self) -> int:
        return self.coordinates.size


def chunk_generator(seed: SeedSpec, chunk: int) -> np.random.Generator:
    """Generator for one chunk of one stream; pure function of its arguments."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=(seed.master, seed.stream, chunk)))
    )


def chunk_plan(samples: int) -> Iterator[tuple[int, int]]:
    """Yield (chunk index, chunk size) pairs covering `samples` draws."""
    if samples < 1:
        raise InvalidParameterError("sample count must be positive")
    full, rest = divmod(samples, CHUNK_SAMPLES)
    for c in range(full):
        yield c, CHUNK_SAMPLES
    if rest:
        yield full, rest


def _check_dimension(n: int):
    if n < 1:
        raise InvalidDimensionError(f"dimension must be at least 1, got {n}")


def real_amplitude_block(gen: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """(count, dim) block of unit-norm real amplitude vectors."""
    g = gen.standard_normal((count, dim))
    g /= np.sqrt((g * g).sum(axis=1, keepdims=True))
    return g


def complex_amplitude_block(gen: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """(count, dim) block of unit-norm complex amplitude vectors.

    The 2*dim underlying real components are uniform on the unit sphere, so
    the sum of the dim squared moduli is exactly 1.
    """
    g = gen.standard_normal((count, 2 * dim))
    g /= np.sqrt((g * g).sum(axis=1, keepdims=True))
    return g[:, 0::2] + 1j * g[:, 1::2]


def cube_block(gen: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """(count, dim) block of coordinatewise uniform [-1, 1] points."""
    return gen.uniform(-1.0, 1.0, (count, dim))


def sample_real_state(n: int, seed: SeedSpec) -> StateVector:
    """One state uniformly distributed on the real unit sphere."""
    _check_dimension(n)
    amps = real_amplitude_block(chunk_generator(seed, 0), 1, n)[0]
    return StateVector(amps, StateKind.REAL)


def sample_complex_state(n: int, seed: SeedSpec) -> StateVector:
    """One complex state whose 2n real components are uniform on the sphere."""
    _check_dimension(n)
    amps = complex_amplitude_block(chunk_generator(seed, 0), 1, n)[0]
    return StateVector(amps, StateKind.COMPLEX)


def sample_cube_point(n: int, seed: SeedSpec) -> CubePoint:
    """One point uniform on [-1, 1]^n."""
    _check_dimension(n)
    return CubePoint(cube_block(chunk_generator(seed, 0), 1, n)[0])
