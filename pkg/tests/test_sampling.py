"""Sampler distribution checks and determinism contracts."""

import numpy as np
import pytest

from beable_overlap.errors import InvalidDimensionError, InvalidParameterError
from beable_overlap.sampling import (
    CHUNK_SAMPLES,
    SeedSpec,
    StateKind,
    chunk_generator,
    chunk_plan,
    complex_amplitude_block,
    cube_block,
    real_amplitude_block,
    sample_complex_state,
    sample_cube_point,
    sample_real_state,
)

SEED = SeedSpec(0, 0)


def _real_block(samples, n, seed=SEED):
    parts = [
        real_amplitude_block(chunk_generator(seed, chunk), count, n)
        for chunk, count in chunk_plan(samples)
    ]
    return np.concatenate(parts)


def test_seed_spec_validation():
    with pytest.raises(InvalidParameterError):
        SeedSpec(-1, 0)
    with pytest.raises(InvalidParameterError):
        SeedSpec(2**64, 0)
    with pytest.raises(InvalidParameterError):
        SeedSpec(0, -1)
    assert SeedSpec(3, 1).with_stream(7) == SeedSpec(3, 7)


def test_chunk_plan_covers_exactly():
    plan = list(chunk_plan(3 * CHUNK_SAMPLES + 17))
    assert sum(count for _, count in plan) == 3 * CHUNK_SAMPLES + 17
    assert all(count <= CHUNK_SAMPLES for _, count in plan)
    assert [chunk for chunk, _ in plan] == list(range(len(plan)))
    with pytest.raises(InvalidParameterError):
        list(chunk_plan(0))


def test_one_dimensional_real_state_is_a_sign():
    for stream in range(8):
        state = sample_real_state(1, SeedSpec(0, stream))
        assert state.amplitudes[0] in (1.0, -1.0)


def test_real_state_norm_and_kind():
    state = sample_real_state(4, SEED)
    assert state.kind is StateKind.REAL
    assert abs(np.sum(state.amplitudes**2) - 1.0) < 1e-12


def test_invalid_dimension_rejected():
    for factory in (sample_real_state, sample_complex_state, sample_cube_point):
        with pytest.raises(InvalidDimensionError):
            factory(0, SEED)


def test_real_coordinate_second_moment():
    # Uniform measure on the sphere puts mean squared mass 1/N on each axis.
    n = 16
    block = _real_block(100_000, n)
    squares = block[:, 0] ** 2
    se = squares.std(ddof=1) / np.sqrt(squares.size)
    assert abs(squares.mean() - 1.0 / n) < 5 * se


def test_real_coordinate_sign_symmetry():
    block = _real_block(100_000, 8)
    first = block[:, 0]
    se = first.std(ddof=1) / np.sqrt(first.size)
    assert abs(first.mean()) < 5 * se


def test_coordinate_exchangeability():
    block = _real_block(100_000, 8)
    a = block[:, 0] ** 2
    b = block[:, 5] ** 2
    se = np.hypot(a.std(ddof=1), b.std(ddof=1)) / np.sqrt(a.size)
    assert abs(a.mean() - b.mean()) < 5 * se


def test_one_dimensional_complex_state_has_unit_modulus():
    state = sample_complex_state(1, SEED)
    assert abs(abs(state.amplitudes[0]) - 1.0) < 1e-12


def test_complex_state_reproducible():
    a = sample_complex_state(8, SeedSpec(42, 3))
    b = sample_complex_state(8, SeedSpec(42, 3))
    assert np.array_equal(a.amplitudes, b.amplitudes)
    c = sample_complex_state(8, SeedSpec(42, 4))
    assert not np.array_equal(a.amplitudes, c.amplitudes)


def test_complex_first_modulus_mean():
    n = 8
    parts = [
        np.abs(complex_amplitude_block(chunk_generator(SEED, chunk), count, n)) ** 2
        for chunk, count in chunk_plan(100_000)
    ]
    block = np.concatenate(parts)
    first = block[:, 0]
    se = first.std(ddof=1) / np.sqrt(first.size)
    assert abs(first.mean() - 1.0 / n) < 5 * se
    # moduli of each state sum to 1, so the pooled mean is 1/n exactly
    assert abs(block.mean() - 1.0 / n) < 1e-12


def test_cube_point_range_and_moments():
    point = sample_cube_point(6, SEED)
    assert np.all(np.abs(point.coordinates) <= 1.0)
    gen = chunk_generator(SEED, 1)
    block = cube_block(gen, 100_000, 2)
    se = block[:, 0].std(ddof=1) / np.sqrt(block.shape[0])
    assert abs(block[:, 0].mean()) < 5 * se
    squares = block[:, 1] ** 2
    se2 = squares.std(ddof=1) / np.sqrt(squares.size)
    assert abs(squares.mean() - 1.0 / 3.0) < 5 * se2


def test_streams_are_independent_of_block_layout():
    # pulling the same chunks in any grouping yields the same numbers
    whole = _real_block(3 * CHUNK_SAMPLES, 4)
    refetched = _real_block(3 * CHUNK_SAMPLES, 4)
    assert np.array_equal(whole, refetched)
    third = real_amplitude_block(chunk_generator(SEED, 2), CHUNK_SAMPLES, 4)
    assert np.array_equal(whole[2 * CHUNK_SAMPLES :], third)
