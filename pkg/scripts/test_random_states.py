"""
Tests for seeded sampling of Haar-uniform rays and unitaries.
"""

import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest
from scipy.stats import ks_2samp

from src.linalg.errors import MalformedMatrixError
from src.linalg.spectrum import hermitian_spectrum, rank_and_zero_count
from src.linalg.states import build_gram
from src.sampling.random_states import (
    UINT64_MAX,
    RngSeed,
    UnitaryMatrix,
    sample_haar_unitary,
    sample_state_sequence,
    sample_uniform_state,
)


def _standard_error_check(samples, expected):
    mean = np.mean(samples)
    error = np.std(samples, ddof=1) / np.sqrt(len(samples))
    assert abs(mean - expected) <= 3.0 * error


def test_seed_validation():
    with pytest.raises(ValueError):
        RngSeed(-1)
    with pytest.raises(ValueError):
        RngSeed(UINT64_MAX + 1)
    assert RngSeed(UINT64_MAX).child(3).stream == 3


def test_child_streams_are_distinct_and_stable():
    root = RngSeed(42)
    assert root.child(0) == RngSeed(42).child(0)
    assert root.child(0) != root.child(1)
    assert root.child(0).generator().random() != root.child(1).generator().random()


def test_dimension_one_state_is_a_phase():
    for master in range(10):
        state = sample_uniform_state(1, RngSeed(master))
        assert abs(state.amplitudes[0]) == pytest.approx(1.0, abs=1e-12)


def test_component_weight_mean_is_one_over_n():
    e1 = np.array([1.0, 0.0])
    weights = [abs(np.vdot(e1, sample_uniform_state(2, RngSeed(m)).amplitudes)) ** 2 for m in range(4000)]
    _standard_error_check(weights, 0.5)


def test_overlap_of_independent_states():
    root = RngSeed(7)
    overlaps = []
    for pair in range(10000):
        seed = root.child(pair)
        phi = sample_uniform_state(100, seed.child(0))
        psi = sample_uniform_state(100, seed.child(1))
        overlaps.append(abs(phi.inner(psi)) ** 2)
    _standard_error_check(overlaps, 0.01)


def test_sequence_is_deterministic():
    first = sample_state_sequence(50, 100, RngSeed(9))
    second = sample_state_sequence(50, 100, RngSeed(9))
    assert np.array_equal(first.vectors, second.vectors)
    assert not np.array_equal(first.vectors, sample_state_sequence(50, 100, RngSeed(10)).vectors)


def test_single_state_sequence_matches_single_draw():
    seed = RngSeed(123)
    seq = sample_state_sequence(6, 1, seed)
    assert np.array_equal(seq[0].amplitudes, sample_uniform_state(6, seed.child(0)).amplitudes)


def test_sequence_prefix_is_stable():
    short = sample_state_sequence(8, 5, RngSeed(4))
    long = sample_state_sequence(8, 12, RngSeed(4))
    assert np.array_equal(short.vectors, long.vectors[:5])


def test_rank_bound_at_twice_the_dimension():
    spectrum = hermitian_spectrum(build_gram(sample_state_sequence(50, 100, RngSeed(1))))
    assert rank_and_zero_count(spectrum)[1] == 50


def test_invalid_sizes_rejected():
    with pytest.raises(ValueError):
        sample_uniform_state(0, RngSeed(0))
    with pytest.raises(ValueError):
        sample_state_sequence(3, 0, RngSeed(0))
    with pytest.raises(ValueError):
        sample_haar_unitary(0, RngSeed(0))


def test_haar_unitary_is_unitary():
    for dim in (1, 2, 5, 32):
        u = sample_haar_unitary(dim, RngSeed(dim)).entries
        assert np.allclose(u @ u.conj().T, np.eye(dim), atol=1e-12)
        assert np.linalg.norm(u[:, 0]) == pytest.approx(1.0, abs=1e-12)
    assert abs(sample_haar_unitary(1, RngSeed(0)).entries[0, 0]) == pytest.approx(1.0, abs=1e-12)


def test_unitary_validation():
    with pytest.raises(MalformedMatrixError):
        UnitaryMatrix.from_entries(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(MalformedMatrixError):
        UnitaryMatrix.from_entries(np.ones((2, 3)))


def test_unitary_preserves_state_distribution():
    u = sample_haar_unitary(4, RngSeed(99)).entries
    root = RngSeed(100)
    plain, rotated = [], []
    for draw in range(10000):
        plain.append(abs(sample_uniform_state(4, root.child(2 * draw)).amplitudes[0]) ** 2)
        state = sample_uniform_state(4, root.child(2 * draw + 1))
        rotated.append(abs((u @ state.amplitudes)[0]) ** 2)
    assert ks_2samp(plain, rotated).pvalue > 0.01


def run_all_tests():
    """Run all test suites."""
    for name, func in sorted(globals().items()):
        if name.startswith("test_") and callable(func):
            func()
            print(f"✓ {name}")


if __name__ == "__main__":
    run_all_tests()
