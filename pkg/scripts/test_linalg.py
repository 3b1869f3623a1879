"""
Tests for rays, Gram matrices and Hermitian spectra.

Covers:
- projective distance on known pairs
- Gram construction (orthonormal, repeated, two-vector cases)
- eigenvalues, rank and zero counts, residual bound
- order and phase invariance of sorted spectra
"""

import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest

from src.linalg.errors import DimensionMismatchError, MalformedMatrixError
from src.linalg.spectrum import (
    SpectralMeasure,
    hermitian_eigensystem,
    hermitian_spectrum,
    rank_and_zero_count,
)
from src.linalg.states import (
    GramMatrix,
    ProjectiveState,
    StateSequence,
    build_gram,
    deinterleave_complex,
    interleave_complex,
    projective_distance,
)
from src.sampling.random_states import RngSeed, sample_state_sequence


def _basis(dim, index):
    return ProjectiveState.basis(dim, index)


def test_projective_distance():
    """Known distances between rays."""
    e1, e2 = _basis(2, 0), _basis(2, 1)
    diagonal = ProjectiveState.from_amplitudes([1.0, 1.0])

    test_cases = [
        (e1, e1, 0.0),
        (e1, e1.with_phase(np.exp(0.7j)), 0.0),
        (e1, e2, 2.0),
        (e1, diagonal, 2.0 - np.sqrt(2.0)),
    ]
    for a, b, expected in test_cases:
        assert projective_distance(a, b) == pytest.approx(expected, abs=1e-12)
        assert projective_distance(b, a) == pytest.approx(expected, abs=1e-12)


def test_projective_distance_rejects_mixed_dimensions():
    with pytest.raises(DimensionMismatchError):
        projective_distance(_basis(2, 0), _basis(3, 0))


def test_state_construction_renormalizes():
    state = ProjectiveState.from_amplitudes([3.0, 4.0j])
    assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-15)
    assert state.amplitudes[0] == pytest.approx(0.6)

    with pytest.raises(MalformedMatrixError):
        ProjectiveState.from_amplitudes([0.0, 0.0])
    with pytest.raises(MalformedMatrixError):
        ProjectiveState.from_amplitudes([np.nan, 1.0])
    with pytest.raises(ValueError):
        ProjectiveState.from_amplitudes([])


def test_bare_constructors_normalize_and_freeze():
    raw = np.array([3.0, 4.0])
    state = ProjectiveState(raw)
    assert state.amplitudes.tolist() == pytest.approx([0.6, 0.8])
    assert raw.tolist() == [3.0, 4.0]
    with pytest.raises(ValueError):
        state.amplitudes[0] = 1.0

    seq = StateSequence(np.array([[3.0, 4.0], [0.0, 2.0]]))
    assert np.allclose(np.diagonal(build_gram(seq).entries), 1.0, atol=1e-15)
    assert hermitian_spectrum(build_gram(seq)).mean() == pytest.approx(1.0, abs=1e-12)
    assert not seq.vectors.flags.writeable

    test_cases = [
        np.array([[1.0, 0.0], [0.0, 0.0]]),
        np.array([[1.0, np.nan], [0.0, 1.0]]),
        np.array([[np.inf, 0.0]]),
    ]
    for rows in test_cases:
        with pytest.raises(MalformedMatrixError):
            StateSequence(rows)
    with pytest.raises(MalformedMatrixError):
        ProjectiveState(np.zeros(3))
    with pytest.raises(ValueError):
        StateSequence(np.ones(3))


def test_interleaved_storage_is_exact():
    values = np.array([0.1 + 0.2j, -3.5e-300 + 1j, np.pi - np.e * 1j])
    pairs = interleave_complex(values)
    assert pairs[:2] == [0.1, 0.2]
    assert np.array_equal(deinterleave_complex(pairs), values)
    with pytest.raises(MalformedMatrixError):
        deinterleave_complex([1.0, 2.0, 3.0])


def test_gram_of_orthonormal_vectors_is_identity():
    seq = StateSequence.from_states([_basis(4, j) for j in range(4)])
    assert np.allclose(build_gram(seq).entries, np.eye(4))


def test_gram_of_repeated_vector_is_all_ones():
    state = ProjectiveState.from_amplitudes([1.0, 2.0j, -1.0])
    seq = StateSequence.from_states([state] * 5)
    assert np.allclose(build_gram(seq).entries, np.ones((5, 5)), atol=1e-14)


def test_gram_of_two_vectors():
    a = _basis(2, 0)
    b = ProjectiveState.from_amplitudes([0.6, 0.8j])
    gram = build_gram(StateSequence.from_states([a, b])).entries
    c = a.inner(b)
    assert gram[0, 1] == pytest.approx(c)
    assert gram[1, 0] == pytest.approx(np.conj(c))
    assert np.allclose(np.diagonal(gram), 1.0)


def test_gram_is_exactly_hermitian():
    seq = sample_state_sequence(7, 11, RngSeed(3))
    gram = build_gram(seq).entries
    assert np.array_equal(gram, gram.conj().T)
    assert np.all(np.imag(np.diagonal(gram)) == 0.0)


def test_sequence_rejects_mixed_dimensions():
    with pytest.raises(DimensionMismatchError):
        StateSequence.from_states([_basis(2, 0), _basis(3, 0)])


def test_spectrum_examples():
    """Spectra of identity, all-ones and 2x2 overlap matrices."""
    c = 0.3 - 0.4j
    test_cases = [
        (np.eye(4), [1.0, 1.0, 1.0, 1.0]),
        (np.ones((4, 4)), [4.0, 0.0, 0.0, 0.0]),
        (np.array([[1.0, c], [np.conj(c), 1.0]]), [1.0 + abs(c), 1.0 - abs(c)]),
    ]
    for matrix, expected in test_cases:
        spectrum = hermitian_spectrum(GramMatrix.from_entries(matrix))
        assert np.allclose(spectrum.eigenvalues, expected, atol=1e-12)


def test_spectrum_is_descending():
    spectrum = hermitian_spectrum(build_gram(sample_state_sequence(5, 9, RngSeed(8))))
    assert np.all(np.diff(spectrum.eigenvalues) <= 0.0)


def test_spectrum_rejects_non_hermitian_matrix():
    with pytest.raises(MalformedMatrixError):
        hermitian_spectrum(GramMatrix.from_entries([[1.0, 0.5], [0.2, 1.0]]))
    with pytest.raises(MalformedMatrixError):
        GramMatrix.from_entries([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def test_rank_and_zero_count():
    test_cases = [
        (np.eye(6), (6, 0)),
        (np.ones((5, 5)), (1, 4)),
    ]
    for matrix, expected in test_cases:
        assert rank_and_zero_count(hermitian_spectrum(GramMatrix.from_entries(matrix))) == expected

    spectrum = hermitian_spectrum(build_gram(sample_state_sequence(50, 100, RngSeed(11))))
    assert rank_and_zero_count(spectrum) == (50, 50)


def test_eigensystem_residual():
    gram = build_gram(sample_state_sequence(12, 20, RngSeed(5)))
    values, vectors = hermitian_eigensystem(gram)
    norm = np.linalg.norm(gram.entries, 2)
    for index in range(gram.size):
        residual = gram.entries @ vectors[:, index] - values[index] * vectors[:, index]
        assert np.linalg.norm(residual) <= 1e-10 * max(1.0, norm)


def test_raw_spectrum_respects_psd_tolerance():
    for dim, count in [(8, 4), (16, 16), (20, 60)]:
        for seed in range(3):
            values, _ = hermitian_eigensystem(build_gram(sample_state_sequence(dim, count, RngSeed(seed))))
            assert values.min() >= -1e-9 * count


def test_trace_identity():
    for seed in range(5):
        spectrum = hermitian_spectrum(build_gram(sample_state_sequence(16, 24, RngSeed(seed))))
        assert spectrum.mean() == pytest.approx(1.0, abs=1e-9)


def test_spectrum_invariant_under_order_and_phases():
    rng = np.random.default_rng(2024)
    for trial in range(200):
        dim = int(rng.integers(1, 8))
        count = int(rng.integers(1, 12))
        seq = sample_state_sequence(dim, count, RngSeed(trial))
        reference = hermitian_spectrum(build_gram(seq)).eigenvalues

        shuffled = seq.permuted(rng.permutation(count))
        phases = np.exp(2j * np.pi * rng.random(count))
        rephased = StateSequence.from_vectors(seq.vectors * phases[:, None])

        assert np.allclose(hermitian_spectrum(build_gram(shuffled)).eigenvalues, reference, atol=1e-9)
        assert np.allclose(hermitian_spectrum(build_gram(rephased)).eigenvalues, reference, atol=1e-9)


def test_spectral_measure_helpers():
    measure = SpectralMeasure.from_values([0.0, 2.0, 1.0, 1.0])
    assert measure.eigenvalues.tolist() == [2.0, 1.0, 1.0, 0.0]
    assert measure.moment(2) == pytest.approx(1.5)
    assert measure.empirical_cdf(1.0) == pytest.approx(0.75)
    assert measure.empirical_cdf(-0.1) == 0.0


def test_spectral_measure_clamps_external_values():
    """Values from other eigensolvers get the same zero threshold as hermitian_spectrum."""
    external = SpectralMeasure.from_values(np.linalg.eigvalsh(np.ones((10, 10))))
    assert rank_and_zero_count(external) == (1, 9)
    assert external.eigenvalues[0] == pytest.approx(10.0)

    assert SpectralMeasure.from_values([1.0, -1e-12, 3e-11]).eigenvalues.tolist() == [1.0, 0.0, 0.0]
    assert SpectralMeasure.from_values([1.5e-10, 1.0]).eigenvalues.tolist() == [1.0, 0.0]
    assert SpectralMeasure.from_values([1.5e-10, 1.0], scale=1).eigenvalues.tolist() == [1.0, 1.5e-10]

    with pytest.raises(MalformedMatrixError):
        SpectralMeasure.from_values([-5.0, 1.0])
    with pytest.raises(MalformedMatrixError):
        SpectralMeasure.from_values([1.0, np.inf])


def run_all_tests():
    """Run all test suites."""
    for name, func in sorted(globals().items()):
        if name.startswith("test_") and callable(func):
            func()
            print(f"✓ {name}")


if __name__ == "__main__":
    run_all_tests()
