"""
src/linalg/states.py
--------------------
Rays in projective Hilbert space, ordered sequences of them and their Gram
matrices.

A ray is stored as a unit vector of complex128 amplitudes. Arrays held by the
types below are flagged read-only so values can be shared across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Sequence

import numpy as np

from src.linalg.errors import DimensionMismatchError, MalformedMatrixError

NORM_TOLERANCE = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _normalized_rows(rows: np.ndarray) -> np.ndarray:
    """Check a K×N complex array and scale rows whose norm is off by more than NORM_TOLERANCE."""
    if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
        raise ValueError(f"vectors must be a nonempty K x N array, got shape {rows.shape}")
    if not np.all(np.isfinite(rows)):
        raise MalformedMatrixError("state amplitudes must be finite")
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms == 0.0):
        raise MalformedMatrixError("the zero vector does not define a ray")
    off = np.abs(norms - 1.0) > NORM_TOLERANCE
    if np.any(off):
        rows[off] = rows[off] / norms[off, None]
    return rows


def interleave_complex(values: np.ndarray) -> List[float]:
    """Flatten complex values into [re0, im0, re1, im1, ...] float64 pairs."""
    flat = np.asarray(values, dtype=np.complex128).ravel()
    pairs = np.empty(2 * flat.size, dtype=np.float64)
    pairs[0::2] = flat.real
    pairs[1::2] = flat.imag
    return pairs.tolist()


def deinterleave_complex(pairs: Sequence[float]) -> np.ndarray:
    """Inverse of interleave_complex."""
    data = np.asarray(pairs, dtype=np.float64)
    if data.ndim != 1 or data.size % 2:
        raise MalformedMatrixError("interleaved complex data must be a flat list of (re, im) pairs")
    return data[0::2] + 1j * data[1::2]


@dataclass(frozen=True)
class ProjectiveState:
    """A normalized vector standing for the ray C·φ."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        vector = np.array(self.amplitudes, dtype=np.complex128).ravel()
        if vector.size < 1:
            raise ValueError("dim must be >= 1")
        object.__setattr__(self, "amplitudes", _frozen(_normalized_rows(vector[None, :])[0]))

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    @classmethod
    def from_amplitudes(cls, values: Sequence[complex]) -> "ProjectiveState":
        """Renormalize arbitrary nonzero finite amplitudes into a state."""
        return cls(np.asarray(values, dtype=np.complex128))

    @classmethod
    def basis(cls, dim: int, index: int) -> "ProjectiveState":
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} out of range for dim {dim}")
        vector = np.zeros(dim, dtype=np.complex128)
        vector[index] = 1.0
        return cls(vector)

    def inner(self, other: "ProjectiveState") -> complex:
        """⟨self, other⟩, conjugate-linear in the first slot."""
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} != {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def with_phase(self, phase: complex) -> "ProjectiveState":
        return ProjectiveState.from_amplitudes(self.amplitudes * phase)


@dataclass(frozen=True)
class StateSequence:
    """K states of a common dimension N, stored row-wise in a K×N array."""

    vectors: np.ndarray

    def __post_init__(self) -> None:
        rows = np.array(self.vectors, dtype=np.complex128)
        object.__setattr__(self, "vectors", _frozen(_normalized_rows(rows)))

    @classmethod
    def from_states(cls, states: Sequence[ProjectiveState]) -> "StateSequence":
        if len(states) < 1:
            raise ValueError("a state sequence needs at least one state")
        dims = {state.dim for state in states}
        if len(dims) != 1:
            raise DimensionMismatchError(f"dimension mismatch within sequence: {sorted(dims)}")
        return cls(np.vstack([state.amplitudes for state in states]))

    @classmethod
    def from_vectors(cls, vectors: np.ndarray) -> "StateSequence":
        """Wrap a K×N array, renormalizing each row."""
        return cls(vectors)

    @property
    def count(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def tau(self) -> float:
        return self.count / self.dim

    @property
    def states(self) -> List[ProjectiveState]:
        return list(self)

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, index: int) -> ProjectiveState:
        return ProjectiveState(self.vectors[index])

    def __iter__(self) -> Iterator[ProjectiveState]:
        for index in range(self.count):
            yield self[index]

    def permuted(self, order: Sequence[int]) -> "StateSequence":
        return StateSequence(self.vectors[np.asarray(order)])


@dataclass(frozen=True)
class GramMatrix:
    """K×K matrix of pairwise inner products ⟨φ(i), φ(j)⟩."""

    entries: np.ndarray

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def from_entries(cls, matrix: Sequence[Sequence[complex]]) -> "GramMatrix":
        """Wrap an explicit square matrix; Hermiticity is checked by the eigensolver."""
        entries = np.array(matrix, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise MalformedMatrixError(f"Gram matrix must be square and nonempty, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise MalformedMatrixError("Gram matrix entries must be finite")
        return cls(_frozen(entries))


def projective_distance(a: ProjectiveState, b: ProjectiveState) -> float:
    """
    Distance between the rays [a] and [b], computed as 2 - 2|⟨a, b⟩|.

    The closed form equals the squared norm inf_z ||a - z b||^2 over unit z; it is
    returned exactly as written, without taking a square root.
    """
    overlap = abs(a.inner(b))
    return float(min(max(2.0 - 2.0 * overlap, 0.0), 2.0))


def build_gram(seq: StateSequence) -> GramMatrix:
    """Gram matrix of a sequence: Hermitian by construction, unit diagonal."""
    vectors = seq.vectors
    gram = vectors.conj() @ vectors.T
    # exact conjugate symmetry: the mean of G and G† is Hermitian bit for bit
    gram = 0.5 * (gram + gram.conj().T)
    np.fill_diagonal(gram, np.real(np.diagonal(gram)))
    return GramMatrix(_frozen(gram))
