"""
Haar-uniform rays, sequences of independent rays and Haar-random unitaries.

Every draw is a pure function of (parameters, RngSeed). Substreams come from
numpy's SeedSequence spawn keys, so state j of a sequence or trial t of a run
does not depend on evaluation order or on the number of workers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from src.linalg.errors import MalformedMatrixError
from src.linalg.states import ProjectiveState, StateSequence

UINT64_MAX = 2 ** 64 - 1
UNITARY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class RngSeed:
    master: int
    stream: int = 0

    def __post_init__(self) -> None:
        for name in ("master", "stream"):
            value = getattr(self, name)
            if not 0 <= int(value) <= UINT64_MAX:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")

    def sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(int(self.master), spawn_key=(int(self.stream),))

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.sequence()))

    def child(self, index: int) -> "RngSeed":
        """Independent substream for item `index` (a sequence slot or a trial)."""
        derived = np.random.SeedSequence(int(self.master), spawn_key=(int(self.stream), int(index)))
        master = int(derived.generate_state(1, dtype=np.uint64)[0])
        return RngSeed(master=master, stream=int(index))


@dataclass(frozen=True)
class UnitaryMatrix:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def from_entries(cls, matrix: np.ndarray) -> "UnitaryMatrix":
        entries = np.array(matrix, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise MalformedMatrixError(f"unitary must be square and nonempty, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise MalformedMatrixError("unitary entries must be finite")
        deviation = np.max(np.abs(entries @ entries.conj().T - np.eye(entries.shape[0])))
        if deviation > UNITARY_TOLERANCE:
            raise MalformedMatrixError(f"matrix is not unitary (max |UU† - I| = {deviation:.3e})")
        entries.setflags(write=False)
        return cls(entries)


def _standard_complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sample_uniform_state(dim: int, seed: RngSeed) -> ProjectiveState:
    """Normalize N standard complex Gaussians; the resulting ray is Haar-uniform."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return ProjectiveState.from_amplitudes(_standard_complex_normal(seed.generator(), dim))


def sample_state_sequence(dim: int, count: int, seed: RngSeed) -> StateSequence:
    """K independent uniform rays; ray j is drawn from seed.child(j)."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if count < 1:
        raise ValueError("count must be >= 1")
    rows = np.empty((count, dim), dtype=np.complex128)
    for index in range(count):
        rows[index] = _standard_complex_normal(seed.child(index).generator(), dim)
    return StateSequence.from_vectors(rows)


def sample_haar_unitary(dim: int, seed: RngSeed) -> UnitaryMatrix:
    """
    Haar unitary from the QR factorization of a complex Ginibre matrix.

    Columns of Q are rescaled by the phases of diag(R) so that the triangular
    factor has positive real diagonal, which makes the QR map unique and the
    distribution of Q exactly Haar.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    ginibre = _standard_complex_normal(seed.generator(), (dim, dim)) / np.sqrt(2.0)
    q, r = scipy.linalg.qr(ginibre)
    diagonal = np.diagonal(r)
    q = q * (diagonal / np.abs(diagonal))
    return UnitaryMatrix.from_entries(q)
