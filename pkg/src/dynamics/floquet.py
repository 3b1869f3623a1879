"""
src/dynamics/floquet.py
-----------------------
Kicked (discrete-time) quantum evolution p -> u p.

build_phase_kick_operator supplies a generic two-layer model
    u = D2 · F† · D1 · F
with F the unitary DFT, D1 = diag(exp(i·kick·v(j))) and
D2 = diag(exp(i·rotation·w(j))), where by default
    v(j) = cos(2πj/N)      (kick profile)
    w(j) = j(j+1)/N        (rotation profile)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.fft

from src.linalg.errors import DimensionMismatchError
from src.linalg.states import ProjectiveState, StateSequence
from src.sampling.random_states import UnitaryMatrix

PhaseProfile = Callable[[np.ndarray, int], np.ndarray]


def cosine_kick_profile(index: np.ndarray, dim: int) -> np.ndarray:
    return np.cos(2.0 * np.pi * index / dim)


def quadratic_rotation_profile(index: np.ndarray, dim: int) -> np.ndarray:
    return index * (index + 1.0) / dim


@dataclass(frozen=True)
class FloquetOperator:
    unitary: UnitaryMatrix

    @property
    def dim(self) -> int:
        return self.unitary.dim

    @classmethod
    def from_unitary(cls, matrix: np.ndarray) -> "FloquetOperator":
        return cls(UnitaryMatrix.from_entries(matrix))


def default_steps(tau: float, dim: int) -> int:
    """K = ceil(tau·N); the product is rounded first so 1.0·256 stays 256."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    return max(1, int(math.ceil(round(tau * dim, 9))))


def evolve_sequence(op: FloquetOperator, initial: ProjectiveState, steps: int) -> StateSequence:
    """(p0, u p0, ..., u^{K-1} p0), renormalizing after every step."""
    if op.dim != initial.dim:
        raise DimensionMismatchError(f"dimension mismatch: operator {op.dim} != state {initial.dim}")
    if steps < 1:
        raise ValueError("steps must be >= 1")

    u = op.unitary.entries
    rows = np.empty((steps, initial.dim), dtype=np.complex128)
    current = np.array(initial.amplitudes)
    rows[0] = current
    for step in range(1, steps):
        current = u @ current
        current /= np.linalg.norm(current)
        rows[step] = current
    return StateSequence.from_vectors(rows)


def build_phase_kick_operator(
    dim: int,
    kick_strength: float,
    rotation: float,
    kick_profile: Optional[PhaseProfile] = None,
    rotation_profile: Optional[PhaseProfile] = None,
) -> FloquetOperator:
    if dim < 2:
        raise ValueError("dim must be >= 2 for the phase-kick model")
    kick_profile = kick_profile or cosine_kick_profile
    rotation_profile = rotation_profile or quadratic_rotation_profile

    index = np.arange(dim, dtype=np.float64)
    kick_phases = np.exp(1j * kick_strength * kick_profile(index, dim))
    rotation_phases = np.exp(1j * rotation * rotation_profile(index, dim))

    # columns of F are the DFT of the basis vectors
    fourier = scipy.fft.fft(np.eye(dim), axis=0, norm="ortho")
    kicked = kick_phases[:, None] * fourier
    matrix = rotation_phases[:, None] * scipy.fft.ifft(kicked, axis=0, norm="ortho")
    return FloquetOperator.from_unitary(matrix)
