"""
src/linalg/spectrum.py
----------------------
Hermitian eigensolve of Gram matrices and the empirical spectral measure
(1/K) Σ δ(λ - γ_j) built from the eigenvalues.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.linalg.errors import MalformedMatrixError
from src.linalg.states import GramMatrix

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-10
# relative to K: eigenvalues below ZERO_THRESHOLD * K are exact zeros
ZERO_THRESHOLD = 1e-10
PSD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SpectralMeasure:
    """Eigenvalues sorted descending, with empirical-distribution helpers."""

    eigenvalues: np.ndarray

    @classmethod
    def from_values(cls, values: Sequence[float], scale: Optional[int] = None) -> "SpectralMeasure":
        """
        Sort, check and clamp eigenvalues from any source.

        `scale` is the Gram size K the thresholds are relative to; it defaults to
        the number of values, which is right for a single spectrum. Values below
        -PSD_TOLERANCE·K are rejected and values below ZERO_THRESHOLD·K become 0.
        """
        data = np.asarray(values, dtype=np.float64).ravel()
        if data.size < 1:
            raise ValueError("a spectral measure needs at least one eigenvalue")
        if not np.all(np.isfinite(data)):
            raise MalformedMatrixError("eigenvalues must be finite")
        size = data.size if scale is None else scale
        lowest = float(data.min())
        if lowest < -PSD_TOLERANCE * size:
            raise MalformedMatrixError(f"eigenvalue {lowest:.3e} is negative beyond tolerance for K={size}")
        data = np.sort(np.where(data < ZERO_THRESHOLD * size, 0.0, data))[::-1].copy()
        data.setflags(write=False)
        return cls(data)

    @property
    def count(self) -> int:
        return int(self.eigenvalues.size)

    def ascending(self) -> np.ndarray:
        return self.eigenvalues[::-1]

    def mean(self) -> float:
        return float(np.mean(self.eigenvalues))

    def moment(self, order: int) -> float:
        return float(np.mean(self.eigenvalues ** order))

    def empirical_cdf(self, x: float) -> float:
        """Fraction of eigenvalues <= x."""
        return float(np.searchsorted(self.ascending(), x, side="right")) / self.count


def _checked_hermitian(g: GramMatrix) -> np.ndarray:
    entries = g.entries
    asymmetry = np.max(np.abs(entries - entries.conj().T)) if entries.size else 0.0
    if asymmetry > HERMITIAN_TOLERANCE:
        raise MalformedMatrixError(f"matrix is not Hermitian (max asymmetry {asymmetry:.3e})")
    return entries


def hermitian_eigensystem(g: GramMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Raw ascending eigenvalues and eigenvectors; internal and test use only."""
    return scipy.linalg.eigh(_checked_hermitian(g))


def hermitian_spectrum(g: GramMatrix) -> SpectralMeasure:
    """
    All K eigenvalues of a Gram matrix, sorted descending.

    Eigenvalues below ZERO_THRESHOLD·K are clamped to exactly 0; the atom of the
    limit law is a rank deficiency, which LAPACK returns as O(eps·||G||) noise.
    """
    entries = _checked_hermitian(g)
    size = g.size
    raw = scipy.linalg.eigh(entries, eigvals_only=True)
    if raw[0] < -PSD_TOLERANCE * size:
        logger.warning("Gram spectrum below PSD tolerance: min eigenvalue %.3e for K=%s", raw[0], size)
    # already reported; from_values would reject it
    return SpectralMeasure.from_values(np.maximum(raw, 0.0))


def rank_and_zero_count(s: SpectralMeasure) -> Tuple[int, int]:
    zeros = int(np.count_nonzero(s.eigenvalues == 0.0))
    return s.count - zeros, zeros
