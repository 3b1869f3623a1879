"""Compare an empirical Gram spectrum against the limit law μ_τ."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict, Tuple

import numpy as np

from src.linalg.spectrum import SpectralMeasure, rank_and_zero_count
from src.reference.mp_law import MPLaw, mp_cdf, mp_quantiles

NEAR_ZERO = 0.1


@dataclass(frozen=True)
class FitReport:
    tau: float
    count: int
    ks_distance: float
    wasserstein1: float
    atom_fraction_empirical: float
    support_observed: Tuple[float, float]
    moments_empirical: Tuple[float, float, float]

    def as_dict(self) -> Dict[str, object]:
        payload = asdict(self)
        payload["support_observed"] = list(self.support_observed)
        payload["moments_empirical"] = list(self.moments_empirical)
        return payload


def ks_distance(s: SpectralMeasure, law: MPLaw) -> float:
    """
    sup_x |F_emp(x) - F(x)| against the mixed CDF (atom + density).

    Both CDFs are checked at every distinct eigenvalue from the right and from
    the left; F jumps only at 0, where its left limit is 0.
    """
    values, counts = np.unique(s.ascending(), return_counts=True)
    cumulative = np.cumsum(counts)
    right_emp = cumulative / s.count
    left_emp = (cumulative - counts) / s.count
    right_law = np.array([mp_cdf(law, float(value)) for value in values])
    left_law = np.where(values == 0.0, 0.0, right_law)
    distance = max(np.max(np.abs(right_emp - right_law)), np.max(np.abs(left_emp - left_law)))
    return float(min(max(distance, 0.0), 1.0))


def wasserstein1(s: SpectralMeasure, law: MPLaw) -> float:
    """Mean |empirical quantile - law quantile| over the K midpoint levels (i - 1/2)/K."""
    levels = (np.arange(s.count) + 0.5) / s.count
    return float(np.mean(np.abs(s.ascending() - mp_quantiles(law, levels))))


def fit_spectrum(s: SpectralMeasure, law: MPLaw) -> FitReport:
    _, zeros = rank_and_zero_count(s)
    positive = s.eigenvalues[s.eigenvalues > 0.0]
    support = (float(positive.min()) if positive.size else 0.0, float(s.eigenvalues.max()))
    return FitReport(
        tau=law.tau,
        count=s.count,
        ks_distance=ks_distance(s, law),
        wasserstein1=wasserstein1(s, law),
        atom_fraction_empirical=zeros / s.count,
        support_observed=support,
        moments_empirical=(s.moment(1), s.moment(2), s.moment(3)),
    )


def support_length_entropy(s: SpectralMeasure) -> float:
    """Length of the observed support: largest minus smallest nonzero eigenvalue."""
    positive = s.eigenvalues[s.eigenvalues > 0.0]
    if positive.size <= 1:
        return 0.0
    return float(positive.max() - positive.min())


def spectral_profile(s: SpectralMeasure) -> Dict[str, float]:
    """
    Regularity indicators of a single spectrum.

    Large leading eigenvalues and many eigenvalues near 0 mean a sequence that
    keeps revisiting the same directions; a spectrum packed around small
    values (participation close to K) means a sequence spreading over the
    space.
    """
    values = s.eigenvalues
    _, zeros = rank_and_zero_count(s)
    largest = float(values.max())
    return {
        "largest_eigenvalue": largest,
        "largest_fraction": largest / s.count,
        "zero_fraction": zeros / s.count,
        "near_zero_fraction": float(np.count_nonzero(values < NEAR_ZERO)) / s.count,
        "participation": float(np.sum(values) ** 2 / np.sum(values ** 2)),
        "support_length": support_length_entropy(s),
    }
