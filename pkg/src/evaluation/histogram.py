"""
src/evaluation/histogram.py
----------------------------
Pooled eigenvalue histograms with the zero atom kept in its own row.
"""
from __future__ import annotations

from typing import Dict, List

import numpy as np
import pandas as pd

from src.linalg.spectrum import SpectralMeasure
from src.reference.mp_law import MPLaw, mp_support

HISTOGRAM_MARGIN = 0.5


def histogram_range(tau: float) -> float:
	"""Right edge of the default range [0, (sqrt(tau) + 1)^2 + 0.5]."""
	_, upper = mp_support(MPLaw(tau))
	return upper + HISTOGRAM_MARGIN


def spectral_histogram(spectra: List[SpectralMeasure], tau: float, bins: int = 50) -> pd.DataFrame:
	"""
	Pool spectra into uniform bins over [0, (sqrt(tau) + 1)^2 + 0.5].

	Exact zeros are counted in a separate atom row (bin_left = bin_right = 0),
	listed first. Nonzero values past the right edge land in the last bin, so
	the count column always sums to the number of pooled eigenvalues.
	"""
	if bins < 1:
		raise ValueError("bins must be >= 1")
	values = np.concatenate([s.eigenvalues for s in spectra]) if spectra else np.empty(0)
	edges = np.linspace(0.0, histogram_range(tau), bins + 1)
	zeros = values == 0.0
	nonzero = np.clip(values[~zeros], 0.0, edges[-1])
	counts = np.zeros(bins, dtype=np.int64)

	for i in range(bins):
		upper_ok = nonzero <= edges[i + 1] if i == bins - 1 else nonzero < edges[i + 1]
		mask = (nonzero >= edges[i]) & upper_ok
		counts[i] = int(np.count_nonzero(mask))

	rows: List[Dict[str, float]] = [{"bin_left": 0.0, "bin_right": 0.0, "count": int(np.count_nonzero(zeros))}]
	for i in range(bins):
		rows.append({"bin_left": float(edges[i]), "bin_right": float(edges[i + 1]), "count": int(counts[i])})
	return pd.DataFrame(rows, columns=["bin_left", "bin_right", "count"])
