"""
src/reference/mp_law.py
-----------------------
The limit law μ_τ of Gram spectra of K = τN Haar-uniform rays in dimension N:

    dμ_τ(x) = max(0, (τ-1)/τ) δ(x) dx + ρ(x) dx,
    ρ(x)    = sqrt((x - a)(b - x)) / (2π τ x)   for a < x < b,
    a, b    = (sqrt(τ) - 1)^2, (sqrt(τ) + 1)^2.

Integrals of ρ are taken in the angle variable x = a + (b - a) sin^2(u), which
removes the square-root behavior at both edges (and the x^{-1/2} pole at τ = 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.integrate
import scipy.optimize
from scipy.special import comb

QUAD_ABS_TOL = 1e-8
QUANTILE_TOL = 1e-8
MAX_MOMENT_ORDER = 12
QUANTILE_CELLS = 512


@dataclass(frozen=True)
class MPLaw:
    tau: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.tau) or self.tau <= 0:
            raise ValueError(f"tau must be a finite positive number, got {self.tau}")


def mp_atom_weight(law: MPLaw) -> float:
    return max(0.0, (law.tau - 1.0) / law.tau)


def mp_support(law: MPLaw) -> Tuple[float, float]:
    root = math.sqrt(law.tau)
    return (root - 1.0) ** 2, (root + 1.0) ** 2


def mp_density(law: MPLaw, x):
    """ρ(x); zero outside the open interval (a, b). Accepts scalars or arrays."""
    a, b = mp_support(law)
    points = np.asarray(x, dtype=np.float64)
    inside = (points > a) & (points < b)
    safe = np.where(inside, points, 1.0)
    values = np.where(
        inside,
        np.sqrt(np.clip((safe - a) * (b - safe), 0.0, None)) / (2.0 * np.pi * law.tau * safe),
        0.0,
    )
    if values.ndim == 0:
        return float(values)
    return values


def _angle_integrand(u: float, a: float, b: float, tau: float) -> float:
    # ρ(x(u)) · dx/du with x = a + (b - a) sin^2 u
    s, c = math.sin(u), math.cos(u)
    x = a + (b - a) * s * s
    if x <= 0.0:
        # a = 0 (τ = 1): the sin^2 factors cancel
        return (b - a) * c * c / (math.pi * tau)
    return (b - a) ** 2 * s * s * c * c / (math.pi * tau * x)


def _angle_of(law: MPLaw, x: float) -> float:
    a, b = mp_support(law)
    ratio = min(max((x - a) / (b - a), 0.0), 1.0)
    return math.asin(math.sqrt(ratio))


def _integrate_angle(law: MPLaw, lower: float, upper: float) -> float:
    if upper <= lower:
        return 0.0
    a, b = mp_support(law)
    value, _ = scipy.integrate.quad(
        _angle_integrand, lower, upper, args=(a, b, law.tau), epsabs=QUAD_ABS_TOL, epsrel=1e-10, limit=200
    )
    return value


@lru_cache(maxsize=256)
def _continuous_mass(tau: float) -> float:
    return _integrate_angle(MPLaw(tau), 0.0, math.pi / 2.0)


def mp_continuous_mass(law: MPLaw) -> float:
    """∫ρ by quadrature; equals min(1, 1/τ)."""
    return _continuous_mass(law.tau)


def mp_cdf(law: MPLaw, x: float) -> float:
    """μ_τ((-inf, x]): the atom at 0 counts for every x >= 0."""
    if x < 0:
        return 0.0
    a, b = mp_support(law)
    atom = mp_atom_weight(law)
    if x <= a:
        return atom
    if x >= b:
        return min(1.0, atom + mp_continuous_mass(law))
    return min(1.0, max(0.0, atom + _integrate_angle(law, 0.0, _angle_of(law, x))))


def mp_quantile(law: MPLaw, q: float, lower: Optional[float] = None) -> float:
    """
    Smallest x with mp_cdf(x) >= q, found by bisection to QUANTILE_TOL.

    `lower` may carry a known lower bracket (e.g. the previous quantile when
    evaluating an increasing list of levels).
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile level must lie in [0, 1], got {q}")
    a, b = mp_support(law)
    atom = mp_atom_weight(law)
    if atom > 0.0 and q <= atom:
        return 0.0
    if q <= 0.0:
        return a
    if q >= mp_cdf(law, b):
        return b
    left = a if lower is None else min(max(lower, a), b)
    if mp_cdf(law, left) >= q:
        return left
    return float(scipy.optimize.bisect(lambda x: mp_cdf(law, x) - q, left, b, xtol=QUANTILE_TOL))


@lru_cache(maxsize=64)
def _angle_table(tau: float, cells: int = QUANTILE_CELLS) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform angle grid over [0, π/2] and the continuous mass below each node."""
    law = MPLaw(tau)
    angles = np.linspace(0.0, math.pi / 2.0, cells + 1)
    pieces = [_integrate_angle(law, lo, hi) for lo, hi in zip(angles[:-1], angles[1:])]
    return angles, np.concatenate([[0.0], np.cumsum(pieces)])


def mp_quantiles(law: MPLaw, levels: Sequence[float]) -> np.ndarray:
    """
    Quantiles for many levels at once.

    A cached table of cumulative mass on an angle grid brackets each level in
    one cell; bisection then only integrates inside that cell.
    """
    a, b = mp_support(law)
    atom = mp_atom_weight(law)
    angles, cumulative = _angle_table(law.tau)
    result = np.empty(len(levels), dtype=np.float64)
    for index, level in enumerate(levels):
        q = float(level)
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"quantile level must lie in [0, 1], got {q}")
        if atom > 0.0 and q <= atom:
            result[index] = 0.0
            continue
        target = q - atom
        if target <= 0.0:
            result[index] = a
            continue
        if target >= cumulative[-1]:
            result[index] = b
            continue
        cell = min(max(int(np.searchsorted(cumulative, target, side="left")), 1), len(angles) - 1)
        lo, hi, base = angles[cell - 1], angles[cell], cumulative[cell - 1]

        def excess(u: float) -> float:
            return base + _integrate_angle(law, lo, u) - target

        if excess(hi) <= 0.0:
            angle = hi
        else:
            angle = scipy.optimize.brentq(excess, lo, hi, xtol=QUANTILE_TOL * 1e-2)
        result[index] = a + (b - a) * math.sin(angle) ** 2
    return result


def mp_moment(law: MPLaw, order: int) -> float:
    """k-th moment Σ_{r<k} τ^r C(k, r) C(k-1, r) / (r + 1) (Narayana weights)."""
    if not 1 <= order <= MAX_MOMENT_ORDER:
        raise ValueError(f"moment order must be in 1..{MAX_MOMENT_ORDER}, got {order}")
    return float(
        sum(
            law.tau ** r * comb(order, r, exact=True) * comb(order - 1, r, exact=True) / (r + 1)
            for r in range(order)
        )
    )


def mp_grid(taus: Sequence[float], x_points: int = 400) -> pd.DataFrame:
    """
    Tabulate (tau, x, density, cdf, atom_weight) for each τ.

    The first row per τ sits at x = 0 and carries the atom; the others follow
    x = a + (b - a) sin^2(u) on a uniform u grid, dense near both edges. The
    cdf column accumulates quadrature increments, so it is monotone per τ.
    """
    if x_points < 3:
        raise ValueError("x_points must be >= 3")
    frames = []
    for tau in taus:
        law = MPLaw(float(tau))
        a, b = mp_support(law)
        atom = mp_atom_weight(law)
        if a > 0.0:
            angles = np.linspace(0.0, math.pi / 2.0, x_points - 1)
        else:
            angles = np.linspace(0.0, math.pi / 2.0, x_points)[1:]
        xs = np.concatenate([[0.0], a + (b - a) * np.sin(angles) ** 2])

        increments = [0.0, _integrate_angle(law, 0.0, angles[0])]
        increments.extend(_integrate_angle(law, lo, hi) for lo, hi in zip(angles[:-1], angles[1:]))
        cdf = np.minimum(atom + np.cumsum(increments), 1.0)

        frames.append(
            pd.DataFrame(
                {
                    "tau": float(tau),
                    "x": xs,
                    "density": mp_density(law, xs),
                    "cdf": cdf,
                    "atom_weight": atom,
                }
            )
        )
    return pd.concat(frames, ignore_index=True)


def default_tau_grid(points: int = 150, low: float = 0.02, high: float = 3.0) -> np.ndarray:
    if points < 2:
        raise ValueError("points must be >= 2")
    return np.round(np.linspace(low, high, points), 10)
