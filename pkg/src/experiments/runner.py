"""Experiment runners: one per CLI mode, each returning a RunResult."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from src.classical.words import (
    poisson_pmf,
    pooled_multiplicity_distribution,
    sample_uniform_word,
    total_variation_to_poisson,
    word_gram_spectrum,
)
from src.dynamics.floquet import build_phase_kick_operator, default_steps, evolve_sequence
from src.dynamics.permutations import (
    Permutation,
    cycle_type,
    largest_orbit_fraction,
    permutation_orbit,
    permutation_word,
)
from src.evaluation.histogram import spectral_histogram
from src.experiments.config import ExperimentConfig
from src.experiments.io import (
    companion_path,
    load_spectra,
    read_state_json,
    records,
    spectra_frame,
    write_csv,
    write_json,
)
from src.linalg.errors import ConfigError
from src.linalg.spectrum import SpectralMeasure, hermitian_spectrum, rank_and_zero_count
from src.linalg.states import ProjectiveState, build_gram
from src.reference.fit import FitReport, fit_spectrum, spectral_profile
from src.reference.mp_law import MPLaw, default_tau_grid, mp_grid
from src.sampling.random_states import RngSeed, sample_state_sequence, sample_uniform_state

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    config: ExperimentConfig
    spectra: List[SpectralMeasure] = field(default_factory=list)
    histogram: Optional[pd.DataFrame] = None
    fit: Optional[FitReport] = None
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    summary: Dict[str, object] = field(default_factory=dict)
    duration: float = 0.0

    def pooled(self) -> SpectralMeasure:
        # thresholds stay relative to the per-trial K, not the pooled count
        values = np.concatenate([s.eigenvalues for s in self.spectra])
        return SpectralMeasure.from_values(values, scale=max(s.count for s in self.spectra))


def _expect_mode(config: ExperimentConfig, mode: str) -> None:
    if config.mode != mode:
        raise ConfigError("mode", f"expected {mode!r}, got {config.mode!r}")


def _run_trials(config: ExperimentConfig, task: Callable[[RngSeed], object]) -> List[object]:
    """Run `task` once per trial on substream seed.child(trial); output order is trial order."""
    root = RngSeed(config.seed)
    return Parallel(n_jobs=config.jobs, prefer="threads")(
        delayed(task)(root.child(trial)) for trial in range(config.trials)
    )


def _finish(result: RunResult, started: float) -> RunResult:
    result.duration = time.perf_counter() - started
    logger.info("Finished %s run in %.2fs", result.config.mode, result.duration)
    return result


def _spectral_result(config: ExperimentConfig, spectra: List[SpectralMeasure], dim: int, steps: int) -> RunResult:
    tau = steps / dim
    result = RunResult(config=config, spectra=spectra)
    result.fit = fit_spectrum(result.pooled(), MPLaw(tau))
    result.histogram = spectral_histogram(spectra, tau, bins=config.bins)
    result.summary = {
        "dim": dim,
        "steps": steps,
        "tau_effective": tau,
        "zeros_per_trial": [rank_and_zero_count(s)[1] for s in spectra],
    }
    logger.debug("Fit against tau=%.4f: %s", tau, result.fit)
    return result


def run_random(config: ExperimentConfig) -> RunResult:
    """Gram spectra of Haar-uniform sequences, pooled and fitted against μ_τ."""
    _expect_mode(config, "random")
    started = time.perf_counter()
    dim, steps = config.dim, config.resolved_steps()
    logger.info("Random run: N=%s K=%s trials=%s seed=%s", dim, steps, config.trials, config.seed)

    def trial(seed: RngSeed) -> SpectralMeasure:
        return hermitian_spectrum(build_gram(sample_state_sequence(dim, steps, seed)))

    return _finish(_spectral_result(config, _run_trials(config, trial), dim, steps), started)


def run_floquet(config: ExperimentConfig) -> RunResult:
    """Spectra of (p0, u p0, ...) under the phase-kick operator; exploratory fit only."""
    _expect_mode(config, "floquet")
    started = time.perf_counter()
    dim, steps = config.dim, config.resolved_steps()
    operator = build_phase_kick_operator(dim, config.kick, config.rot)
    fixed_initial: Optional[ProjectiveState] = read_state_json(config.initial) if config.initial else None
    if fixed_initial is not None and fixed_initial.dim != dim:
        raise ConfigError("initial", f"state has dim {fixed_initial.dim}, expected {dim}")
    logger.info("Floquet run: N=%s K=%s kick=%s rot=%s trials=%s", dim, steps, config.kick, config.rot, config.trials)

    def trial(seed: RngSeed) -> SpectralMeasure:
        initial = fixed_initial if fixed_initial is not None else sample_uniform_state(dim, seed)
        return hermitian_spectrum(build_gram(evolve_sequence(operator, initial, steps)))

    spectra = _run_trials(config, trial)
    result = _spectral_result(config, spectra, dim, steps)
    result.summary["profiles"] = [spectral_profile(s) for s in spectra]
    return _finish(result, started)


def _permutation_for(config: ExperimentConfig, seed: RngSeed) -> Permutation:
    if config.permutation == "identity":
        return Permutation.identity(config.dim)
    if config.permutation == "random":
        return Permutation.random(config.dim, seed)
    return Permutation.from_json(config.permutation)


def run_permutation(config: ExperimentConfig) -> RunResult:
    """Cycle type of π and the Gram spectrum of the word (i0, π(i0), ...)."""
    _expect_mode(config, "permutation")
    started = time.perf_counter()
    root = RngSeed(config.seed)
    perms = [_permutation_for(config, root.child(trial)) for trial in range(config.trials)]
    dim = perms[0].size
    if config.dim is not None and config.dim != dim:
        raise ConfigError("permutation", f"has size {dim} but dim is {config.dim}")
    if not 0 <= config.start < dim:
        raise ConfigError("start", f"must lie in 0..{dim - 1}")
    steps = config.steps if config.steps is not None else default_steps(config.tau, dim)
    logger.info("Permutation run: N=%s K=%s source=%s trials=%s", dim, steps, config.permutation, config.trials)

    spectra, cycle_rows, trial_rows = [], [], []
    for trial, perm in enumerate(perms):
        spectrum = word_gram_spectrum(permutation_word(perm, config.start, steps))
        spectra.append(spectrum)
        for length, number in sorted(cycle_type(perm).items()):
            cycle_rows.append({"trial": trial, "length": length, "cycles": number})
        trial_rows.append(
            {
                "trial": trial,
                "period": len(permutation_orbit(perm, config.start)),
                "largest_orbit_fraction": largest_orbit_fraction(perm),
                **spectral_profile(spectrum),
            }
        )

    result = RunResult(config=config, spectra=spectra)
    result.tables["cycles"] = pd.DataFrame(cycle_rows, columns=["trial", "length", "cycles"])
    result.tables["orbits"] = pd.DataFrame(trial_rows)
    result.summary = {"dim": dim, "steps": steps, "source": config.permutation}
    return _finish(result, started)


def run_classical(config: ExperimentConfig) -> RunResult:
    """Uniform random words: multiplicity distribution against Poisson(τ)."""
    _expect_mode(config, "classical")
    started = time.perf_counter()
    dim, steps = config.dim, config.resolved_steps()
    tau = steps / dim
    logger.info("Classical run: N=%s K=%s trials=%s seed=%s", dim, steps, config.trials, config.seed)

    words = _run_trials(config, lambda seed: sample_uniform_word(dim, steps, seed))
    pmf = pooled_multiplicity_distribution(words)
    ks = range(max(max(pmf), int(np.ceil(4 * tau + 10))) + 1)
    table = pd.DataFrame(
        {
            "k": list(ks),
            "empirical": [float(pmf.get(k, 0)) for k in ks],
            "poisson": [poisson_pmf(k, tau) for k in ks],
        }
    )

    result = RunResult(config=config, spectra=[word_gram_spectrum(word) for word in words])
    result.tables["pmf"] = table
    result.summary = {
        "dim": dim,
        "steps": steps,
        "tau_effective": tau,
        "total_variation": total_variation_to_poisson(pmf, tau),
    }
    return _finish(result, started)


def run_mp_grid(config: ExperimentConfig) -> RunResult:
    """The limit law tabulated over 0.02 <= τ <= 3."""
    _expect_mode(config, "mp-grid")
    started = time.perf_counter()
    taus = default_tau_grid(config.tau_points)
    logger.info("Tabulating limit law: %s tau points x %s x points", len(taus), config.x_points)
    result = RunResult(config=config)
    result.tables["grid"] = mp_grid(taus, config.x_points)
    return _finish(result, started)


def run_fit(config: ExperimentConfig) -> RunResult:
    """Refit a stored spectrum file against MPLaw(tau)."""
    _expect_mode(config, "fit")
    started = time.perf_counter()
    spectra = load_spectra(config.spectrum)
    result = RunResult(config=config, spectra=spectra)
    result.fit = fit_spectrum(result.pooled(), MPLaw(config.tau))
    result.histogram = spectral_histogram(spectra, config.tau, bins=config.bins)
    logger.info("Fitted %s eigenvalues from %s", result.pooled().count, config.spectrum)
    return _finish(result, started)


RUNNERS: Dict[str, Callable[[ExperimentConfig], RunResult]] = {
    "random": run_random,
    "floquet": run_floquet,
    "permutation": run_permutation,
    "classical": run_classical,
    "mp-grid": run_mp_grid,
    "fit": run_fit,
}


def _summary_payload(result: RunResult) -> Dict[str, object]:
    payload: Dict[str, object] = {"config": result.config.echo(), "summary": result.summary}
    if result.fit is not None:
        payload["fit"] = result.fit.as_dict()
    return payload


def write_result(result: RunResult) -> List[str]:
    """Write the run's artifacts and return the paths written."""
    config = result.config
    out_path = config.output_path
    echo = config.echo()

    if config.format == "json":
        payload = _summary_payload(result)
        if result.spectra and config.mode != "fit":
            payload["spectra"] = [s.eigenvalues.tolist() for s in result.spectra]
        if result.histogram is not None:
            payload["histogram"] = records(result.histogram)
        for name, table in result.tables.items():
            payload[name] = records(table)
        return [write_json(payload, out_path)]

    if config.mode == "mp-grid":
        primary = result.tables["grid"]
    elif config.mode == "fit":
        primary = result.histogram
    else:
        primary = spectra_frame(result.spectra)
    written = [write_csv(primary, out_path, echo)]

    if result.histogram is not None and config.mode != "fit":
        written.append(write_csv(result.histogram, companion_path(out_path, "histogram", "csv"), echo))
    for name, table in result.tables.items():
        if name != "grid":
            written.append(write_csv(table, companion_path(out_path, name, "csv"), echo))
    if result.fit is not None or result.summary:
        written.append(write_json(_summary_payload(result), companion_path(out_path, "summary", "json")))
    return written
