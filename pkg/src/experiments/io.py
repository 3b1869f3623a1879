"""
Reading and writing run artifacts.

CSV tables start with a single `# config: {...}` comment line so they can be
read back with pandas.read_csv(comment="#"). JSON documents are written with
sorted keys. Neither carries timestamps, so equal configs give equal bytes.
"""
from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Mapping

import pandas as pd

from src.linalg.states import ProjectiveState, deinterleave_complex, interleave_complex
from src.linalg.spectrum import SpectralMeasure

SPECTRA_COLUMNS = ["trial", "index", "eigenvalue"]


def spectra_frame(spectra: List[SpectralMeasure]) -> pd.DataFrame:
    """One row per eigenvalue: (trial, index, eigenvalue), index in descending order."""
    rows = []
    for trial, spectrum in enumerate(spectra):
        for index, value in enumerate(spectrum.eigenvalues):
            rows.append({"trial": trial, "index": index, "eigenvalue": float(value)})
    return pd.DataFrame(rows, columns=SPECTRA_COLUMNS)


def companion_path(out_path: str, suffix: str, extension: str) -> str:
    """results/run.csv + ("histogram", "csv") -> results/run_histogram.csv"""
    stem, _ = os.path.splitext(out_path)
    return f"{stem}_{suffix}.{extension}"


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_csv(frame: pd.DataFrame, out_path: str, config_echo: Mapping[str, Any]) -> str:
    _ensure_parent(out_path)
    with open(out_path, "w", newline="", encoding="utf-8") as handle:
        handle.write(f"# config: {json.dumps(dict(config_echo), sort_keys=True)}\n")
        frame.to_csv(handle, index=False, lineterminator="\n")
    return out_path


def write_json(payload: Mapping[str, Any], out_path: str) -> str:
    _ensure_parent(out_path)
    with open(out_path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return out_path


def load_spectra(path: str) -> List[SpectralMeasure]:
    """
    Load stored spectra for refitting.

    Accepts a spectra CSV (trial, index, eigenvalue) or a JSON document whose
    "spectra" entry is a list of eigenvalue lists.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"Spectrum file not found: {path}")

    if path.lower().endswith(".json"):
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        groups = payload.get("spectra") if isinstance(payload, dict) else None
        if not isinstance(groups, list) or not groups:
            raise ValueError(f"{path} has no 'spectra' list")
        return [SpectralMeasure.from_values(values) for values in groups]

    df = pd.read_csv(path, comment="#", float_precision="round_trip")
    missing = [column for column in SPECTRA_COLUMNS if column not in df.columns]
    if missing:
        raise ValueError(f"{path} is missing columns: {', '.join(missing)}")
    df = df.dropna(subset=["eigenvalue"])
    if df.empty:
        raise ValueError(f"{path} contains no eigenvalues")
    return [SpectralMeasure.from_values(group["eigenvalue"].to_numpy()) for _, group in df.groupby("trial", sort=True)]


def read_state_json(path: str) -> ProjectiveState:
    """A state stored as {"amplitudes": [re0, im0, re1, im1, ...]} (or the bare list)."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"State file not found: {path}")
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    pairs = payload.get("amplitudes") if isinstance(payload, dict) else payload
    return ProjectiveState.from_amplitudes(deinterleave_complex(pairs))


def write_state_json(state: ProjectiveState, out_path: str) -> str:
    return write_json({"dim": state.dim, "amplitudes": interleave_complex(state.amplitudes)}, out_path)


def records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    """Rows as plain Python values; floats keep full precision."""
    return frame.to_dict(orient="records")
