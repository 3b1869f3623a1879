"""
Command-line driver.

    python gramscope.py random --dim 256 --tau 1 --trials 8 --seed 42 --out results/random.csv
    python gramscope.py mp-grid --out results/grid.csv
    python gramscope.py fit --spectrum results/random.csv --tau 1

Exit codes: 0 success, 2 configuration error, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Dict, List, Optional

from src.experiments.config import MODES, build_config, load_config_file
from src.experiments.runner import RUNNERS, write_result
from src.linalg.errors import ConfigError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2

MODE_HELP = {
    "random": "Gram spectra of Haar-uniform state sequences against the limit law.",
    "floquet": "Gram spectra of kicked evolution p0, u p0, u^2 p0, ...",
    "permutation": "Cycle type and word spectrum of a permutation orbit.",
    "classical": "Multiplicity distribution of uniform random words against Poisson.",
    "mp-grid": "Tabulate density, cdf and atom weight over 0.02 <= tau <= 3.",
    "fit": "Fit a stored spectrum file against the limit law for a given tau.",
}


def _add_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with configuration values; flags override it.")
    parser.add_argument("--dim", type=int, help="Hilbert space dimension / alphabet size N.")
    parser.add_argument("--tau", type=float, help="Rescaled time tau = K/N (K = ceil(tau*N)).")
    parser.add_argument("--steps", type=int, help="Sequence length K (instead of --tau).")
    parser.add_argument("--trials", type=int, help="Number of independent trials.")
    parser.add_argument("--seed", type=int, help="Master seed (64-bit unsigned).")
    parser.add_argument("--bins", type=int, help="Histogram bins (>= 10).")
    parser.add_argument("--kick", type=float, help="Kick strength of the phase-kick model.")
    parser.add_argument("--rot", type=float, help="Rotation strength of the phase-kick model.")
    parser.add_argument("--start", type=int, help="Initial point of the permutation orbit.")
    parser.add_argument("--out", help="Output path.")
    parser.add_argument("--format", choices=["csv", "json"], help="Output format.")
    parser.add_argument("--jobs", type=int, help="Parallel workers; results do not depend on it.")
    parser.add_argument("--permutation", help="identity, random, or a JSON file with an integer array.")
    parser.add_argument("--spectrum", help="Stored spectrum file (CSV or JSON) for `fit`.")
    parser.add_argument("--initial", help="JSON file with interleaved (re, im) amplitudes for `floquet`.")
    parser.add_argument("--tau-points", dest="tau_points", type=int, help="Number of tau values for `mp-grid`.")
    parser.add_argument("--x-points", dest="x_points", type=int, help="Number of x values per tau for `mp-grid`.")
    parser.add_argument("--log-level", dest="log_level", default="INFO", help="Logging level (default INFO).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gramscope",
        description="Analyse sequences of quantum states through the spectrum of their Gram matrix.",
    )
    subparsers = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        _add_flags(subparsers.add_parser(mode, help=MODE_HELP[mode], description=MODE_HELP[mode]))
    return parser


def _flag_values(args: argparse.Namespace) -> Dict[str, object]:
    skip = {"mode", "config", "log_level"}
    return {key: value for key, value in vars(args).items() if key not in skip}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        file_values = load_config_file(args.config) if args.config else {}
        config = build_config(args.mode, file_values, _flag_values(args))
    except (ConfigError, FileNotFoundError) as exc:
        logger.error("Invalid configuration: %s", exc)
        return EXIT_CONFIG

    try:
        result = RUNNERS[config.mode](config)
        written = write_result(result)
    except ConfigError as exc:
        logger.error("Invalid configuration: %s", exc)
        return EXIT_CONFIG
    except Exception:
        logger.exception("%s run failed", config.mode)
        return EXIT_RUNTIME

    for path in written:
        logger.info("Wrote %s", path)
    print(f"✅ {config.mode} outputs saved to {written[0]}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
