"""
Entry point for the Gram spectrum experiments.

    python gramscope.py random --dim 256 --tau 1 --trials 8 --seed 42
"""
import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
