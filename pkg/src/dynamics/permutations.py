"""
Coarse-grained classical dynamics: a bijection π of {0, ..., N-1}.

The phase portrait of π is its partition into closed orbits. An orbit whose
period is a sizeable fraction of N is the discrete signature of an ergodic
region; many short orbits point at regular motion.
"""
from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.classical.words import ClassicalWord
from src.sampling.random_states import RngSeed


@dataclass(frozen=True)
class Permutation:
    map: Tuple[int, ...]

    def __post_init__(self) -> None:
        size = len(self.map)
        if size < 1:
            raise ValueError("a permutation needs at least one point")
        if sorted(self.map) != list(range(size)):
            raise ValueError(f"map is not a bijection of 0..{size - 1}")

    @property
    def size(self) -> int:
        return len(self.map)

    def __call__(self, index: int) -> int:
        return self.map[index]

    @classmethod
    def from_sequence(cls, values: Sequence[int]) -> "Permutation":
        return cls(tuple(int(value) for value in values))

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(size)))

    @classmethod
    def cycle(cls, size: int) -> "Permutation":
        """The single N-cycle i -> i + 1 mod N."""
        return cls(tuple((index + 1) % size for index in range(size)))

    @classmethod
    def random(cls, size: int, seed: RngSeed) -> "Permutation":
        if size < 1:
            raise ValueError("size must be >= 1")
        return cls(tuple(int(value) for value in seed.generator().permutation(size)))

    @classmethod
    def from_json(cls, path: str) -> "Permutation":
        """Load a permutation stored as a JSON array of integers."""
        if not os.path.exists(path):
            raise FileNotFoundError(f"Permutation file not found: {path}")
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        if not isinstance(payload, list) or not all(isinstance(value, int) for value in payload):
            raise ValueError(f"{path} must contain a JSON array of integers")
        return cls.from_sequence(payload)


def _check_start(perm: Permutation, start: int) -> None:
    if not 0 <= start < perm.size:
        raise ValueError(f"start {start} out of range for permutation of size {perm.size}")


def permutation_orbit(perm: Permutation, start: int) -> List[int]:
    """The cycle through `start`, listed from `start`; its length is the period."""
    _check_start(perm, start)
    orbit = [start]
    point = perm(start)
    while point != start:
        orbit.append(point)
        point = perm(point)
    return orbit


def _cycles(perm: Permutation) -> List[List[int]]:
    seen = np.zeros(perm.size, dtype=bool)
    cycles = []
    for start in range(perm.size):
        if seen[start]:
            continue
        orbit = permutation_orbit(perm, start)
        seen[orbit] = True
        cycles.append(orbit)
    return cycles


def cycle_type(perm: Permutation) -> Counter:
    """Multiset of cycle lengths as a Counter length -> number of cycles."""
    return Counter(len(orbit) for orbit in _cycles(perm))


def orbit_periods(perm: Permutation) -> List[int]:
    """Period of every point, indexed by point."""
    periods = [0] * perm.size
    for orbit in _cycles(perm):
        for point in orbit:
            periods[point] = len(orbit)
    return periods


def largest_orbit_fraction(perm: Permutation) -> float:
    return max(cycle_type(perm)) / perm.size


def permutation_word(perm: Permutation, start: int, steps: int) -> ClassicalWord:
    """(i0, π(i0), π²(i0), ...) truncated, or wrapped around the orbit, to K letters."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    orbit = permutation_orbit(perm, start)
    letters = [orbit[step % len(orbit)] for step in range(steps)]
    return ClassicalWord.from_letters(letters, perm.size)
