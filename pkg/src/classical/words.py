"""
Classical words and the exact block spectrum of their Gram matrices.

Identifying letter j with the basis vector e_j, the Gram matrix of a word is
block diagonal after grouping equal letters, each block an all-ones matrix of
size m(j). Its spectrum is therefore {m(j)} together with m(j) - 1 zeros per
distinct letter, which is computed here by counting instead of eigensolving.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np
from scipy.stats import poisson

from src.linalg.spectrum import SpectralMeasure
from src.sampling.random_states import RngSeed


@dataclass(frozen=True)
class ClassicalWord:
    letters: Tuple[int, ...]
    alphabet_size: int

    def __post_init__(self) -> None:
        if len(self.letters) < 1:
            raise ValueError("a word needs at least one letter")
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        for letter in self.letters:
            if not 0 <= letter < self.alphabet_size:
                raise ValueError(f"letter {letter} outside alphabet 0..{self.alphabet_size - 1}")

    @property
    def length(self) -> int:
        return len(self.letters)

    @classmethod
    def from_letters(cls, letters: Iterable[int], alphabet_size: int) -> "ClassicalWord":
        return cls(tuple(int(letter) for letter in letters), int(alphabet_size))

    @classmethod
    def from_json(cls, path: str, alphabet_size: int) -> "ClassicalWord":
        if not os.path.exists(path):
            raise FileNotFoundError(f"Word file not found: {path}")
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        if not isinstance(payload, list):
            raise ValueError(f"{path} must contain a JSON array of integers")
        return cls.from_letters(payload, alphabet_size)


@dataclass(frozen=True)
class MultiplicityProfile:
    counts: Dict[int, int]

    @property
    def distinct(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def multiplicities(word: ClassicalWord) -> MultiplicityProfile:
    counts: Dict[int, int] = {}
    for letter in word.letters:
        counts[letter] = counts.get(letter, 0) + 1
    return MultiplicityProfile(dict(sorted(counts.items())))


def word_gram_spectrum(word: ClassicalWord) -> SpectralMeasure:
    """One eigenvalue m(j) and m(j) - 1 zeros for every distinct letter j."""
    profile = multiplicities(word)
    values = list(profile.counts.values())
    values.extend([0] * (word.length - profile.distinct))
    return SpectralMeasure.from_values(values)


def sample_uniform_word(alphabet_size: int, length: int, seed: RngSeed) -> ClassicalWord:
    """K letters drawn independently and uniformly from {0, ..., N-1}."""
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be >= 1")
    if length < 1:
        raise ValueError("length must be >= 1")
    letters = seed.generator().integers(0, alphabet_size, size=length)
    return ClassicalWord.from_letters(letters.tolist(), alphabet_size)


def poisson_pmf(k: int, tau: float) -> float:
    if tau <= 0:
        raise ValueError("tau must be > 0")
    if k < 0:
        return 0.0
    return float(poisson.pmf(k, tau))


def _letter_counts(words: Sequence[ClassicalWord]) -> np.ndarray:
    sizes = {word.alphabet_size for word in words}
    if len(sizes) != 1:
        raise ValueError(f"words must share an alphabet, got sizes {sorted(sizes)}")
    size = sizes.pop()
    return np.concatenate([np.bincount(np.asarray(word.letters), minlength=size) for word in words])


def _pmf_from_counts(letter_counts: np.ndarray) -> Dict[int, Fraction]:
    histogram = np.bincount(letter_counts)
    total = int(letter_counts.size)
    return {k: Fraction(int(n), total) for k, n in enumerate(histogram) if n}


def multiplicity_distribution(word: ClassicalWord) -> Dict[int, Fraction]:
    """
    Fraction of the N alphabet letters occurring exactly k times, k = 0 included.

    Values are exact rationals and sum to 1.
    """
    return _pmf_from_counts(_letter_counts([word]))


def pooled_multiplicity_distribution(words: Sequence[ClassicalWord]) -> Dict[int, Fraction]:
    """Same as multiplicity_distribution over the letters of several words."""
    if not words:
        raise ValueError("at least one word is required")
    return _pmf_from_counts(_letter_counts(words))


def total_variation_to_poisson(pmf: Dict[int, float], tau: float) -> float:
    """½ Σ_k |p(k) - Poisson(τ)(k)|, with the Poisson tail beyond the cutoff included."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    cutoff = max(max(pmf, default=0), int(math.ceil(20 * tau + 50)))
    ks = np.arange(cutoff + 1)
    reference = poisson.pmf(ks, tau)
    empirical = np.array([float(pmf.get(int(k), 0.0)) for k in ks])
    tail = float(poisson.sf(cutoff, tau))
    return 0.5 * (float(np.sum(np.abs(empirical - reference))) + tail)
