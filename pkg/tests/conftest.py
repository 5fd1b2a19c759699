"""Shared generators for randomized tests; all randomness is seeded."""
from __future__ import annotations

import random
from fractions import Fraction

from limitid import Alphabet, make_categorical


def random_masses(rng: random.Random, size: int,
                  denominator: int = 64) -> list[Fraction]:
    """Exact rational pmf rows via random integer compositions."""
    cuts = sorted(rng.randrange(denominator + 1) for _ in range(size - 1))
    parts = []
    prev = 0
    for c in cuts:
        parts.append(c - prev)
        prev = c
    parts.append(denominator - prev)
    return [Fraction(p, denominator) for p in parts]


def random_categorical(rng: random.Random, alphabet: Alphabet,
                       denominator: int = 64):
    size = alphabet.require_finite("random pmf")
    return make_categorical(alphabet, random_masses(rng, size, denominator))
