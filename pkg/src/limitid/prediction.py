"""Exact next-symbol prediction and the black-swan measure pair."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import NegativeMass, NotNormalized, ZeroMassContext
from .programs import (
    ONE,
    ZERO,
    Alphabet,
    MeasureProgram,
    PmfProgram,
    make_point_mass,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Prediction:
    """Exact next-symbol distribution given an observed context."""

    alphabet: Alphabet
    masses: tuple[Fraction, ...]
    context_length: int

    def __post_init__(self):
        for v in self.masses:
            if v < 0:
                raise NegativeMass(f"prediction mass {v} is negative")
        total = sum(self.masses, ZERO)
        if total != 1:
            raise NotNormalized(f"prediction masses sum to {total}")

    def mass(self, j: int) -> Fraction:
        return self.masses[j - 1]

    def mass_of(self, symbol: str) -> Fraction:
        return self.masses[self.alphabet.index(symbol) - 1]

    def as_dict(self) -> dict[str, Fraction]:
        return {self.alphabet.symbol(j): v
                for j, v in enumerate(self.masses, start=1)}


def predict_iid(p: PmfProgram) -> Prediction:
    """Under i.i.d. sampling the next draw ignores all context."""
    p.check_normalized()
    return Prediction(p.alphabet, tuple(p.masses()), context_length=0)


def predict_measure(mu: MeasureProgram, prefix: Sequence[int]) -> Prediction:
    """Conditional mu(xa)/mu(x) for each symbol a after the prefix x."""
    size = mu.alphabet.require_finite("next-symbol prediction")
    cursor = mu.start()
    for j in prefix:
        cursor.advance(j)
    if cursor.mass == 0:
        raise ZeroMassContext(
            f"measure {mu.descriptor!r} assigns the context zero mass"
        )
    masses = tuple(cursor.conditional(j) for j in range(1, size + 1))
    return Prediction(mu.alphabet, masses, context_length=len(prefix))


def black_swan_pair(n_star: int) -> tuple[MeasureProgram, MeasureProgram]:
    """Two measures over {a, b} that agree on every prefix of a's up to
    n_star yet predict the next symbol differently at n_star.

    The first concentrates on the constant sequence aaa...  The second
    is an even mixture of two futures: a forever, or exactly n_star a's
    followed by b forever.  Both are exactly additive.
    """
    if n_star < 1:
        raise ValueError(f"n_star must be >= 1, got {n_star}")
    alphabet = Alphabet(["a", "b"])
    mu1 = make_point_mass(alphabet, 1)

    def extend(state: Any, j: int) -> tuple[Fraction, Any]:
        if state == "a_forever":
            return (ONE if j == 1 else ZERO), state
        if state == "b_forever":
            return (ONE if j == 2 else ZERO), state
        if state == "branch":  # the prefix is exactly n_star a's
            return (HALF, "a_forever") if j == 1 else (HALF, "b_forever")
        # state is the count of a's seen so far, below n_star
        if j != 1:
            return ZERO, "b_forever"
        nxt = state + 1
        return ONE, ("branch" if nxt == n_star else nxt)

    mu0 = MeasureProgram(alphabet, f"black_swan({n_star})", 0, extend)
    return mu1, mu0
