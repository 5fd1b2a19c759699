"""Identification in the limit for measures from a single typical sequence.

At stage n, candidate position i is admitted when its randomness
deficiency stays below i: max over j <= n of log2(1/mu_i(x_1..x_j))
minus the estimated description length of x_1..x_j at budget t(n).  The
guess is the least admitted position <= n, falling back to 1.  The
description-length estimate depends only on the data prefix and the
budget, so each stage costs one new estimate, and per-candidate maxima
update incrementally while the budget key is stable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .complexity import serialize_symbols
from .errors import EmptyList
from .listing import HypothesisList, RepeatedHypothesisList
from .programs import Alphabet, MeasureCursor

INFINITE_DEFICIENCY = math.inf


def _log2_reciprocal(mass: Fraction) -> float:
    """log2(1/mass) in binary64; +inf on zero mass.

    Computed as log2(den) - log2(num) so huge exact rationals never
    underflow a float conversion.
    """
    if mass == 0:
        return INFINITE_DEFICIENCY
    return math.log2(mass.denominator) - math.log2(mass.numerator)


class _CandidateTrace:
    """Incremental deficiency state for one distinct candidate measure."""

    __slots__ = ("cursor", "mulogs", "running_max")

    def __init__(self, cursor: MeasureCursor):
        self.cursor = cursor
        self.mulogs: list[float] = []  # log2(1/mu(prefix_j)) per j
        self.running_max = -INFINITE_DEFICIENCY

    def advance(self, data: list[int], khat: list[int]) -> None:
        """Consume data up to the current stage, extending the max."""
        while len(self.mulogs) < len(data):
            j = len(self.mulogs)
            self.cursor.advance(data[j])
            mulog = _log2_reciprocal(self.cursor.mass)
            self.mulogs.append(mulog)
            value = mulog - khat[j]
            if value > self.running_max:
                self.running_max = value

    def rebuild_max(self, khat: list[int]) -> None:
        """Recompute the max after the estimator budget key changed."""
        best = -INFINITE_DEFICIENCY
        for j, mulog in enumerate(self.mulogs):
            value = mulog - khat[j]
            if value > best:
                best = value
        self.running_max = best


@dataclass(frozen=True)
class TypStageResult:
    """One stage: the guess, its deficiency, and the bound it beat."""

    n: int
    guess: int
    fallback: bool
    deficiency: float
    bound: int


class TypicalityIdentifier:
    """Stage-by-stage guesser over a hypothesis list of measure programs.

    The list is used exactly as given; callers wanting every candidate
    to recur at unboundedly many positions wrap it in repeat_infinitely
    first (the experiment harness always does).
    """

    def __init__(self, candidates: HypothesisList, alphabet: Alphabet,
                 estimator, budget_fn=None):
        if not candidates.base.has(1):
            raise EmptyList("identifier needs at least one candidate")
        self.candidates = candidates
        self.alphabet = alphabet
        self.estimator = estimator
        self.budget_fn = budget_fn or (lambda n: n)
        self.data: list[int] = []
        self.history: list[TypStageResult] = []
        self._bytes = bytearray()
        self._khat: list[int] = []
        self._budget_key: object = None
        self._traces: dict[int, _CandidateTrace] = {}
        if isinstance(candidates, RepeatedHypothesisList):
            self._to_inner = candidates.base_index_of
        else:
            self._to_inner = None
        self._check_elim = candidates.kind == "co_ce"
        serialize_symbols([], alphabet)  # fails fast on oversized alphabets

    def _measure_at(self, inner: int):
        if self._to_inner is None:
            return self.candidates.item(inner)
        return self.candidates.inner.item(inner)

    def _trace_for(self, inner: int) -> _CandidateTrace:
        tr = self._traces.get(inner)
        if tr is None:
            tr = _CandidateTrace(self._measure_at(inner).start())
            self._traces[inner] = tr
        tr.advance(self.data, self._khat)
        return tr

    def _refresh_khat(self, n: int) -> None:
        t = self.budget_fn(n)
        key = self.estimator.budget_key(t)
        serialized = bytes(self._bytes)
        if key != self._budget_key:
            self._budget_key = key
            self._khat = [self.estimator.estimate(serialized[:j], t)
                          for j in range(1, n + 1)]
            for tr in self._traces.values():
                tr.rebuild_max(self._khat)
        else:
            self._khat.append(self.estimator.estimate(serialized, t))

    def step_with(self, j: int) -> TypStageResult:
        """Consume one symbol (1-based index) and emit the stage guess."""
        self._bytes.extend(serialize_symbols([j], self.alphabet))
        self.data.append(j)
        n = len(self.data)
        self._refresh_khat(n)
        base = self.candidates.base
        to_inner = self._to_inner
        guess = None
        for position in range(1, n + 1):
            if not base.has(position):
                break
            if self._check_elim and self.candidates.eliminated_by(position, n):
                continue
            inner = to_inner(position) if to_inner is not None else position
            if self._trace_for(inner).running_max < position:
                guess = position
                break
        fallback = guess is None
        if fallback:
            guess = 1
        inner = to_inner(guess) if to_inner is not None else guess
        deficiency = self._trace_for(inner).running_max
        result = TypStageResult(n=n, guess=guess, fallback=fallback,
                                deficiency=deficiency, bound=guess)
        self.history.append(result)
        return result

    def deficiency(self, position: int) -> float:
        """Current max deficiency of the candidate at an output position."""
        if not self.data:
            raise ValueError("no data consumed yet")
        if not self.candidates.base.has(position):
            raise ValueError(f"no candidate at position {position}")
        inner = self._to_inner(position) if self._to_inner is not None \
            else position
        return self._trace_for(inner).running_max

    @property
    def guesses(self) -> list[int]:
        return [r.guess for r in self.history]


def run_typicality(candidates: HypothesisList, data: list[int],
                   alphabet: Alphabet, estimator,
                   budget_fn=None) -> list[TypStageResult]:
    """Fold the identifier over a full data prefix, one stage per symbol."""
    ident = TypicalityIdentifier(candidates, alphabet, estimator, budget_fn)
    for j in data:
        ident.step_with(j)
    return ident.history
