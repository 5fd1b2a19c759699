"""Identification in the limit for pmfs from i.i.d. data.

At stage n the identifier admits candidate i when its largest absolute
deviation from the empirical frequencies, over the union of the seen
symbols and a tail-truncation prefix, is strictly below sqrt(ln n / n),
and guesses the least admitted index (1 as fallback when none passes).

The comparison is score**2 * n < ln n with an exact rational left side
and a binary64 right side; boundary ties count as "not less".  A fast
integer path keeps per-candidate numerators over a common denominator;
the plain rational route is kept alongside it as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyList, UnknownSymbol
from .listing import HypothesisList, RepeatedHypothesisList
from .programs import Alphabet, PmfProgram


class FrequencyTable:
    """Symbol counts for a data prefix, by 1-based symbol index."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.n = 0
        self._counts: list[int] = []

    def add_index(self, j: int) -> None:
        size = self.alphabet.size
        if j < 1 or (size is not None and j > size):
            raise UnknownSymbol(f"symbol index {j} is not in the alphabet")
        while len(self._counts) < j:
            self._counts.append(0)
        self._counts[j - 1] += 1
        self.n += 1

    def add(self, symbol: str) -> None:
        self.add_index(self.alphabet.index(symbol))

    def count(self, j: int) -> int:
        if j < 1:
            raise UnknownSymbol(f"symbol index must be >= 1, got {j}")
        return self._counts[j - 1] if j <= len(self._counts) else 0

    @property
    def max_seen(self) -> int:
        """Largest symbol index observed so far (0 before any data)."""
        return len(self._counts)

    def seen_indices(self) -> list[int]:
        return [j for j, c in enumerate(self._counts, start=1) if c > 0]

    def empirical(self) -> dict[int, Fraction]:
        """Observed relative frequencies; sums to exactly 1 when n > 0."""
        return {j: Fraction(c, self.n)
                for j, c in enumerate(self._counts, start=1) if c > 0}


def threshold(n: int) -> float:
    """sqrt(ln n / n) in binary64."""
    if n < 1:
        raise ValueError(f"stage must be >= 1, got {n}")
    return math.sqrt(math.log(n) / n)


def passes_threshold(score: Fraction, n: int) -> bool:
    """Exact test score**2 * n < ln n (right side binary64, strict)."""
    ln_num, ln_den = math.log(n).as_integer_ratio()
    return score.numerator ** 2 * n * ln_den < ln_num * score.denominator ** 2


def truncation_bound(q: PmfProgram, n: int) -> int:
    """Least m with tail_after(m)**2 * n < 1, compared exactly."""
    if n < 1:
        raise ValueError(f"stage must be >= 1, got {n}")
    m = 1
    while True:
        tail = q.tail_after(m)
        if tail.numerator ** 2 * n < tail.denominator ** 2:
            return m
        m += 1


def trunc_set(q: PmfProgram, table: FrequencyTable, n: int) -> list[int]:
    """Scored symbol indices: seen symbols plus the truncation prefix."""
    m = truncation_bound(q, n)
    out = list(range(1, m + 1))
    out.extend(j for j in table.seen_indices() if j > m)
    return out


def score(q: PmfProgram, table: FrequencyTable, n: int) -> Fraction:
    """Largest absolute deviation |q(a) - count(a)/n| over the scored set."""
    best = Fraction(0)
    for j in trunc_set(q, table, n):
        dev = abs(q.mass(j) - Fraction(table.count(j), n))
        if dev > best:
            best = dev
    return best


@dataclass(frozen=True)
class StageResult:
    """One identifier stage: the guess plus its admission statistics."""

    n: int
    guess: int
    fallback: bool
    score: Fraction
    threshold: float


class _FastCandidate:
    """Integer-form masses of one candidate over a growing index prefix.

    Over indices 1..covered the candidate's masses are U[j-1] / D with a
    shared denominator D.  tail_limits[m-1] is the largest stage n at
    which the truncation prefix must extend beyond m (None = never), so
    the per-stage bound m(n) advances by a monotone pointer.
    """

    __slots__ = ("pmf", "covered", "denom", "numers", "tail_limits", "trunc_m")

    def __init__(self, pmf: PmfProgram):
        self.pmf = pmf
        self.covered = 0
        self.denom = 1
        self.numers: list[int] = []
        self.tail_limits: list[int | None] = []
        self.trunc_m = 1

    def _extend_tail(self, m: int) -> None:
        while len(self.tail_limits) < m:
            tail = self.pmf.tail_after(len(self.tail_limits) + 1)
            if tail.numerator == 0:
                self.tail_limits.append(None)
            else:
                self.tail_limits.append(
                    (tail.denominator ** 2 - 1) // tail.numerator ** 2
                )

    def bound_for(self, n: int) -> int:
        """Least m with tail_after(m)**2 * n < 1; nondecreasing in n."""
        m = self.trunc_m
        while True:
            self._extend_tail(m)
            limit = self.tail_limits[m - 1]
            if limit is None or n <= limit:
                self.trunc_m = m
                return m
            m += 1

    def cover(self, upto: int) -> None:
        if upto <= self.covered:
            return
        masses = [self.pmf.mass(j) for j in range(1, upto + 1)]
        denom = math.lcm(*(v.denominator for v in masses)) if masses else 1
        self.numers = [int(v * denom) for v in masses]
        self.denom = denom
        self.covered = upto

    def verdict(self, counts: list[int], max_seen: int, n: int,
                ln_num: int, ln_den: int) -> tuple[bool, int, int]:
        """(passes, score numerator S, denominator scale D) at stage n.

        The exact score is S / (D * n); admission is S**2 * ln_den <
        ln_num * D**2 * n, the integer form of score**2 * n < ln n.
        """
        m = self.bound_for(n)
        top = m if m > max_seen else max_seen
        self.cover(top)
        numers = self.numers
        denom = self.denom
        seen = len(counts)
        s_max = 0
        for a in range(1, top + 1):
            c = counts[a - 1] if a <= seen else 0
            if c == 0 and a > m:
                continue
            d = numers[a - 1] * n - c * denom
            if d < 0:
                d = -d
            if d > s_max:
                s_max = d
        passed = s_max * s_max * ln_den < ln_num * denom * denom * n
        return passed, s_max, denom


class IidIdentifier:
    """Stage-by-stage guesser over a hypothesis list of pmf programs.

    Guesses are base indices of the list (or output positions, for a
    repeated list).  Each stage consumes one symbol, scores candidates
    lazily in index order, and stops at the first admitted index <= n.
    """

    def __init__(self, candidates: HypothesisList, alphabet: Alphabet):
        if not candidates.base.has(1):
            raise EmptyList("identifier needs at least one candidate")
        self.candidates = candidates
        self.table = FrequencyTable(alphabet)
        self.history: list[StageResult] = []
        self._fast: dict[int, _FastCandidate] = {}
        if isinstance(candidates, RepeatedHypothesisList):
            self._to_inner = candidates.base_index_of
        else:
            self._to_inner = None
        self._check_elim = candidates.kind == "co_ce"

    def _fast_candidate(self, inner: int) -> _FastCandidate:
        fc = self._fast.get(inner)
        if fc is None:
            item = self.candidates.item(inner) if self._to_inner is None \
                else self.candidates.inner.item(inner)
            fc = _FastCandidate(item)
            self._fast[inner] = fc
        return fc

    def step_with(self, j: int) -> StageResult:
        """Consume one symbol (1-based index) and emit the stage guess."""
        self.table.add_index(j)
        n = self.table.n
        ln_num, ln_den = math.log(n).as_integer_ratio()
        counts = self.table._counts
        max_seen = len(counts)
        base = self.candidates.base
        to_inner = self._to_inner
        verdicts: dict[int, tuple[bool, int, int]] = {}

        def verdict_at(position: int) -> tuple[bool, int, int]:
            inner = to_inner(position) if to_inner is not None else position
            v = verdicts.get(inner)
            if v is None:
                v = self._fast_candidate(inner).verdict(
                    counts, max_seen, n, ln_num, ln_den)
                verdicts[inner] = v
            return v

        guess = None
        for position in range(1, n + 1):
            if not base.has(position):
                break
            if self._check_elim and self.candidates.eliminated_by(position, n):
                continue
            if verdict_at(position)[0]:
                guess = position
                break
        fallback = guess is None
        if fallback:
            guess = 1
        _, s_max, denom = verdict_at(guess)
        result = StageResult(
            n=n,
            guess=guess,
            fallback=fallback,
            score=Fraction(s_max, denom * n),
            threshold=threshold(n),
        )
        self.history.append(result)
        return result

    @property
    def guesses(self) -> list[int]:
        return [r.guess for r in self.history]


def reference_step(candidates: HypothesisList, table: FrequencyTable,
                   n: int) -> tuple[int, bool]:
    """Plain-rational selection used to cross-check the integer path."""
    base = candidates.base
    for position in range(1, n + 1):
        if not base.has(position):
            break
        if candidates.eliminated_by(position, n):
            continue
        if passes_threshold(score(candidates.item(position), table, n), n):
            return position, False
    return 1, True


def run_iid(candidates: HypothesisList, data: list[int],
            alphabet: Alphabet) -> list[StageResult]:
    """Fold the identifier over a full data prefix, one stage per symbol."""
    ident = IidIdentifier(candidates, alphabet)
    for j in data:
        ident.step_with(j)
    return ident.history
