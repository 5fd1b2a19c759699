"""Deterministic seeded sampling with exact rational inverse-CDF selection.

Uniform randomness comes from a 64-bit SplitMix64 stream; each draw
consumes two words to form a dyadic rational u = k / 2**128.  Symbol
selection compares exact cumulative masses against u, so no float ever
enters the sampling path.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import AlphabetTooLarge
from .programs import MeasureProgram, PmfProgram

_MASK64 = (1 << 64) - 1
U_BITS = 128
U_DENOM = 1 << U_BITS
_TAIL_FLOOR = Fraction(1, U_DENOM)


class SeededSource:
    """SplitMix64 word stream; identical seed gives an identical stream."""

    algorithm_id = "splitmix64"

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {seed}")
        self.seed = seed & _MASK64
        self._state = self.seed

    def next_word(self) -> int:
        """Next uniform 64-bit word."""
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> int:
        """Numerator k of the dyadic rational u = k / 2**128, high word first."""
        hi = self.next_word()
        lo = self.next_word()
        return (hi << 64) | lo


def derive_trial_source(seed: int, trial_index: int) -> SeededSource:
    """Independent per-trial stream: seed XOR trial index (0-based)."""
    if trial_index < 0:
        raise ValueError(f"trial index must be >= 0, got {trial_index}")
    return SeededSource((seed & _MASK64) ^ trial_index)


def _cdf_cache(p: PmfProgram) -> list[tuple[int, int, int]]:
    """Per-symbol (scaled cumulative numerator, denominator, mass sign).

    Entry m holds (c_num << 128, c_den, mass_positive) for the cumulative
    mass c through index m+1, so c >= u reduces to an integer comparison.
    """
    cache = getattr(p, "_sampling_cdf", None)
    if cache is None:
        cache = []
        p._sampling_cdf = cache
        p._sampling_cum = Fraction(0)
    return cache


def _extend_cdf(p: PmfProgram, upto: int) -> None:
    cache = _cdf_cache(p)
    cum = p._sampling_cum
    while len(cache) < upto:
        m = len(cache) + 1
        mass = p.mass(m)
        cum += mass
        cache.append((cum.numerator << U_BITS, cum.denominator, mass > 0))
    p._sampling_cum = cum


def _select_symbol(p: PmfProgram, u: int) -> int:
    """Least positive-mass index m with cumulative mass >= u / 2**128.

    An exact cumulative equal to u selects the lower index (the >= side).
    Unbounded supports truncate once less than 2**-128 of tail mass
    remains; the residual is assigned to the next symbol.
    """
    cache = _cdf_cache(p)
    size = p.alphabet.size
    m = 0
    while True:
        if m == len(cache):
            if size is not None and m >= size:
                # Exact normalization makes this unreachable: the final
                # cumulative equals 1 >= u for every u < 2**128.
                raise AssertionError("inverse-CDF ran past a normalized pmf")
            _extend_cdf(p, m + 1)
        scaled_num, den, positive = cache[m]
        m += 1
        if positive and scaled_num >= u * den:
            return m
        if size is None and p.tail_after(m) < _TAIL_FLOOR:
            return m + 1


def draw_iid(p: PmfProgram, src: SeededSource, n: int) -> list[int]:
    """n independent draws from p, as 1-based symbol indices."""
    if n < 0:
        raise ValueError(f"draw count must be >= 0, got {n}")
    out = []
    for _ in range(n):
        out.append(_select_symbol(p, src.next_unit()))
    return out


def draw_from_measure(mu: MeasureProgram, src: SeededSource, n: int) -> list[int]:
    """n symbols sampled sequentially from the measure's conditionals."""
    if n < 0:
        raise ValueError(f"draw count must be >= 0, got {n}")
    size = mu.alphabet.require_finite("sequential measure sampling")
    cursor = mu.start()
    out = []
    for _ in range(n):
        u = Fraction(src.next_unit(), U_DENOM) * cursor.mass
        cum = Fraction(0)
        chosen = None
        for j in range(1, size + 1):
            ext = cursor.extension_mass(j)
            if ext == 0:
                continue
            cum += ext
            if cum >= u:
                chosen = j
                break
        # The chain rule makes the cumulative reach cursor.mass >= u,
        # so a dead end is impossible for an exactly additive measure.
        assert chosen is not None, "measure sampling hit a dead end"
        cursor.advance(chosen)
        out.append(chosen)
    return out


def format_sequence(symbols: list[str]) -> str:
    """Comma-separated symbol identifiers, no trailing newline."""
    return ",".join(symbols)


def parse_sequence(text: str) -> list[str]:
    """Inverse of format_sequence; empty text means the empty sequence."""
    text = text.strip()
    if not text:
        return []
    return [part.strip() for part in text.split(",")]
