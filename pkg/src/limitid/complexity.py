"""Computable upper bounds on description length, in bits.

True shortest-description length is incomputable, so estimators return
8 * (compressed byte length) + c0 using general-purpose compressors, or
a budgeted exhaustive search over a tiny prefix-free program format for
short inputs.  Every estimator obeys the copy bound 8*|x| + c0 and is
monotone nonincreasing in the search budget.
"""
from __future__ import annotations

import lzma
import zlib
from typing import Sequence

from .errors import AlphabetTooLarge, ConfigError, UnknownSymbol
from .programs import Alphabet

OVERHEAD_BITS = 64  # the c0 constant shared by all estimators


def serialize_symbols(indices: Sequence[int], alphabet: Alphabet) -> bytes:
    """One byte per symbol: its alphabet index minus 1."""
    size = alphabet.size
    if size is None or size > 256:
        raise AlphabetTooLarge(
            "byte serialization needs a finite alphabet of at most 256 symbols"
        )
    for j in indices:
        if j < 1 or j > size:
            raise UnknownSymbol(f"symbol index {j} out of range 1..{size}")
    return bytes(j - 1 for j in indices)


def _deflate_length(data: bytes, level: int) -> int:
    """Raw-deflate compressed byte length (no container header)."""
    co = zlib.compressobj(level, zlib.DEFLATED, -15)
    return len(co.compress(data)) + len(co.flush())


_LZMA_FILTERS = [{"id": lzma.FILTER_LZMA2, "preset": 9 | lzma.PRESET_EXTREME}]


def _lzma_length(data: bytes) -> int:
    return len(lzma.compress(data, format=lzma.FORMAT_RAW,
                              filters=_LZMA_FILTERS))


def _check_budget(t: int) -> None:
    if t < 0:
        raise ValueError(f"budget must be >= 0, got {t}")


class CompressDefault:
    """Deflate at the default level; the budget is ignored (documented)."""

    id = "compress-default"
    c0 = OVERHEAD_BITS

    def estimate(self, data: bytes, t: int) -> int:
        _check_budget(t)
        best = min(_deflate_length(data, 6), len(data))
        return 8 * best + self.c0

    def budget_key(self, t: int) -> object:
        _check_budget(t)
        return 0


class CompressMax:
    """Best of several encoders; budget ignored.

    Level 6 is tried alongside level 9 because deflate's lazy matching
    occasionally emits fewer bytes at the lower level; taking the min
    keeps this estimator at least as tight as compress-default.
    """

    id = "compress-max"
    c0 = OVERHEAD_BITS

    def estimate(self, data: bytes, t: int) -> int:
        _check_budget(t)
        best = min(_deflate_length(data, 6), _deflate_length(data, 9),
                   _lzma_length(data), len(data))
        return 8 * best + self.c0

    def budget_key(self, t: int) -> object:
        _check_budget(t)
        return 0


def _gamma_bits(k: int) -> int:
    """Elias-gamma code length of a positive integer."""
    return 2 * (k.bit_length() - 1) + 1


class EnumTiny:
    """Exhaustive search over a two-opcode prefix-free program format.

    A program is either [bit 0][gamma(L+1)][L raw bytes] emitting the
    bytes verbatim, or [bit 1][gamma(count)][one byte] emitting `count`
    copies of the byte.  The budget caps the searchable program length
    at min(t, 18) bits, so small budgets see fewer programs and the
    estimate shrinks monotonically as t grows.
    """

    id = "enum-tiny"
    c0 = OVERHEAD_BITS
    MAX_PROGRAM_BITS = 18

    def estimate(self, data: bytes, t: int) -> int:
        _check_budget(t)
        enabled = min(t, self.MAX_PROGRAM_BITS)
        best = 8 * len(data)  # copy bound, always available
        literal = 1 + _gamma_bits(len(data) + 1) + 8 * len(data)
        if literal <= enabled and literal < best:
            best = literal
        if data and data.count(data[0]) == len(data):
            run = 1 + _gamma_bits(len(data)) + 8
            if run <= enabled and run < best:
                best = run
        return best + self.c0

    def budget_key(self, t: int) -> object:
        _check_budget(t)
        return min(t, self.MAX_PROGRAM_BITS)


ESTIMATORS = {
    est.id: est for est in (CompressDefault(), CompressMax(), EnumTiny())
}


def get_estimator(estimator_id: str):
    est = ESTIMATORS.get(estimator_id)
    if est is None:
        known = ", ".join(sorted(ESTIMATORS))
        raise ConfigError(f"unknown estimator {estimator_id!r}; known: {known}")
    return est


def estimate_complexity(indices: Sequence[int], alphabet: Alphabet, t: int,
                        estimator_id: str = "compress-default") -> int:
    """Bits needed to describe the symbol sequence, per the estimator."""
    return get_estimator(estimator_id).estimate(
        serialize_symbols(indices, alphabet), t)
