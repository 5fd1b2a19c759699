"""Lazy hypothesis lists with c.e. / co-c.e. elimination semantics.

A list is a lazily memoized base sequence of hypothesis programs together
with a stream of (base_index, stage) elimination events.  A c.e. list has
an empty stream; a co-c.e. list eliminates "bad" entries as the stream is
consumed.  Views at a stage show the surviving prefix of the base order.
"""
from __future__ import annotations

import itertools
import threading
from typing import Any, Callable, Iterable, Iterator

from .errors import BaseExhausted, EmptyList

_UNSET = object()


class LazySequence:
    """Memoized, 1-indexed, possibly infinite sequence.

    Backed either by an iterator (finite length discovered on exhaustion)
    or by an index function.  Memoization is guarded by a lock so that
    concurrent readers observe each index computed exactly once.
    """

    def __init__(
        self,
        items: Iterable[Any] | None = None,
        func: Callable[[int], Any] | None = None,
        length: int | None = None,
    ):
        if (items is None) == (func is None):
            raise ValueError("provide exactly one of items or func")
        self._func = func
        self._iter: Iterator[Any] | None = iter(items) if items is not None else None
        self._cache: list[Any] = []
        self._length = length
        self._lock = threading.Lock()

    @classmethod
    def of(cls, *items: Any) -> "LazySequence":
        return cls(items=list(items), length=len(items))

    def known_length(self) -> int | None:
        """Length if the sequence is known finite, else None (so far)."""
        return self._length

    def has(self, index: int) -> bool:
        """True iff the 1-based index is within the sequence."""
        if index < 1:
            return False
        got = self._materialize(index)
        return got is not _UNSET

    def get(self, index: int) -> Any:
        """1-based access; raises BaseExhausted beyond a finite end."""
        if index < 1:
            raise IndexError(f"index must be >= 1, got {index}")
        got = self._materialize(index)
        if got is _UNSET:
            raise BaseExhausted(
                f"sequence has only {self._length} items, index {index} requested"
            )
        return got

    def _materialize(self, index: int) -> Any:
        with self._lock:
            if self._length is not None and index > self._length:
                return _UNSET
            while len(self._cache) < index:
                if self._iter is not None:
                    try:
                        self._cache.append(next(self._iter))
                    except StopIteration:
                        self._length = len(self._cache)
                        self._iter = None
                        return _UNSET
                else:
                    self._cache.append(self._func(len(self._cache) + 1))
            return self._cache[index - 1]


class HypothesisList:
    """Base sequence plus an elimination stream, with staged views.

    The elimination stream yields (base_index, stage) pairs in
    nondecreasing stage order; pairs are consumed lazily up to the stage a
    view asks about.  An index eliminated at stage s is absent from every
    view at stage >= s and never reappears.  kind="ce" forbids
    eliminations entirely.
    """

    def __init__(
        self,
        base: LazySequence,
        eliminations: Iterable[tuple[int, int]] = (),
        kind: str = "ce",
    ):
        if kind not in ("ce", "co_ce"):
            raise ValueError(f"kind must be 'ce' or 'co_ce', got {kind!r}")
        self.base = base
        self.kind = kind
        self._elim_iter: Iterator[tuple[int, int]] | None = iter(eliminations)
        self._elim_pending: tuple[int, int] | None = None
        self._elim_stage_consumed = -1
        self._eliminated: dict[int, int] = {}
        self._lock = threading.Lock()
        if kind == "ce":
            # A c.e. list must have an empty stream; probe it once.
            try:
                first = next(self._elim_iter)
            except StopIteration:
                self._elim_iter = None
            else:
                raise ValueError(f"c.e. list cannot eliminate entries, got {first}")

    def item(self, base_index: int) -> Any:
        return self.base.get(base_index)

    def _consume_until(self, stage: int) -> None:
        with self._lock:
            while self._elim_stage_consumed < stage:
                if self._elim_pending is None:
                    if self._elim_iter is None:
                        self._elim_stage_consumed = stage
                        return
                    try:
                        self._elim_pending = next(self._elim_iter)
                    except StopIteration:
                        self._elim_iter = None
                        self._elim_stage_consumed = stage
                        return
                idx, s = self._elim_pending
                if s < self._elim_stage_consumed:
                    raise ValueError(
                        "elimination stream must be ordered by nondecreasing stage"
                    )
                if s > stage:
                    return
                self._eliminated.setdefault(idx, s)
                self._elim_stage_consumed = s
                self._elim_pending = None

    def eliminated_by(self, base_index: int, stage: int) -> bool:
        """True iff base_index is eliminated at some stage <= stage."""
        self._consume_until(stage)
        s = self._eliminated.get(base_index)
        return s is not None and s <= stage

    def iter_view(self, stage: int) -> Iterator[tuple[int, Any]]:
        """Yield (base_index, item) for survivors at the stage, in order.

        Stops silently when a finite base is exhausted.
        """
        for base_index in itertools.count(1):
            if not self.base.has(base_index):
                return
            if not self.eliminated_by(base_index, stage):
                yield base_index, self.base.get(base_index)

    def view(self, stage: int, k: int) -> list[Any]:
        """First k surviving items at the stage; BaseExhausted if fewer."""
        out = []
        for _, item in self.iter_view(stage):
            if len(out) == k:
                break
            out.append(item)
        if len(out) < k:
            raise BaseExhausted(
                f"only {len(out)} survivors at stage {stage}, {k} requested"
            )
        return out

    def view_prefix(self, stage: int, k: int) -> list[Any]:
        """Like view but returns the (possibly shorter) available prefix."""
        out = []
        for _, item in self.iter_view(stage):
            if len(out) == k:
                break
            out.append(item)
        return out


class RepeatedHypothesisList(HypothesisList):
    """Diagonal infinite repetition of an inner list.

    Pairs (base index i, repetition r) are enumerated in blocks of
    constant i + r, ascending i inside a block, skipping i beyond a finite
    inner base.  Every surviving inner entry therefore appears at
    infinitely many positions, and eliminating an inner index removes all
    of its copies at once.
    """

    def __init__(self, inner: HypothesisList):
        if not inner.base.has(1):
            raise EmptyList("cannot repeat an empty hypothesis list")
        self.inner = inner
        self.kind = inner.kind
        self._positions: list[int] = []  # output position -> inner base index
        self._pair_iter = self._pairs()
        self._map_lock = threading.Lock()
        self.base = LazySequence(func=self._item_at)

    def _pairs(self) -> Iterator[int]:
        for total in itertools.count(2):
            for i in range(1, total):
                if self.inner.base.has(i):
                    yield i
                else:
                    break  # base indices past a finite end never exist

    def base_index_of(self, position: int) -> int:
        """Inner base index that output position (1-based) is a copy of."""
        with self._map_lock:
            while len(self._positions) < position:
                self._positions.append(next(self._pair_iter))
            return self._positions[position - 1]

    def _item_at(self, position: int) -> Any:
        return self.inner.item(self.base_index_of(position))

    def eliminated_by(self, position: int, stage: int) -> bool:
        return self.inner.eliminated_by(self.base_index_of(position), stage)


def list_view(hypotheses: HypothesisList, stage: int, k: int) -> list[Any]:
    """First k hypotheses surviving at the stage (module-level alias)."""
    return hypotheses.view(stage, k)


def repeat_infinitely(hypotheses: HypothesisList) -> RepeatedHypothesisList:
    """Diagonal repetition so every entry occurs infinitely often."""
    return RepeatedHypothesisList(hypotheses)
