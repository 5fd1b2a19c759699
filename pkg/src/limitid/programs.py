"""Exact-arithmetic probability programs over countable alphabets.

Two program kinds are provided.  A pmf program gives rational point
masses for single symbols plus an exact tail-mass oracle.  A measure
program gives rational masses for finite prefixes of an infinite
sequence through an incremental cursor, so evaluating along a growing
prefix costs one extension step per symbol.  Both carry a short
descriptor string naming the program.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .errors import (
    AlphabetTooLarge,
    AlphabetTooSmall,
    NegativeMass,
    NotNormalized,
    UnknownSymbol,
    ZeroNormalizer,
)
from .listing import HypothesisList, LazySequence

ZERO = Fraction(0)
ONE = Fraction(1)

_DEFAULT_NAME = re.compile(r"a([1-9][0-9]*)\Z")


def as_fraction(value: Any) -> Fraction:
    """Coerce int / Fraction / (num, den) to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, tuple) and len(value) == 2:
        return Fraction(value[0], value[1])
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class Alphabet:
    """Finite or unbounded ordered symbol set with 1-based indices."""

    def __init__(self, symbols: Sequence[str] | None = None,
                 namer: Callable[[int], str] | None = None):
        if symbols is not None:
            symbols = list(symbols)
            if not symbols:
                raise AlphabetTooSmall("alphabet must contain at least one symbol")
            if len(set(symbols)) != len(symbols):
                raise ValueError("alphabet symbols must be distinct")
            self._symbols: list[str] | None = symbols
            self._index = {s: j + 1 for j, s in enumerate(symbols)}
            self._namer = None
        else:
            self._symbols = None
            self._namer = namer or (lambda j: f"a{j}")
            self._index = {}

    @classmethod
    def unbounded(cls) -> "Alphabet":
        """Countably infinite alphabet with default names a1, a2, ..."""
        return cls(symbols=None, namer=None)

    @property
    def size(self) -> int | None:
        """Number of symbols, or None when unbounded."""
        return None if self._symbols is None else len(self._symbols)

    @property
    def is_unbounded(self) -> bool:
        return self._symbols is None

    def require_finite(self, what: str) -> int:
        if self._symbols is None:
            raise AlphabetTooLarge(f"{what} requires a finite alphabet")
        return len(self._symbols)

    def symbol(self, j: int) -> str:
        """Symbol at 1-based index j."""
        if j < 1:
            raise UnknownSymbol(f"symbol index must be >= 1, got {j}")
        if self._symbols is not None:
            if j > len(self._symbols):
                raise UnknownSymbol(
                    f"index {j} out of range for alphabet of size {len(self._symbols)}"
                )
            return self._symbols[j - 1]
        return self._namer(j)

    def index(self, symbol: str) -> int:
        """1-based index of a symbol name."""
        got = self._index.get(symbol)
        if got is not None:
            return got
        if self._symbols is None:
            m = _DEFAULT_NAME.match(symbol)
            if m and self._namer(int(m.group(1))) == symbol:
                return int(m.group(1))
        raise UnknownSymbol(f"symbol {symbol!r} is not in the alphabet")

    def symbols(self) -> list[str]:
        self.require_finite("listing all symbols")
        return list(self._symbols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Alphabet):
            return NotImplemented
        if self._symbols is not None or other._symbols is not None:
            return self._symbols == other._symbols
        return True  # unbounded alphabets share the canonical naming

    def __repr__(self) -> str:
        if self._symbols is None:
            return "Alphabet.unbounded()"
        return f"Alphabet({self._symbols!r})"


class PmfProgram:
    """Computable pmf: exact point masses plus an exact tail oracle.

    tail_after(m) is the total mass of symbols with index > m.  Finite
    alphabets get it by summation; unbounded supports must supply a
    closed form so truncation sets stay exactly computable.
    """

    def __init__(self, alphabet: Alphabet, mass_fn: Callable[[int], Fraction],
                 descriptor: str, tail_fn: Callable[[int], Fraction] | None = None):
        self.alphabet = alphabet
        self.descriptor = descriptor
        self._mass_fn = mass_fn
        self._cache: dict[int, Fraction] = {}
        if tail_fn is None:
            alphabet.require_finite(f"pmf {descriptor!r} without a tail oracle")
        self._tail_fn = tail_fn

    def mass(self, j: int) -> Fraction:
        """Mass of the symbol at 1-based index j."""
        got = self._cache.get(j)
        if got is None:
            size = self.alphabet.size
            if size is not None and j > size:
                got = ZERO
            else:
                got = self._mass_fn(j)
                if got < 0:
                    raise NegativeMass(
                        f"pmf {self.descriptor!r} has mass {got} at index {j}"
                    )
            self._cache[j] = got
        return got

    def mass_of(self, symbol: str) -> Fraction:
        return self.mass(self.alphabet.index(symbol))

    def tail_after(self, m: int) -> Fraction:
        """Exact total mass of symbols with index > m (m >= 0)."""
        if m < 0:
            raise ValueError(f"tail index must be >= 0, got {m}")
        if self._tail_fn is not None:
            return self._tail_fn(m)
        size = self.alphabet.size
        if m >= size:
            return ZERO
        return sum((self.mass(j) for j in range(m + 1, size + 1)), ZERO)

    def check_normalized(self) -> None:
        """Raise NotNormalized unless total mass is exactly 1."""
        total = self.tail_after(0)
        if total != 1:
            raise NotNormalized(f"pmf {self.descriptor!r} has total mass {total}")

    def masses(self) -> list[Fraction]:
        """All point masses of a finite-alphabet pmf, in index order."""
        size = self.alphabet.require_finite("dense mass listing")
        return [self.mass(j) for j in range(1, size + 1)]

    def equals_on_alphabet(self, other: "PmfProgram", up_to: int | None = None) -> bool:
        """Exact pointwise equality; finite alphabets compare densely."""
        if up_to is None:
            size = self.alphabet.size
            other_size = other.alphabet.size
            if size is None or other_size is None:
                raise AlphabetTooLarge(
                    "unbounded pmf comparison needs an explicit index bound"
                )
            up_to = max(size, other_size)
        return all(self.mass(j) == other.mass(j) for j in range(1, up_to + 1))

    def __repr__(self) -> str:
        return f"PmfProgram({self.descriptor!r})"


def make_categorical(alphabet: Alphabet, masses: Sequence[Any],
                     descriptor: str | None = None) -> PmfProgram:
    """Finite-alphabet pmf from explicit masses that must sum to 1."""
    size = alphabet.require_finite("a categorical pmf")
    if len(masses) != size:
        raise ValueError(f"expected {size} masses, got {len(masses)}")
    exact = [as_fraction(v) for v in masses]
    for j, v in enumerate(exact, start=1):
        if v < 0:
            raise NegativeMass(f"mass {v} at index {j} is negative")
    total = sum(exact, ZERO)
    if total != 1:
        raise NotNormalized(f"masses sum to {total}, expected 1")
    if descriptor is None:
        descriptor = "categorical(" + ",".join(str(v) for v in exact) + ")"
    return PmfProgram(alphabet, lambda j: exact[j - 1], descriptor)


def make_simple_pmf(alphabet: Alphabet, weights: Sequence[Any],
                    descriptor: str | None = None) -> PmfProgram:
    """Finite-alphabet pmf from nonnegative weights, normalized exactly."""
    size = alphabet.require_finite("a weight-normalized pmf")
    if len(weights) != size:
        raise ValueError(f"expected {size} weights, got {len(weights)}")
    exact = [as_fraction(v) for v in weights]
    for j, v in enumerate(exact, start=1):
        if v < 0:
            raise NegativeMass(f"weight {v} at index {j} is negative")
    total = sum(exact, ZERO)
    if total == 0:
        raise ZeroNormalizer("weights sum to zero")
    masses = [v / total for v in exact]
    if descriptor is None:
        descriptor = "simple_pmf(" + ",".join(str(v) for v in exact) + ")"
    return PmfProgram(alphabet, lambda j: masses[j - 1], descriptor)


def make_geometric(theta: Any, alphabet: Alphabet | None = None,
                   shift: int = 0, descriptor: str | None = None) -> PmfProgram:
    """Geometric pmf on an unbounded alphabet, optionally index-shifted.

    mass(a_j) = (1 - theta) * theta**(j - 1 - shift) for j > shift, else 0;
    tail_after(m) = theta**(m - shift) for m >= shift, else 1.
    """
    t = as_fraction(theta)
    if not (0 < t < 1):
        raise ValueError(f"theta must be strictly between 0 and 1, got {t}")
    if shift < 0:
        raise ValueError(f"shift must be >= 0, got {shift}")
    if alphabet is None:
        alphabet = Alphabet.unbounded()
    if not alphabet.is_unbounded:
        raise AlphabetTooSmall("a geometric pmf needs an unbounded alphabet")
    one_minus = 1 - t

    def mass(j: int) -> Fraction:
        if j <= shift:
            return ZERO
        return one_minus * t ** (j - 1 - shift)

    def tail(m: int) -> Fraction:
        if m <= shift:
            return ONE
        return t ** (m - shift)

    if descriptor is None:
        descriptor = f"geometric({t},shift={shift})"
    return PmfProgram(alphabet, mass, descriptor, tail_fn=tail)


def diagonalize(candidates: Sequence[PmfProgram], alphabet: Alphabet,
                descriptor: str | None = None) -> PmfProgram:
    """Build a pmf that differs from each of finitely many candidates.

    Start from the uniform pmf on the first 2m symbols (the whole
    alphabet when m = 0).  Candidate i owns the symbol pair
    (a_{2i-1}, a_{2i}); whenever the running pmf agrees with candidate i
    at a_{2i-1}, half of that mass moves to a_{2i}, which breaks the
    agreement without touching other candidates' pairs or the total.
    """
    m = len(candidates)
    size = alphabet.require_finite("diagonalization")
    if m == 0:
        masses = [Fraction(1, size)] * size
    else:
        if size < 2 * m:
            raise AlphabetTooSmall(
                f"need at least {2 * m} symbols to diagonalize {m} candidates, "
                f"alphabet has {size}"
            )
        masses = [Fraction(1, 2 * m)] * (2 * m) + [ZERO] * (size - 2 * m)
        for i, q in enumerate(candidates, start=1):
            odd = 2 * i - 1
            if masses[odd - 1] == q.mass(odd):
                half = masses[odd - 1] / 2
                masses[odd - 1] -= half
                masses[odd] += half
    if descriptor is None:
        descriptor = f"diagonal({m})"
    return make_categorical(alphabet, masses, descriptor=descriptor)


class FunctionFamily:
    """Indexed family of nonnegative rational weight functions.

    weight(i, k) is the i-th member's weight at argument k; both are
    1-based.  The argument indexes symbols for pmf families and string
    positions for measure families.
    """

    def __init__(self, descriptor: str,
                 weight_fn: Callable[[int, int], Any]):
        self.descriptor = descriptor
        self._weight_fn = weight_fn

    def weight(self, i: int, k: int) -> Fraction:
        if i < 1 or k < 1:
            raise ValueError(f"indices must be >= 1, got ({i}, {k})")
        w = as_fraction(self._weight_fn(i, k))
        if w < 0:
            raise NegativeMass(
                f"family {self.descriptor!r} weight at ({i}, {k}) is negative"
            )
        return w

    def __repr__(self) -> str:
        return f"FunctionFamily({self.descriptor!r})"


def make_simple_pmf_family(family: FunctionFamily,
                           alphabet: Alphabet) -> HypothesisList:
    """Lazy list whose i-th pmf has mass(a_j) proportional to weight(i, j)."""
    size = alphabet.require_finite("a weight-normalized pmf family")

    def member(i: int) -> PmfProgram:
        weights = [family.weight(i, j) for j in range(1, size + 1)]
        return make_simple_pmf(alphabet, weights,
                               descriptor=f"{family.descriptor}[{i}]")

    return HypothesisList(LazySequence(func=member), kind="ce")


def string_position(indices: Sequence[int], alphabet_size: int) -> int:
    """1-based rank of a string in length-increasing lexicographic order.

    Strings over a_1..a_s are ordered by length, ties broken
    lexicographically by symbol index; the empty string has rank 1.
    """
    if alphabet_size < 1:
        raise AlphabetTooSmall("string ordering needs at least one symbol")
    s = alphabet_size
    length = len(indices)
    offset = length if s == 1 else (s ** length - 1) // (s - 1)
    rank = 0
    for j in indices:
        if not (1 <= j <= s):
            raise UnknownSymbol(f"symbol index {j} out of range 1..{s}")
        rank = rank * s + (j - 1)
    return offset + rank + 1


def position_string(position: int, alphabet_size: int) -> list[int]:
    """Inverse of string_position: symbol indices at the given rank."""
    if position < 1:
        raise ValueError(f"position must be >= 1, got {position}")
    s = alphabet_size
    length = 0
    offset = 0
    while True:
        block = s ** length
        if position <= offset + block:
            break
        offset += block
        length += 1
    rank = position - offset - 1
    out = []
    for _ in range(length):
        out.append(rank % s + 1)
        rank //= s
    out.reverse()
    return out


class MeasureCursor:
    """Position inside one measure's tree of finite prefixes.

    mass is the exact measure of the prefix consumed so far (1 at the
    empty prefix).  Once the mass hits zero it stays zero and every
    extension has zero mass.
    """

    __slots__ = ("_measure", "mass", "_state", "length")

    def __init__(self, measure: "MeasureProgram"):
        self._measure = measure
        self.mass: Fraction = ONE
        self._state = measure._start_state
        self.length = 0

    def extension_mass(self, j: int) -> Fraction:
        """Exact mass of the current prefix extended by a_j."""
        if self.mass == 0:
            return ZERO
        factor, _ = self._measure._extend(self._state, j)
        return self.mass * factor

    def conditional(self, j: int) -> Fraction:
        """Exact conditional mass of a_j given the current prefix."""
        if self.mass == 0:
            raise ZeroNormalizer("conditional undefined on a zero-mass prefix")
        factor, _ = self._measure._extend(self._state, j)
        return factor

    def advance(self, j: int) -> None:
        """Append a_j to the prefix."""
        if self.mass == 0:
            self.length += 1
            return
        factor, state = self._measure._extend(self._state, j)
        self.mass *= factor
        self._state = state
        self.length += 1


class MeasureProgram:
    """Computable measure on infinite sequences, evaluated incrementally.

    The program is a state machine: extending a prefix by a_j multiplies
    its mass by an exact conditional and moves to a successor state, so
    the mass of a length-n prefix is a product of n conditionals
    starting from mass 1 at the empty prefix.
    """

    def __init__(self, alphabet: Alphabet, descriptor: str, start_state: Any,
                 extend_fn: Callable[[Any, int], tuple[Fraction, Any]]):
        self.alphabet = alphabet
        self.descriptor = descriptor
        self._start_state = start_state
        self._extend_raw = extend_fn
        self.base_pmf: PmfProgram | None = None  # set by lift_iid

    def _extend(self, state: Any, j: int) -> tuple[Fraction, Any]:
        if j < 1:
            raise UnknownSymbol(f"symbol index must be >= 1, got {j}")
        size = self.alphabet.size
        if size is not None and j > size:
            raise UnknownSymbol(
                f"index {j} out of range for alphabet of size {size}"
            )
        factor, state = self._extend_raw(state, j)
        if factor < 0:
            raise NegativeMass(
                f"measure {self.descriptor!r} has a negative conditional at index {j}"
            )
        return factor, state

    def start(self) -> MeasureCursor:
        """Cursor at the empty prefix."""
        return MeasureCursor(self)

    def prefix_mass(self, indices: Iterable[int]) -> Fraction:
        """Exact mass of a finite prefix given by symbol indices."""
        cursor = self.start()
        for j in indices:
            if cursor.mass == 0:
                return ZERO
            cursor.advance(j)
        return cursor.mass

    def mass_of(self, symbols: Iterable[str]) -> Fraction:
        return self.prefix_mass(self.alphabet.index(s) for s in symbols)

    def check_additive_at(self, indices: Sequence[int]) -> None:
        """Raise NotNormalized unless mass splits exactly across children."""
        size = self.alphabet.require_finite("additivity checking")
        cursor = self.start()
        for j in indices:
            cursor.advance(j)
        total = sum((cursor.extension_mass(j) for j in range(1, size + 1)), ZERO)
        if total != cursor.mass:
            raise NotNormalized(
                f"measure {self.descriptor!r} has child masses summing to {total} "
                f"under a prefix of mass {cursor.mass}"
            )

    def __repr__(self) -> str:
        return f"MeasureProgram({self.descriptor!r})"


def lift_iid(pmf: PmfProgram, descriptor: str | None = None) -> MeasureProgram:
    """Product measure of independent draws from one pmf."""
    pmf.alphabet.require_finite("an i.i.d. product measure")
    if descriptor is None:
        descriptor = f"iid({pmf.descriptor})"

    def extend(state: Any, j: int) -> tuple[Fraction, Any]:
        return pmf.mass(j), state

    measure = MeasureProgram(pmf.alphabet, descriptor, None, extend)
    measure.base_pmf = pmf
    return measure


def make_markov_measure(alphabet: Alphabet, initial: Sequence[Any],
                        transitions: Sequence[Sequence[Any]],
                        descriptor: str | None = None) -> MeasureProgram:
    """First-order Markov chain measure with exact rational rows."""
    size = alphabet.require_finite("a Markov measure")
    init = make_categorical(alphabet, initial, descriptor="markov-initial")
    if len(transitions) != size:
        raise ValueError(f"expected {size} transition rows, got {len(transitions)}")
    rows = []
    for r, row in enumerate(transitions, start=1):
        rows.append(make_categorical(alphabet, row,
                                     descriptor=f"markov-row-{r}").masses())
    first = init.masses()

    def extend(state: int | None, j: int) -> tuple[Fraction, int]:
        if state is None:
            return first[j - 1], j
        return rows[state - 1][j - 1], j

    if descriptor is None:
        descriptor = f"markov({size})"
    return MeasureProgram(alphabet, descriptor, None, extend)


def make_simple_measure_family(family: FunctionFamily,
                               alphabet: Alphabet) -> HypothesisList:
    """Lazy list of measures extending prefixes by relative string weights.

    Member i gives symbol a after prefix x the conditional mass
    weight(i, pos(xa)) / sum over symbols b of weight(i, pos(xb)), where
    pos is the 1-based length-increasing lexicographic rank of a string.
    """
    size = alphabet.require_finite("a weight-ratio measure family")

    def member(i: int) -> MeasureProgram:
        def extend(state: tuple[int, int], j: int) -> tuple[Fraction, tuple[int, int]]:
            length, rank = state
            child_base = rank * size  # rank of x a_1 among length+1 strings
            offset = (length + 1 if size == 1
                      else (size ** (length + 1) - 1) // (size - 1))
            weights = [family.weight(i, offset + child_base + d + 1)
                       for d in range(size)]
            total = sum(weights, ZERO)
            if total == 0:
                raise ZeroNormalizer(
                    f"family {family.descriptor!r} member {i} has all-zero "
                    f"weights after a prefix of length {length}"
                )
            return weights[j - 1] / total, (length + 1, child_base + (j - 1))

        return MeasureProgram(alphabet, f"{family.descriptor}[{i}]", (0, 0), extend)

    return HypothesisList(LazySequence(func=member), kind="ce")


def make_point_mass(alphabet: Alphabet, j: int,
                    descriptor: str | None = None) -> MeasureProgram:
    """Measure concentrated on the constant sequence a_j a_j a_j ..."""
    target = alphabet.symbol(j)
    if descriptor is None:
        descriptor = f"point({target})"

    def extend(state: Any, k: int) -> tuple[Fraction, Any]:
        return (ONE if k == j else ZERO), state

    return MeasureProgram(alphabet, descriptor, None, extend)


def make_repeat_first(alphabet: Alphabet, k: int,
                      descriptor: str | None = None) -> MeasureProgram:
    """Uniform choice among the first k symbols, then repeat it forever."""
    size = alphabet.size
    if k < 1 or (size is not None and k > size):
        raise AlphabetTooSmall(f"cannot spread a first symbol over {k} choices")
    share = Fraction(1, k)

    def extend(state: int | None, j: int) -> tuple[Fraction, int | None]:
        if state is None:
            return (share if j <= k else ZERO), j
        return (ONE if j == state else ZERO), state

    if descriptor is None:
        descriptor = f"repeat_first({k})"
    return MeasureProgram(alphabet, descriptor, None, extend)


def pmf_list(pmfs: Sequence[PmfProgram]) -> HypothesisList:
    """Finite c.e. list of pmf programs in the given order."""
    return HypothesisList(LazySequence(items=list(pmfs),
                                       length=len(pmfs)), kind="ce")


def measure_list(measures: Sequence[MeasureProgram]) -> HypothesisList:
    """Finite c.e. list of measure programs in the given order."""
    return HypothesisList(LazySequence(items=list(measures),
                                       length=len(measures)), kind="ce")
