"""JSON exchange format for hypothesis programs and hypothesis lists.

A hypothesis document is {"kind": ..., "alphabet": [symbols], "params":
...} with exact rationals encoded as {"num": int, "den": int}.  A
hypothesis-list file is a JSON array of such documents.  Weight-ratio
measures name a registered weight family plus a member index, since
their weight functions range over infinitely many strings.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ConfigError, LimitIdError
from .listing import HypothesisList
from .programs import (
    Alphabet,
    FunctionFamily,
    MeasureProgram,
    PmfProgram,
    lift_iid,
    make_categorical,
    make_markov_measure,
    make_simple_measure_family,
    make_simple_pmf,
    measure_list,
    pmf_list,
)

PMF_KINDS = ("categorical", "simple_pmf")
MEASURE_KINDS = ("markov", "iid_lift", "simple_measure")


def rational_from_json(obj: Any, what: str = "value") -> Fraction:
    """Parse {"num": int, "den": int} (plain integers also accepted)."""
    if isinstance(obj, bool):
        raise ConfigError(f"{what} must be a rational, got a boolean")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        num, den = obj["num"], obj["den"]
        if isinstance(num, int) and isinstance(den, int) and den != 0:
            return Fraction(num, den)
    raise ConfigError(
        f'{what} must be an integer or {{"num": int, "den": int}}, got {obj!r}'
    )


def rational_to_json(value: Fraction) -> dict[str, int]:
    return {"num": value.numerator, "den": value.denominator}


MEASURE_FAMILIES: dict[str, FunctionFamily] = {
    # weight(i, k) over 1-based string positions in length-increasing
    # lexicographic order; member i = 1 is uniform in both families.
    "constant-one": FunctionFamily("constant-one", lambda i, k: 1),
    "argument-power": FunctionFamily("argument-power",
                                     lambda i, k: k ** (i - 1)),
}


def register_measure_family(family: FunctionFamily) -> None:
    """Make a weight family referencable from descriptor files."""
    if family.descriptor in MEASURE_FAMILIES:
        raise ConfigError(f"family {family.descriptor!r} already registered")
    MEASURE_FAMILIES[family.descriptor] = family


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _parse_alphabet(obj: Any) -> Alphabet:
    _require(isinstance(obj, list) and obj, "alphabet must be a nonempty list")
    _require(all(isinstance(s, str) for s in obj),
             "alphabet symbols must be strings")
    _require(len(set(obj)) == len(obj), "alphabet symbols must be distinct")
    return Alphabet(obj)


def _rational_list(obj: Any, what: str) -> list[Fraction]:
    _require(isinstance(obj, list), f"{what} must be a list")
    return [rational_from_json(v, f"{what}[{k}]") for k, v in enumerate(obj)]


def hypothesis_from_json(doc: Any) -> PmfProgram | MeasureProgram:
    """Build a pmf or measure program from one descriptor document."""
    _require(isinstance(doc, dict), "hypothesis descriptor must be an object")
    kind = doc.get("kind")
    _require(kind in PMF_KINDS + MEASURE_KINDS,
             f"unknown hypothesis kind {kind!r}")
    alphabet = _parse_alphabet(doc.get("alphabet"))
    params = doc.get("params")
    _require(isinstance(params, dict), "params must be an object")
    try:
        if kind == "categorical":
            return make_categorical(alphabet,
                                    _rational_list(params.get("masses"), "masses"))
        if kind == "simple_pmf":
            return make_simple_pmf(alphabet,
                                   _rational_list(params.get("weights"), "weights"))
        if kind == "markov":
            rows = params.get("rows")
            _require(isinstance(rows, list), "rows must be a list of lists")
            return make_markov_measure(
                alphabet,
                _rational_list(params.get("initial"), "initial"),
                [_rational_list(row, f"rows[{r}]") for r, row in enumerate(rows)],
            )
        if kind == "iid_lift":
            inner = doc_pmf = params.get("pmf")
            _require(isinstance(inner, dict), "iid_lift params need a pmf object")
            _require(doc_pmf.get("kind") in PMF_KINDS,
                     "iid_lift must wrap a pmf descriptor")
            pmf = hypothesis_from_json(inner)
            _require(pmf.alphabet == alphabet,
                     "iid_lift alphabet must match the wrapped pmf")
            return lift_iid(pmf)
        family_id = params.get("family")
        family = MEASURE_FAMILIES.get(family_id)
        _require(family is not None,
                 f"unknown weight family {family_id!r}; known: "
                 + ", ".join(sorted(MEASURE_FAMILIES)))
        index = params.get("index")
        _require(isinstance(index, int) and index >= 1,
                 "family member index must be an integer >= 1")
        return make_simple_measure_family(family, alphabet).item(index)
    except ConfigError:
        raise
    except (LimitIdError, ValueError, TypeError) as err:
        raise ConfigError(f"invalid {kind} descriptor: {err}") from err


def hypothesis_list_from_json(doc: Any) -> HypothesisList:
    """Parse a JSON array of descriptors into a finite c.e. list."""
    _require(isinstance(doc, list) and doc,
             "hypothesis list must be a nonempty JSON array")
    programs = [hypothesis_from_json(entry) for entry in doc]
    kinds = {isinstance(p, PmfProgram) for p in programs}
    _require(len(kinds) == 1, "hypothesis list mixes pmfs and measures")
    first_alphabet = programs[0].alphabet
    _require(all(p.alphabet == first_alphabet for p in programs),
             "hypothesis list mixes alphabets")
    if isinstance(programs[0], PmfProgram):
        return pmf_list(programs)
    return measure_list(programs)


def load_hypothesis_list(path: str) -> HypothesisList:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read hypothesis file {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"hypothesis file {path} is not valid JSON: {err}") from err
    return hypothesis_list_from_json(doc)
