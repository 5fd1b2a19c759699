"""Experiment harness: configs, builtin candidate lists, runs, traces.

A run samples data from a configured source, drives an identifier stage
by stage for each trial, and reports per-trial lock times: the stage
after which the guess never changes within the observed horizon.  Lock
time is an empirical surrogate; a limit identifier never reveals when
its guess has become final, and the summary header says so.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .complexity import get_estimator
from .descriptors import hypothesis_from_json, load_hypothesis_list
from .errors import BaseExhausted, ConfigError
from .iid import run_iid, threshold
from .listing import HypothesisList, repeat_infinitely
from .prediction import Prediction, black_swan_pair, predict_iid, predict_measure
from .programs import (
    Alphabet,
    MeasureProgram,
    PmfProgram,
    lift_iid,
    make_categorical,
    make_geometric,
    make_point_mass,
    make_repeat_first,
    measure_list,
    pmf_list,
)
from .sampling import (
    SeededSource,
    derive_trial_source,
    draw_from_measure,
    draw_iid,
    parse_sequence,
)
from .typicality import run_typicality

TRACE_VERSION = "limitid-trace-v1"
IID_HEADER = "trial,n,i_n,score,threshold,fallback"
MEASURE_HEADER = IID_HEADER + ",deficiency_bits"

_ABC = ["a", "b", "c"]
_AB = ["a", "b"]


def _categorical_five() -> HypothesisList:
    alphabet = Alphabet(_ABC)
    rows = [
        [Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)],
        [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)],
        [Fraction(1, 5), Fraction(2, 5), Fraction(2, 5)],
        [Fraction(2, 3), Fraction(1, 6), Fraction(1, 6)],
        [Fraction(1, 10), Fraction(3, 10), Fraction(3, 5)],
    ]
    return pmf_list([make_categorical(alphabet, row, descriptor=f"cat5[{i}]")
                     for i, row in enumerate(rows, start=1)])


def _geometric_pair() -> HypothesisList:
    return pmf_list([
        make_geometric(Fraction(1, 2), shift=1),
        make_geometric(Fraction(1, 2)),
    ])


def _bernoulli_rows() -> list[list[Fraction]]:
    # Wide separation on purpose: a wrong row must cost visibly more bits
    # per symbol than a deflate stream of the data, or the typicality
    # identifier cannot exclude its lift at desk scale.
    return [
        [Fraction(1, 16), Fraction(15, 16)],
        [Fraction(1, 2), Fraction(1, 2)],
        [Fraction(15, 16), Fraction(1, 16)],
    ]


def _bernoulli_pmfs() -> HypothesisList:
    alphabet = Alphabet(_AB)
    return pmf_list([make_categorical(alphabet, row, descriptor=f"coin[{i}]")
                     for i, row in enumerate(_bernoulli_rows(), start=1)])


def _bernoulli_lifts() -> HypothesisList:
    alphabet = Alphabet(_AB)
    return measure_list([
        lift_iid(make_categorical(alphabet, row, descriptor=f"coin[{i}]"))
        for i, row in enumerate(_bernoulli_rows(), start=1)
    ])


def _uniform_vs_point() -> HypothesisList:
    alphabet = Alphabet(_AB)
    uniform = make_categorical(alphabet, [Fraction(1, 2), Fraction(1, 2)],
                               descriptor="uniform(a,b)")
    return measure_list([lift_iid(uniform), make_point_mass(alphabet, 1)])


def _black_swan_demo() -> HypothesisList:
    mu1, mu0 = black_swan_pair(8)
    return measure_list([mu1, mu0, make_repeat_first(Alphabet(_AB), 2)])


BUILTIN_LISTS = {
    "categorical-five": _categorical_five,
    "geometric-pair": _geometric_pair,
    "bernoulli-pmfs": _bernoulli_pmfs,
    "bernoulli-lifts": _bernoulli_lifts,
    "uniform-vs-point": _uniform_vs_point,
    "black-swan-demo": _black_swan_demo,
}

_MODES = ("iid", "measure", "predict")
_CONFIG_KEYS = {
    "mode", "hypotheses", "source", "source_index", "seed", "trials",
    "n_max", "estimator", "fluctuation_lambda", "out", "data",
}


@dataclass
class ExperimentConfig:
    mode: str
    hypotheses_path: str | None = None
    builtin: str | None = None
    source: dict | None = None
    source_index: int | None = None
    seed: int = 0
    trials: int = 1
    n_max: int = 1
    estimator_id: str = "compress-default"
    fluctuation_lambda: float = math.sqrt(2)
    out: str | None = None
    data: list[str] | None = None


def _expect_int(doc: dict, key: str, default: int, minimum: int) -> int:
    value = doc.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(f"{key} must be an integer >= {minimum}, got {value!r}")
    return value


def parse_config(doc: object, base_dir: str = ".") -> ExperimentConfig:
    """Validate a config document; unknown keys are rejected."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    mode = doc.get("mode")
    if mode not in _MODES:
        raise ConfigError(f"mode must be one of {', '.join(_MODES)}, got {mode!r}")

    hypotheses_path = builtin = None
    hyp = doc.get("hypotheses")
    if isinstance(hyp, str):
        hypotheses_path = hyp if os.path.isabs(hyp) else os.path.join(base_dir, hyp)
    elif isinstance(hyp, dict) and set(hyp) == {"builtin"}:
        builtin = hyp["builtin"]
        if builtin not in BUILTIN_LISTS:
            raise ConfigError(f"unknown builtin list {builtin!r}; known: "
                              + ", ".join(sorted(BUILTIN_LISTS)))
    elif hyp is not None:
        raise ConfigError('hypotheses must be a file path or {"builtin": id}')

    source = doc.get("source")
    if source is not None and not isinstance(source, dict):
        raise ConfigError("source must be a hypothesis descriptor object")
    source_index = doc.get("source_index")
    if source_index is not None and (not isinstance(source_index, int)
                                     or isinstance(source_index, bool)
                                     or source_index < 1):
        raise ConfigError(f"source_index must be an integer >= 1, got {source_index!r}")

    lam = doc.get("fluctuation_lambda", math.sqrt(2))
    if isinstance(lam, bool) or not isinstance(lam, (int, float)) or not lam > 1:
        raise ConfigError(f"fluctuation_lambda must be a number > 1, got {lam!r}")

    estimator_id = doc.get("estimator", "compress-default")
    if not isinstance(estimator_id, str):
        raise ConfigError(f"estimator must be a string id, got {estimator_id!r}")

    out = doc.get("out")
    if out is not None:
        if not isinstance(out, str):
            raise ConfigError(f"out must be a path string, got {out!r}")
        if not os.path.isabs(out):
            out = os.path.join(base_dir, out)

    data = doc.get("data")
    if data is not None:
        if isinstance(data, str):
            data = parse_sequence(data)
        elif isinstance(data, list) and all(isinstance(s, str) for s in data):
            data = list(data)
        else:
            raise ConfigError("data must be a comma-separated string "
                              "or a list of symbols")

    config = ExperimentConfig(
        mode=mode,
        hypotheses_path=hypotheses_path,
        builtin=builtin,
        source=source,
        source_index=source_index,
        seed=_expect_int(doc, "seed", 0, 0),
        trials=_expect_int(doc, "trials", 1, 1),
        n_max=_expect_int(doc, "n_max", 1, 1),
        estimator_id=estimator_id,
        fluctuation_lambda=float(lam),
        out=out,
        data=data,
    )
    if mode in ("iid", "measure"):
        if config.hypotheses_path is None and config.builtin is None:
            raise ConfigError(f"{mode} mode needs a hypotheses file or builtin id")
        if config.source is None and config.source_index is None:
            raise ConfigError(f"{mode} mode needs source or source_index")
    else:
        if config.data is None:
            raise ConfigError("predict mode needs a data prefix (may be empty)")
        if config.source is None and (config.source_index is None
                                      or (config.hypotheses_path is None
                                          and config.builtin is None)):
            raise ConfigError("predict mode needs source, or hypotheses "
                              "plus source_index")
    return config


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path} is not valid JSON: {err}") from err
    return parse_config(doc, base_dir=os.path.dirname(os.path.abspath(path)))


def resolve_hypotheses(config: ExperimentConfig) -> HypothesisList | None:
    if config.builtin is not None:
        return BUILTIN_LISTS[config.builtin]()
    if config.hypotheses_path is not None:
        return load_hypothesis_list(config.hypotheses_path)
    return None


def resolve_source(config: ExperimentConfig,
                   candidates: HypothesisList | None):
    if config.source is not None:
        return hypothesis_from_json(config.source)
    if candidates is None:
        raise ConfigError("source_index given without a hypothesis list")
    try:
        return candidates.item(config.source_index)
    except BaseExhausted as err:
        raise ConfigError(f"source_index {config.source_index} is past "
                          f"the end of the hypothesis list") from err


@dataclass(frozen=True)
class TraceRecord:
    trial: int
    n: int
    i_n: int
    score: float
    threshold: float
    fallback: int
    deficiency_bits: float | None = None


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    lock_time: int | None
    final_guess: int


@dataclass
class Summary:
    mode: str
    trials: int
    n_max: int
    outcomes: list[TrialOutcome]
    seed: int | None = None

    @property
    def lock_in_rate(self) -> float:
        locked = sum(1 for o in self.outcomes if o.lock_time is not None)
        return locked / len(self.outcomes) if self.outcomes else 0.0

    def format(self) -> str:
        lines = [
            "# lock-time summary: lock time is an empirical surrogate; "
            "a limit identifier never reveals when its guess is final",
            f"mode={self.mode} trials={self.trials} n_max={self.n_max}"
            + (f" seed={self.seed}" if self.seed is not None else ""),
        ]
        for o in self.outcomes:
            lock = "none" if o.lock_time is None else str(o.lock_time)
            lines.append(f"trial={o.trial} lock_time={lock} "
                         f"final_guess={o.final_guess}")
        lines.append(f"lock_in_rate={self.lock_in_rate!r}")
        return "\n".join(lines)


def lock_time(guesses: Sequence[int]) -> int | None:
    """Start of the final constant run, or None if it begins at the end."""
    if not guesses:
        raise ValueError("lock time needs a nonempty guess trace")
    if len(guesses) >= 2 and guesses[-1] != guesses[-2]:
        return None
    n0 = len(guesses)
    while n0 > 1 and guesses[n0 - 2] == guesses[-1]:
        n0 -= 1
    return n0


def summarize(mode: str, n_max: int, guesses_by_trial: dict[int, list[int]],
              seed: int | None = None) -> Summary:
    outcomes = [
        TrialOutcome(trial=t, lock_time=lock_time(gs), final_guess=gs[-1])
        for t, gs in sorted(guesses_by_trial.items())
    ]
    return Summary(mode=mode, trials=len(outcomes), n_max=n_max,
                   outcomes=outcomes, seed=seed)


def run_experiment(config: ExperimentConfig,
                   keep_records: bool | None = None
                   ) -> tuple[Summary, list[TraceRecord]]:
    """Run all trials; write the trace file when an output path is set."""
    if config.mode == "predict":
        raise ConfigError("predict mode has no trials; use run_predict")
    candidates = resolve_hypotheses(config)
    source = resolve_source(config, candidates)
    first = candidates.item(1)
    alphabet = first.alphabet
    if keep_records is None:
        keep_records = config.out is not None
    records: list[TraceRecord] = []
    guesses_by_trial: dict[int, list[int]] = {}

    if config.mode == "iid":
        if not isinstance(first, PmfProgram) or not isinstance(source, PmfProgram):
            raise ConfigError("iid mode needs pmf hypotheses and a pmf source")
        for trial in range(config.trials):
            src = derive_trial_source(config.seed, trial)
            data = draw_iid(source, src, config.n_max)
            results = run_iid(candidates, data, alphabet)
            guesses_by_trial[trial] = [r.guess for r in results]
            if keep_records:
                records.extend(
                    TraceRecord(trial, r.n, r.guess, float(r.score),
                                r.threshold, int(r.fallback))
                    for r in results
                )
    else:
        if not isinstance(first, MeasureProgram) \
                or not isinstance(source, MeasureProgram):
            raise ConfigError("measure mode needs measure hypotheses "
                              "and a measure source")
        estimator = get_estimator(config.estimator_id)
        wrapped = repeat_infinitely(candidates)
        for trial in range(config.trials):
            src = derive_trial_source(config.seed, trial)
            data = draw_from_measure(source, src, config.n_max)
            results = run_typicality(wrapped, data, alphabet, estimator)
            guesses_by_trial[trial] = [r.guess for r in results]
            if keep_records:
                records.extend(
                    TraceRecord(trial, r.n, r.guess, r.deficiency,
                                float(r.bound), int(r.fallback), r.deficiency)
                    for r in results
                )

    summary = summarize(config.mode, config.n_max, guesses_by_trial,
                        seed=config.seed)
    if config.out is not None:
        write_trace(config.out, records, measure_mode=config.mode == "measure")
    return summary, records


def run_predict(config: ExperimentConfig) -> Prediction:
    candidates = resolve_hypotheses(config)
    source = resolve_source(config, candidates)
    alphabet = source.alphabet
    try:
        prefix = [alphabet.index(s) for s in config.data]
    except Exception as err:
        raise ConfigError(f"bad data prefix: {err}") from err
    if isinstance(source, PmfProgram):
        return predict_iid(source)
    return predict_measure(source, prefix)


def format_prediction(prediction: Prediction) -> str:
    return "\n".join(f"{symbol}={value}"
                     for symbol, value in prediction.as_dict().items())


def write_trace(path: str, records: list[TraceRecord],
                measure_mode: bool) -> None:
    lines = [f"# {TRACE_VERSION}",
             MEASURE_HEADER if measure_mode else IID_HEADER]
    for r in records:
        row = (f"{r.trial},{r.n},{r.i_n},{r.score!r},"
               f"{r.threshold!r},{r.fallback}")
        if measure_mode:
            row += f",{r.deficiency_bits!r}"
        lines.append(row)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace(path: str) -> tuple[list[TraceRecord], bool]:
    """Parse a trace file; returns the records and the measure-mode flag."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as err:
        raise ConfigError(f"cannot read trace {path}: {err}") from err
    if len(lines) < 2 or lines[0] != f"# {TRACE_VERSION}":
        raise ConfigError(f"{path} is not a {TRACE_VERSION} trace file")
    if lines[1] == IID_HEADER:
        measure_mode = False
    elif lines[1] == MEASURE_HEADER:
        measure_mode = True
    else:
        raise ConfigError(f"{path} has an unexpected column header")
    records = []
    width = 7 if measure_mode else 6
    for lineno, line in enumerate(lines[2:], start=3):
        parts = line.split(",")
        if len(parts) != width:
            raise ConfigError(f"{path}:{lineno}: expected {width} columns")
        try:
            records.append(TraceRecord(
                trial=int(parts[0]), n=int(parts[1]), i_n=int(parts[2]),
                score=float(parts[3]), threshold=float(parts[4]),
                fallback=int(parts[5]),
                deficiency_bits=float(parts[6]) if measure_mode else None,
            ))
        except ValueError as err:
            raise ConfigError(f"{path}:{lineno}: {err}") from err
    return records, measure_mode


def summarize_trace(records: list[TraceRecord], measure_mode: bool) -> Summary:
    guesses_by_trial: dict[int, list[int]] = {}
    n_max = 0
    for r in records:
        guesses_by_trial.setdefault(r.trial, []).append(r.i_n)
        n_max = max(n_max, r.n)
    if not guesses_by_trial:
        raise ConfigError("trace file contains no records")
    return summarize("measure" if measure_mode else "iid",
                     n_max, guesses_by_trial)


def fluctuation_violation_fraction(p: PmfProgram, symbol_index: int,
                                   checkpoints: Sequence[int],
                                   seeds: Sequence[int],
                                   lam: float = 1.0) -> Fraction:
    """Fraction of (seed, checkpoint) pairs violating the deviation bound.

    A violation is |p(a) - count/n| >= lam * sqrt(ln n / n) at checkpoint
    n for the watched symbol.
    """
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    marks = sorted(set(checkpoints))
    if not marks or marks[0] < 1:
        raise ValueError("checkpoints must be positive stages")
    target = float(p.mass(symbol_index))
    horizon = marks[-1]
    violations = 0
    for seed in seeds:
        data = draw_iid(p, SeededSource(seed), horizon)
        count = 0
        mark_iter = iter(marks)
        mark = next(mark_iter)
        for n, j in enumerate(data, start=1):
            if j == symbol_index:
                count += 1
            if n == mark:
                if abs(count / n - target) >= lam * threshold(n):
                    violations += 1
                mark = next(mark_iter, None)
                if mark is None:
                    break
    return Fraction(violations, len(marks) * len(seeds))
