"""Identification in the limit of computable probability models.

Two identifiers are provided.  The i.i.d. identifier consumes draws
from an unknown pmf and converges to the first correct program in a
hypothesis list; admission compares the worst empirical deviation on a
truncated support against sqrt(ln n / n).  The typicality identifier
consumes one sampled sequence from an unknown measure and converges on
every typical sequence; admission bounds a compression-based randomness
deficiency by the candidate's position in the list.
"""
from .complexity import (
    ESTIMATORS,
    OVERHEAD_BITS,
    CompressDefault,
    CompressMax,
    EnumTiny,
    estimate_complexity,
    get_estimator,
    serialize_symbols,
)
from .descriptors import (
    MEASURE_FAMILIES,
    hypothesis_from_json,
    hypothesis_list_from_json,
    load_hypothesis_list,
    rational_from_json,
    rational_to_json,
    register_measure_family,
)
from .errors import (
    AlphabetTooLarge,
    AlphabetTooSmall,
    BaseExhausted,
    ConfigError,
    EmptyList,
    LimitIdError,
    NegativeMass,
    NotNormalized,
    UnknownSymbol,
    ZeroMassContext,
    ZeroNormalizer,
)
from .harness import (
    BUILTIN_LISTS,
    ExperimentConfig,
    Summary,
    TraceRecord,
    TrialOutcome,
    fluctuation_violation_fraction,
    load_config,
    lock_time,
    parse_config,
    read_trace,
    run_experiment,
    run_predict,
    summarize_trace,
    write_trace,
)
from .iid import (
    FrequencyTable,
    IidIdentifier,
    StageResult,
    passes_threshold,
    reference_step,
    run_iid,
    score,
    threshold,
    trunc_set,
    truncation_bound,
)
from .listing import (
    HypothesisList,
    LazySequence,
    RepeatedHypothesisList,
    list_view,
    repeat_infinitely,
)
from .prediction import Prediction, black_swan_pair, predict_iid, predict_measure
from .programs import (
    Alphabet,
    FunctionFamily,
    MeasureCursor,
    MeasureProgram,
    PmfProgram,
    as_fraction,
    diagonalize,
    lift_iid,
    make_categorical,
    make_geometric,
    make_markov_measure,
    make_point_mass,
    make_repeat_first,
    make_simple_measure_family,
    make_simple_pmf,
    make_simple_pmf_family,
    measure_list,
    pmf_list,
    position_string,
    string_position,
)
from .sampling import (
    SeededSource,
    derive_trial_source,
    draw_from_measure,
    draw_iid,
    format_sequence,
    parse_sequence,
)
from .typicality import TypicalityIdentifier, TypStageResult, run_typicality

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AlphabetTooLarge",
    "AlphabetTooSmall",
    "BUILTIN_LISTS",
    "BaseExhausted",
    "CompressDefault",
    "CompressMax",
    "ConfigError",
    "ESTIMATORS",
    "EmptyList",
    "EnumTiny",
    "ExperimentConfig",
    "FrequencyTable",
    "FunctionFamily",
    "HypothesisList",
    "IidIdentifier",
    "LazySequence",
    "LimitIdError",
    "MEASURE_FAMILIES",
    "MeasureCursor",
    "MeasureProgram",
    "NegativeMass",
    "NotNormalized",
    "OVERHEAD_BITS",
    "PmfProgram",
    "Prediction",
    "RepeatedHypothesisList",
    "SeededSource",
    "StageResult",
    "Summary",
    "TraceRecord",
    "TrialOutcome",
    "TypStageResult",
    "TypicalityIdentifier",
    "UnknownSymbol",
    "ZeroMassContext",
    "ZeroNormalizer",
    "as_fraction",
    "black_swan_pair",
    "derive_trial_source",
    "diagonalize",
    "draw_from_measure",
    "draw_iid",
    "estimate_complexity",
    "fluctuation_violation_fraction",
    "format_sequence",
    "get_estimator",
    "hypothesis_from_json",
    "hypothesis_list_from_json",
    "lift_iid",
    "list_view",
    "load_config",
    "load_hypothesis_list",
    "lock_time",
    "make_categorical",
    "make_geometric",
    "make_markov_measure",
    "make_point_mass",
    "make_repeat_first",
    "make_simple_measure_family",
    "make_simple_pmf",
    "make_simple_pmf_family",
    "measure_list",
    "parse_config",
    "parse_sequence",
    "passes_threshold",
    "pmf_list",
    "position_string",
    "predict_iid",
    "predict_measure",
    "rational_from_json",
    "rational_to_json",
    "read_trace",
    "reference_step",
    "register_measure_family",
    "repeat_infinitely",
    "run_experiment",
    "run_iid",
    "run_predict",
    "run_typicality",
    "score",
    "serialize_symbols",
    "string_position",
    "summarize_trace",
    "threshold",
    "trunc_set",
    "truncation_bound",
    "write_trace",
]
