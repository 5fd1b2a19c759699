"""Experiment runner: configs, traces, summaries, builtin lists, CLI."""
from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest

from limitid import (
    BUILTIN_LISTS,
    Alphabet,
    ConfigError,
    fluctuation_violation_fraction,
    load_config,
    lock_time,
    make_categorical,
    parse_config,
    read_trace,
    run_experiment,
    run_predict,
    summarize_trace,
)
from limitid.cli import main
from limitid.harness import IID_HEADER, MEASURE_HEADER, TRACE_VERSION

BH = Alphabet(["b", "h"])
HALF = Fraction(1, 2)

COIN_LIST = [
    {"kind": "categorical", "alphabet": ["b", "h"],
     "params": {"masses": [{"num": 7, "den": 10}, {"num": 3, "den": 10}]}},
    {"kind": "categorical", "alphabet": ["b", "h"],
     "params": {"masses": [{"num": 1, "den": 2}, {"num": 1, "den": 2}]}},
]


def write_json(path, doc):
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.fixture
def coin_config(tmp_path):
    hyp = write_json(tmp_path / "coins.json", COIN_LIST)
    def build(**overrides):
        doc = {"mode": "iid", "hypotheses": "coins.json", "source_index": 2,
               "seed": 7, "trials": 3, "n_max": 200}
        doc.update(overrides)
        return write_json(tmp_path / "config.json", doc)
    return build


class TestParseConfig:
    def test_minimal_valid(self, coin_config):
        config = load_config(coin_config())
        assert config.mode == "iid"
        assert config.trials == 3
        assert config.hypotheses_path.endswith("coins.json")
        assert config.fluctuation_lambda == pytest.approx(math.sqrt(2))

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            parse_config({"mode": "iid", "hypotheses": {"builtin":
                          "geometric-pair"}, "source_index": 1, "n_maks": 5})

    def test_bad_mode(self):
        with pytest.raises(ConfigError):
            parse_config({"mode": "bayes"})

    def test_bad_counts(self):
        base = {"mode": "iid", "hypotheses": {"builtin": "geometric-pair"},
                "source_index": 1}
        for key, value in (("trials", 0), ("n_max", 0), ("seed", -1),
                           ("trials", True), ("source_index", 0)):
            with pytest.raises(ConfigError):
                parse_config({**base, key: value})

    def test_lambda_must_exceed_one(self):
        base = {"mode": "iid", "hypotheses": {"builtin": "geometric-pair"},
                "source_index": 1}
        with pytest.raises(ConfigError):
            parse_config({**base, "fluctuation_lambda": 1})
        assert parse_config({**base, "fluctuation_lambda": 1.5}) \
            .fluctuation_lambda == 1.5

    def test_unknown_builtin(self):
        with pytest.raises(ConfigError):
            parse_config({"mode": "iid", "hypotheses": {"builtin": "nope"},
                          "source_index": 1})

    def test_source_required(self):
        with pytest.raises(ConfigError):
            parse_config({"mode": "iid",
                          "hypotheses": {"builtin": "geometric-pair"}})

    def test_predict_needs_data(self):
        with pytest.raises(ConfigError):
            parse_config({"mode": "predict",
                          "source": {"kind": "categorical"}})

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.json"))

    def test_missing_hypotheses_file(self, tmp_path):
        path = write_json(tmp_path / "c.json",
                          {"mode": "iid", "hypotheses": "absent.json",
                           "source_index": 1, "n_max": 5})
        config = load_config(path)
        with pytest.raises(ConfigError):
            run_experiment(config)


class TestLockTime:
    def test_settles_midway(self):
        assert lock_time([2, 1, 1, 1]) == 2

    def test_changes_at_the_end(self):
        assert lock_time([1, 2, 1, 2]) is None

    def test_single_record(self):
        assert lock_time([3]) == 1

    def test_constant(self):
        assert lock_time([5, 5, 5]) == 1

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            lock_time([])


class TestBuiltinLists:
    def test_all_construct(self):
        for name, build in BUILTIN_LISTS.items():
            hl = build()
            assert hl.base.has(1), name

    def test_categorical_five_separation(self):
        hl = BUILTIN_LISTS["categorical-five"]()
        pmfs = [hl.item(i) for i in range(1, 6)]
        for i, p in enumerate(pmfs):
            p.check_normalized()
            for q in pmfs[i + 1:]:
                gap = max(abs(p.mass(j) - q.mass(j)) for j in (1, 2, 3))
                assert gap >= Fraction(1, 20)

    def test_geometric_pair_values(self):
        hl = BUILTIN_LISTS["geometric-pair"]()
        shifted, plain = hl.item(1), hl.item(2)
        assert plain.mass(3) == Fraction(1, 8)
        assert shifted.mass(1) == 0
        assert shifted.mass(3) == Fraction(1, 4)


class TestRunExperiment:
    def test_one_record_for_single_stage(self, coin_config):
        config = load_config(coin_config(trials=1, n_max=1))
        summary, records = run_experiment(config, keep_records=True)
        assert len(records) == 1
        assert records[0].n == 1 and records[0].fallback == 1
        assert summary.trials == 1

    def test_worked_convergence_example(self, coin_config):
        config = load_config(coin_config(trials=100, n_max=5000))
        summary, _ = run_experiment(config)
        assert summary.lock_in_rate >= 0.95
        assert sum(o.final_guess == 2 for o in summary.outcomes) >= 95

    def test_trace_roundtrip_and_determinism(self, coin_config, tmp_path):
        out = tmp_path / "trace.csv"
        config = load_config(coin_config(out="trace.csv"))
        summary, records = run_experiment(config, keep_records=True)
        first = out.read_bytes()
        run_experiment(config)
        assert out.read_bytes() == first

        lines = first.decode("utf-8").splitlines()
        assert lines[0] == f"# {TRACE_VERSION}"
        assert lines[1] == IID_HEADER
        assert len(lines) == 2 + 3 * 200

        parsed, measure_mode = read_trace(str(out))
        assert not measure_mode
        assert [r.i_n for r in parsed] == [r.i_n for r in records]
        recomputed = summarize_trace(parsed, measure_mode)
        assert recomputed.lock_in_rate == summary.lock_in_rate
        assert [o.lock_time for o in recomputed.outcomes] == \
            [o.lock_time for o in summary.outcomes]

    def test_measure_mode_trace_schema(self, tmp_path):
        config = parse_config(
            {"mode": "measure", "hypotheses": {"builtin": "uniform-vs-point"},
             "source_index": 2, "trials": 1, "n_max": 32, "out": "m.csv"},
            base_dir=str(tmp_path))
        _, records = run_experiment(config, keep_records=True)
        lines = (tmp_path / "m.csv").read_text(encoding="utf-8").splitlines()
        assert lines[1] == MEASURE_HEADER
        assert len(lines[2].split(",")) == 7
        parsed, measure_mode = read_trace(str(tmp_path / "m.csv"))
        assert measure_mode
        assert parsed[0].deficiency_bits == records[0].deficiency_bits

    def test_mode_and_type_mismatch(self, tmp_path):
        config = parse_config(
            {"mode": "measure", "hypotheses": {"builtin": "categorical-five"},
             "source_index": 1, "n_max": 4}, base_dir=str(tmp_path))
        with pytest.raises(ConfigError):
            run_experiment(config)

    def test_source_index_out_of_range(self, coin_config):
        config = load_config(coin_config(source_index=9))
        with pytest.raises(ConfigError):
            run_experiment(config)


class TestPredictMode:
    def test_exact_output(self, tmp_path):
        config = parse_config(
            {"mode": "predict", "hypotheses": {"builtin": "black-swan-demo"},
             "source_index": 2, "data": ["a"] * 8}, base_dir=str(tmp_path))
        pred = run_predict(config)
        assert pred.as_dict() == {"a": HALF, "b": HALF}

    def test_bad_symbol_is_config_error(self, tmp_path):
        config = parse_config(
            {"mode": "predict", "hypotheses": {"builtin": "black-swan-demo"},
             "source_index": 1, "data": ["z"]}, base_dir=str(tmp_path))
        with pytest.raises(ConfigError):
            run_predict(config)


class TestFluctuationFraction:
    def test_stage_one_always_violates(self):
        p = make_categorical(BH, [HALF, HALF])
        frac = fluctuation_violation_fraction(p, 2, [1], range(6))
        assert frac == 1

    def test_large_checkpoint_never_violates(self):
        p = make_categorical(BH, [HALF, HALF])
        frac = fluctuation_violation_fraction(p, 2, [2000], range(10), lam=4.0)
        assert frac == 0

    def test_lambda_validated(self):
        p = make_categorical(BH, [HALF, HALF])
        with pytest.raises(ValueError):
            fluctuation_violation_fraction(p, 2, [10], range(2), lam=0)


class TestCli:
    def run_cli(self, *args):
        return main(list(args))

    def test_iid_run_and_report(self, coin_config, tmp_path, capsys):
        config = coin_config(out="t.csv", trials=2, n_max=50)
        assert self.run_cli("iid-run", "--config", config) == 0
        run_output = capsys.readouterr().out
        assert "lock_in_rate=" in run_output
        assert run_output.startswith("# lock-time summary")

        assert self.run_cli("report", "--config", config) == 0
        report_output = capsys.readouterr().out
        assert report_output.splitlines()[2:] == run_output.splitlines()[2:]

    def test_seed_override_changes_trace(self, coin_config, tmp_path):
        config = coin_config(out="t.csv", trials=1, n_max=40)
        self.run_cli("iid-run", "--config", config)
        first = (tmp_path / "t.csv").read_bytes()
        self.run_cli("iid-run", "--config", config, "--seed", "8")
        assert (tmp_path / "t.csv").read_bytes() != first
        self.run_cli("iid-run", "--config", config, "--seed", "7")
        assert (tmp_path / "t.csv").read_bytes() == first

    def test_predict_prints_exact_rationals(self, tmp_path, capsys):
        config = write_json(tmp_path / "p.json", {
            "mode": "predict", "source": COIN_LIST[0], "data": []})
        assert self.run_cli("predict", "--config", config) == 0
        assert capsys.readouterr().out == "b=7/10\nh=3/10\n"

    def test_usage_errors_exit_one(self, capsys):
        assert self.run_cli("no-such-command") == 1
        assert self.run_cli("iid-run") == 1
        capsys.readouterr()

    def test_config_errors_exit_one(self, coin_config, capsys):
        assert self.run_cli("measure-run", "--config", coin_config()) == 1
        assert self.run_cli("iid-run", "--config", "/nonexistent.json") == 1
        capsys.readouterr()

    def test_runtime_errors_exit_two(self, tmp_path, capsys):
        config = write_json(tmp_path / "p.json", {
            "mode": "predict",
            "source": {"kind": "iid_lift", "alphabet": ["a", "b"],
                       "params": {"pmf": {
                           "kind": "categorical", "alphabet": ["a", "b"],
                           "params": {"masses": [1, 0]}}}},
            "data": ["b"]})
        assert self.run_cli("predict", "--config", config) == 2
        capsys.readouterr()

    def test_report_needs_trace_path(self, coin_config, capsys):
        assert self.run_cli("report", "--config", coin_config()) == 1
        capsys.readouterr()
