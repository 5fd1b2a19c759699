"""Command line front end: run experiments, predict, and summarize traces.

Exit codes: 0 success, 1 configuration or usage error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, LimitIdError
from .harness import (
    format_prediction,
    load_config,
    read_trace,
    run_experiment,
    run_predict,
    summarize_trace,
)


class _Parser(argparse.ArgumentParser):
    """Raises ConfigError on usage errors instead of exiting with code 2."""

    def error(self, message: str) -> None:
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="limitid",
        description="Identify probability models from sampled data "
                    "in the limit.",
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    specs = [
        ("iid-run", "identify a pmf from i.i.d. draws"),
        ("measure-run", "identify a measure from one sampled sequence"),
        ("predict", "print the exact next-symbol distribution"),
        ("report", "recompute the lock-time summary from a trace file"),
    ]
    for name, help_text in specs:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True,
                        help="path to a JSON experiment config")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
        sp.add_argument("--estimator", default=None,
                        help="override the complexity estimator id")
        sp.add_argument("--out", default=None,
                        help="override the trace output path")
    return parser


_COMMAND_MODE = {"iid-run": "iid", "measure-run": "measure",
                 "predict": "predict"}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = load_config(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError(f"seed must be >= 0, got {args.seed}")
            config.seed = args.seed
        if args.estimator is not None:
            config.estimator_id = args.estimator
        if args.out is not None:
            config.out = args.out

        if args.command == "report":
            if config.out is None:
                raise ConfigError("report needs a trace path via config "
                                  '"out" or --out')
            records, measure_mode = read_trace(config.out)
            print(summarize_trace(records, measure_mode).format())
            return 0
        expected = _COMMAND_MODE[args.command]
        if config.mode != expected:
            raise ConfigError(f"{args.command} needs a config with mode "
                              f"{expected!r}, got {config.mode!r}")
        if args.command == "predict":
            print(format_prediction(run_predict(config)))
            return 0
        summary, _ = run_experiment(config)
        print(summary.format())
        return 0
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except LimitIdError as err:
        print(f"runtime error: {err}", file=sys.stderr)
        return 2
    except (OSError, ValueError, TypeError, KeyError) as err:
        print(f"runtime error: {err!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
