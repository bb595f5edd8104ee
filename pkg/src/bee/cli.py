"""Command-line front end: run / lemma / validate / oracle."""

from __future__ import annotations

import argparse
import sys
import traceback

from .config import ConfigError, parse_config
from .harness import lemma_profile, run_experiment, run_lemma_validation, sweep_profile
from .metrics import oracle_committee_accuracy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file mirroring ExperimentConfig")
    p.add_argument("--mode", choices=["bee", "swarm"])
    p.add_argument("--experts", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--comp-low", dest="comp_low", type=float)
    p.add_argument("--comp-high", dest="comp_high", type=float)
    p.add_argument(
        "--m", dest="m_values", type=int, action="append", metavar="M",
        help="committee size; repeatable",
    )
    p.add_argument(
        "--policy", dest="policies", action="append", metavar="NAME",
        help="ucb1|klucb|imed|moss|thompson; repeatable",
    )
    p.add_argument("--reps", dest="replications", type=int)
    p.add_argument("--seed", dest="master_seed", type=int)
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--fixed-profile", dest="fixed_profile", action="store_true", default=None)
    p.add_argument("--full-trace", dest="full_trace", action="store_true", default=None)
    p.add_argument("--oracle-rewards", dest="oracle_rewards", action="store_true", default=None)
    p.add_argument("--workers", type=int)
    p.add_argument("--klucb-variant", dest="klucb_variant", choices=["plus", "plain"])
    p.add_argument("--klucb-c", dest="klucb_c", type=float)


def _config_from_args(args: argparse.Namespace, force_mode: str | None = None):
    overrides = {
        k: v
        for k, v in vars(args).items()
        if k not in ("config", "command", "func") and v is not None
    }
    if force_mode is not None:
        overrides["mode"] = force_mode
    return parse_config(args.config, overrides)


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    paths = run_experiment(config)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_OK


def _cmd_lemma(args) -> int:
    config = _config_from_args(args, force_mode="fixed-committee-lemma")
    paths = run_lemma_validation(config)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    config = _config_from_args(args)
    print("config ok")
    for key, val in sorted(vars(config).items()):
        print(f"  {key} = {val}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    config = _config_from_args(args)
    if config.mode == "fixed-committee-lemma":
        profile, _, _ = lemma_profile(config)
    else:
        profile = sweep_profile(config, 0)
    print("m,oracle_accuracy")
    for m in config.m_values:
        print(f"{m},{oracle_committee_accuracy(profile, m):.9g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bee",
        description=(
            "Blind exploration-exploitation over stochastic experts: "
            "peer-agreement bandit sweeps, opinion aggregation, and "
            "fixed-committee bound validation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, desc in (
        ("run", _cmd_run, "run a BEE/SWARM sweep and write summary/trace CSVs"),
        ("lemma", _cmd_lemma, "fixed-committee bound validation, writes lemma.csv"),
        ("validate", _cmd_validate, "check a config and print the resolved values"),
        ("oracle", _cmd_oracle, "print the oracle committee accuracy table"),
    ):
        p = sub.add_parser(name, help=desc)
        _add_common_flags(p)
        if name == "lemma":
            p.add_argument("--committee-size", dest="lemma_committee_size", type=int)
            p.add_argument("--committee-comp", dest="lemma_committee_comp", type=float)
            p.add_argument("--candidates", dest="lemma_candidates", type=int)
            p.add_argument("--best-comp", dest="lemma_best_comp", type=float)
            p.add_argument("--gap-low", dest="lemma_gap_low", type=float)
            p.add_argument("--gap-high", dest="lemma_gap_high", type=float)
        p.set_defaults(func=fn)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception:
        traceback.print_exc()
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
