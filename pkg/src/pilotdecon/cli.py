"""Command-line entry point for the Monte Carlo harness.

Subcommands:
  run           execute an experiment described by a YAML config file
  preset        run a named preset scenario, optionally with overrides
  list-presets  print the available preset names

Configuration errors exit with status 2 and a diagnostic on stderr.
"""

import argparse
import sys

import yaml

from .exceptions import PilotDeconError
from .harness import ExperimentConfig, run_and_write
from .topology import preset_names

DEFAULT_MASTER_SEED = 1
DEFAULT_TRIALS = 100
DEFAULT_M_GRID = (10, 20, 50, 100)
DEFAULT_ESTIMATORS = ("ls", "mmse", "am", "ma", "ca")

# Config keys accepted at the top level of a config file.
_CONFIG_KEYS = (
    "scenario", "M_grid", "estimators", "trials", "master_seed",
    "covariance_mode", "output_path",
)


def _parse_list(text, convert):
    return tuple(convert(part) for part in str(text).split(",") if part != "")


def _coerce_override(key, value):
    if key == "M_grid":
        return _parse_list(value, int)
    if key == "estimators":
        return _parse_list(value, str)
    if key in ("trials", "master_seed"):
        return int(value)
    if key in ("covariance_mode", "output_path", "scenario"):
        return value
    raise PilotDeconError(f"unknown override key {key!r}")


def load_config(path):
    """YAML config -> ExperimentConfig; unknown keys are hard errors."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = yaml.safe_load(handle)
    except yaml.YAMLError as exc:
        raise PilotDeconError(f"config parse error in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise PilotDeconError(f"config file {path} must contain a mapping")
    unknown = set(raw) - set(_CONFIG_KEYS)
    if unknown:
        raise PilotDeconError(
            f"unknown config keys: {', '.join(sorted(unknown))}"
        )
    missing = {"scenario", "M_grid", "estimators", "trials", "master_seed"} - set(raw)
    if missing:
        raise PilotDeconError(
            f"config is missing keys: {', '.join(sorted(missing))}"
        )
    return ExperimentConfig(
        scenario=raw["scenario"],
        m_grid=tuple(raw["M_grid"]),
        estimators=tuple(raw["estimators"]),
        trials=int(raw["trials"]),
        master_seed=int(raw["master_seed"]),
        covariance_mode=raw.get("covariance_mode", "analytic"),
        output_path=raw.get("output_path"),
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pilotdecon",
        description="Monte Carlo harness for pilot-decontamination estimators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_cmd = sub.add_parser("run", help="run an experiment from a config file")
    run_cmd.add_argument("--config", required=True, help="path to a YAML config")
    run_cmd.add_argument("--seed", type=int, help="override master_seed")
    run_cmd.add_argument("--workers", type=int, default=1)

    preset_cmd = sub.add_parser("preset", help="run a named preset scenario")
    preset_cmd.add_argument("--name", required=True)
    preset_cmd.add_argument(
        "--override", nargs="*", default=[], metavar="KEY=VALUE",
        help="config overrides, e.g. trials=4 M_grid=10,20",
    )
    preset_cmd.add_argument("--seed", type=int, help="override master_seed")
    preset_cmd.add_argument("--workers", type=int, default=1)

    sub.add_parser("list-presets", help="print the available preset names")
    return parser


def _preset_config(name, overrides):
    settings = {
        "scenario": name,
        "M_grid": DEFAULT_M_GRID,
        "estimators": DEFAULT_ESTIMATORS,
        "trials": DEFAULT_TRIALS,
        "master_seed": DEFAULT_MASTER_SEED,
        "covariance_mode": "analytic",
        "output_path": None,
    }
    for item in overrides:
        if "=" not in item:
            raise PilotDeconError(f"override {item!r} is not KEY=VALUE")
        key, value = item.split("=", 1)
        settings[key] = _coerce_override(key, value)
    return ExperimentConfig(
        scenario=settings["scenario"],
        m_grid=tuple(settings["M_grid"]),
        estimators=tuple(settings["estimators"]),
        trials=int(settings["trials"]),
        master_seed=int(settings["master_seed"]),
        covariance_mode=settings["covariance_mode"],
        output_path=settings["output_path"],
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in preset_names():
                print(name)
            return 0
        if args.command == "run":
            config = load_config(args.config)
        else:
            config = _preset_config(args.name, args.override)
        if args.seed is not None:
            config = ExperimentConfig(
                scenario=config.scenario,
                m_grid=config.m_grid,
                estimators=config.estimators,
                trials=config.trials,
                master_seed=args.seed,
                covariance_mode=config.covariance_mode,
                output_path=config.output_path,
            )
        rows, path = run_and_write(config, workers=args.workers)
        print(f"wrote {len(rows)} result rows to {path}")
        return 0
    except (PilotDeconError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
