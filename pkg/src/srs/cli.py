"""Command line entry point: ``srs run`` and ``srs sweep``.

Exit codes: 0 success, 2 configuration error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Sequence

from srs.experiment import FIELD_TYPES, ConfigError, ExperimentConfig, build_config, read_config_file, run_experiment

log = logging.getLogger("srs")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", help="ackley-speed, ackley-jump, ackley-circular, schaffer-severity, schaffer-frequency or control")
    parser.add_argument("--config", help="flat 'key = value' file; flags override it")
    # also accepted after the subcommand; SUPPRESS keeps the top-level value otherwise
    parser.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS)
    for key in FIELD_TYPES:
        if key == "preset":
            continue
        flag = "--" + key.replace("_", "-")
        # kept as text; coerced and range-checked with the file values
        parser.add_argument(flag, dest=key, default=None, metavar=FIELD_TYPES[key].upper())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srs", description="Self-regulated swarm experiments on dynamic landscapes.")
    parser.add_argument("-q", "--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one configuration for --repeats seeds")
    _add_config_flags(run)
    sweep = sub.add_parser("sweep", help="run a parameter sweep")
    _add_config_flags(sweep)
    sweep.add_argument("--param", required=True, help="config key to sweep, e.g. v, s or uf")
    sweep.add_argument("--values", required=True, help="comma-separated values, e.g. 0,0.5,1")
    return parser


def parse_config(args: argparse.Namespace) -> ExperimentConfig:
    file_values = read_config_file(args.config) if args.config else {}
    preset = args.preset or file_values.get("preset")
    if not preset:
        raise ConfigError("preset", "no preset given (use --preset or set preset in the config file)")
    overrides: dict[str, Any] = {
        key: getattr(args, key) for key in FIELD_TYPES if key != "preset" and getattr(args, key, None) is not None
    }
    return build_config(preset, file_values, overrides)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    try:
        cfg = parse_config(args)
        param = values = None
        if args.command == "sweep":
            param = args.param.replace("-", "_")
            values = [v for v in args.values.split(",") if v.strip()]
        log.info("preset %s, %d step(s), output in %s", cfg.preset, cfg.t_max, cfg.out)
        results = run_experiment(cfg, param, values)
    except ConfigError as exc:
        print(f"srs: config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - any simulation failure maps to exit 1
        print(f"srs: run failed: {exc}", file=sys.stderr)
        return 1
    for r in results:
        med = r.summary.median_reaction
        log.info(
            "%s seed=%d success=%.3f median_reaction=%s final_pop=%d",
            r.run_id, r.seed, r.summary.success_rate, "-" if med is None else f"{med:g}", r.summary.records[-1].population,
        )  # fmt: skip
    return 0


if __name__ == "__main__":
    sys.exit(main())
