"""Command-line interface.

Subcommands:

* ``run``      execute a config's sweep and write the CSV outputs;
* ``decide``   one-shot scheduler decision from a JSON state file (debugging);
* ``hopdist``  tandem-chain age pmf as (age, pmf) CSV rows;
* ``validate`` check a config file.

Exit codes: 0 success, 1 validation failure, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .config import ConfigError, default_config_path, load_config
from .hopdist import HopChain, pmf
from .penalty import PenaltyTable
from .runner import run_sweep
from .scheduler import fh_decide
from .timing import SamplingCalendar, TimingState

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aoisched",
        description="Finite-horizon age-penalty scheduling experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a config's sweep and write CSVs")
    p_run.add_argument("--config", default=None, help="TOML config (default: shipped scenario)")
    p_run.add_argument("--seed", type=int, default=None, help="override the master seed")
    p_run.add_argument("--out", default=None, help="output directory (default from config)")
    p_run.add_argument("--threads", type=int, default=1, help="worker processes for repetitions")

    p_dec = sub.add_parser("decide", help="one-shot scheduler decision from a state file")
    p_dec.add_argument("--config", default=None, help="TOML config providing the sub-systems")
    p_dec.add_argument("--state", required=True, help="JSON file with t, t_g, t_r, t_u, offsets, p, H")

    p_hop = sub.add_parser("hopdist", help="age pmf of a tandem chain of lossy hops")
    p_hop.add_argument(
        "--loss", type=float, action="append", required=True,
        help="per-hop loss probability (repeat once per hop)",
    )
    p_hop.add_argument("--max-age", type=int, default=50, help="largest age to emit")
    p_hop.add_argument("--out", default=None, help="output CSV (default: stdout)")

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("--config", default=None, help="TOML config (default: shipped scenario)")
    return parser


def _cmd_run(args) -> int:
    spec = load_config(args.config)
    result = run_sweep(spec, threads=max(args.threads, 1), out_dir=args.out, seed=args.seed)
    for path in result.files:
        print(path)
    return EXIT_OK


def _cmd_decide(args) -> int:
    spec = load_config(args.config)
    with open(args.state) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"state file parse error: {exc}")
    for key in ("t", "t_g", "t_r", "t_u", "offsets", "p"):
        if key not in doc:
            raise ConfigError(f"state file missing field {key!r}")
    subsystems = spec.base.subsystems
    if not (len(doc["t_g"]) == len(doc["t_r"]) == len(doc["t_u"]) == len(subsystems)):
        raise ConfigError("state vectors must match the config's sub-system count")
    calendars = [
        SamplingCalendar(sub.period, int(off))
        for sub, off in zip(subsystems, doc["offsets"])
    ]
    state = TimingState(
        t=int(doc["t"]),
        t_g=tuple(int(v) for v in doc["t_g"]),
        t_r=tuple(int(v) for v in doc["t_r"]),
        t_u=tuple(int(v) for v in doc["t_u"]),
    )
    penalty = PenaltyTable.from_models([sub.model() for sub in subsystems])
    horizon = int(doc.get("H", spec.horizons[0]))
    decision = fh_decide(state, calendars, penalty, [float(v) for v in doc["p"]], horizon)
    action = None if decision.action is None else decision.action + 1
    print(
        json.dumps(
            {
                "action": action,
                "predicted_cost": decision.predicted_cost,
                "nodes_expanded": decision.nodes_expanded,
            }
        )
    )
    return EXIT_OK


def _cmd_hopdist(args) -> int:
    if args.max_age < 0:
        raise ConfigError(f"--max-age must be >= 0, got {args.max_age}")
    try:
        chain = HopChain(args.loss)
    except ValueError as exc:
        raise ConfigError(str(exc))
    lines = ["age,pmf"]
    for age in range(args.max_age + 1):
        lines.append(f"{age},{pmf(chain, age)!r}")
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_validate(args) -> int:
    spec = load_config(args.config)
    path = args.config if args.config is not None else default_config_path()
    print(
        f"OK: {path} ({len(spec.base.subsystems)} sub-systems, "
        f"policies {spec.policies}, horizons {spec.horizons})"
    )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "decide": _cmd_decide,
        "hopdist": _cmd_hopdist,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # runtime failures (synthesis, divergence, IO)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
