"""Experiment configuration: TOML parsing, validation, shipped defaults.

A config file has one ``[experiment]`` table (durations, seed, sweep lists),
one ``[channel]`` table, and one ``[[subsystem]]`` array-of-tables entry per
control loop with its matrices as nested row-major arrays::

    [experiment]
    name = "demo"
    slots = 20000
    repetitions = 200
    seed = 20xx
    horizons = [1, 2, 3, 5]
    policies = ["fh"]

    [channel]
    loss_mean = 0.3
    loss_std = 0.2
    coherence = 30

    [[subsystem]]
    A = [[1.0]]
    B = [[1.0]]
    Sigma = [[1.0]]
    Q = [[1.0]]
    R = [[0.0]]
    period = 3

The shipped default (``DEFAULT_CONFIG_PATH``) is the three-loop reference
scenario used throughout the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import List, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .scheduler import POLICY_IDS
from .sim import SimConfig, SubsystemSpec


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending field."""


def default_config_path() -> Path:
    """Path of the shipped default scenario file."""
    return Path(resources.files("aoisched").joinpath("data/reference.toml"))


@dataclass(eq=False)
class ExperimentSpec:
    """A validated experiment: base scenario plus sweep lists."""

    name: str
    base: SimConfig
    horizons: List[int]
    policies: List[str]
    out_dir: str = "results"

    def cells(self) -> list:
        """Sweep cells in deterministic emission order."""
        return [(pol, h) for pol in self.policies for h in self.horizons]


def _require(table: dict, key: str, kind, where: str):
    if key not in table:
        raise ConfigError(f"missing field {where}.{key}")
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(f"field {where}.{key} must be of type {kind.__name__}")
    return value


def _matrix(table: dict, key: str, where: str) -> list:
    value = _require(table, key, list, where)
    if not value or not all(isinstance(row, list) and row for row in value):
        raise ConfigError(f"field {where}.{key} must be a non-empty nested array")
    width = len(value[0])
    for row in value:
        if len(row) != width:
            raise ConfigError(f"field {where}.{key} has ragged rows")
        for entry in row:
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise ConfigError(f"field {where}.{key} must contain numbers")
    return [[float(v) for v in row] for row in value]


def _positive(value: int, name: str) -> int:
    if value < 1:
        raise ConfigError(f"field {name} must be >= 1, got {value}")
    return value


def parse_config(data: dict, name_hint: str = "experiment") -> ExperimentSpec:
    """Validate a parsed TOML document into an :class:`ExperimentSpec`."""
    if "experiment" not in data:
        raise ConfigError("missing section [experiment]")
    if "channel" not in data:
        raise ConfigError("missing section [channel]")
    if "subsystem" not in data or not data["subsystem"]:
        raise ConfigError("missing section [[subsystem]] (need at least one)")

    exp = data["experiment"]
    chan = data["channel"]
    name = exp.get("name", name_hint)
    slots = _positive(_require(exp, "slots", int, "experiment"), "experiment.slots")
    reps = _positive(
        _require(exp, "repetitions", int, "experiment"), "experiment.repetitions"
    )
    seed = _require(exp, "seed", int, "experiment")
    horizons = _require(exp, "horizons", list, "experiment")
    if not horizons or not all(isinstance(h, int) and h >= 1 for h in horizons):
        raise ConfigError("field experiment.horizons must be a non-empty list of ints >= 1")
    policies = _require(exp, "policies", list, "experiment")
    if not policies:
        raise ConfigError("field experiment.policies must be non-empty")
    for pol in policies:
        if pol not in POLICY_IDS:
            raise ConfigError(
                f"field experiment.policies: unknown policy {pol!r}; "
                f"valid ids: {', '.join(POLICY_IDS)}"
            )
    out_dir = exp.get("out_dir", "results")

    loss_mean = _require(chan, "loss_mean", float, "channel")
    loss_std = _require(chan, "loss_std", float, "channel")
    if loss_std < 0:
        raise ConfigError(f"field channel.loss_std must be >= 0, got {loss_std}")
    coherence = _positive(_require(chan, "coherence", int, "channel"), "channel.coherence")

    subsystems = []
    for idx, sub in enumerate(data["subsystem"]):
        where = f"subsystem[{idx}]"
        a = _matrix(sub, "A", where)
        b = _matrix(sub, "B", where)
        sigma = _matrix(sub, "Sigma", where)
        q = _matrix(sub, "Q", where)
        r = _matrix(sub, "R", where)
        period = _positive(_require(sub, "period", int, where), f"{where}.period")
        n = len(a)
        m = len(b[0])
        if len(a[0]) != n:
            raise ConfigError(f"field {where}.A must be square")
        if len(b) != n:
            raise ConfigError(f"field {where}.B must have as many rows as A")
        if len(sigma) != n or len(sigma[0]) != n:
            raise ConfigError(f"field {where}.Sigma must match A's shape")
        if len(q) != n or len(q[0]) != n:
            raise ConfigError(f"field {where}.Q must match A's shape")
        if len(r) != m or len(r[0]) != m:
            raise ConfigError(f"field {where}.R must be m x m for B's column count")
        subsystems.append(SubsystemSpec(A=a, B=b, Sigma=sigma, Q=q, R=r, period=period))

    base = SimConfig(
        subsystems=subsystems,
        slots=slots,
        repetitions=reps,
        horizon=horizons[0],
        policy=policies[0],
        loss_mean=loss_mean,
        loss_std=loss_std,
        coherence=coherence,
        seed=seed,
    )
    return ExperimentSpec(
        name=name, base=base, horizons=list(horizons), policies=list(policies), out_dir=out_dir
    )


def load_config(path: Optional[str] = None) -> ExperimentSpec:
    """Load and validate a TOML experiment file (the shipped default if ``path`` is None)."""
    cfg_path = Path(path) if path is not None else default_config_path()
    try:
        with open(cfg_path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {cfg_path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {cfg_path}: {exc}")
    return parse_config(data, name_hint=cfg_path.stem)
