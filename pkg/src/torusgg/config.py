"""Experiment config files: flat key = value text with sections.

A config carries one [experiment] section (window, functional, grid,
replication plan), an optional [schedule] of windows for schedule checks, and
any number of [check:NAME] sections consumed by the verify command.  Unknown
keys are rejected and schema_version is mandatory.
"""

import configparser
from dataclasses import dataclass, field

from .harness import ExperimentConfig
from .torus import WindowSpec

SCHEMA_VERSION = 1

_EXPERIMENT_KEYS = {
    "schema_version", "functional", "d", "b", "lambda", "t_grid",
    "replications", "master_seed", "convention", "intervals",
    "max_component_size", "max_points",
}
_REQUIRED_KEYS = {"schema_version", "functional", "d", "b", "lambda", "t_grid",
                  "replications", "master_seed"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CheckSpec:
    name: str
    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RunSpec:
    experiment: ExperimentConfig
    schedule: tuple = ()     # WindowSpec per schedule point (empty -> single window)
    checks: tuple = ()       # CheckSpec in file order


def _parse_floats(text):
    return tuple(float(tok) for tok in text.replace(";", ",").split(",") if tok.strip())


def _parse_intervals(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        lo, sep, hi = tok.partition("-")
        if not sep:
            raise ConfigError(f"bad interval {tok!r} (expected lo-hi)")
        out.append((float(lo), float(hi)))
    return tuple(out)


def _parse_window(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"bad window {text!r} (expected d:b:lambda)")
    return WindowSpec(d=int(parts[0]), b=float(parts[1]), lam=float(parts[2]))


def load_config(path) -> RunSpec:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    if "experiment" not in parser:
        raise ConfigError("missing [experiment] section")
    exp = parser["experiment"]
    unknown = set(exp) - _EXPERIMENT_KEYS
    if unknown:
        raise ConfigError(f"unknown experiment keys: {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(exp)
    if missing:
        raise ConfigError(f"missing experiment keys: {sorted(missing)}")
    if int(exp["schema_version"]) != SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version {exp['schema_version']} unsupported "
            f"(expected {SCHEMA_VERSION})")
    try:
        window = WindowSpec(d=int(exp["d"]), b=float(exp["b"]),
                            lam=float(exp["lambda"]))
        experiment = ExperimentConfig(
            window=window,
            functional_spec=exp["functional"],
            t_grid=_parse_floats(exp["t_grid"]),
            replications=int(exp["replications"]),
            master_seed=int(exp["master_seed"]),
            convention=exp.get("convention", "poisson_consistent"),
            intervals=_parse_intervals(exp.get("intervals", "")),
            max_component_size=int(exp.get("max_component_size", 32)),
            max_points=int(exp.get("max_points", 10_000_000)),
        )
    except ValueError as err:
        raise ConfigError(str(err)) from err

    schedule = ()
    checks = []
    for section in parser.sections():
        if section == "experiment":
            continue
        if section == "schedule":
            keys = set(parser[section]) - {"windows"}
            if keys:
                raise ConfigError(f"unknown schedule keys: {sorted(keys)}")
            schedule = tuple(_parse_window(tok.strip())
                             for tok in parser[section]["windows"].split(",")
                             if tok.strip())
        elif section.startswith("check:"):
            name = section[len("check:"):]
            params = dict(parser[section])
            kind = params.pop("type", None)
            if not kind:
                raise ConfigError(f"check {name!r} needs a type key")
            checks.append(CheckSpec(name=name, kind=kind, params=params))
        else:
            raise ConfigError(f"unknown section [{section}]")
    return RunSpec(experiment=experiment, schedule=schedule, checks=tuple(checks))
