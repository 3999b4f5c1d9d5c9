# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

"""Command line driver.

    pdg <run|converge|graph> --config <path> [--out <prefix>]

The configuration is a flat list of `key = value` lines; `#` starts a
comment. Exit codes: 0 success, 2 configuration error, 3 solver error,
4 I/O error.
"""

import argparse
import dataclasses
import logging
import os
import sys
import typing as ty
from dataclasses import dataclass

from schema import And, Or, Schema, SchemaError

from pdg.apps.scenarios.problems import SCENARIO_IDS, get_scenario
from pdg.apps.scenarios.riemann import RiemannError
from pdg.apps.scenarios.solver import ScenarioConfig, ScenarioSolver
from pdg.problems.kinetic_models import MODEL_IDS, make_kinetic_model
from pdg.solvers.dg.graph import CycleError
from pdg.solvers.dg.quadrature import MAX_DEGREE
from pdg.solvers.errors import SolverError
from pdg.solvers.splitting.schemes import SCHEME_IDS
from pdg.utils.convergence import run_convergence
from pdg.utils.io import (write_convergence_csv, write_dot,
                          write_fields_csv)
from pdg.utils.norms import cfl_number

log = logging.getLogger(__name__)

MODES = ("run", "converge", "graph")
THREADS_ENV = "PDG_THREADS"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4

_INT_KEYS = ("degree", "nx", "ny", "levels", "log_level")
_FLOAT_KEYS = ("dt", "beta", "tau", "tmax", "lambda")
_BOOL_KEYS = ("source",)
_STR_KEYS = ("scenario", "model", "scheme", "out", "mode")
_ALIASES = {"d": "degree"}
_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")

# config key -> RunConfig field, in serialization order
_FIELDS = (("scenario", "scenario"), ("model", "model"),
           ("scheme", "scheme"), ("degree", "degree"), ("nx", "nx"),
           ("ny", "ny"), ("dt", "dt"), ("beta", "beta"), ("tau", "tau"),
           ("tmax", "tmax"), ("lambda", "lam"), ("out", "out"),
           ("mode", "mode"), ("levels", "levels"), ("source", "source"),
           ("log_level", "log_level"))


class ConfigError(ValueError):
    """Invalid run configuration; line is 1-based or None."""

    def __init__(self, message: str, line: ty.Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass
class RunConfig:
    """Validated run configuration.

    In run and graph mode exactly one of dt and beta is set. Converge mode
    leaves both unset unless given, so that the study uses the scenario's
    own CFL number or time step ladder.
    """

    scenario: str
    model: ty.Optional[str] = None
    scheme: str = "m2"
    degree: ty.Optional[int] = None
    nx: ty.Optional[int] = None
    ny: ty.Optional[int] = None
    dt: ty.Optional[float] = None
    beta: ty.Optional[float] = None
    tau: float = 0.0
    tmax: ty.Optional[float] = None
    lam: ty.Optional[float] = None
    out: ty.Optional[str] = None
    mode: str = "run"
    levels: int = 4
    source: ty.Optional[bool] = None
    log_level: int = 40

    @property
    def shape(self) -> ty.Tuple[int, ...]:
        return (self.nx,) if self.ny is None else (self.nx, self.ny)

    def scenario_config(self, num_threads: int = 0) -> ScenarioConfig:
        return ScenarioConfig(scheme=self.scheme, dt=self.dt,
                              t_max=self.tmax, tau=self.tau,
                              include_source=self.source,
                              num_threads=num_threads,
                              log_level=self.log_level,
                              model_id=self.model, lam=self.lam,
                              degree=self.degree, shape=self.shape,
                              beta=self.beta)


def _positive(x) -> bool:
    return 0 < x < float("inf")


_RULES = {
    "scenario": And(str, lambda s: s in SCENARIO_IDS,
                    error=f"scenario must be one of {SCENARIO_IDS}"),
    "model": And(str, lambda s: s in MODEL_IDS,
                 error=f"model must be one of {MODEL_IDS}"),
    "scheme": And(str, lambda s: s in SCHEME_IDS,
                  error=f"scheme must be one of {SCHEME_IDS}"),
    "degree": And(int, lambda n: 1 <= n <= MAX_DEGREE,
                  error=f"degree must be in 1..{MAX_DEGREE}"),
    "nx": And(int, _positive, error="nx must be >= 1"),
    "ny": And(int, _positive, error="ny must be >= 1"),
    "dt": And(float, _positive, error="dt must be > 0"),
    "beta": And(float, _positive, error="beta must be > 0"),
    "tau": And(float, lambda x: x >= 0, error="tau must be >= 0"),
    "tmax": And(float, _positive, error="tmax must be > 0"),
    "lambda": And(float, _positive, error="lambda must be > 0"),
    "out": And(str, len, error="out must not be empty"),
    "mode": And(str, lambda s: s in MODES,
                error=f"mode must be one of {MODES}"),
    "levels": And(int, lambda n: n >= 3, error="levels must be >= 3"),
    "source": Or(True, False, error="source must be a boolean"),
    "log_level": And(int, lambda n: n >= 0,
                     error="log_level must be >= 0"),
}


def _convert(key: str, value: str, line: int):
    if key in _INT_KEYS:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key}: malformed integer {value!r}",
                              line) from None
    if key in _FLOAT_KEYS:
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{key}: malformed number {value!r}",
                              line) from None
    if key in _BOOL_KEYS:
        if value.lower() in _TRUE:
            return True
        if value.lower() in _FALSE:
            return False
        raise ConfigError(f"{key}: malformed boolean {value!r}", line)
    return value


def _read_pairs(text: str) -> ty.Dict[str, ty.Any]:
    values = {}
    known = _INT_KEYS + _FLOAT_KEYS + _BOOL_KEYS + _STR_KEYS
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}",
                              number)
        key = _ALIASES.get(key, key)
        if key not in known:
            raise ConfigError(f"unknown key {key!r}", number)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", number)
        if not value:
            raise ConfigError(f"{key}: missing value", number)
        if key == "dt" and "beta" in values or \
                key == "beta" and "dt" in values:
            raise ConfigError("dt and beta both set", number)
        values[key] = _convert(key, value, number)
        try:
            Schema(_RULES[key]).validate(values[key])
        except SchemaError as error:
            raise ConfigError(str(error.code), number) from None
    return values


def _apply_defaults(values: ty.Dict[str, ty.Any]) -> RunConfig:
    scenario = get_scenario(values["scenario"])
    fields = {name: values[key] for key, name in _FIELDS if key in values}
    config = RunConfig(**fields)
    if config.model is None:
        config.model = scenario.model_id
    if config.degree is None:
        config.degree = scenario.degree
    if config.nx is None:
        config.nx = scenario.shape[0]
    if scenario.dim == 2 and config.ny is None:
        config.ny = scenario.shape[1]
    if scenario.dim == 1 and config.ny is not None:
        raise ConfigError(f"ny given for the 1D scenario "
                          f"{scenario.name!r}")
    if config.tmax is None:
        config.tmax = scenario.t_max
    if config.lam is None and config.model == scenario.model_id:
        config.lam = scenario.lam
    if config.source is None:
        config.source = scenario.include_source
    if config.dt is None and config.beta is None \
            and config.mode != "converge":
        if scenario.dt is not None:
            config.dt = scenario.dt
        else:
            config.beta = scenario.beta

    expected = scenario.make_model(lam=1.0)
    try:
        chosen = make_kinetic_model(config.model, config.lam or 1.0)
    except ValueError as error:
        raise ConfigError(str(error)) from None
    if chosen.dim != expected.dim or \
            type(chosen.system) is not type(expected.system):
        raise ConfigError(f"model {config.model!r} does not fit scenario "
                          f"{scenario.name!r}")
    if config.lam is None and config.model != "d2q9":
        raise ConfigError(f"model {config.model!r} needs lambda")
    return config


def parse_config(text: str, mode: ty.Optional[str] = None) -> RunConfig:
    """Parse and validate a run configuration; mode overrides the mode key
    of the text."""
    values = _read_pairs(text)
    if mode is not None:
        values["mode"] = mode
    if "scenario" not in values:
        raise ConfigError("missing scenario")
    return _apply_defaults(values)


def serialize_config(config: RunConfig) -> str:
    """Canonical text of a configuration; parse_config inverts it."""
    lines = []
    for key, name in _FIELDS:
        value = getattr(config, name)
        if value is None:
            continue
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def num_threads_from_env() -> int:
    value = os.environ.get(THREADS_ENV, "").strip()
    if not value:
        return 0
    try:
        threads = int(value)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got "
                          f"{value!r}") from None
    if threads < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0")
    return threads


def run(config: RunConfig,
        out_prefix: ty.Optional[str] = None,
        num_threads: int = 0) -> ty.List[str]:
    """Execute a configuration and return the paths written."""
    prefix = out_prefix or config.out or config.scenario
    scenario = get_scenario(config.scenario)
    scfg = config.scenario_config(num_threads)
    logging.getLogger("pdg").setLevel(config.log_level)

    if config.mode == "graph":
        solver = ScenarioSolver(scenario).discretize(scfg)
        for velocity in solver.model.velocities:
            solver.transport.graph(velocity).topological_order()
        return write_dot(prefix, solver.model, solver.transport)

    if config.mode == "converge":
        kwargs = {}
        if scenario.convergence_axis == "mesh":
            beta = config.beta
            if beta is None and config.dt is not None:
                coarse = ScenarioSolver(scenario).discretize(scfg)
                beta = cfl_number(coarse.model.lam, config.dt, coarse.mesh,
                                  coarse.quad)
            if beta is not None:
                kwargs["beta"] = beta
        elif config.dt is not None:
            kwargs["dts"] = [config.dt / 2 ** i
                             for i in range(config.levels)]
        report = run_convergence(scenario, config.scheme,
                                 levels=config.levels, shape=config.shape,
                                 config=dataclasses.replace(scfg, dt=None,
                                                            beta=None),
                                 **kwargs)
        return [write_convergence_csv(f"{prefix}_conv.csv", report)]

    solver = ScenarioSolver(scenario)
    report = solver.solve(scfg)
    log.info(f"reached t={report.t_final:.6g} in {report.n_steps} steps")
    return [write_fields_csv(f"{prefix}_fields.csv", solver.model,
                             solver.transport, report.state)]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdg",
        description="Palindromic discontinuous Galerkin solver for kinetic "
                    "relaxation systems.")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True,
                        help="path of the key = value configuration")
    parser.add_argument("--out", default=None,
                        help="output path prefix")
    return parser


def main(argv: ty.Optional[ty.Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with open(args.config) as stream:
            text = stream.read()
        config = parse_config(text, args.mode)
        threads = num_threads_from_env()
        run(config, args.out, threads)
    except ConfigError as error:
        print(f"pdg: config error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as error:
        print(f"pdg: invalid input: {error}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, CycleError, RiemannError) as error:
        print(f"pdg: solver error: {error}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as error:
        print(f"pdg: i/o error: {error}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
