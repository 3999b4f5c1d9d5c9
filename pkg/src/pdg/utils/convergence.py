# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import dataclasses
import logging
import typing as ty
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from pdg.apps.scenarios.problems import Scenario
from pdg.apps.scenarios.solver import ScenarioConfig, ScenarioSolver
from pdg.solvers.errors import SolverError
from pdg.solvers.splitting.schemes import REFERENCE_SCHEME, get_scheme
from pdg.utils.norms import evaluate_fields, l2_error

log = logging.getLogger(__name__)

MIN_LEVELS = 3
REFERENCE_KINDS = ("analytic", "self")


@dataclass(frozen=True)
class ConvergenceLevel:
    """One run of a convergence study; error is nan if the run failed.

    exact_error holds the distance to the analytic solution when the study
    measured error against a self-reference, nan otherwise.
    """

    level: int
    dt: float
    h: float
    error: float
    message: str = ""
    exact_error: float = float("nan")

    @property
    def ok(self) -> bool:
        return np.isfinite(self.error) and self.error > 0


def fit_slope(dts: npt.ArrayLike, errors: npt.ArrayLike) -> float:
    """Least squares slope of log(error) against log(dt)."""
    dts = np.asarray(dts, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if len(dts) < 2:
        raise ValueError("A slope needs at least two points.")
    return float(np.polyfit(np.log(dts), np.log(errors), 1)[0])


@dataclass(frozen=True)
class ConvergenceReport:
    """Errors of a refinement study and their fitted order.

    Parameters
    ----------
    scenario: str
    scheme: str
    axis: str
        "mesh" or "dt".
    reference: str
        "analytic" or the scheme id of the self-reference run.
    levels: tuple of ConvergenceLevel
    """

    scenario: str
    scheme: str
    axis: str
    reference: str
    levels: ty.Tuple[ConvergenceLevel, ...]

    @property
    def dts(self) -> np.ndarray:
        return np.array([lv.dt for lv in self.levels])

    @property
    def errors(self) -> np.ndarray:
        return np.array([lv.error for lv in self.levels])

    def slope_so_far(self, count: int) -> float:
        """Slope fitted on the successful runs among the first count levels,
        nan with fewer than two of them."""
        usable = [lv for lv in self.levels[:count] if lv.ok]
        if len(usable) < 2:
            return float("nan")
        return fit_slope([lv.dt for lv in usable],
                         [lv.error for lv in usable])

    @property
    def slope(self) -> float:
        return self.slope_so_far(len(self.levels))


def _study_configs(scenario: Scenario,
                   axis: str,
                   levels: int,
                   shape: ty.Optional[ty.Sequence[int]],
                   beta: ty.Optional[float],
                   dts: ty.Optional[ty.Sequence[float]],
                   base: ScenarioConfig) -> ty.List[ScenarioConfig]:
    shape = tuple(shape or scenario.shape)
    configs = []
    if axis == "mesh":
        beta = beta if beta is not None else scenario.beta
        if beta is None:
            raise ValueError(f"Scenario {scenario.name!r} has no default "
                             f"CFL number; pass beta.")
        # levels + 1 so that a self-reference can use the next refinement
        for i in range(levels + 1):
            refined = tuple(n * 2 ** i for n in shape)
            configs.append(dataclasses.replace(base, shape=refined,
                                               beta=beta, dt=None))
        return configs
    if dts is None:
        dts = scenario.dt_levels
    if not dts:
        dt = ScenarioSolver(scenario).discretize(
            dataclasses.replace(base, shape=shape)).time_step(base)
        dts = tuple(dt / 2 ** i for i in range(levels))
    dts = list(dts)[:levels]
    for dt in dts + [dts[-1] / 2]:
        configs.append(dataclasses.replace(base, shape=shape, dt=dt))
    return configs


def run_convergence(scenario: Scenario,
                    scheme: str,
                    axis: ty.Optional[str] = None,
                    levels: int = 4,
                    shape: ty.Optional[ty.Sequence[int]] = None,
                    beta: ty.Optional[float] = None,
                    dts: ty.Optional[ty.Sequence[float]] = None,
                    config: ScenarioConfig = ScenarioConfig(),
                    reference: ty.Optional[str] = None) \
        -> ConvergenceReport:
    """Refinement study of a scenario with one splitting scheme.

    Parameters
    ----------
    scenario: Scenario
    scheme: str
        Scheme id under study.
    axis: str, optional
        "mesh" halves cells and time step together at fixed beta, "dt"
        halves the time step on a fixed mesh. Defaults to the scenario's
        convergence axis.
    levels: int
        Number of runs, at least 3.
    shape: sequence of int, optional
        Coarsest mesh ("mesh" axis) or the fixed mesh ("dt" axis).
    beta: float, optional
        CFL number of a "mesh" study.
    dts: sequence of float, optional
        Time steps of a "dt" study.
    config: ScenarioConfig
        Other run settings (model, degree, tau, threads, ...).
    reference: str, optional
        "analytic" or "self". Defaults to the analytic solution when the
        scenario has one.

    Notes
    -----
    A self-reference is one refinement beyond the finest level computed
    with the next higher order scheme, and is interpolated at the nodes of
    every level. On the "dt" axis it shares the mesh of the study, so the
    error measures the time integration alone. A level whose run raises a
    SolverError is recorded with a nan error and left out of the fit.
    """
    axis = axis or scenario.convergence_axis
    if axis not in ("mesh", "dt"):
        raise ValueError(f"Unknown refinement axis {axis!r}.")
    if levels < MIN_LEVELS:
        raise ValueError(f"A convergence study needs at least {MIN_LEVELS} "
                         f"levels, got {levels}.")
    get_scheme(scheme)
    reference = reference or ("analytic" if scenario.has_exact else "self")
    if reference not in REFERENCE_KINDS:
        raise ValueError(f"Unknown reference {reference!r}.")
    if reference == "analytic" and not scenario.has_exact:
        raise ValueError(f"Scenario {scenario.name!r} has no analytic "
                         f"solution.")
    base = dataclasses.replace(config, scheme=scheme, record_totals=False)
    configs = _study_configs(scenario, axis, levels, shape, beta, dts, base)
    if len(configs) - 1 < MIN_LEVELS:
        raise ValueError(f"A convergence study needs at least {MIN_LEVELS} "
                         f"time steps.")
    study, extra = configs[:-1], configs[-1]

    fine = None
    reference_name = "analytic"
    if reference == "self":
        reference_name = REFERENCE_SCHEME[scheme]
        fine = ScenarioSolver(scenario)
        fine.solve(dataclasses.replace(extra, scheme=reference_name))
        log.info(f"{scenario.name}: self-reference with {reference_name}, "
                 f"dt={fine.report.dt:.6g}")

    records = []
    for level, cfg in enumerate(study):
        solver = ScenarioSolver(scenario)
        try:
            report = solver.solve(cfg)
        except (SolverError, FloatingPointError) as error:
            records.append(ConvergenceLevel(level, solver.time_step(cfg),
                                            float(np.min(solver.mesh.h)),
                                            float("nan"), str(error)))
            log.warning(f"level {level} failed: {error}")
            continue
        exact = solver.exact_error() if scenario.has_exact else float("nan")
        if fine is None:
            error, exact = exact, float("nan")
        else:
            mesh, quad = solver.mesh, solver.quad
            points = mesh.node_coordinates(quad)[:mesh.n_real]
            w_ref = evaluate_fields(fine.mesh, fine.quad,
                                    fine.macro_solution(),
                                    points.reshape(-1, mesh.dim))
            error = l2_error(solver.model, report.state,
                             w_ref.reshape(points.shape[:2] + (-1,)),
                             mesh, quad)
        records.append(ConvergenceLevel(level, report.dt,
                                        float(np.min(solver.mesh.h)),
                                        float(error), "", float(exact)))
        log.info(f"level {level}: dt={report.dt:.6g}, "
                 f"h={records[-1].h:.6g}, error={error:.6e}")
    return ConvergenceReport(scenario.name, scheme, axis, reference_name,
                             tuple(records))
