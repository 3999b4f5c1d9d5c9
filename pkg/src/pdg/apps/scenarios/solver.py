# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import logging
import typing as ty
from dataclasses import dataclass

import numpy as np

from pdg.apps.scenarios.problems import Scenario
from pdg.problems.kinetic_models import KineticModel
from pdg.solvers.dg.mesh import CartesianMesh
from pdg.solvers.dg.quadrature import GLQuadrature, gauss_lobatto
from pdg.solvers.dg.transport import TransportOperator
from pdg.solvers.splitting.solver import (PalindromicSolver, SolverConfig,
                                          SolverReport)
from pdg.utils.norms import dt_from_cfl, l2_error, macro_fields

log = logging.getLogger(__name__)


@dataclass
class ScenarioConfig(SolverConfig):
    """Solver configuration for a scenario run.

    Parameters
    ----------
    model_id: str, optional
        Kinetic model; the scenario default when None.
    lam: float, optional
        Velocity scale override.
    degree: int, optional
        Polynomial degree override.
    shape: tuple of int, optional
        Cells per axis override.
    beta: float, optional
        CFL number used to derive the time step when dt is None.

    Notes
    -----
    ScenarioConfig inherits from `SolverConfig`. Here dt, t_max, tau and
    include_source default to None, meaning "take the scenario value".
    The time step is chosen from dt, then beta, then the scenario dt, then
    the scenario beta.
    """

    dt: ty.Optional[float] = None
    t_max: ty.Optional[float] = None
    tau: ty.Optional[float] = None
    include_source: ty.Optional[bool] = None
    model_id: ty.Optional[str] = None
    lam: ty.Optional[float] = None
    degree: ty.Optional[int] = None
    shape: ty.Optional[ty.Tuple[int, ...]] = None
    beta: ty.Optional[float] = None


class ScenarioSolver:
    """Discretize a scenario and integrate it with a palindromic scheme."""

    def __init__(self, scenario: Scenario):
        self.problem = scenario
        self._model = None
        self._mesh = None
        self._quad = None
        self._transport = None
        self.report: ty.Optional[SolverReport] = None

    @property
    def model(self) -> KineticModel:
        return self._model

    @property
    def mesh(self) -> CartesianMesh:
        return self._mesh

    @property
    def quad(self) -> GLQuadrature:
        return self._quad

    @property
    def transport(self) -> TransportOperator:
        return self._transport

    def discretize(self, config: ScenarioConfig = ScenarioConfig()):
        """Build kinetic model, mesh, quadrature and transport operator."""
        scenario = self.problem
        self._model = scenario.make_model(config.model_id, config.lam)
        self._mesh = scenario.make_mesh(config.shape)
        self._quad = gauss_lobatto(config.degree or scenario.degree)
        self._transport = TransportOperator(self._mesh, self._quad,
                                            config.cache_factorizations)
        return self

    def _require_discretization(self):
        if self._transport is None:
            raise RuntimeError("Call discretize() before using the "
                               "discretization.")

    def time_step(self, config: ScenarioConfig = ScenarioConfig()) -> float:
        self._require_discretization()
        if config.dt is not None:
            return config.dt
        beta = config.beta
        if beta is None and self.problem.dt is not None:
            return self.problem.dt
        beta = beta if beta is not None else self.problem.beta
        return dt_from_cfl(self._model.lam, beta, self._mesh, self._quad)

    def boundary_macro(self) -> np.ndarray:
        """Conserved state at the nodes of the fictitious cells,
        (n_fictitious, N_d, m), in fictitious cell id order."""
        self._require_discretization()
        mesh = self._mesh
        coords = mesh.node_coordinates(self._quad)
        out = np.empty((mesh.n_fictitious, coords.shape[1], self._model.m))
        for index, (cell, face, _, _, _) in enumerate(
                mesh.fictitious_cells):
            if mesh.boundary[face] == "copy-equilibrium":
                nearest = np.clip(coords[cell], mesh.lower, mesh.upper)
                out[index] = self.problem.initial_state(nearest)
            else:
                out[index] = self.problem.boundary_values(coords[cell])
        return out

    def initial_state(self) -> np.ndarray:
        """Kinetic state (n_v, n_cells, N_d) at equilibrium with the initial
        data in the real cells and the boundary data in the fictitious
        cells."""
        self._require_discretization()
        mesh, model = self._mesh, self._model
        coords = mesh.node_coordinates(self._quad)[:mesh.n_real]
        w_real = self.problem.initial_state(coords)
        self.problem.check_initial_state(model, coords)
        w = np.concatenate([w_real, self.boundary_macro()], axis=0)
        return np.moveaxis(model.equilibrium(w), -1, 0)

    def solver_config(self, config: ScenarioConfig = ScenarioConfig()) \
            -> SolverConfig:
        scenario = self.problem
        tau = scenario.tau if config.tau is None else config.tau
        include_source = (scenario.include_source
                          if config.include_source is None
                          else config.include_source)
        return SolverConfig(scheme=config.scheme,
                            dt=self.time_step(config),
                            t_max=config.t_max or scenario.t_max,
                            tau=tau,
                            include_source=include_source,
                            num_threads=config.num_threads,
                            cache_factorizations=config.cache_factorizations,
                            record_totals=config.record_totals,
                            log_level=config.log_level)

    def solve(self, config: ScenarioConfig = ScenarioConfig()) \
            -> SolverReport:
        """Run the scenario from its initial state to the final time."""
        self.discretize(config)
        scfg = self.solver_config(config)
        log.info(f"{self.problem.name}: model={self._model.kind}, "
                 f"mesh={self._mesh.shape}, d={self._quad.degree}")
        solver = PalindromicSolver(self._model, self._transport)
        self.report = solver.solve(self.initial_state(), scfg)
        return self.report

    def macro_solution(self) -> np.ndarray:
        """Conserved fields at the real nodes after solve(),
        (n_real, N_d, m)."""
        if self.report is None:
            raise RuntimeError("Call solve() first.")
        return macro_fields(self._model, self._mesh, self.report.state)

    def exact_error(self) -> float:
        """L2 error of the final state against the analytic solution."""
        if self.report is None:
            raise RuntimeError("Call solve() first.")
        t_final = self.report.t_final
        return l2_error(self._model, self.report.state,
                        lambda x: self.problem.exact_state(x, t_final),
                        self._mesh, self._quad)
