# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import logging
import math
import typing as ty
import warnings
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from pdg.problems.kinetic_models import KineticModel
from pdg.problems.systems import HyperbolicSystem
from pdg.solvers.dg.mesh import CartesianMesh
from pdg.solvers.dg.quadrature import GLQuadrature
from pdg.solvers.dg.transport import TransportOperator
from pdg.solvers.errors import SolverError
from pdg.solvers.splitting.operators import (relax_R1, relax_R2, source_G1,
                                             source_G2)
from pdg.solvers.splitting.schemes import (SplittingScheme, SubStep,
                                           get_scheme)
from pdg.utils.norms import total_macro

log = logging.getLogger(__name__)


@dataclass
class StepContext:
    """Everything a splitting step needs besides the state itself.

    Kinetic states have shape (n_v, n_cells, N_d). Relaxation and source
    operators act on the real cells only; fictitious cells keep their
    frozen boundary data.
    """

    dt: float
    tau: float
    model: KineticModel
    transport: TransportOperator
    include_source: bool = False
    num_threads: int = 0

    def __post_init__(self):
        if self.dt == 0:
            raise ValueError("Time step must be nonzero.")
        if self.tau < 0:
            raise ValueError(f"Relaxation time must be >= 0, got "
                             f"{self.tau}.")
        if self.transport.mesh.dim != self.model.dim:
            raise ValueError("Mesh and kinetic model dimensions differ.")

    @property
    def system(self) -> HyperbolicSystem:
        return self.model.system

    @property
    def mesh(self) -> CartesianMesh:
        return self.transport.mesh

    @property
    def quad(self) -> GLQuadrature:
        return self.transport.quad


def apply_substep(step: SubStep, ctx: StepContext,
                  state: np.ndarray) -> np.ndarray:
    """Apply one operator of a splitting sequence to a kinetic state."""
    if step.kind in ("T1", "T2"):
        kind, dt = step.kind, step.dt
        if kind == "T2" and dt < 0:
            kind, dt = "T2_reversed", -dt
        return ctx.transport.transport_state(kind, dt, state,
                                             ctx.model.velocities,
                                             ctx.num_threads)
    n_real = ctx.mesh.n_real
    out = np.array(state, dtype=float, copy=True)
    real = out[:, :n_real]
    if step.kind == "R1":
        out[:, :n_real] = relax_R1(step.dt, ctx.tau, ctx.model, real)
    elif step.kind == "R2":
        out[:, :n_real] = relax_R2(step.dt, ctx.tau, ctx.model, real)
    elif step.kind == "G1":
        out[:, :n_real] = source_G1(step.dt, ctx.model, ctx.system, real)
    else:
        out[:, :n_real] = source_G2(step.dt, ctx.model, ctx.system, real)
    return out


def apply_sequence(steps: ty.Sequence[SubStep], ctx: StepContext,
                   state: npt.ArrayLike) -> np.ndarray:
    state = np.asarray(state, dtype=float)
    for step in steps:
        state = apply_substep(step, ctx, state)
    return state


def step_M1(dt: float, ctx: StepContext, state: npt.ArrayLike) \
        -> np.ndarray:
    """Lie splitting R1(dt) T1(dt), followed by G1(dt) with a source."""
    if not dt > 0:
        raise ValueError(f"M1 requires a positive step, got {dt}.")
    scheme = get_scheme("m1", ctx.include_source)
    return apply_sequence(scheme.operator_sequence(dt), ctx, state)


def step_M2(dt: float, ctx: StepContext, state: npt.ArrayLike) \
        -> np.ndarray:
    """Time-symmetric splitting T2(dt/4) R2(dt/2) T2(dt/2) R2(dt/2) T2(dt/4).

    A negative dt sends every transport factor through the reversed
    Crank-Nicolson transport.
    """
    scheme = get_scheme("m2", ctx.include_source)
    return apply_sequence(scheme.m2_sequence(dt), ctx, state)


def compose_palindromic(scheme: SplittingScheme, ctx: StepContext,
                        state: npt.ArrayLike) -> np.ndarray:
    """One step ctx.dt of M2(gamma_0 dt) ... M2(gamma_s dt)."""
    if scheme.name == "m1":
        return step_M1(ctx.dt, ctx, state)
    for gamma in reversed(scheme.gamma):
        state = step_M2(gamma * ctx.dt, ctx, state)
    return state


@dataclass
class SolverConfig:
    """Configuration of a palindromic DG run.

    Parameters
    ----------
    scheme: str
        Splitting scheme id: "m1", "m2", "suzuki4" or "kahanli6".
    dt: float
        Requested time step. It is shrunk so that an integer number of
        steps reaches t_max.
    t_max: float
        Final time.
    tau: float
        Relaxation time, 0 for the stiff limit.
    include_source: bool
        Whether the source operators are part of the splitting.
    num_threads: int
        Worker threads used to transport distinct velocities concurrently;
        0 or 1 selects the serial path.
    cache_factorizations: bool
        Keep local LU factors of the transport sweeps between steps.
    record_totals: bool
        Record the domain integral of the conserved fields after each step.
    log_level: int
        Select log level for the solver run.
    """

    scheme: str = "m2"
    dt: float = 0.01
    t_max: float = 0.1
    tau: float = 0.0
    include_source: bool = False
    num_threads: int = 0
    cache_factorizations: bool = False
    record_totals: bool = True
    log_level: int = 40


@dataclass(frozen=True)
class SolverReport:
    """Result of a palindromic DG run.

    Parameters
    ----------
    state: np.ndarray
        Final kinetic state (n_v, n_cells, N_d).
    t_final: float
        Time reached.
    dt: float
        Time step actually used.
    n_steps: int
        Number of steps taken.
    scheme: str
        Scheme id.
    totals: np.ndarray
        Domain integrals of the conserved fields, one row per step
        including the initial state; empty if not recorded.
    """

    state: np.ndarray = None
    t_final: float = 0.0
    dt: float = 0.0
    n_steps: int = 0
    scheme: str = ""
    totals: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))


class PalindromicSolver:
    """Time integration of a kinetic relaxation system with splitting.

    Parameters
    ----------
    model: KineticModel
        Kinetic representation of the target system.
    transport: TransportOperator
        DG transport operator on the computational mesh.
    """

    def __init__(self, model: KineticModel, transport: TransportOperator):
        if transport.mesh.dim != model.dim:
            raise ValueError("Mesh and kinetic model dimensions differ.")
        self.model = model
        self.transport = transport

    @staticmethod
    def step_count(dt: float, t_max: float) -> ty.Tuple[int, float]:
        """Number of steps and adjusted step to reach t_max exactly."""
        if not dt > 0 or not t_max > 0:
            raise ValueError("dt and t_max must be positive.")
        n_steps = max(1, math.ceil(t_max / dt - 1e-9))
        return n_steps, t_max / n_steps

    def solve(self, state: npt.ArrayLike,
              config: SolverConfig = SolverConfig()) -> SolverReport:
        """Advance a kinetic state (n_v, n_cells, N_d) to config.t_max."""
        logging.getLogger("pdg").setLevel(config.log_level)
        scheme = get_scheme(config.scheme, config.include_source)
        n_steps, dt = self.step_count(config.dt, config.t_max)
        if abs(dt - config.dt) > 1e-12 * config.dt:
            warnings.warn(f"Time step adjusted from {config.dt} to {dt} to "
                          f"reach t_max={config.t_max} in {n_steps} steps.")
        self.transport.cache_factorizations = config.cache_factorizations
        ctx = StepContext(dt, config.tau, self.model, self.transport,
                          config.include_source, config.num_threads)
        mesh, quad = self.transport.mesh, self.transport.quad
        state = np.array(state, dtype=float, copy=True)
        expected = (self.model.n_v,) + self.transport.field_shape
        if state.shape != expected:
            raise ValueError(f"Kinetic state has shape {state.shape}, "
                             f"expected {expected}.")
        log.info(f"{scheme.name}: dt={dt:.6g}, steps={n_steps}, "
                 f"tau={config.tau}, threads={config.num_threads}")
        totals = []
        if config.record_totals:
            totals.append(total_macro(self.model, mesh, quad, state))
        for step in range(n_steps):
            state = compose_palindromic(scheme, ctx, state)
            if not np.all(np.isfinite(state)):
                raise SolverError(f"Non-finite kinetic state after step "
                                  f"{step + 1} of {n_steps}.")
            if config.record_totals:
                totals.append(total_macro(self.model, mesh, quad, state))
            log.debug(f"t={(step + 1) * dt:.6g}")
        return SolverReport(state=state,
                            t_final=n_steps * dt,
                            dt=dt,
                            n_steps=n_steps,
                            scheme=scheme.name,
                            totals=np.asarray(totals))
