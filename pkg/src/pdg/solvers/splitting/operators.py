# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

"""Pointwise relaxation and source operators of the splitting schemes.

Kinetic data is passed with the velocity axis first, shape (n_v, ...);
every operator acts independently at each node.
"""

import typing as ty

import numpy as np
import numpy.typing as npt

from pdg.problems.kinetic_models import KineticModel, project_macro
from pdg.problems.systems import HyperbolicSystem
from pdg.solvers.errors import NewtonError

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50


def _nodes_last(field: npt.ArrayLike, model: KineticModel) -> np.ndarray:
    field = np.asarray(field, dtype=float)
    if field.shape[0] != model.n_v:
        raise ValueError(f"Kinetic state has {field.shape[0]} velocities, "
                         f"model expects {model.n_v}.")
    return np.moveaxis(field, 0, -1)


def relax_R1(dt: float, tau: float, model: KineticModel,
             field: npt.ArrayLike) -> np.ndarray:
    """Backward Euler relaxation f <- (f_eq + (tau/dt) f) / (1 + tau/dt)."""
    if not dt > 0:
        raise ValueError(f"R1 requires a positive step, got {dt}.")
    if tau < 0:
        raise ValueError(f"Relaxation time must be >= 0, got {tau}.")
    f = _nodes_last(field, model)
    f_eq = model.equilibrium(project_macro(model, f))
    ratio = tau / dt
    return np.moveaxis((f_eq + ratio * f) / (1.0 + ratio), -1, 0)


def relax_R2(dt: float, tau: float, model: KineticModel,
             field: npt.ArrayLike) -> np.ndarray:
    """Crank-Nicolson relaxation

        f <- ((2 tau - dt) f + 2 dt f_eq) / (2 tau + dt).

    At tau = 0 this is the step independent involution 2 f_eq - f. A signed
    step is accepted for tau > 0 as long as it stays away from the pole
    dt = -2 tau.
    """
    if tau < 0:
        raise ValueError(f"Relaxation time must be >= 0, got {tau}.")
    f = _nodes_last(field, model)
    f_eq = model.equilibrium(project_macro(model, f))
    if tau == 0:
        return np.moveaxis(2.0 * f_eq - f, -1, 0)
    denom = 2.0 * tau + dt
    if abs(denom) <= 1e-14 * max(1.0, abs(dt)):
        raise ValueError(f"Relaxation step {dt} hits the pole |dt| = 2 tau "
                         f"of the Crank-Nicolson relaxation.")
    out = ((2.0 * tau - dt) * f + 2.0 * dt * f_eq) / denom
    return np.moveaxis(out, -1, 0)


def damped_newton(residual: ty.Callable[[np.ndarray], np.ndarray],
                  jacobian: ty.Callable[[np.ndarray], np.ndarray],
                  x0: np.ndarray,
                  scale: np.ndarray,
                  tol: float = NEWTON_TOL,
                  max_iter: int = NEWTON_MAX_ITER) -> np.ndarray:
    """Batched damped Newton iteration for residual(x) = 0.

    Each row of x, shape (n, m), is solved independently. A step is halved
    (up to 10 times) while it fails to decrease the row residual. Rows
    converge when |residual| <= tol * scale.
    """
    x = np.array(x0, dtype=float, copy=True)
    res = residual(x)
    norm = np.linalg.norm(res, axis=-1)
    for iteration in range(max_iter + 1):
        if np.all(norm <= tol * scale):
            return x
        if iteration == max_iter:
            break
        active = norm > tol * scale
        step = np.linalg.solve(jacobian(x), -res[..., None])[..., 0]
        factor = active.astype(float)
        for _ in range(10):
            trial = x + factor[:, None] * step
            trial_res = residual(trial)
            trial_norm = np.linalg.norm(trial_res, axis=-1)
            worse = (trial_norm > norm) & active
            if not np.any(worse):
                break
            factor = np.where(worse, 0.5 * factor, factor)
        x, res, norm = trial, trial_res, trial_norm
    raise NewtonError(float(np.max(norm)), max_iter)


def solve_source(dt: float, system: HyperbolicSystem, w_in: np.ndarray,
                 midpoint: bool) -> np.ndarray:
    """Macroscopic source step on states (n, m).

    midpoint=True solves w = w_in + dt s((w_in + w) / 2), otherwise the
    backward Euler equation w = w_in + dt s(w).
    """
    theta = 0.5 if midpoint else 1.0
    eye = np.eye(system.m)

    def stage(w):
        return (1.0 - theta) * w_in + theta * w

    def residual(w):
        return w - w_in - dt * system.source(stage(w))

    def jacobian(w):
        return eye - dt * theta * system.source_jacobian(stage(w))

    scale = 1.0 + np.linalg.norm(w_in, axis=-1)
    return damped_newton(residual, jacobian, w_in, scale)


def _source_step(dt, model, system, field, midpoint):
    f = _nodes_last(field, model)
    if not system.has_source:
        return np.moveaxis(f.copy(), -1, 0)
    shape = f.shape
    f = f.reshape(-1, model.n_v)
    w_in = project_macro(model, f)
    w_out = solve_source(dt, system, w_in, midpoint)
    out = model.equilibrium(w_out) + (f - model.equilibrium(w_in))
    return np.moveaxis(out.reshape(shape), -1, 0)


def source_G1(dt: float, model: KineticModel, system: HyperbolicSystem,
              field: npt.ArrayLike) -> np.ndarray:
    """First order source step; the out-of-equilibrium part of f is kept."""
    return _source_step(dt, model, system, field, midpoint=False)


def source_G2(dt: float, model: KineticModel, system: HyperbolicSystem,
              field: npt.ArrayLike) -> np.ndarray:
    """Time-symmetric (midpoint rule) source step; the out-of-equilibrium
    part of f is kept."""
    return _source_step(dt, model, system, field, midpoint=True)
