# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty

import numpy as np
import numpy.typing as npt

from pdg.problems.kinetic_models import KineticModel, project_macro
from pdg.solvers.dg.mesh import CartesianMesh
from pdg.solvers.dg.quadrature import GLQuadrature


def macro_fields(model: KineticModel, mesh: CartesianMesh,
                 state: npt.ArrayLike) -> np.ndarray:
    """Conserved fields at the nodes of the real cells, shape
    (n_real, N_d, m), from a kinetic state (n_v, n_cells, N_d)."""
    state = np.asarray(state, dtype=float)
    if state.ndim != 3 or state.shape[0] != model.n_v:
        raise ValueError(f"Kinetic state of shape {state.shape} does not "
                         f"match a model with {model.n_v} velocities.")
    nodes_last = np.moveaxis(state[:, :mesh.n_real], 0, -1)
    return project_macro(model, nodes_last)


def total_macro(model: KineticModel, mesh: CartesianMesh,
                quad: GLQuadrature, state: npt.ArrayLike) -> np.ndarray:
    """Integral of every conserved field over the domain."""
    w = macro_fields(model, mesh, state)
    return np.einsum("i,lim->m", mesh.node_weights(quad), w)


def l2_error(model: KineticModel,
             state: npt.ArrayLike,
             w_ref: ty.Union[npt.ArrayLike, ty.Callable],
             mesh: CartesianMesh,
             quad: GLQuadrature) -> float:
    """L2 norm over the real cells of P f - w_ref, summed over fields.

    Parameters
    ----------
    model: KineticModel
    state: array_like
        Kinetic state (n_v, n_cells, N_d).
    w_ref: array_like or callable
        Reference conserved fields at the nodes, (n_real, N_d, m), or a
        function mapping node coordinates (..., dim) to fields (..., m).
    """
    w = macro_fields(model, mesh, state)
    if callable(w_ref):
        coords = mesh.node_coordinates(quad)[:mesh.n_real]
        w_ref = w_ref(coords)
    w_ref = np.asarray(w_ref, dtype=float)
    if w_ref.shape != w.shape:
        raise ValueError(f"Reference fields of shape {w_ref.shape} do not "
                         f"match {w.shape}.")
    diff2 = np.sum((w - w_ref) ** 2, axis=-1)
    return float(np.sqrt(np.sum(mesh.node_weights(quad) * diff2)))


def min_node_spacing(mesh: CartesianMesh, quad: GLQuadrature) -> float:
    """Smallest physical distance between adjacent Gauss-Lobatto nodes."""
    return float(np.min(mesh.h) / 2.0 * quad.min_spacing)


def cfl_number(lam: float, dt: float, mesh: CartesianMesh,
               quad: GLQuadrature) -> float:
    """Kinetic CFL number beta = lam dt / delta."""
    return lam * dt / min_node_spacing(mesh, quad)


def dt_from_cfl(lam: float, beta: float, mesh: CartesianMesh,
                quad: GLQuadrature) -> float:
    return beta * min_node_spacing(mesh, quad) / lam


def evaluate_fields(mesh: CartesianMesh, quad: GLQuadrature,
                    nodal: npt.ArrayLike, points: npt.ArrayLike) \
        -> np.ndarray:
    """Evaluate the nodal DG representation of fields at arbitrary points.

    Parameters
    ----------
    nodal: array_like
        Field values at the nodes of the real cells, (n_real, N_d, ...).
    points: array_like
        Points of shape (n, dim) inside the bounding box.
    """
    nodal = np.asarray(nodal, dtype=float)
    cells, ref = mesh.locate(points)
    basis = quad.basis(ref[:, 0])
    if mesh.dim == 2:
        basis_y = quad.basis(ref[:, 1])
        basis = (basis_y[:, :, None] * basis[:, None, :]).reshape(
            len(cells), -1)
    return np.einsum("ni,ni...->n...", basis, nodal[cells])
