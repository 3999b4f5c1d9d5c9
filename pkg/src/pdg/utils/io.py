# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

"""Deterministic text artifacts: nodal fields, convergence tables, graphs
and kinetic state snapshots."""

import os
import typing as ty

import numpy as np
import numpy.typing as npt

from pdg.problems.kinetic_models import KineticModel
from pdg.solvers.dg.transport import TransportOperator
from pdg.utils.convergence import ConvergenceReport
from pdg.utils.norms import macro_fields

FLOAT_FORMAT = "%.17g"
CONVERGENCE_HEADER = "level,dt,h,error_l2,slope_so_far"
SNAPSHOT_ORDERING = "velocity-cell-node"


def field_rows(model: KineticModel, transport: TransportOperator,
               state: npt.ArrayLike) -> ty.Tuple[ty.List[str], np.ndarray]:
    """Header and rows of the nodal field table.

    Rows follow the topological cell order of velocity 0, then the node
    index; columns are the node coordinates followed by the fields.
    """
    mesh, quad = transport.mesh, transport.quad
    order = transport.graph(model.velocities[0]).topological_order()
    order = np.asarray(order[:mesh.n_real], dtype=int)
    coords = mesh.node_coordinates(quad)[order]
    w = macro_fields(model, mesh, state)[order]
    header = ["x", "y"][:mesh.dim] + list(model.system.field_names)
    rows = np.concatenate([coords, w], axis=-1).reshape(-1, len(header))
    return header, rows


def write_fields_csv(path: str, model: KineticModel,
                     transport: TransportOperator,
                     state: npt.ArrayLike) -> str:
    header, rows = field_rows(model, transport, state)
    np.savetxt(path, rows, fmt=FLOAT_FORMAT, delimiter=",",
               header=",".join(header), comments="")
    return path


def write_convergence_csv(path: str, report: ConvergenceReport) -> str:
    rows = [(lv.level, lv.dt, lv.h, lv.error,
             report.slope_so_far(index + 1))
            for index, lv in enumerate(report.levels)]
    np.savetxt(path, np.asarray(rows, dtype=float).reshape(-1, 5),
               fmt=["%d"] + [FLOAT_FORMAT] * 4, delimiter=",",
               header=CONVERGENCE_HEADER, comments="")
    return path


def write_dot(prefix: str, model: KineticModel,
              transport: TransportOperator) -> ty.List[str]:
    """Write `<prefix>_v<i>.dot` for every kinetic velocity i."""
    paths = []
    for index, velocity in enumerate(model.velocities):
        path = f"{prefix}_v{index}.dot"
        with open(path, "w") as stream:
            stream.write(transport.graph(velocity).to_dot())
        paths.append(path)
    return paths


def write_state_snapshot(path: str, transport: TransportOperator,
                         state: npt.ArrayLike) -> str:
    """Write a kinetic state (n_v, n_cells, N_d) with a one-line header
    recording its layout."""
    state = np.asarray(state, dtype=float)
    mesh = transport.mesh
    if state.ndim != 3 or state.shape[1:] != transport.field_shape:
        raise ValueError(f"Kinetic state of shape {state.shape} does not "
                         f"match the discretization.")
    cells = "x".join(str(n) for n in mesh.shape)
    header = (f"D={mesh.dim}, d={transport.quad.degree}, cells={cells}, "
              f"n_v={state.shape[0]}, ordering={SNAPSHOT_ORDERING}")
    np.savetxt(path, state.reshape(-1, state.shape[-1]), fmt=FLOAT_FORMAT,
               delimiter=",", header=header, comments="# ")
    return path


def read_state_snapshot(path: str) -> ty.Tuple[np.ndarray,
                                                ty.Dict[str, str]]:
    """Read a snapshot written by write_state_snapshot.

    Returns the kinetic state (n_v, n_cells, N_d) and the header fields.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path) as stream:
        first = stream.readline()
    if not first.startswith("#"):
        raise ValueError(f"{path}: missing snapshot header.")
    meta = {}
    for item in first.lstrip("# ").strip().split(","):
        key, _, value = item.strip().partition("=")
        meta[key] = value
    if meta.get("ordering") != SNAPSHOT_ORDERING:
        raise ValueError(f"{path}: unsupported ordering "
                         f"{meta.get('ordering')!r}.")
    data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    n_v = int(meta["n_v"])
    return data.reshape(n_v, -1, data.shape[-1]), meta
