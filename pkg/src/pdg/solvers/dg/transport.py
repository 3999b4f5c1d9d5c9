# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import logging
import typing as ty
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import numpy.typing as npt
from scipy import linalg

from pdg.solvers.dg.graph import DependencyGraph
from pdg.solvers.dg.mesh import CartesianMesh
from pdg.solvers.dg.quadrature import GLQuadrature
from pdg.solvers.errors import SolverError

log = logging.getLogger(__name__)

TRANSPORT_KINDS = ("T1", "T2", "T2_reversed")


class TransportOperator:
    r"""Upwind nodal DG discretization of $\partial_t f + v \cdot \nabla f = 0$.

    The semi-discrete scheme is written $\partial_t F = A F$ with a
    dissipative generator A, $\langle F, A F \rangle \le 0$ for zero
    boundary data. Kinetic data for one velocity is stored as an array of
    shape (n_cells, N_d) in cell-id order; leading batch axes are allowed
    and share the same velocity. Rows of fictitious cells are frozen.

    Parameters
    ----------
    mesh: CartesianMesh
    quad: GLQuadrature
    cache_factorizations: bool
        Keep the LU factors of the local blocks between solves, keyed by
        (velocity, alpha). By default they are recomputed per solve.
    """

    def __init__(self,
                 mesh: CartesianMesh,
                 quad: GLQuadrature,
                 cache_factorizations: bool = False):
        self._mesh = mesh
        self._quad = quad
        self.cache_factorizations = cache_factorizations
        weights = quad.weights
        # volume term in strong-to-weak form: dphi_i(x_j) w_j / w_i
        self._volume = quad.diff_matrix * weights[None, :] / weights[:, None]
        self._graphs: ty.Dict[tuple, DependencyGraph] = {}
        self._factors: ty.Dict[tuple, tuple] = {}

    @property
    def mesh(self) -> CartesianMesh:
        return self._mesh

    @property
    def quad(self) -> GLQuadrature:
        return self._quad

    @property
    def n_nodes(self) -> int:
        """Nodes per cell, N_d = (d + 1)^D."""
        return self._quad.n_nodes ** self._mesh.dim

    @property
    def node_shape(self) -> ty.Tuple[int, ...]:
        return (self._quad.n_nodes,) * self._mesh.dim

    @property
    def field_shape(self) -> ty.Tuple[int, int]:
        return self._mesh.n_cells, self.n_nodes

    def graph(self, velocity: npt.ArrayLike) -> DependencyGraph:
        key = tuple(np.atleast_1d(np.asarray(velocity, dtype=float)))
        if key not in self._graphs:
            self._graphs[key] = DependencyGraph(self._mesh, key)
        return self._graphs[key]

    def _velocity(self, velocity) -> np.ndarray:
        v = np.atleast_1d(np.asarray(velocity, dtype=float))
        if v.shape != (self._mesh.dim,):
            raise ValueError(f"Velocity must have {self._mesh.dim} "
                             f"components.")
        return v

    def _as_batch(self, field: npt.ArrayLike) -> np.ndarray:
        field = np.asarray(field, dtype=float)
        if field.shape[-2:] != self.field_shape:
            raise ValueError(f"Transport field has shape {field.shape}, "
                             f"expected (..., {self.field_shape[0]}, "
                             f"{self.field_shape[1]}).")
        return field.reshape((-1,) + self.field_shape)

    def axis_matrix(self, velocity: npt.ArrayLike, axis: int) -> np.ndarray:
        """One-dimensional cell operator along an axis: volume term and
        outflow faces, scaled by 2 / h_k."""
        v_k = self._velocity(velocity)[axis]
        w = self._quad.weights
        mat = v_k * self._volume
        mat[-1, -1] -= max(v_k, 0.0) / w[-1]
        mat[0, 0] -= max(-v_k, 0.0) / w[0]
        return (2.0 / self._mesh.h[axis]) * mat

    def local_block(self, velocity: npt.ArrayLike) -> np.ndarray:
        """Diagonal block A_LL of the generator, shape (N_d, N_d)."""
        n = self._quad.n_nodes
        if self._mesh.dim == 1:
            return self.axis_matrix(velocity, 0)
        eye = np.eye(n)
        return (np.kron(eye, self.axis_matrix(velocity, 0))
                + np.kron(self.axis_matrix(velocity, 1), eye))

    def _inflow(self, v_k: float, axis: int):
        """Upwind face coupling along an axis: (neighbour side, neighbour
        node, receiving node, coefficient)."""
        w = self._quad.weights
        scale = 2.0 * abs(v_k) / self._mesh.h[axis]
        last = self._quad.degree
        if v_k > 0:
            return 0, last, 0, scale / w[0]
        return 1, 0, last, scale / w[-1]

    def apply(self, velocity: npt.ArrayLike, field: npt.ArrayLike) \
            -> np.ndarray:
        """Action A F of the transport generator."""
        v = self._velocity(velocity)
        batch = self._as_batch(field)
        mesh = self._mesh
        n_real = mesh.n_real
        cell_shape = (batch.shape[0],) + mesh.shape[::-1] + self.node_shape
        grid = batch[:, :n_real].reshape(cell_shape)
        result = np.zeros_like(grid)
        for axis in range(mesh.dim):
            if v[axis] == 0:
                continue
            node_axis = -1 - axis
            mat = self.axis_matrix(v, axis)
            moved = np.tensordot(grid, mat, axes=([node_axis], [1]))
            result += np.moveaxis(moved, -1, node_axis)

            side, src, dst, coef = self._inflow(v[axis], axis)
            upwind = batch[:, mesh.neighbors[:, axis, side]]
            upwind = upwind.reshape(cell_shape)
            target = [slice(None)] * result.ndim
            target[node_axis] = dst
            result[tuple(target)] += coef * np.take(upwind, src,
                                                    axis=node_axis)
        out = np.zeros_like(batch)
        out[:, :n_real] = result.reshape(batch.shape[0], n_real, -1)
        return out.reshape(np.shape(field))

    def _factor(self, v: np.ndarray, alpha: float):
        key = (tuple(v), float(alpha))
        if key in self._factors:
            return self._factors[key]
        block = np.eye(self.n_nodes) - alpha * self.local_block(v)
        lu, piv = linalg.lu_factor(block, check_finite=False)
        if np.any(np.diag(lu) == 0.0):
            raise SolverError(f"Singular local transport block for velocity "
                              f"{v.tolist()} and alpha {alpha}.")
        if self.cache_factorizations:
            self._factors[key] = (lu, piv)
        return lu, piv

    def solve_implicit(self, velocity: npt.ArrayLike, alpha: float,
                       rhs: npt.ArrayLike) -> np.ndarray:
        """Solve (Id - alpha A) F = rhs by a sweep over the cells.

        Cells are visited level by level in dependency order; every cell
        solves its dense local block with the already known upwind values.
        Fictitious rows are copied from rhs. Raises CycleError when the
        dependency graph of the velocity has a cycle.
        """
        if not alpha > 0:
            raise ValueError(f"Implicit solve requires alpha > 0, "
                             f"got {alpha}.")
        v = self._velocity(velocity)
        batch = self._as_batch(rhs)
        levels = self.graph(v).levels()
        lu_piv = self._factor(v, alpha)
        n_batch = batch.shape[0]
        out = batch.copy()
        couplings = [(axis,) + self._inflow(v[axis], axis)
                     for axis in range(self._mesh.dim) if v[axis] != 0]
        neighbors = self._mesh.neighbors
        for cells in levels:
            local = batch[:, cells].reshape(
                (n_batch, len(cells)) + self.node_shape).copy()
            for axis, side, src, dst, coef in couplings:
                node_axis = -1 - axis
                upwind = out[:, neighbors[cells, axis, side]].reshape(
                    local.shape)
                target = [slice(None)] * local.ndim
                target[node_axis] = dst
                local[tuple(target)] += alpha * coef * np.take(
                    upwind, src, axis=node_axis)
            columns = local.reshape(-1, self.n_nodes).T
            solved = linalg.lu_solve(lu_piv, columns, check_finite=False)
            out[:, cells] = solved.T.reshape(n_batch, len(cells), -1)
        return out.reshape(np.shape(rhs))

    def transport_T1(self, dt: float, velocity: npt.ArrayLike,
                     field: npt.ArrayLike) -> np.ndarray:
        """Backward Euler step (Id - dt A)^-1."""
        if not dt > 0:
            raise ValueError(f"T1 requires a positive step, got {dt}.")
        return self.solve_implicit(velocity, dt, field)

    def transport_T2(self, dt: float, velocity: npt.ArrayLike,
                     field: npt.ArrayLike) -> np.ndarray:
        """Crank-Nicolson step (Id - dt/2 A)^-1 (Id + dt/2 A)."""
        if dt == 0:
            return np.array(field, dtype=float, copy=True)
        if dt < 0:
            raise ValueError("Negative transport steps go through "
                             "transport_T2_reversed.")
        half = 0.5 * dt
        rhs = np.asarray(field, dtype=float) + half * self.apply(velocity,
                                                                 field)
        return self.solve_implicit(velocity, half, rhs)

    def transport_T2_reversed(self, dt: float, velocity: npt.ArrayLike,
                              field: npt.ArrayLike) -> np.ndarray:
        """Stable replacement of T2(-dt): Crank-Nicolson for velocity -v."""
        return self.transport_T2(dt, -self._velocity(velocity), field)

    def transport_state(self,
                        kind: str,
                        dt: float,
                        state: np.ndarray,
                        velocities: np.ndarray,
                        num_threads: int = 0) -> np.ndarray:
        """Apply one transport operator to every velocity of a kinetic state
        of shape (n_v, n_cells, N_d).

        Velocities that coincide are swept together. With num_threads > 1
        distinct velocities are processed concurrently; the arithmetic per
        velocity is unchanged, so results equal the serial ones bit for bit.
        """
        if kind not in TRANSPORT_KINDS:
            raise ValueError(f"Unknown transport operator {kind!r}.")
        op = {"T1": self.transport_T1, "T2": self.transport_T2,
              "T2_reversed": self.transport_T2_reversed}[kind]
        groups: ty.Dict[tuple, ty.List[int]] = {}
        for index, v in enumerate(np.asarray(velocities, dtype=float)):
            groups.setdefault(tuple(v), []).append(index)

        def run(item):
            v, indices = item
            return indices, op(dt, np.asarray(v), state[indices])

        out = np.empty_like(state, dtype=float)
        items = list(groups.items())
        if num_threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=num_threads) as pool:
                results = list(pool.map(run, items))
        else:
            results = [run(item) for item in items]
        for indices, values in results:
            out[indices] = values
        return out

    def assemble_matrix(self, velocity: npt.ArrayLike) -> np.ndarray:
        """Dense matrix of A in flattened cell-id order. Meant for small
        meshes and cross-checks."""
        size = self.field_shape[0] * self.field_shape[1]
        columns = np.eye(size).reshape((size,) + self.field_shape)
        return self.apply(velocity, columns).reshape(size, size).T

    def inner(self, first: npt.ArrayLike, second: npt.ArrayLike) -> float:
        """Weighted inner product sum omega_{L,i} f_{L,i} g_{L,i} over the
        real cells."""
        weights = self._mesh.node_weights(self._quad)
        n_real = self._mesh.n_real
        first = np.asarray(first, dtype=float)[..., :n_real, :]
        second = np.asarray(second, dtype=float)[..., :n_real, :]
        return float(np.sum(weights * first * second))

    def to_field(self, field: npt.ArrayLike,
                 velocity: npt.ArrayLike) -> np.ndarray:
        """Flat vector of one velocity field in topological cell order,
        F[k N_d + i] = f_{L_k, i}."""
        order = self.graph(velocity).topological_order()
        return np.asarray(field, dtype=float)[order].ravel()
