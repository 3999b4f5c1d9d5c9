# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty

import numpy as np
import numpy.typing as npt

from pdg.solvers.dg.quadrature import GLQuadrature

BOUNDARY_KINDS = ("dirichlet", "copy-equilibrium", "periodic")
FACE_NAMES = (("xmin", "xmax"), ("ymin", "ymax"))


class CartesianMesh:
    """Uniform affine Cartesian mesh in one or two dimensions.

    Real cells are numbered with the x index running fastest,
    id = ix + nx * iy. Every boundary face of a non-periodic axis gets a
    fictitious cell just outside the domain; fictitious cells are numbered
    after the real ones, face by face in the order xmin, xmax, ymin, ymax.
    Within a cell, nodes are numbered with the x node index running
    fastest, i = ix + (d + 1) * iy.
    """

    def __init__(self,
                 shape: ty.Sequence[int],
                 lower: ty.Sequence[float],
                 upper: ty.Sequence[float],
                 boundary: ty.Optional[ty.Dict[str, str]] = None):
        """
        Parameters
        ----------
        shape: sequence of int
            Number of cells per axis, (nx,) or (nx, ny).
        lower, upper: sequence of float
            Corners of the bounding box.
        boundary: dict, optional
            Boundary kind per face name ("xmin", "xmax", "ymin", "ymax"),
            one of BOUNDARY_KINDS. Faces not listed are "dirichlet".
        """
        self._shape = tuple(int(n) for n in shape)
        self._lower = np.asarray(lower, dtype=float).reshape(-1)
        self._upper = np.asarray(upper, dtype=float).reshape(-1)
        self._boundary = self._validate(boundary or {})
        self._h = (self._upper - self._lower) / np.asarray(self._shape)
        self._build_topology()

    def _validate(self, boundary):
        dim = len(self._shape)
        if dim not in (1, 2):
            raise ValueError(f"Unsupported mesh dimension {dim}.")
        if self._lower.shape != (dim,) or self._upper.shape != (dim,):
            raise ValueError("Bounding box does not match the mesh shape.")
        if min(self._shape) < 1:
            raise ValueError("Cell counts must be at least 1.")
        if np.any(self._upper <= self._lower):
            raise ValueError("Bounding box must have positive extent.")
        faces = [name for pair in FACE_NAMES[:dim] for name in pair]
        unknown = set(boundary) - set(faces)
        if unknown:
            raise ValueError(f"Unknown boundary faces {sorted(unknown)}.")
        kinds = {face: boundary.get(face, "dirichlet") for face in faces}
        for face, kind in kinds.items():
            if kind not in BOUNDARY_KINDS:
                raise ValueError(f"Unknown boundary kind {kind!r} on "
                                 f"face {face}.")
        for axis in range(dim):
            low, high = FACE_NAMES[axis]
            periodic = (kinds[low] == "periodic", kinds[high] == "periodic")
            if periodic[0] != periodic[1]:
                raise ValueError(f"Periodic faces {low}/{high} must be "
                                 f"paired.")
            if periodic[0] and self._shape[axis] < 2:
                raise ValueError("A periodic axis needs at least 2 cells.")
        return kinds

    def _build_topology(self):
        dim = self.dim
        grid_shape = self._shape[::-1]
        n_real = int(np.prod(self._shape))
        padded = -np.ones(tuple(n + 2 for n in grid_shape), dtype=int)
        inner = tuple(slice(1, -1) for _ in range(dim))
        padded[inner] = np.arange(n_real).reshape(grid_shape)

        next_id = n_real
        faces = []
        for axis in range(dim):
            # the grid axis of spatial axis k is dim - 1 - k
            g_axis = dim - 1 - axis
            for side, name in enumerate(FACE_NAMES[axis]):
                ghost = [slice(1, -1)] * dim
                ghost[g_axis] = -1 if side else 0
                if self._boundary[name] == "periodic":
                    source = [slice(1, -1)] * dim
                    source[g_axis] = 1 if side else -2
                    padded[tuple(ghost)] = padded[tuple(source)]
                    continue
                count = padded[tuple(ghost)].size
                ids = np.arange(next_id, next_id + count)
                padded[tuple(ghost)] = ids.reshape(padded[tuple(ghost)].shape)
                adjacent = [slice(1, -1)] * dim
                adjacent[g_axis] = -2 if side else 1
                adjacent_ids = np.ravel(padded[tuple(adjacent)])
                for fid, rid in zip(ids, adjacent_ids):
                    faces.append((int(fid), name, axis, side, int(rid)))
                next_id += count

        self._padded_ids = padded
        self._n_real = n_real
        self._fictitious = faces
        self._n_cells = next_id

        # grid position of every cell, ghost cells at -1 or n
        position = np.zeros((next_id, dim), dtype=int)
        for index in np.ndindex(padded.shape):
            cid = padded[index]
            if cid < 0:
                continue
            grid_pos = np.array(index[::-1]) - 1
            if cid >= n_real or np.all((grid_pos >= 0)
                                       & (grid_pos < self._shape)):
                position[cid] = grid_pos
        self._position = position

        neighbors = np.empty((n_real, dim, 2), dtype=int)
        for axis in range(dim):
            g_axis = dim - 1 - axis
            for side in range(2):
                shifted = [slice(1, -1)] * dim
                shifted[g_axis] = slice(2, None) if side else slice(0, -2)
                neighbors[:, axis, side] = padded[tuple(shifted)].ravel()
        self._neighbors = neighbors

    @property
    def dim(self) -> int:
        return len(self._shape)

    @property
    def shape(self) -> ty.Tuple[int, ...]:
        return self._shape

    @property
    def lower(self) -> np.ndarray:
        return self._lower.copy()

    @property
    def upper(self) -> np.ndarray:
        return self._upper.copy()

    @property
    def h(self) -> np.ndarray:
        """Cell size per axis."""
        return self._h.copy()

    @property
    def boundary(self) -> ty.Dict[str, str]:
        return dict(self._boundary)

    @property
    def n_real(self) -> int:
        return self._n_real

    @property
    def n_fictitious(self) -> int:
        return len(self._fictitious)

    @property
    def n_cells(self) -> int:
        return self._n_cells

    @property
    def real_cells(self) -> np.ndarray:
        return np.arange(self._n_real)

    @property
    def fictitious_cells(self) -> ty.List[ty.Tuple[int, str, int, int, int]]:
        """(cell id, face name, axis, side, adjacent real cell) per
        fictitious cell."""
        return list(self._fictitious)

    @property
    def neighbors(self) -> np.ndarray:
        """neighbors[L, k, s]: cell across the face of real cell L with
        outward normal (2 s - 1) e_k."""
        return self._neighbors

    @property
    def padded_ids(self) -> np.ndarray:
        """Cell ids on the grid extended by one ghost layer, indexed
        [iy, ix]; corners are -1."""
        return self._padded_ids

    def is_fictitious(self, cell: int) -> bool:
        return cell >= self._n_real

    @property
    def jacobian_det(self) -> float:
        return float(np.prod(self._h / 2.0))

    def cell_centers(self) -> np.ndarray:
        """Centres of all cells, fictitious ones included, (n_cells, dim)."""
        return self._lower + (self._position + 0.5) * self._h

    def node_weights(self, quad: GLQuadrature) -> np.ndarray:
        """Physical quadrature weights omega_{L,i}, equal for all cells."""
        w = quad.weights
        if self.dim == 2:
            w = np.outer(w, w).ravel()
        return w * self.jacobian_det

    def reference_nodes(self, quad: GLQuadrature) -> np.ndarray:
        """Reference node coordinates, (N_d, dim), x index fastest."""
        if self.dim == 1:
            return quad.nodes[:, None].copy()
        yy, xx = np.meshgrid(quad.nodes, quad.nodes, indexing="ij")
        return np.stack([xx.ravel(), yy.ravel()], axis=-1)

    def node_coordinates(self, quad: GLQuadrature) -> np.ndarray:
        """Physical node coordinates of every cell, (n_cells, N_d, dim)."""
        ref = self.reference_nodes(quad)
        return (self.cell_centers()[:, None, :]
                + 0.5 * self._h * ref[None, :, :])

    def locate(self, x: npt.ArrayLike) -> ty.Tuple[np.ndarray, np.ndarray]:
        """Real cell containing each point and the reference coordinates.

        Points on the boundary of the box are assigned to the adjacent
        real cell.
        """
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[-1] != self.dim:
            x = x.reshape(-1, self.dim)
        scaled = (x - self._lower) / self._h
        index = np.clip(np.floor(scaled).astype(int), 0,
                        np.asarray(self._shape) - 1)
        ref = 2.0 * (scaled - index) - 1.0
        cell = index[:, 0]
        if self.dim == 2:
            cell = cell + self._shape[0] * index[:, 1]
        return cell, ref

    def __repr__(self):
        return (f"CartesianMesh(shape={self._shape}, "
                f"lower={self._lower.tolist()}, "
                f"upper={self._upper.tolist()})")
