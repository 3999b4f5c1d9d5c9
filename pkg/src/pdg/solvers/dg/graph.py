# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty

import networkx as ntx
import numpy as np
import numpy.typing as npt

from pdg.solvers.dg.mesh import CartesianMesh


class CycleError(ValueError):
    """The dependency graph of a velocity is not acyclic."""

    def __init__(self, cycle: ty.List[ty.Tuple[int, int]],
                 velocity: ty.Optional[np.ndarray] = None):
        self.cycle = cycle
        self.velocity = velocity
        path = " -> ".join(str(edge[0]) for edge in cycle)
        if cycle:
            path += f" -> {cycle[-1][1]}"
        super().__init__(f"Dependency graph for velocity "
                         f"{None if velocity is None else velocity.tolist()} "
                         f"has a cycle: {path}.")


class DependencyGraph:
    """Upwind dependency graph of the cells of a mesh for one velocity.

    There is an edge L -> R when the upwind flux makes the unknowns of R
    depend on those of L, i.e. when the normal n_LR of their shared face
    satisfies n_LR . v > 0. Fictitious cells hold frozen boundary data and
    only have outgoing edges.
    """

    def __init__(self, mesh: CartesianMesh, velocity: npt.ArrayLike):
        self._mesh = mesh
        self._velocity = np.atleast_1d(np.asarray(velocity, dtype=float))
        if self._velocity.shape != (mesh.dim,):
            raise ValueError(f"Velocity must have {mesh.dim} components.")
        self._graph = self._build()
        self._order = None
        self._levels = None

    def _build(self) -> ntx.DiGraph:
        mesh = self._mesh
        graph = ntx.DiGraph()
        graph.add_nodes_from(mesh.real_cells.tolist(), fictitious=False)
        graph.add_nodes_from(range(mesh.n_real, mesh.n_cells),
                             fictitious=True)
        edges = []
        for axis in range(mesh.dim):
            v_k = self._velocity[axis]
            if v_k == 0:
                continue
            # outward normal of face side s is (2 s - 1) e_k
            downwind_side = 1 if v_k > 0 else 0
            downwind = mesh.neighbors[:, axis, downwind_side]
            upwind = mesh.neighbors[:, axis, 1 - downwind_side]
            for cell in range(mesh.n_real):
                if not mesh.is_fictitious(downwind[cell]):
                    edges.append((cell, int(downwind[cell])))
                if mesh.is_fictitious(upwind[cell]):
                    edges.append((int(upwind[cell]), cell))
        graph.add_edges_from(edges)
        return graph

    @property
    def graph(self) -> ntx.DiGraph:
        return self._graph

    @property
    def mesh(self) -> CartesianMesh:
        return self._mesh

    @property
    def velocity(self) -> np.ndarray:
        return self._velocity.copy()

    @property
    def edges(self) -> ty.List[ty.Tuple[int, int]]:
        return sorted(self._graph.edges())

    def upwind_cells(self, cell: int) -> ty.List[int]:
        return sorted(self._graph.predecessors(cell))

    def topological_order(self) -> ty.List[int]:
        """Real cells in dependency order, followed by fictitious cells.

        Ties are broken by ascending cell id. Raises CycleError when the
        real-cell subgraph has a cycle.
        """
        if self._order is None:
            real = self._graph.subgraph(self._mesh.real_cells.tolist())
            try:
                order = list(ntx.lexicographical_topological_sort(real))
            except ntx.NetworkXUnfeasible:
                cycle = ntx.find_cycle(real)
                raise CycleError([(int(a), int(b)) for a, b in cycle],
                                 self._velocity) from None
            order += list(range(self._mesh.n_real, self._mesh.n_cells))
            self._order = order
        return list(self._order)

    def levels(self) -> ty.List[np.ndarray]:
        """Real cells grouped by longest-path depth from the sources.

        Cells of one level do not depend on each other and may be solved
        concurrently. Levels are listed by increasing depth, cells within
        a level by ascending id.
        """
        if self._levels is None:
            order = self.topological_order()[:self._mesh.n_real]
            depth = {}
            for cell in order:
                preds = [depth[p] for p in self._graph.predecessors(cell)
                         if p in depth]
                depth[cell] = 1 + max(preds) if preds else 0
            n_levels = 1 + max(depth.values()) if depth else 0
            grouped = [[] for _ in range(n_levels)]
            for cell in sorted(depth):
                grouped[depth[cell]].append(cell)
            self._levels = [np.asarray(g, dtype=int) for g in grouped]
        return list(self._levels)

    def to_dot(self) -> str:
        """Graphviz DOT text, fictitious cells drawn as boxes."""
        lines = ["digraph G {"]
        for cell in range(self._mesh.n_real, self._mesh.n_cells):
            lines.append(f"  {cell} [shape=box];")
        for src, dst in self.edges:
            lines.append(f"  {src} -> {dst};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_dependency_graph(mesh: CartesianMesh,
                           velocity: npt.ArrayLike) -> DependencyGraph:
    return DependencyGraph(mesh, velocity)


def topological_order(graph: DependencyGraph) -> ty.List[int]:
    return graph.topological_order()
