# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

MAX_DEGREE = 8


def _lobatto_nodes_weights(degree: int, tol: float = 1e-15,
                           max_iter: int = 100):
    """Newton iteration on (1 - x^2) P'_n from Chebyshev-Lobatto points."""
    n = degree
    x = -np.cos(np.pi * np.arange(n + 1) / n)
    legendre = np.zeros((n + 1, n + 1))
    for _ in range(max_iter):
        x_old = x
        legendre[:, 0] = 1.0
        legendre[:, 1] = x
        for k in range(2, n + 1):
            legendre[:, k] = ((2 * k - 1) * x * legendre[:, k - 1]
                              - (k - 1) * legendre[:, k - 2]) / k
        x = x_old - ((x * legendre[:, n] - legendre[:, n - 1])
                     / ((n + 1) * legendre[:, n]))
        if np.max(np.abs(x - x_old)) < tol:
            break
    # The end points are fixed points of the update; pin them exactly.
    x[0], x[-1] = -1.0, 1.0
    weights = 2.0 / (n * (n + 1) * legendre[:, n] ** 2)
    return x, weights


def _barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


@dataclass(frozen=True)
class GLQuadrature:
    """Gauss-Lobatto nodal basis of degree d on the reference cell [-1, 1].

    Attributes
    ----------
    degree: int
        Polynomial degree d.
    nodes: np.ndarray
        The d + 1 Gauss-Lobatto points, ascending, including -1 and 1.
    weights: np.ndarray
        Quadrature weights, exact for polynomials of degree 2d - 1.
    diff_matrix: np.ndarray
        diff_matrix[i, j] is the derivative of the i-th Lagrange basis
        function at node j.
    """

    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    diff_matrix: np.ndarray = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return self.degree + 1

    @property
    def min_spacing(self) -> float:
        """Smallest distance between adjacent reference nodes."""
        return float(np.min(np.diff(self.nodes)))

    def basis(self, x: npt.ArrayLike) -> np.ndarray:
        """Lagrange basis evaluated at points x, shape (len(x), d + 1)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        diff = x[:, None] - self.nodes[None, :]
        values = np.empty_like(diff)
        for i in range(self.n_nodes):
            others = np.delete(np.arange(self.n_nodes), i)
            values[:, i] = (np.prod(diff[:, others], axis=1)
                            / np.prod(self.nodes[i] - self.nodes[others]))
        return values


def gauss_lobatto(degree: int) -> GLQuadrature:
    """Build the Gauss-Lobatto quadrature and nodal basis of a degree.

    Parameters
    ----------
    degree: int
        Polynomial degree, 1 <= degree <= 8.
    """
    if not isinstance(degree, (int, np.integer)) or not \
            1 <= degree <= MAX_DEGREE:
        raise ValueError(f"Unsupported Gauss-Lobatto degree {degree!r}; "
                         f"expected an integer in [1, {MAX_DEGREE}].")
    if degree == 1:
        nodes, weights = np.array([-1.0, 1.0]), np.array([1.0, 1.0])
    else:
        nodes, weights = _lobatto_nodes_weights(int(degree))

    bary = _barycentric_weights(nodes)
    dphi = np.zeros((degree + 1, degree + 1))
    for j in range(degree + 1):
        for i in range(degree + 1):
            if i != j:
                dphi[i, j] = (bary[i] / bary[j]) / (nodes[j] - nodes[i])
        dphi[j, j] = -np.sum(dphi[:, j])
    for arr in (nodes, weights, dphi):
        arr.setflags(write=False)
    return GLQuadrature(int(degree), nodes, weights, dphi)
