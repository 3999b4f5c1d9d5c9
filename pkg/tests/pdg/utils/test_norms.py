# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import unittest

import numpy as np

from pdg.problems.kinetic_models import make_kinetic_model
from pdg.solvers.dg.mesh import CartesianMesh
from pdg.solvers.dg.quadrature import gauss_lobatto
from pdg.utils.norms import (cfl_number, dt_from_cfl, evaluate_fields,
                             l2_error, macro_fields, min_node_spacing,
                             total_macro)


def equilibrium_state(model, mesh, quad, fields):
    """Kinetic equilibrium of fields(x) on every cell, (n_v, n_cells, N_d)."""
    coords = mesh.node_coordinates(quad)
    return np.moveaxis(model.equilibrium(fields(coords)), -1, 0)


def linear_density(x):
    rho = 1.0 + x[..., 0]
    return np.stack([rho, np.zeros_like(rho)], axis=-1)


class TestNorms(unittest.TestCase):
    def setUp(self):
        self.model = make_kinetic_model("vectorial-euler-1d", lam=2.0)
        self.mesh = CartesianMesh((4,), [0.0], [4.0])
        self.quad = gauss_lobatto(2)
        self.state = equilibrium_state(self.model, self.mesh, self.quad,
                                       linear_density)

    def test_macro_fields(self):
        w = macro_fields(self.model, self.mesh, self.state)
        self.assertEqual(w.shape, (4, 3, 2))
        coords = self.mesh.node_coordinates(self.quad)[:4]
        np.testing.assert_allclose(w, linear_density(coords), atol=1e-14)

    def test_macro_fields_shape_check(self):
        with self.assertRaises(ValueError):
            macro_fields(self.model, self.mesh, self.state[:3])

    def test_total_macro(self):
        totals = total_macro(self.model, self.mesh, self.quad, self.state)
        np.testing.assert_allclose(totals, [12.0, 0.0], atol=1e-13)

    def test_l2_error_zero(self):
        w = macro_fields(self.model, self.mesh, self.state)
        self.assertAlmostEqual(
            l2_error(self.model, self.state, w, self.mesh, self.quad), 0.0)
        self.assertAlmostEqual(
            l2_error(self.model, self.state, linear_density, self.mesh,
                     self.quad), 0.0, places=13)

    def test_l2_error_constant_offset(self):
        eps = 1e-3
        w = macro_fields(self.model, self.mesh, self.state) + eps
        # volume 4, two fields
        self.assertAlmostEqual(
            l2_error(self.model, self.state, w, self.mesh, self.quad),
            eps * np.sqrt(8.0), places=14)

    def test_l2_error_shape_check(self):
        with self.assertRaises(ValueError):
            l2_error(self.model, self.state, np.zeros((4, 3, 1)),
                     self.mesh, self.quad)

    def test_cfl(self):
        self.assertAlmostEqual(min_node_spacing(self.mesh, self.quad), 0.5)
        dt = dt_from_cfl(2.0, 1.0, self.mesh, self.quad)
        self.assertAlmostEqual(dt, 0.25)
        self.assertAlmostEqual(cfl_number(2.0, dt, self.mesh, self.quad),
                               1.0)
        self.assertAlmostEqual(cfl_number(2.0, 10 * dt, self.mesh,
                                          self.quad), 10.0)


class TestEvaluateFields(unittest.TestCase):
    def test_polynomial_1d(self):
        mesh = CartesianMesh((5,), [-1.0], [1.5])
        quad = gauss_lobatto(3)
        coords = mesh.node_coordinates(quad)[:mesh.n_real]
        nodal = coords[..., 0] ** 3 - 2.0 * coords[..., 0]
        points = np.random.default_rng(0).uniform(-1.0, 1.5, (30, 1))
        values = evaluate_fields(mesh, quad, nodal, points)
        np.testing.assert_allclose(values, points[:, 0] ** 3
                                   - 2.0 * points[:, 0], atol=1e-12)

    def test_polynomial_2d(self):
        mesh = CartesianMesh((3, 2), [0.0, 0.0], [3.0, 1.0])
        quad = gauss_lobatto(2)
        coords = mesh.node_coordinates(quad)[:mesh.n_real]
        x, y = coords[..., 0], coords[..., 1]
        nodal = np.stack([x * y, x ** 2 - y ** 2], axis=-1)
        points = np.random.default_rng(1).uniform([0.0, 0.0], [3.0, 1.0],
                                                  (25, 2))
        values = evaluate_fields(mesh, quad, nodal, points)
        px, py = points[:, 0], points[:, 1]
        np.testing.assert_allclose(values,
                                   np.stack([px * py, px ** 2 - py ** 2],
                                            axis=-1), atol=1e-12)

    def test_boundary_points(self):
        mesh = CartesianMesh((2,), [0.0], [1.0])
        quad = gauss_lobatto(1)
        coords = mesh.node_coordinates(quad)[:mesh.n_real]
        values = evaluate_fields(mesh, quad, 2.0 * coords[..., 0],
                                 np.array([[0.0], [1.0]]))
        np.testing.assert_allclose(values, [0.0, 2.0], atol=1e-14)


if __name__ == "__main__":
    unittest.main()
