# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import unittest

import numpy as np

from pdg.problems.systems import (HyperbolicSystem, IdealMHD,
                                  IsothermalEuler,
                                  finite_difference_jacobian)


def random_euler_states(dim, size=20, seed=0):
    rng = np.random.default_rng(seed)
    rho = rng.uniform(0.5, 2.0, size)
    u = rng.uniform(-0.5, 0.5, (size, dim))
    return IsothermalEuler(dim).conservative(rho, u)


def random_mhd_states(size=20, seed=0):
    rng = np.random.default_rng(seed)
    rho = rng.uniform(0.5, 2.0, size)
    u = rng.uniform(-0.5, 0.5, (size, 2))
    p = rng.uniform(0.5, 1.5, size)
    b = rng.uniform(-0.3, 0.3, (size, 2))
    return IdealMHD().conservative(rho, u, p, b)


class TestHyperbolicSystem(unittest.TestCase):
    def test_cannot_create_instance(self):
        with self.assertRaises(TypeError):
            HyperbolicSystem(1)

    def test_unsupported_dimension(self):
        with self.assertRaises(ValueError):
            IsothermalEuler(3)

    def test_finite_difference_jacobian_of_linear_map(self):
        mat = np.array([[1.0, 2.0], [-3.0, 0.5], [0.0, 4.0]])
        w = np.array([[0.3, -1.2], [2.0, 0.1]])
        jac = finite_difference_jacobian(lambda x: x @ mat.T, w)
        self.assertEqual(jac.shape, (2, 3, 2))
        np.testing.assert_allclose(jac[0], mat, atol=1e-8)
        np.testing.assert_allclose(jac[1], mat, atol=1e-8)


class TestIsothermalEuler(unittest.TestCase):
    def test_field_names(self):
        self.assertEqual(IsothermalEuler(1).field_names, ("rho", "rho_u"))
        self.assertEqual(IsothermalEuler(2).field_names,
                         ("rho", "rho_ux", "rho_uy"))

    def test_flux_1d(self):
        system = IsothermalEuler(1, c=0.6)
        w = system.conservative(np.array(2.0), np.array(0.5))
        np.testing.assert_allclose(system.flux(w, 0),
                                   [1.0, 2.0 * 0.25 + 0.36 * 2.0])

    def test_flux_jacobian_matches_finite_differences(self):
        for dim in (1, 2):
            system = IsothermalEuler(dim, c=0.6)
            w = random_euler_states(dim)
            for k in range(dim):
                with self.subTest(dim=dim, k=k):
                    fd = finite_difference_jacobian(
                        lambda x: system.flux(x, k), w)
                    np.testing.assert_allclose(system.flux_jacobian(w, k),
                                               fd, atol=1e-7)

    def test_gravity_source(self):
        system = IsothermalEuler(1, c=0.6, gravity=[0.05])
        self.assertTrue(system.has_source)
        w = np.array([[2.0, 0.3]])
        np.testing.assert_allclose(system.source(w), [[0.0, 0.1]])
        fd = finite_difference_jacobian(system.source, w)
        np.testing.assert_allclose(system.source_jacobian(w), fd,
                                   atol=1e-8)

    def test_no_source_by_default(self):
        system = IsothermalEuler(2)
        self.assertFalse(system.has_source)
        w = random_euler_states(2, size=3)
        np.testing.assert_array_equal(system.source(w), np.zeros_like(w))

    def test_entropy_hessian_is_symmetric_positive_definite(self):
        system = IsothermalEuler(2, c=0.6)
        for w in random_euler_states(2, size=10):
            hess = system.entropy_hessian(w)
            np.testing.assert_allclose(hess, hess.T)
            self.assertGreater(np.linalg.eigvalsh(hess).min(), 0.0)

    def test_invalid_parameters(self):
        with self.assertRaises(ValueError):
            IsothermalEuler(1, c=0.0)
        with self.assertRaises(ValueError):
            IsothermalEuler(2, gravity=[0.1])

    def test_validate_state(self):
        system = IsothermalEuler(1)
        system.validate_state(np.array([1.0, 0.2]))
        with self.assertRaises(ValueError):
            system.validate_state(np.array([-1.0, 0.2]))
        with self.assertRaises(ValueError):
            system.validate_state(np.array([1.0, 0.2, 0.0]))


class TestIdealMHD(unittest.TestCase):
    def test_pressure_of_conservative_state(self):
        system = IdealMHD(gamma=5.0 / 3.0)
        w = system.conservative(1.2, np.array([0.1, -0.2]), 0.9,
                                np.array([0.3, 0.1]))
        self.assertAlmostEqual(float(system.pressure(w)), 0.9, places=12)

    def test_flux_jacobian_matches_finite_differences(self):
        system = IdealMHD()
        w = random_mhd_states()
        for k in range(2):
            with self.subTest(k=k):
                fd = finite_difference_jacobian(
                    lambda x: system.flux(x, k), w)
                np.testing.assert_allclose(system.flux_jacobian(w, k), fd,
                                           atol=1e-7)

    def test_flux_of_state_at_rest(self):
        system = IdealMHD()
        w = system.conservative(1.0, np.zeros(2), 1.0, np.zeros(2))
        np.testing.assert_allclose(system.flux(w, 0),
                                   [0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(system.flux(w, 1),
                                   [0.0, 0.0, 1.0, 0.0, 0.0, 0.0])

    def test_admissibility(self):
        system = IdealMHD()
        good = system.conservative(1.0, np.zeros(2), 1.0, np.zeros(2))
        bad = good.copy()
        bad[3] = -1.0
        self.assertTrue(system.is_admissible(good))
        self.assertFalse(system.is_admissible(bad))

    def test_no_entropy(self):
        with self.assertRaises(NotImplementedError):
            IdealMHD().entropy_hessian(random_mhd_states(size=1))

    def test_invalid_gamma(self):
        with self.assertRaises(ValueError):
            IdealMHD(gamma=1.0)


if __name__ == "__main__":
    unittest.main()
