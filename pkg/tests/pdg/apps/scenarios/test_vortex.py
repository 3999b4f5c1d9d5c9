# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import unittest

import numpy as np

from pdg.apps.scenarios.vortex import (VortexParams, mhd_vortex_exact,
                                       mhd_vortex_primitive, vortex_profile)
from pdg.problems.systems import IdealMHD


def conservation_residual(params, x, t, step=1e-4):
    """Central difference of d_t w + d_x F_x + d_y F_y at points x."""
    system = IdealMHD(params.gamma)
    dw_dt = (mhd_vortex_exact(x, t + step, params)
             - mhd_vortex_exact(x, t - step, params)) / (2 * step)
    residual = dw_dt
    for k in range(2):
        shift = np.zeros(2)
        shift[k] = step
        plus = system.flux(mhd_vortex_exact(x + shift, t, params), k)
        minus = system.flux(mhd_vortex_exact(x - shift, t, params), k)
        residual = residual + (plus - minus) / (2 * step)
    return residual


class TestVortex(unittest.TestCase):
    def test_profile(self):
        self.assertAlmostEqual(float(vortex_profile(1.0)), 1.0)
        self.assertAlmostEqual(float(vortex_profile(0.0)), np.exp(0.5))

    def test_far_field_is_background(self):
        params = VortexParams()
        rho, u, p, b = mhd_vortex_primitive(np.array([30.0, -30.0]), 0.0,
                                            params)
        self.assertAlmostEqual(float(rho), 1.0)
        np.testing.assert_allclose(u, [0.2, 0.2], atol=1e-12)
        np.testing.assert_allclose(b, [0.0, 0.0], atol=1e-12)
        self.assertAlmostEqual(float(p), 1.0 + 0.5 * 0.2 ** 2, places=12)

    def test_centre(self):
        params = VortexParams(balanced=False)
        rho, u, p, b = mhd_vortex_primitive(np.zeros(2), 0.0, params)
        np.testing.assert_allclose(u, [0.2, 0.2], atol=1e-15)
        np.testing.assert_allclose(b, [0.0, 0.0], atol=1e-15)
        self.assertAlmostEqual(float(p),
                               1.0 + 0.02 * (1.0 - np.exp(0.5)), places=12)
        _, _, p_balanced, _ = mhd_vortex_primitive(np.zeros(2), 0.0,
                                                   VortexParams())
        self.assertAlmostEqual(float(p_balanced), 1.02, places=12)

    def test_drift(self):
        params = VortexParams()
        np.testing.assert_allclose(params.drift_velocity, [0.2, 0.2])
        rng = np.random.default_rng(0)
        x = rng.uniform(-3.0, 3.0, (20, 2))
        t = 0.7
        np.testing.assert_allclose(
            mhd_vortex_exact(x, t, params),
            mhd_vortex_exact(x - t * params.drift_velocity, 0.0, params),
            atol=1e-13)

    def test_swirl_is_tangential(self):
        x = np.array([[1.0, 0.0], [0.0, 2.0], [-1.5, 1.5]])
        still = VortexParams(u_drift=(0.0, 0.0))
        _, u, _, b = mhd_vortex_primitive(x, 0.0, still)
        np.testing.assert_allclose(np.sum(u * x, axis=-1), 0.0, atol=1e-15)
        np.testing.assert_allclose(np.sum(b * x, axis=-1), 0.0, atol=1e-15)

    def test_solves_conservation_law(self):
        params = VortexParams()
        rng = np.random.default_rng(1)
        x = rng.uniform(-2.5, 2.5, (25, 2))
        residual = conservation_residual(params, x, 0.3)
        np.testing.assert_allclose(residual, 0.0, atol=1e-6)

    def test_unbalanced_pressure_is_not_steady(self):
        params = VortexParams(balanced=False)
        x = np.array([[0.8, 0.3], [-1.0, 1.2]])
        residual = conservation_residual(params, x, 0.0)
        self.assertGreater(np.max(np.abs(residual)), 1e-4)

    def test_admissible(self):
        x = np.stack(np.meshgrid(np.linspace(-4, 4, 17),
                                 np.linspace(-4, 4, 17)), axis=-1)
        w = mhd_vortex_exact(x, 0.0)
        self.assertEqual(w.shape, (17, 17, 6))
        self.assertTrue(np.all(IdealMHD().is_admissible(w)))


if __name__ == "__main__":
    unittest.main()
