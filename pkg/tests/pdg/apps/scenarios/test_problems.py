# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import unittest

import numpy as np

from pdg.apps.scenarios.problems import (SCENARIO_IDS, Scenario,
                                         get_scenario, init_euler_gravity_1d,
                                         init_mhd_vortex, init_riemann_1d,
                                         init_smooth_1d)


class TestScenarioCatalog(unittest.TestCase):
    def test_all_scenarios(self):
        for scenario_id in SCENARIO_IDS:
            scenario = get_scenario(scenario_id)
            with self.subTest(scenario=scenario_id):
                self.assertEqual(scenario.name, scenario_id)
                self.assertEqual(scenario.dim, len(scenario.lower))
                model = scenario.make_model()
                self.assertEqual(model.dim, scenario.dim)
                mesh = scenario.make_mesh()
                self.assertEqual(mesh.shape, scenario.shape)

    def test_unknown_scenario(self):
        with self.assertRaises(ValueError):
            get_scenario("sod")

    def test_smooth_1d_defaults(self):
        scenario = init_smooth_1d()
        self.assertEqual(scenario.model_id, "vectorial-euler-1d")
        self.assertEqual((scenario.degree, scenario.lam, scenario.beta),
                         (5, 2.0, 5.0))
        self.assertEqual(scenario.t_max, 0.4)
        self.assertFalse(scenario.has_exact)
        w = scenario.initial_state(np.array([[0.0], [2.0]]))
        self.assertAlmostEqual(w[0, 0], 2.0)
        self.assertAlmostEqual(w[1, 0], 1.0, places=12)
        np.testing.assert_array_equal(w[:, 1], 0.0)

    def test_mhd_vortex_defaults(self):
        scenario = init_mhd_vortex()
        self.assertEqual(scenario.shape, (48, 48))
        self.assertEqual((scenario.degree, scenario.lam), (2, 4.0))
        self.assertEqual(scenario.convergence_axis, "dt")
        self.assertEqual(scenario.dt_levels, (0.2, 0.1, 0.05, 0.025))
        self.assertTrue(scenario.has_exact)

    def test_gravity_defaults(self):
        scenario = init_euler_gravity_1d(g0=0.1)
        self.assertTrue(scenario.include_source)
        self.assertEqual(scenario.gravity, (0.1,))
        self.assertEqual(scenario.make_mesh().boundary,
                         {"xmin": "copy-equilibrium",
                          "xmax": "copy-equilibrium"})
        np.testing.assert_array_equal(scenario.make_model().system.gravity,
                                      [0.1])


class TestRiemannScenario(unittest.TestCase):
    def setUp(self):
        self.scenario = init_riemann_1d()

    def test_initial_state(self):
        w = self.scenario.initial_state(np.array([[-0.5], [0.5]]))
        np.testing.assert_array_equal(w, [[2.0, 0.0], [1.0, 0.0]])

    def test_initial_mass(self):
        x = ((np.arange(1000) + 0.5) / 500.0 - 1.0)[:, None]
        mass = 2.0 * np.mean(self.scenario.initial_state(x)[:, 0])
        self.assertAlmostEqual(mass, 3.0, places=12)

    def test_exact_solution(self):
        x = np.linspace(-1.0, 1.0, 21)[:, None]
        np.testing.assert_array_equal(self.scenario.exact_state(x, 0.0),
                                      self.scenario.initial_state(x))
        w = self.scenario.exact_state(x, 0.4)
        self.assertEqual(w.shape, (21, 2))
        np.testing.assert_allclose(w[0], [2.0, 0.0])
        np.testing.assert_allclose(w[-1], [1.0, 0.0])
        self.assertTrue(np.all(w[:, 1] >= 0.0))


class TestScenario(unittest.TestCase):
    def test_validation(self):
        base = init_smooth_1d()
        with self.assertRaises(ValueError):
            base.replace(beta=None)
        with self.assertRaises(ValueError):
            base.replace(name="unknown")
        with self.assertRaises(ValueError):
            base.replace(convergence_axis="space")
        with self.assertRaises(ValueError):
            base.replace(tau=-1.0)

    def test_replace(self):
        scenario = init_smooth_1d().replace(shape=(8,), degree=2)
        self.assertIsInstance(scenario, Scenario)
        self.assertEqual(scenario.make_mesh().shape, (8,))

    def test_no_exact_solution(self):
        with self.assertRaises(ValueError):
            init_smooth_1d().exact_state(np.zeros((1, 1)), 0.1)

    def test_unstable_velocity_scale_warns(self):
        scenario = init_smooth_1d()
        x = np.linspace(-2.0, 2.0, 9)[:, None]
        self.assertTrue(scenario.check_initial_state(scenario.make_model(),
                                                     x))
        with self.assertWarns(UserWarning):
            stable = scenario.check_initial_state(
                scenario.make_model(lam=0.5), x)
        self.assertFalse(stable)

    def test_mhd_is_checked_for_admissibility_only(self):
        scenario = init_mhd_vortex()
        x = np.zeros((1, 2))
        self.assertTrue(scenario.check_initial_state(scenario.make_model(),
                                                     x))

    def test_non_admissible_initial_state(self):
        scenario = init_smooth_1d().replace(
            initial=lambda x: np.stack([-np.ones(x.shape[:-1]),
                                        np.zeros(x.shape[:-1])], axis=-1))
        with self.assertRaises(ValueError):
            scenario.check_initial_state(scenario.make_model(),
                                         np.zeros((2, 1)))


if __name__ == "__main__":
    unittest.main()
