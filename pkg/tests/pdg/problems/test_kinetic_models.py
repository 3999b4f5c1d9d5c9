# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import unittest

import numpy as np

from pdg.problems.kinetic_models import (D1Q3Model, D2Q9Model, MODEL_IDS,
                                         VectorialModel, equilibrium_d1q3,
                                         equilibrium_d2q9,
                                         equilibrium_vectorial,
                                         kinetic_source, make_kinetic_model,
                                         project_macro)
from pdg.problems.systems import (IdealMHD, IsothermalEuler,
                                  finite_difference_jacobian)


def random_states(model, size=15, seed=1):
    rng = np.random.default_rng(seed)
    rho = rng.uniform(0.5, 2.0, size)
    u = rng.uniform(-0.3, 0.3, (size, model.dim))
    if isinstance(model.system, IdealMHD):
        p = rng.uniform(0.5, 1.5, size)
        b = rng.uniform(-0.3, 0.3, (size, 2))
        return model.system.conservative(rho, u, p, b)
    return model.system.conservative(rho, u)


def all_models():
    return [make_kinetic_model(model_id, lam=2.0) for model_id in MODEL_IDS]


class TestModelConsistency(unittest.TestCase):
    def test_projection_of_equilibrium(self):
        for model in all_models():
            with self.subTest(model=model.kind, dim=model.dim):
                w = random_states(model)
                np.testing.assert_allclose(
                    project_macro(model, model.equilibrium(w)), w,
                    atol=1e-13)

    def test_flux_moments_of_equilibrium(self):
        for model in all_models():
            f_eq = model.equilibrium(random_states(model))
            w = project_macro(model, f_eq)
            for k in range(model.dim):
                with self.subTest(model=model.kind, dim=model.dim, k=k):
                    weighted = model.projection * model.velocities[:, k]
                    np.testing.assert_allclose(f_eq @ weighted.T,
                                               model.system.flux(w, k),
                                               atol=1e-12)

    def test_equilibrium_jacobian_matches_finite_differences(self):
        for model in all_models():
            with self.subTest(model=model.kind, dim=model.dim):
                w = random_states(model, size=5)
                fd = finite_difference_jacobian(model.equilibrium, w)
                np.testing.assert_allclose(model.equilibrium_jacobian(w),
                                           fd, atol=1e-7)

    def test_velocity_counts(self):
        counts = {"vectorial-euler-1d": 4, "d1q3": 3, "d2q9": 9,
                  "vectorial-mhd-2d": 24, "vectorial-euler-2d": 12}
        for model_id, n_v in counts.items():
            model = make_kinetic_model(model_id, lam=2.0)
            self.assertEqual(model.n_v, n_v)
            self.assertEqual(model.velocities.shape, (n_v, model.dim))
            self.assertEqual(model.projection.shape, (model.m, n_v))

    def test_model_is_read_only(self):
        model = make_kinetic_model("vectorial-euler-1d", lam=2.0)
        with self.assertRaises(ValueError):
            model.velocities[0, 0] = 1.0
        with self.assertRaises(ValueError):
            model.projection[0, 0] = 1.0


class TestVectorialModel(unittest.TestCase):
    def test_velocity_ordering(self):
        model = make_kinetic_model("vectorial-euler-2d", lam=2.0)
        np.testing.assert_array_equal(
            model.velocities[:4],
            [[-2.0, 0.0], [2.0, 0.0], [0.0, -2.0], [0.0, 2.0]])

    def test_equilibrium_at_rest(self):
        f = equilibrium_vectorial(np.array([1.0, 0.0]),
                                  IsothermalEuler(1, c=0.6), 2.0, 1)
        np.testing.assert_allclose(f, [0.5, 0.5, -0.09, 0.09])

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            equilibrium_vectorial(np.array([1.0, 0.0]),
                                  IsothermalEuler(1), 2.0, 2)


class TestD1Q3Model(unittest.TestCase):
    def test_equilibrium_at_rest(self):
        f = equilibrium_d1q3(np.array([1.0, 0.0]), c=0.6, lam=2.0)
        np.testing.assert_allclose(f, [0.045, 0.91, 0.045])

    def test_rejects_other_systems(self):
        with self.assertRaises(ValueError):
            D1Q3Model(IsothermalEuler(2), 2.0)
        with self.assertRaises(ValueError):
            D1Q3Model(IdealMHD(), 2.0)


class TestD2Q9Model(unittest.TestCase):
    def test_default_velocity_scale(self):
        model = D2Q9Model(IsothermalEuler(2, c=0.6))
        self.assertAlmostEqual(model.lam, np.sqrt(3.0) * 0.6)

    def test_equilibrium_at_rest_is_weighted_density(self):
        f = equilibrium_d2q9(np.array([1.5, 0.0, 0.0]), c=0.6)
        np.testing.assert_allclose(f, 1.5 * D2Q9Model(
            IsothermalEuler(2, c=0.6)).weights, atol=1e-14)

    def test_pressure_moment_for_any_scale(self):
        for lam in (1.0, 2.0, 3.5):
            model = D2Q9Model(IsothermalEuler(2, c=0.6), lam)
            w = random_states(model)
            f = model.equilibrium(w)
            rho = w[:, 0]
            u = w[:, 1:] / rho[:, None]
            for a in range(2):
                for b in range(2):
                    with self.subTest(lam=lam, a=a, b=b):
                        vel = model.velocities
                        moment = f @ (vel[:, a] * vel[:, b])
                        expected = rho * u[:, a] * u[:, b]
                        if a == b:
                            expected = expected + 0.36 * rho
                        np.testing.assert_allclose(moment, expected,
                                                   atol=1e-12)

    def test_non_positive_density(self):
        with self.assertRaises(ValueError):
            equilibrium_d2q9(np.array([0.0, 0.0, 0.0]), c=0.6)


class TestCatalog(unittest.TestCase):
    def test_unknown_model(self):
        with self.assertRaises(ValueError):
            make_kinetic_model("d3q27", lam=1.0)

    def test_velocity_scale_required(self):
        with self.assertRaises(ValueError):
            make_kinetic_model("d1q3")
        self.assertIsInstance(make_kinetic_model("d2q9"), D2Q9Model)

    def test_non_positive_scale(self):
        for lam in (0.0, -1.0):
            with self.assertRaises(ValueError):
                make_kinetic_model("vectorial-euler-1d", lam=lam)

    def test_mhd_model(self):
        model = make_kinetic_model("vectorial-mhd-2d", lam=4.0, gamma=1.4)
        self.assertIsInstance(model, VectorialModel)
        self.assertEqual(model.system.gamma, 1.4)


class TestProjection(unittest.TestCase):
    def test_wrong_component_count(self):
        model = make_kinetic_model("d1q3", lam=2.0)
        with self.assertRaises(ValueError):
            project_macro(model, np.ones(4))

    def test_kinetic_source_projects_to_macroscopic_source(self):
        for model_id in ("vectorial-euler-1d", "d1q3"):
            model = make_kinetic_model(model_id, lam=2.0, gravity=[0.05])
            f = model.equilibrium(random_states(model))
            g = kinetic_source(model, model.system, f)
            w = project_macro(model, f)
            with self.subTest(model=model_id):
                np.testing.assert_allclose(project_macro(model, g),
                                           model.system.source(w),
                                           atol=1e-14)

    def test_kinetic_source_field_count(self):
        model = make_kinetic_model("vectorial-euler-1d", lam=2.0)
        with self.assertRaises(ValueError):
            kinetic_source(model, IsothermalEuler(2), np.ones(4))


if __name__ == "__main__":
    unittest.main()
