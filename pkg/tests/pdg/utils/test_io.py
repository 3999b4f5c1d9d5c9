# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import os
import tempfile
import unittest

import numpy as np

from pdg.apps.scenarios.problems import init_smooth_1d
from pdg.apps.scenarios.solver import ScenarioConfig, ScenarioSolver
from pdg.utils.convergence import ConvergenceLevel, ConvergenceReport
from pdg.utils.io import (CONVERGENCE_HEADER, read_state_snapshot,
                          write_convergence_csv, write_dot,
                          write_fields_csv, write_state_snapshot)


def read_text(path):
    with open(path) as stream:
        return stream.read()


class TestOutputFiles(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.solver = ScenarioSolver(init_smooth_1d()).discretize(
            ScenarioConfig(shape=(8,), degree=2))
        self.state = self.solver.initial_state()

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_fields_csv(self):
        path = write_fields_csv(self.path("f.csv"), self.solver.model,
                                self.solver.transport, self.state)
        lines = read_text(path).splitlines()
        self.assertEqual(lines[0], "x,rho,rho_u")
        rows = np.loadtxt(path, delimiter=",", skiprows=1)
        self.assertEqual(rows.shape, (24, 3))
        # velocity 0 points left, so the rightmost cell comes first
        self.assertEqual(rows[0, 0], 1.5)
        self.assertEqual(rows[-1, 0], -1.5)
        np.testing.assert_allclose(rows[:, 2], 0.0, atol=1e-15)

    def test_fields_csv_is_deterministic(self):
        first = write_fields_csv(self.path("a.csv"), self.solver.model,
                                 self.solver.transport, self.state)
        second = write_fields_csv(self.path("b.csv"), self.solver.model,
                                  self.solver.transport, self.state.copy())
        self.assertEqual(read_text(first), read_text(second))

    def test_convergence_csv(self):
        levels = (ConvergenceLevel(0, 0.1, 0.5, 1e-2),
                  ConvergenceLevel(1, 0.05, 0.25, 2.5e-3),
                  ConvergenceLevel(2, 0.025, 0.125, 6.25e-4))
        report = ConvergenceReport("smooth1d", "m2", "mesh", "suzuki4",
                                   levels)
        path = write_convergence_csv(self.path("c.csv"), report)
        lines = read_text(path).splitlines()
        self.assertEqual(lines[0], CONVERGENCE_HEADER)
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[1].startswith("0,0.10000000000000001,"))
        self.assertTrue(lines[1].endswith(",nan"))
        rows = np.loadtxt(path, delimiter=",", skiprows=1)
        np.testing.assert_allclose(rows[1:, 4], 2.0)

    def test_dot_files(self):
        paths = write_dot(self.path("g"), self.solver.model,
                          self.solver.transport)
        self.assertEqual(len(paths), 4)
        self.assertEqual(os.path.basename(paths[3]), "g_v3.dot")
        text = read_text(paths[1])
        self.assertTrue(text.startswith("digraph G {"))
        self.assertIn("  8 -> 0;", text)
        self.assertIn("  6 -> 7;", text)

    def test_snapshot_round_trip(self):
        path = write_state_snapshot(self.path("s.txt"),
                                    self.solver.transport, self.state)
        state, meta = read_state_snapshot(path)
        np.testing.assert_array_equal(state, self.state)
        self.assertEqual(meta["D"], "1")
        self.assertEqual(meta["d"], "2")
        self.assertEqual(meta["cells"], "8")
        self.assertEqual(meta["n_v"], "4")

    def test_snapshot_errors(self):
        with self.assertRaises(ValueError):
            write_state_snapshot(self.path("s.txt"), self.solver.transport,
                                 self.state[:, :4])
        bad = self.path("bad.txt")
        with open(bad, "w") as stream:
            stream.write("# D=1, n_v=1, ordering=node-cell\n1.0,2.0\n")
        with self.assertRaises(ValueError):
            read_state_snapshot(bad)
        with self.assertRaises(FileNotFoundError):
            read_state_snapshot(self.path("missing.txt"))


if __name__ == "__main__":
    unittest.main()
