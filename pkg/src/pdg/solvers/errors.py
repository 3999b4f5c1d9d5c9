# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty


class SolverError(RuntimeError):
    """A time step or linear solve could not be completed."""
    pass


class NewtonError(SolverError):
    """Damped Newton iteration of a source step did not converge."""

    def __init__(self, residual: float, iterations: int,
                 message: ty.Optional[str] = None):
        self.residual = residual
        self.iterations = iterations
        super().__init__(message or f"Newton iteration did not converge "
                                    f"after {iterations} iterations, "
                                    f"residual {residual:.3e}.")
