# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from pdg.problems.systems import IdealMHD


@dataclass(frozen=True)
class VortexParams:
    """Parameters of the drifting MHD vortex.

    Parameters
    ----------
    rho0, p0: float
        Background density and pressure.
    u0, b0: float
        Velocity and magnetic field amplitudes. The vortex is an exact
        stationary solution in the co-moving frame when b0^2 = rho0 u0^2.
    u_drift: tuple of float
        Drift direction; the background fluid velocity is u0 * u_drift and
        the vortex centre moves with it.
    gamma: float
        Adiabatic exponent.
    balanced: bool
        Use the radially balanced pressure p0 + b0^2 (1 - r^2 h^2) / 2. When
        False, the profile p0 + b0^2 (1 - h) / 2 is used instead.
    """

    rho0: float = 1.0
    p0: float = 1.0
    u0: float = 0.2
    b0: float = 0.2
    u_drift: ty.Tuple[float, float] = (1.0, 1.0)
    gamma: float = 5.0 / 3.0
    balanced: bool = True

    @property
    def drift_velocity(self) -> np.ndarray:
        """Velocity of the vortex centre."""
        return self.u0 * np.asarray(self.u_drift, dtype=float)


def vortex_profile(r: npt.ArrayLike) -> np.ndarray:
    """h(r) = exp((1 - r^2) / 2)."""
    r = np.asarray(r, dtype=float)
    return np.exp(0.5 * (1.0 - r ** 2))


def mhd_vortex_primitive(x: npt.ArrayLike, t: float,
                         params: VortexParams = VortexParams()) \
        -> ty.Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Density, velocity, pressure and magnetic field of the vortex at
    points x of shape (..., 2)."""
    x = np.asarray(x, dtype=float)
    rel = x - t * params.drift_velocity
    r = np.linalg.norm(rel, axis=-1)
    h = vortex_profile(r)
    # h(r) r e_theta, smooth at the centre
    swirl = h[..., None] * np.stack([-rel[..., 1], rel[..., 0]], axis=-1)
    rho = np.full(r.shape, params.rho0)
    u = params.drift_velocity + params.u0 * swirl
    b = params.b0 * swirl
    if params.balanced:
        p = params.p0 + 0.5 * params.b0 ** 2 * (1.0 - (r * h) ** 2)
    else:
        p = params.p0 + 0.5 * params.b0 ** 2 * (1.0 - h)
    return rho, u, p, b


def mhd_vortex_exact(x: npt.ArrayLike, t: float,
                     params: VortexParams = VortexParams()) -> np.ndarray:
    """Conserved MHD state (rho, rho u, Q, B) of the drifting vortex at
    points x of shape (..., 2) and time t."""
    rho, u, p, b = mhd_vortex_primitive(x, t, params)
    return IdealMHD(params.gamma).conservative(rho, u, p, b)
