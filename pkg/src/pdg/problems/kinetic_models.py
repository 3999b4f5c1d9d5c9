# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty
from abc import ABC, abstractmethod

import numpy as np
import numpy.typing as npt

from pdg.problems.systems import (HyperbolicSystem, IdealMHD,
                                  IsothermalEuler)

MODEL_IDS = ("vectorial-euler-1d", "d1q3", "d2q9", "vectorial-mhd-2d",
             "vectorial-euler-2d")

# D2Q9 lattice in units of lambda, rest velocity first.
D2Q9_LATTICE = np.array([[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1],
                         [1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=float)
D2Q9_WEIGHTS = np.array([4 / 9] + [1 / 9] * 4 + [1 / 36] * 4)


class KineticModel(ABC):
    """Interface for a kinetic representation of a hyperbolic system.

    A kinetic model is a set of n_v constant velocities v_i, a projection
    matrix P (m x n_v) mapping kinetic data f to conserved fields w = P f,
    and an equilibrium map f_eq(w) such that P f_eq(w) = w and
    P V^k f_eq(w) = q^k(w).

    Models are immutable after construction.
    """

    kind: str = ""

    def __init__(self, system: HyperbolicSystem, lam: float):
        if not lam > 0:
            raise ValueError(f"Velocity scale must be positive, got {lam}.")
        self._system = system
        self._lam = float(lam)
        self._velocities = self._build_velocities()
        self._velocities.setflags(write=False)
        self._projection = self._build_projection()
        self._projection.setflags(write=False)

    @abstractmethod
    def _build_velocities(self) -> np.ndarray:
        pass

    @abstractmethod
    def _build_projection(self) -> np.ndarray:
        pass

    @abstractmethod
    def equilibrium(self, w: npt.ArrayLike) -> np.ndarray:
        """Equilibrium f_eq(w) of shape (..., n_v)."""
        pass

    @abstractmethod
    def equilibrium_jacobian(self, w: npt.ArrayLike) -> np.ndarray:
        """Jacobian of f_eq, shape (..., n_v, m)."""
        pass

    @property
    def system(self) -> HyperbolicSystem:
        return self._system

    @property
    def lam(self) -> float:
        return self._lam

    @property
    def dim(self) -> int:
        return self._system.dim

    @property
    def m(self) -> int:
        return self._system.m

    @property
    def velocities(self) -> np.ndarray:
        """Velocity set, shape (n_v, dim)."""
        return self._velocities

    @property
    def n_v(self) -> int:
        return self._velocities.shape[0]

    @property
    def projection(self) -> np.ndarray:
        return self._projection

    def __repr__(self):
        return (f"{type(self).__name__}(kind={self.kind!r}, m={self.m}, "
                f"n_v={self.n_v}, lam={self.lam})")


class VectorialModel(KineticModel):
    """Vectorial kinetic model: a D2Q4-type lattice per conserved field.

    Each field l carries 2 * dim kinetic components with velocities
    -lam e_k and +lam e_k. Components are ordered lexicographically as
    (field l, axis k, sign -, sign +).
    """

    kind = "vectorial"

    def _build_velocities(self):
        d = self.dim
        per_field = np.zeros((2 * d, d))
        for k in range(d):
            per_field[2 * k, k] = -self._lam
            per_field[2 * k + 1, k] = self._lam
        return np.tile(per_field, (self.m, 1))

    def _build_projection(self):
        return np.kron(np.eye(self.m), np.ones((1, 2 * self.dim)))

    def equilibrium(self, w):
        w = np.asarray(w, dtype=float)
        d = self.dim
        fluxes = np.stack([self._system.flux(w, k) for k in range(d)],
                          axis=-1)
        mean = (w / (2 * d))[..., None]
        half_flux = fluxes / (2 * self._lam)
        f = np.stack([mean - half_flux, mean + half_flux], axis=-1)
        return f.reshape(w.shape[:-1] + (self.n_v,))

    def equilibrium_jacobian(self, w):
        w = np.asarray(w, dtype=float)
        d, m = self.dim, self.m
        jacs = np.stack([self._system.flux_jacobian(w, k) for k in range(d)],
                        axis=-2)
        mean = np.broadcast_to(np.eye(m)[:, None, :] / (2 * d),
                               jacs.shape)
        half = jacs / (2 * self._lam)
        jac = np.stack([mean - half, mean + half], axis=-2)
        return jac.reshape(w.shape[:-1] + (self.n_v, m))


class D1Q3Model(KineticModel):
    """D1Q3 model of the one-dimensional isothermal Euler equations.

    Velocities are (-lam, 0, lam) and the equilibrium matches the density,
    momentum and momentum flux moments exactly.
    """

    kind = "D1Q3"

    def __init__(self, system: IsothermalEuler, lam: float):
        if not isinstance(system, IsothermalEuler) or system.dim != 1:
            raise ValueError("D1Q3 represents 1D isothermal Euler only.")
        super().__init__(system, lam)

    def _build_velocities(self):
        return np.array([[-self._lam], [0.0], [self._lam]])

    def _build_projection(self):
        return np.array([[1.0, 1.0, 1.0], [-self._lam, 0.0, self._lam]])

    def equilibrium(self, w):
        w = np.asarray(w, dtype=float)
        rho, mom = w[..., 0], w[..., 1]
        lam2 = self._lam ** 2
        second = (mom ** 2 / rho + self._system.c ** 2 * rho) / lam2
        return np.stack([0.5 * second - 0.5 * mom / self._lam,
                         rho - second,
                         0.5 * second + 0.5 * mom / self._lam], axis=-1)

    def equilibrium_jacobian(self, w):
        w = np.asarray(w, dtype=float)
        u = w[..., 1] / w[..., 0]
        lam2 = self._lam ** 2
        d_rho = (self._system.c ** 2 - u ** 2) / lam2
        d_mom = 2.0 * u / lam2
        jac = np.empty(w.shape[:-1] + (3, 2))
        jac[..., 0, 0] = 0.5 * d_rho
        jac[..., 0, 1] = 0.5 * d_mom - 0.5 / self._lam
        jac[..., 1, 0] = 1.0 - d_rho
        jac[..., 1, 1] = -d_mom
        jac[..., 2, 0] = 0.5 * d_rho
        jac[..., 2, 1] = 0.5 * d_mom + 0.5 / self._lam
        return jac


class D2Q9Model(KineticModel):
    r"""D2Q9 lattice model of the two-dimensional isothermal Euler system.

    With $\theta = \lambda^2 / 3$ the equilibrium is

    $$f_i = \omega_i \rho (1 + v_i \cdot u / \theta
    + (v_i \cdot u)^2 / (2 \theta^2) - |u|^2 / (2 \theta))
    + \rho (c^2 - \theta) \psi_i,$$

    where $\psi$ shifts mass between the rest population and the moving
    ones so that the pressure moment equals $c^2 \rho$ for any lambda.
    For the conventional choice lambda = sqrt(3) c the correction vanishes.
    """

    kind = "D2Q9"

    def __init__(self,
                 system: IsothermalEuler,
                 lam: ty.Optional[float] = None):
        if not isinstance(system, IsothermalEuler) or system.dim != 2:
            raise ValueError("D2Q9 represents 2D isothermal Euler only.")
        if lam is None:
            lam = np.sqrt(3.0) * system.c
        super().__init__(system, lam)
        theta = self._lam ** 2 / 3.0
        psi = D2Q9_WEIGHTS / theta
        psi[0] = -(1.0 - D2Q9_WEIGHTS[0]) / theta
        self._theta = theta
        self._psi = psi

    @property
    def weights(self) -> np.ndarray:
        return D2Q9_WEIGHTS.copy()

    def _build_velocities(self):
        return self._lam * D2Q9_LATTICE

    def _build_projection(self):
        return np.vstack([np.ones(9), self._velocities.T])

    def equilibrium(self, w):
        w = np.asarray(w, dtype=float)
        rho = w[..., 0]
        if np.any(rho <= 0):
            raise ValueError("D2Q9 equilibrium requires positive density.")
        u = w[..., 1:] / rho[..., None]
        theta = self._theta
        vu = u @ self._velocities.T
        u2 = np.sum(u ** 2, axis=-1)[..., None]
        poly = 1.0 + vu / theta + vu ** 2 / (2 * theta ** 2) - u2 / (2 * theta)
        shift = (self._system.c ** 2 - theta) * self._psi
        return rho[..., None] * (D2Q9_WEIGHTS * poly + shift)

    def equilibrium_jacobian(self, w):
        w = np.asarray(w, dtype=float)
        rho = w[..., 0]
        u = w[..., 1:] / rho[..., None]
        theta = self._theta
        vel = self._velocities
        vu = u @ vel.T
        u2 = np.sum(u ** 2, axis=-1)[..., None]
        jac = np.empty(w.shape[:-1] + (9, 3))
        jac[..., 0] = (D2Q9_WEIGHTS * (1.0 - vu ** 2 / (2 * theta ** 2)
                                       + u2 / (2 * theta))
                       + (self._system.c ** 2 - theta) * self._psi)
        for a in range(2):
            jac[..., 1 + a] = D2Q9_WEIGHTS * (
                vel[:, a] / theta + vu * vel[:, a] / theta ** 2
                - u[..., a, None] / theta)
        return jac


def project_macro(model: KineticModel, f: npt.ArrayLike) -> np.ndarray:
    """Conserved fields w = P f of kinetic data f of shape (..., n_v)."""
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != model.n_v:
        raise ValueError(f"Kinetic vector has {f.shape[-1]} components, "
                         f"model expects {model.n_v}.")
    return f @ model.projection.T


def kinetic_source(model: KineticModel,
                   system: HyperbolicSystem,
                   f: npt.ArrayLike) -> np.ndarray:
    """Kinetic source g(f) = grad_w f_eq(P f) s(P f).

    The result satisfies P g = s(P f), so that the macroscopic source is
    recovered after projection.
    """
    if system.m != model.m:
        raise ValueError("System and kinetic model disagree on field count.")
    w = project_macro(model, f)
    s = system.source(w)
    return np.einsum("...ij,...j->...i", model.equilibrium_jacobian(w), s)


def equilibrium_vectorial(w: npt.ArrayLike,
                          system: HyperbolicSystem,
                          lam: float,
                          dim: int) -> np.ndarray:
    if dim != system.dim:
        raise ValueError(f"System is {system.dim}D, requested {dim}D.")
    return VectorialModel(system, lam).equilibrium(w)


def equilibrium_d1q3(w: npt.ArrayLike, c: float, lam: float) -> np.ndarray:
    return D1Q3Model(IsothermalEuler(1, c), lam).equilibrium(w)


def equilibrium_d2q9(w: npt.ArrayLike,
                     c: float,
                     lam: ty.Optional[float] = None) -> np.ndarray:
    return D2Q9Model(IsothermalEuler(2, c), lam).equilibrium(w)


def make_kinetic_model(model_id: str,
                       lam: ty.Optional[float] = None,
                       c: float = 0.6,
                       gravity: ty.Optional[ty.Sequence[float]] = None,
                       gamma: float = 5.0 / 3.0) -> KineticModel:
    """Build a kinetic model, and the system it represents, from its id.

    Parameters
    ----------
    model_id: str
        One of MODEL_IDS.
    lam: float, optional
        Velocity scale. Only D2Q9 has a default (sqrt(3) c).
    c: float
        Sound speed of the isothermal Euler systems.
    gravity: sequence of float, optional
        Constant gravity for the isothermal Euler systems.
    gamma: float
        Adiabatic exponent of the MHD system.
    """
    if model_id not in MODEL_IDS:
        raise ValueError(f"Unknown kinetic model {model_id!r}; expected one "
                         f"of {', '.join(MODEL_IDS)}.")
    if lam is None and model_id != "d2q9":
        raise ValueError(f"Model {model_id!r} requires a velocity scale.")
    if model_id == "vectorial-mhd-2d":
        return VectorialModel(IdealMHD(gamma), lam)
    dim = 1 if model_id in ("vectorial-euler-1d", "d1q3") else 2
    system = IsothermalEuler(dim, c, gravity)
    if model_id == "d1q3":
        return D1Q3Model(system, lam)
    if model_id == "d2q9":
        return D2Q9Model(system, lam)
    return VectorialModel(system, lam)
