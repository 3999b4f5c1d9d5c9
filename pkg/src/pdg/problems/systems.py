# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty
from abc import ABC, abstractmethod

import numpy as np
import numpy.typing as npt


def finite_difference_jacobian(
    fun: ty.Callable[[np.ndarray], np.ndarray], w: npt.ArrayLike
) -> np.ndarray:
    """Central finite-difference Jacobian of a batched vector map.

    Parameters
    ----------
    fun: callable
        Map from states of shape (..., m) to vectors of shape (..., n).
    w: array_like
        States of shape (..., m).

    Returns
    -------
    jac: np.ndarray
        Array of shape (..., n, m) with jac[..., i, j] = d fun_i / d w_j.
        The step is 1e-6 * max(1, |w|) per state.
    """
    w = np.asarray(w, dtype=float)
    step = 1e-6 * np.maximum(1.0, np.linalg.norm(w, axis=-1))
    columns = []
    for j in range(w.shape[-1]):
        shift = np.zeros_like(w)
        shift[..., j] = step
        diff = fun(w + shift) - fun(w - shift)
        columns.append(diff / (2.0 * step[..., None]))
    return np.stack(columns, axis=-1)


class HyperbolicSystem(ABC):
    """Interface for a system of conservation laws

        d_t w + sum_k d_k q^k(w) = s(w),

    with m conserved fields in `dim` space dimensions.

    All state arguments are batched: a state array has shape (..., m) and
    the methods act on the trailing axis.
    """

    def __init__(self, dim: int):
        if dim not in (1, 2):
            raise ValueError(f"Unsupported space dimension {dim}.")
        self._dim = dim

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def m(self) -> int:
        """Number of conserved fields."""
        return len(self.field_names)

    @property
    @abstractmethod
    def field_names(self) -> ty.Tuple[str, ...]:
        """Column names of the conserved fields, used in output files."""
        pass

    @abstractmethod
    def flux(self, w: npt.ArrayLike, k: int) -> np.ndarray:
        """Flux q^k(w) in direction k, shape (..., m)."""
        pass

    def flux_jacobian(self, w: npt.ArrayLike, k: int) -> np.ndarray:
        """Jacobian of q^k, shape (..., m, m).

        Systems without an analytic Jacobian fall back to central finite
        differences.
        """
        return finite_difference_jacobian(lambda x: self.flux(x, k), w)

    @property
    def has_source(self) -> bool:
        return False

    def source(self, w: npt.ArrayLike) -> np.ndarray:
        """Source term s(w), zero by default."""
        return np.zeros_like(np.asarray(w, dtype=float))

    def source_jacobian(self, w: npt.ArrayLike) -> np.ndarray:
        return finite_difference_jacobian(self.source, w)

    def entropy_hessian(self, w: npt.ArrayLike) -> np.ndarray:
        raise NotImplementedError(
            f"{type(self).__name__} does not define an entropy.")

    def is_admissible(self, w: npt.ArrayLike) -> np.ndarray:
        """Pointwise admissibility mask, positive density by default."""
        return np.asarray(w, dtype=float)[..., 0] > 0

    def validate_state(self, w: npt.ArrayLike):
        w = np.asarray(w, dtype=float)
        if w.shape[-1] != self.m:
            raise ValueError(f"State has {w.shape[-1]} fields, "
                             f"{type(self).__name__} expects {self.m}.")
        if not np.all(self.is_admissible(w)):
            raise ValueError("Non-admissible state: density and pressure "
                             "must be positive.")


class IsothermalEuler(HyperbolicSystem):
    r"""Isothermal Euler equations with sound speed c.

    Conserved fields are $w = (\rho, \rho u)$ with flux
    $q^k = (\rho u_k, \rho u_k u + c^2 \rho e_k)$. An optional constant
    gravity field g adds the source $s = (0, \rho g)$.
    """

    def __init__(self,
                 dim: int = 1,
                 c: float = 0.6,
                 gravity: ty.Optional[ty.Sequence[float]] = None):
        super().__init__(dim)
        if c <= 0:
            raise ValueError("Sound speed must be positive.")
        self.c = float(c)
        if gravity is not None:
            gravity = np.atleast_1d(np.asarray(gravity, dtype=float))
            if gravity.shape != (dim,):
                raise ValueError(f"Gravity must have {dim} components.")
        self.gravity = gravity

    @property
    def field_names(self):
        if self.dim == 1:
            return ("rho", "rho_u")
        return ("rho", "rho_ux", "rho_uy")

    def _split(self, w):
        w = np.asarray(w, dtype=float)
        rho = w[..., 0]
        u = w[..., 1:] / rho[..., None]
        return w, rho, u

    def flux(self, w, k):
        w, rho, u = self._split(w)
        q = np.empty_like(w)
        q[..., 0] = w[..., 1 + k]
        q[..., 1:] = w[..., 1 + k, None] * u
        q[..., 1 + k] += self.c ** 2 * rho
        return q

    def flux_jacobian(self, w, k):
        w, rho, u = self._split(w)
        d = self.dim
        jac = np.zeros(w.shape + (self.m,))
        jac[..., 0, 1 + k] = 1.0
        for i in range(d):
            jac[..., 1 + i, 0] = -u[..., k] * u[..., i]
            jac[..., 1 + i, 1 + i] += u[..., k]
            jac[..., 1 + i, 1 + k] += u[..., i]
        jac[..., 1 + k, 0] += self.c ** 2
        return jac

    @property
    def has_source(self):
        return self.gravity is not None

    def source(self, w):
        w = np.asarray(w, dtype=float)
        s = np.zeros_like(w)
        if self.gravity is not None:
            s[..., 1:] = w[..., 0, None] * self.gravity
        return s

    def source_jacobian(self, w):
        w = np.asarray(w, dtype=float)
        jac = np.zeros(w.shape + (self.m,))
        if self.gravity is not None:
            jac[..., 1:, 0] = self.gravity
        return jac

    def entropy_hessian(self, w):
        r"""Hessian of $\eta = \rho |u|^2 / 2 + c^2 \rho \log \rho$."""
        w, rho, u = self._split(w)
        hess = np.zeros(w.shape + (self.m,))
        hess[..., 0, 0] = np.sum(u ** 2, axis=-1) + self.c ** 2
        hess[..., 0, 1:] = -u
        hess[..., 1:, 0] = -u
        for i in range(self.dim):
            hess[..., 1 + i, 1 + i] = 1.0
        return hess / rho[..., None, None]

    def conservative(self, rho, u) -> np.ndarray:
        """Conserved state from density and velocity, shape (..., m)."""
        rho = np.asarray(rho, dtype=float)
        u = np.asarray(u, dtype=float)
        if self.dim == 1 and u.shape == rho.shape:
            u = u[..., None]
        return np.concatenate([rho[..., None], rho[..., None] * u], axis=-1)


class IdealMHD(HyperbolicSystem):
    r"""Two-dimensional ideal magnetohydrodynamics with a perfect gas law.

    Conserved fields are $w = (\rho, \rho u_x, \rho u_y, Q, B_x, B_y)$ and
    the pressure is $p = (\gamma - 1)(Q - \rho |u|^2/2 - |B|^2/2)$.
    """

    def __init__(self, gamma: float = 5.0 / 3.0):
        super().__init__(2)
        if gamma <= 1:
            raise ValueError("Adiabatic exponent must exceed 1.")
        self.gamma = float(gamma)

    @property
    def field_names(self):
        return ("rho", "rho_ux", "rho_uy", "Q", "Bx", "By")

    def _primitive(self, w):
        w = np.asarray(w, dtype=float)
        rho = w[..., 0]
        u = w[..., 1:3] / rho[..., None]
        b = w[..., 4:6]
        return w, rho, u, w[..., 3], b

    def pressure(self, w) -> np.ndarray:
        w, rho, u, q, b = self._primitive(w)
        return (self.gamma - 1.0) * (q - 0.5 * rho * np.sum(u ** 2, axis=-1)
                                     - 0.5 * np.sum(b ** 2, axis=-1))

    def conservative(self, rho, u, p, b) -> np.ndarray:
        """Conserved state from primitive (rho, u, p, B)."""
        rho = np.asarray(rho, dtype=float)
        u = np.asarray(u, dtype=float)
        b = np.asarray(b, dtype=float)
        q = (np.asarray(p, dtype=float) / (self.gamma - 1.0)
             + 0.5 * rho * np.sum(u ** 2, axis=-1)
             + 0.5 * np.sum(b ** 2, axis=-1))
        return np.concatenate(
            [rho[..., None], rho[..., None] * u, q[..., None], b], axis=-1)

    def is_admissible(self, w):
        w = np.asarray(w, dtype=float)
        return (w[..., 0] > 0) & (self.pressure(w) > 0)

    def flux(self, w, k):
        w, rho, u, q, b = self._primitive(w)
        p_tot = self.pressure(w) + 0.5 * np.sum(b ** 2, axis=-1)
        u_k = u[..., k]
        b_k = b[..., k]
        out = np.empty_like(w)
        out[..., 0] = rho * u_k
        out[..., 1:3] = (rho * u_k)[..., None] * u - b_k[..., None] * b
        out[..., 1 + k] += p_tot
        out[..., 3] = (q + p_tot) * u_k - np.sum(b * u, axis=-1) * b_k
        out[..., 4:6] = u_k[..., None] * b - b_k[..., None] * u
        return out

    def flux_jacobian(self, w, k):
        w, rho, u, q, b = self._primitive(w)
        g1 = self.gamma - 1.0
        u_k = u[..., k]
        b_k = b[..., k]
        u2 = np.sum(u ** 2, axis=-1)
        bu = np.sum(b * u, axis=-1)
        p_tot = self.pressure(w) + 0.5 * np.sum(b ** 2, axis=-1)
        energy = q + p_tot
        # pressure derivatives w.r.t. (rho, m, Q, B)
        dp_rho = 0.5 * g1 * u2
        dp_m = -g1 * u
        dptot_b = (2.0 - self.gamma) * b

        jac = np.zeros(w.shape + (6,))
        jac[..., 0, 1 + k] = 1.0
        for i in range(2):
            row = 1 + i
            jac[..., row, 0] = -u_k * u[..., i]
            for j in range(2):
                jac[..., row, 1 + j] = ((k == j) * u[..., i]
                                        + u_k * (i == j))
                jac[..., row, 4 + j] = -((k == j) * b[..., i]
                                         + b_k * (i == j))
            if i == k:
                jac[..., row, 0] += dp_rho
                jac[..., row, 1:3] += dp_m
                jac[..., row, 3] += g1
                jac[..., row, 4:6] += dptot_b

        jac[..., 3, 0] = (dp_rho * u_k - energy * u_k / rho
                          + bu * b_k / rho)
        for j in range(2):
            jac[..., 3, 1 + j] = (dp_m[..., j] * u_k
                                  + energy * (k == j) / rho
                                  - b[..., j] * b_k / rho)
            jac[..., 3, 4 + j] = (dptot_b[..., j] * u_k
                                  - u[..., j] * b_k - bu * (k == j))
        jac[..., 3, 3] = self.gamma * u_k

        for i in range(2):
            row = 4 + i
            jac[..., row, 0] = (b_k * u[..., i] - u_k * b[..., i]) / rho
            for j in range(2):
                jac[..., row, 1 + j] = ((k == j) * b[..., i]
                                        - b_k * (i == j)) / rho
                jac[..., row, 4 + j] = u_k * (i == j) - (k == j) * u[..., i]
        return jac
