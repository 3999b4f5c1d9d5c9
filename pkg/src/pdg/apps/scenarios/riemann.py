# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import optimize


class RiemannError(ValueError):
    """The Riemann problem has no admissible intermediate state."""
    pass


@dataclass(frozen=True)
class IsothermalRiemannSolution:
    r"""Self-similar solution of the isothermal Euler Riemann problem.

    The two waves are each a shock (Rankine-Hugoniot,
    $u_* = u_K \mp c (\rho_* - \rho_K) / \sqrt{\rho_* \rho_K}$) or a
    rarefaction ($u_* = u_K \mp c \log(\rho_* / \rho_K)$), with - for the
    left and + for the right wave.
    """

    rho_left: float
    u_left: float
    rho_right: float
    u_right: float
    c: float
    rho_star: float
    u_star: float

    @property
    def left_wave(self) -> str:
        return "shock" if self.rho_star > self.rho_left else "rarefaction"

    @property
    def right_wave(self) -> str:
        return "shock" if self.rho_star > self.rho_right else "rarefaction"

    def wave_speeds(self) -> ty.Tuple[ty.Tuple[float, float],
                                      ty.Tuple[float, float]]:
        """(head, tail) speeds of the left and right waves; a shock has
        equal head and tail."""
        c = self.c
        if self.left_wave == "shock":
            s = self.u_left - c * np.sqrt(self.rho_star / self.rho_left)
            left = (s, s)
        else:
            left = (self.u_left - c, self.u_star - c)
        if self.right_wave == "shock":
            s = self.u_right + c * np.sqrt(self.rho_star / self.rho_right)
            right = (s, s)
        else:
            right = (self.u_right + c, self.u_star + c)
        return left, right

    def sample(self, xi: npt.ArrayLike) -> ty.Tuple[np.ndarray, np.ndarray]:
        """Density and velocity at the similarity coordinates xi = x / t."""
        xi = np.asarray(xi, dtype=float)
        c = self.c
        (l_head, l_tail), (r_head, r_tail) = self.wave_speeds()
        rho = np.full(xi.shape, self.rho_star)
        u = np.full(xi.shape, self.u_star)

        left = xi < l_head
        rho[left], u[left] = self.rho_left, self.u_left
        fan = (xi >= l_head) & (xi < l_tail)
        u[fan] = xi[fan] + c
        rho[fan] = self.rho_left * np.exp((self.u_left - u[fan]) / c)

        right = xi > r_head
        rho[right], u[right] = self.rho_right, self.u_right
        fan = (xi > r_tail) & (xi <= r_head)
        u[fan] = xi[fan] - c
        rho[fan] = self.rho_right * np.exp((u[fan] - self.u_right) / c)
        return rho, u


def _wave_velocity(rho, rho_k, u_k, c, sign):
    """Velocity behind a wave reaching density rho from state k; sign is -1
    for the left wave and +1 for the right one."""
    if rho > rho_k:
        return u_k + sign * c * (rho - rho_k) / np.sqrt(rho * rho_k)
    return u_k + sign * c * np.log(rho / rho_k)


def solve_isothermal_riemann(rho_left: float, u_left: float,
                             rho_right: float, u_right: float,
                             c: float,
                             tol: float = 1e-12) -> IsothermalRiemannSolution:
    """Intermediate state of the isothermal Riemann problem.

    The star density is found on log(rho) by a bracketed root-find of the
    velocity mismatch, followed by Newton polishing.
    """
    if rho_left <= 0 or rho_right <= 0:
        raise RiemannError("Riemann states must have positive density.")
    if c <= 0:
        raise ValueError("Sound speed must be positive.")

    def mismatch(log_rho):
        rho = np.exp(log_rho)
        return (_wave_velocity(rho, rho_left, u_left, c, -1.0)
                - _wave_velocity(rho, rho_right, u_right, c, 1.0))

    low = np.log(min(rho_left, rho_right)) - 1.0
    high = np.log(max(rho_left, rho_right)) + 1.0
    while mismatch(low) < 0:
        low -= 1.0
        if low < np.log(np.finfo(float).tiny):
            raise RiemannError("Riemann problem forms a vacuum.")
    while mismatch(high) > 0:
        high += 1.0
    if low == high or mismatch(low) == 0:
        log_rho = low
    else:
        log_rho = optimize.brentq(mismatch, low, high, xtol=1e-15,
                                  rtol=4 * np.finfo(float).eps)
    log_rho = optimize.newton(mismatch, log_rho, tol=1e-15, maxiter=20,
                              disp=False)
    rho_star = float(np.exp(log_rho))
    if not np.isfinite(rho_star) or rho_star <= 0:
        raise RiemannError("Riemann problem forms a vacuum.")
    if abs(mismatch(log_rho)) > tol * max(1.0, c):
        raise RiemannError(f"Velocity matching failed, residual "
                           f"{abs(mismatch(log_rho)):.3e}.")
    u_star = float(_wave_velocity(rho_star, rho_left, u_left, c, -1.0))
    return IsothermalRiemannSolution(float(rho_left), float(u_left),
                                     float(rho_right), float(u_right),
                                     float(c), rho_star, u_star)


def riemann_exact_isothermal(rho_left: float, u_left: float,
                             rho_right: float, u_right: float,
                             c: float,
                             xi: npt.ArrayLike) \
        -> ty.Tuple[np.ndarray, np.ndarray]:
    """Exact density and velocity at x / t = xi."""
    solution = solve_isothermal_riemann(rho_left, u_left, rho_right,
                                        u_right, c)
    return solution.sample(xi)
