# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

"""Chapman-Enskog diagnostics of kinetic models.

At first order in tau the kinetic system behaves like the macroscopic one
plus a diffusion sum_kj d_k (tau D^{kj} d_j w). These helpers evaluate D^{kj},
the entropy dissipation tensor and the resulting stability predicate.
"""

import numpy as np
import numpy.typing as npt
from scipy import linalg

from pdg.problems.kinetic_models import KineticModel, VectorialModel
from pdg.problems.systems import HyperbolicSystem

DEFINITENESS_TOL = -1e-12


def diffusion_tensor(model: KineticModel,
                     system: HyperbolicSystem,
                     w: npt.ArrayLike,
                     k: int,
                     j: int) -> np.ndarray:
    """D^{kj}(w) = P V^k V^j grad f_eq(w) - grad q^k(w) grad q^j(w).

    Returns an array of shape (..., m, m).
    """
    w = np.asarray(w, dtype=float)
    vel = model.velocities
    weighted = model.projection * (vel[:, k] * vel[:, j])
    kinetic = np.einsum("ai,...ib->...ab", weighted,
                        model.equilibrium_jacobian(w))
    return kinetic - (system.flux_jacobian(w, k)
                      @ system.flux_jacobian(w, j))


def entropy_dissipation_tensor(model: KineticModel,
                               system: HyperbolicSystem,
                               w: npt.ArrayLike,
                               k: int,
                               j: int) -> np.ndarray:
    """sigma_{kj}(w) = hess(eta)(w) D^{kj}(w).

    Raises NotImplementedError if the system has no entropy.
    """
    hessian = system.entropy_hessian(w)
    return hessian @ diffusion_tensor(model, system, w, k, j)


def is_entropy_dissipative(model: KineticModel,
                           system: HyperbolicSystem,
                           w: npt.ArrayLike) -> bool:
    """True if the symmetric part of the block tensor [sigma_{kj}] is
    positive semi-definite at the single state w.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise ValueError("Dissipation check expects a single state.")
    d = model.dim
    blocks = [[entropy_dissipation_tensor(model, system, w, k, j)
               for j in range(d)] for k in range(d)]
    sigma = np.block(blocks)
    eigvals = linalg.eigvalsh(0.5 * (sigma + sigma.T))
    return bool(eigvals.min() >= DEFINITENESS_TOL)


def subcharacteristic_check(system: HyperbolicSystem,
                            w: npt.ArrayLike,
                            lam: float) -> bool:
    """Entropy stability of the vectorial model of `system` at scale lam.

    For the 1D isothermal Euler system this holds iff lam > |u| + c. At
    lam = |u| + c the tensor is singular and still counts as dissipative.
    """
    return is_entropy_dissipative(VectorialModel(system, lam), system, w)
