# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import dataclasses
import typing as ty
import warnings
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from pdg.apps.scenarios.riemann import solve_isothermal_riemann
from pdg.apps.scenarios.vortex import VortexParams, mhd_vortex_exact
from pdg.problems.diagnostics import is_entropy_dissipative
from pdg.problems.kinetic_models import KineticModel, make_kinetic_model
from pdg.problems.systems import IsothermalEuler
from pdg.solvers.dg.mesh import CartesianMesh

SCENARIO_IDS = ("smooth1d", "riemann1d", "mhd-vortex", "euler-gravity-1d",
                "smooth2d")
CONVERGENCE_AXES = ("mesh", "dt")

StateFunction = ty.Callable[[np.ndarray], np.ndarray]
ExactFunction = ty.Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class Scenario:
    """Test case: system, kinetic model, domain, data and run defaults.

    State functions take points of shape (..., dim) and return conserved
    fields of shape (..., m).

    Parameters
    ----------
    name: str
        Scenario id, one of SCENARIO_IDS.
    model_id: str
        Default kinetic model id.
    lower, upper: tuple of float
        Corners of the domain box.
    shape: tuple of int
        Default number of cells per axis.
    degree: int
        Default polynomial degree.
    lam: float, optional
        Kinetic velocity scale; None keeps the model default.
    beta: float, optional
        Default CFL number, used when no time step is given.
    dt: float, optional
        Default time step; takes precedence over beta.
    t_max: float
        Final time.
    initial: callable
        Initial conserved state w(x, 0).
    tau: float
        Relaxation time.
    c: float
        Sound speed of the isothermal systems.
    gravity: tuple of float, optional
        Constant gravity of the isothermal systems.
    gamma: float
        Adiabatic exponent of the MHD system.
    include_source: bool
        Whether the splitting includes the source operators.
    boundary: dict
        Boundary kind per face; unlisted faces are "dirichlet".
    boundary_state: callable, optional
        Conserved state imposed in the fictitious cells of dirichlet faces;
        defaults to the initial state.
    exact: callable, optional
        Analytic solution w(x, t); None when only a self-reference is
        available.
    convergence_axis: str
        "mesh" refines cells at fixed beta, "dt" refines the time step on
        a fixed mesh.
    dt_levels: tuple of float
        Time steps of a "dt" convergence study.
    """

    name: str
    model_id: str
    lower: ty.Tuple[float, ...]
    upper: ty.Tuple[float, ...]
    shape: ty.Tuple[int, ...]
    degree: int
    lam: ty.Optional[float]
    beta: ty.Optional[float]
    t_max: float
    initial: StateFunction
    dt: ty.Optional[float] = None
    tau: float = 0.0
    c: float = 0.6
    gravity: ty.Optional[ty.Tuple[float, ...]] = None
    gamma: float = 5.0 / 3.0
    include_source: bool = False
    boundary: ty.Dict[str, str] = field(default_factory=dict)
    boundary_state: ty.Optional[StateFunction] = None
    exact: ty.Optional[ExactFunction] = None
    convergence_axis: str = "mesh"
    dt_levels: ty.Tuple[float, ...] = ()

    def __post_init__(self):
        if self.name not in SCENARIO_IDS:
            raise ValueError(f"Unknown scenario {self.name!r}.")
        if self.convergence_axis not in CONVERGENCE_AXES:
            raise ValueError(f"Unknown convergence axis "
                             f"{self.convergence_axis!r}.")
        if self.beta is None and self.dt is None:
            raise ValueError("A scenario needs a default beta or dt.")
        if self.tau < 0:
            raise ValueError("Relaxation time must be >= 0.")

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    def make_model(self, model_id: ty.Optional[str] = None,
                   lam: ty.Optional[float] = None) -> KineticModel:
        return make_kinetic_model(model_id or self.model_id,
                                  lam if lam is not None else self.lam,
                                  c=self.c, gravity=self.gravity,
                                  gamma=self.gamma)

    def make_mesh(self, shape: ty.Optional[ty.Sequence[int]] = None) \
            -> CartesianMesh:
        return CartesianMesh(shape or self.shape, self.lower, self.upper,
                             self.boundary)

    def initial_state(self, x: npt.ArrayLike) -> np.ndarray:
        return self.initial(np.asarray(x, dtype=float))

    def boundary_values(self, x: npt.ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.boundary_state is None:
            return self.initial(x)
        return self.boundary_state(x)

    def exact_state(self, x: npt.ArrayLike, t: float) -> np.ndarray:
        if self.exact is None:
            raise ValueError(f"Scenario {self.name!r} has no analytic "
                             f"solution.")
        return self.exact(np.asarray(x, dtype=float), t)

    def check_initial_state(self, model: KineticModel,
                            x: npt.ArrayLike) -> bool:
        """Validate the initial state at points x.

        Raises ValueError for non-admissible states; warns and returns False
        when the kinetic model is not entropy dissipative at some point.
        Systems without an entropy are only checked for admissibility.
        """
        w = self.initial_state(x).reshape(-1, model.m)
        model.system.validate_state(w)
        try:
            stable = all(is_entropy_dissipative(model, model.system, state)
                         for state in np.unique(w, axis=0))
        except NotImplementedError:
            return True
        if not stable:
            warnings.warn(f"Scenario {self.name!r}: the kinetic model with "
                          f"lambda={model.lam} is not entropy dissipative "
                          f"at every initial node.")
        return stable


def _gaussian_bump(x: np.ndarray, c: float, dim: int) -> np.ndarray:
    rho = 1.0 + np.exp(-30.0 * np.sum(x ** 2, axis=-1))
    return IsothermalEuler(dim, c).conservative(
        rho, np.zeros(rho.shape + (dim,)))


def init_smooth_1d() -> Scenario:
    """Acoustic Gaussian pulse rho = 1 + exp(-30 x^2), u = 0, on [-2, 2]."""
    c = 0.6
    return Scenario(name="smooth1d",
                    model_id="vectorial-euler-1d",
                    lower=(-2.0,), upper=(2.0,), shape=(32,),
                    degree=5, lam=2.0, beta=5.0, t_max=0.4,
                    initial=lambda x: _gaussian_bump(x, c, 1),
                    c=c)


def init_riemann_1d() -> Scenario:
    """Isothermal shock tube: rho = 2 on the left, 1 on the right, u = 0."""
    c = 0.6
    rho_left, rho_right = 2.0, 1.0
    system = IsothermalEuler(1, c)

    def initial(x):
        rho = np.where(x[..., 0] < 0, rho_left, rho_right)
        return system.conservative(rho, np.zeros_like(rho))

    def exact(x, t):
        if t <= 0:
            return initial(x)
        solution = solve_isothermal_riemann(rho_left, 0.0, rho_right, 0.0, c)
        rho, u = solution.sample(x[..., 0] / t)
        return system.conservative(rho, u)

    return Scenario(name="riemann1d",
                    model_id="vectorial-euler-1d",
                    lower=(-1.0,), upper=(1.0,), shape=(100,),
                    degree=5, lam=2.0, beta=3.0, t_max=0.4,
                    initial=initial, c=c, exact=exact)


def init_mhd_vortex(params: VortexParams = VortexParams()) -> Scenario:
    """Drifting MHD vortex on [-4, 4]^2 with frozen boundary data."""
    def initial(x):
        return mhd_vortex_exact(x, 0.0, params)

    def exact(x, t):
        return mhd_vortex_exact(x, t, params)

    return Scenario(name="mhd-vortex",
                    model_id="vectorial-mhd-2d",
                    lower=(-4.0, -4.0), upper=(4.0, 4.0), shape=(48, 48),
                    degree=2, lam=4.0, beta=None, dt=0.05, t_max=1.0,
                    initial=initial, gamma=params.gamma, exact=exact,
                    convergence_axis="dt",
                    dt_levels=(0.2, 0.1, 0.05, 0.025))


def init_euler_gravity_1d(g0: float = 0.05) -> Scenario:
    """Gaussian pulse under constant gravity; boundaries copy the
    equilibrium of the adjacent initial state."""
    c = 0.6
    return Scenario(name="euler-gravity-1d",
                    model_id="vectorial-euler-1d",
                    lower=(-2.0,), upper=(2.0,), shape=(32,),
                    degree=5, lam=2.0, beta=5.0, t_max=0.4,
                    initial=lambda x: _gaussian_bump(x, c, 1),
                    c=c, gravity=(g0,), include_source=True,
                    boundary={"xmin": "copy-equilibrium",
                              "xmax": "copy-equilibrium"})


def init_smooth_2d() -> Scenario:
    """Two-dimensional Gaussian pulse on [-2, 2]^2 with the D2Q9 model."""
    c = 0.6
    return Scenario(name="smooth2d",
                    model_id="d2q9",
                    lower=(-2.0, -2.0), upper=(2.0, 2.0), shape=(16, 16),
                    degree=2, lam=None, beta=2.0, t_max=0.2,
                    initial=lambda x: _gaussian_bump(x, c, 2),
                    c=c)


_FACTORIES = {"smooth1d": init_smooth_1d,
              "riemann1d": init_riemann_1d,
              "mhd-vortex": init_mhd_vortex,
              "euler-gravity-1d": init_euler_gravity_1d,
              "smooth2d": init_smooth_2d}


def get_scenario(scenario_id: str) -> Scenario:
    if scenario_id not in _FACTORIES:
        raise ValueError(f"Unknown scenario {scenario_id!r}; expected one "
                         f"of {', '.join(SCENARIO_IDS)}.")
    return _FACTORIES[scenario_id]()
