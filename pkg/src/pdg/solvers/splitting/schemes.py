# Copyright (C) 2024 palindromic-dg contributors
# SPDX-License-Identifier: BSD-3-Clause
# See: https://spdx.org/licenses/

import typing as ty
from dataclasses import dataclass

import numpy as np

SCHEME_IDS = ("m1", "m2", "suzuki4", "kahanli6")
OPERATOR_KINDS = ("T1", "R1", "G1", "T2", "R2", "G2")

_CBRT4 = 4.0 ** (1.0 / 3.0)
SUZUKI_4 = (1.0 / (4.0 - _CBRT4),) * 2 + (-_CBRT4 / (4.0 - _CBRT4),) \
    + (1.0 / (4.0 - _CBRT4),) * 2

_KAHAN_LI_HALF = (0.392161444007314139275655330038,
                  0.332599136789359438604272125325,
                  -0.7062461725576393598098453372227,
                  0.0822135962935508002304427053341)
KAHAN_LI_6 = _KAHAN_LI_HALF + (0.798543990934829963398950353048,) \
    + _KAHAN_LI_HALF[::-1]

# scheme used for a self-reference solution one order above a study
REFERENCE_SCHEME = {"m1": "m2", "m2": "suzuki4", "suzuki4": "kahanli6",
                    "kahanli6": "kahanli6"}


@dataclass(frozen=True)
class SubStep:
    """One operator of a splitting scheme applied with a signed step."""

    kind: str
    dt: float

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(f"Unknown splitting operator {self.kind!r}.")

    @property
    def token(self) -> str:
        return f"{self.kind}({self.dt!r})"


@dataclass(frozen=True)
class SplittingScheme:
    """Splitting scheme defined by its palindromic composition coefficients.

    Parameters
    ----------
    name: str
        Scheme id, one of SCHEME_IDS.
    order: int
        Formal order in time.
    gamma: tuple of float
        Coefficients of M_p = M2(gamma_0 dt) ... M2(gamma_s dt). Ignored by
        the first order Lie scheme m1.
    include_source: bool
        Insert the source operators G1/G2 into the sequence.
    """

    name: str
    order: int
    gamma: ty.Tuple[float, ...]
    include_source: bool = False

    def __post_init__(self):
        if self.name not in SCHEME_IDS:
            raise ValueError(f"Unknown scheme {self.name!r}; expected one "
                             f"of {', '.join(SCHEME_IDS)}.")
        if tuple(self.gamma) != tuple(self.gamma[::-1]):
            raise ValueError("Composition coefficients must be a "
                             "palindrome.")
        if abs(float(np.sum(self.gamma)) - 1.0) > 1e-12:
            raise ValueError("Composition coefficients must sum to 1.")

    def m2_sequence(self, dt: float) -> ty.List[SubStep]:
        """Symmetric second order scheme M2(dt), or its source variant."""
        steps = [SubStep("T2", dt / 4)]
        if self.include_source:
            steps.append(SubStep("G2", dt / 2))
        steps += [SubStep("R2", dt / 2), SubStep("T2", dt / 2),
                  SubStep("R2", dt / 2)]
        if self.include_source:
            steps.append(SubStep("G2", dt / 2))
        steps.append(SubStep("T2", dt / 4))
        return steps

    def operator_sequence(self, dt: float) -> ty.List[SubStep]:
        """Operators of one step of size dt, in order of application."""
        if self.name == "m1":
            steps = [SubStep("T1", dt), SubStep("R1", dt)]
            if self.include_source:
                steps.append(SubStep("G1", dt))
            return steps
        steps = []
        for gamma in reversed(self.gamma):
            steps += self.m2_sequence(gamma * dt)
        return steps

    def tokens(self, dt: float) -> ty.List[str]:
        return [step.token for step in self.operator_sequence(dt)]


def get_scheme(scheme_id: str, include_source: bool = False) \
        -> SplittingScheme:
    """Scheme from its id: "m1", "m2", "suzuki4" or "kahanli6"."""
    table = {"m1": (1, (1.0,)), "m2": (2, (1.0,)),
             "suzuki4": (4, SUZUKI_4), "kahanli6": (6, KAHAN_LI_6)}
    if scheme_id not in table:
        raise ValueError(f"Unknown scheme {scheme_id!r}; expected one of "
                         f"{', '.join(SCHEME_IDS)}.")
    order, gamma = table[scheme_id]
    return SplittingScheme(scheme_id, order, tuple(gamma), include_source)
