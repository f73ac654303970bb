"""Initial flow configuration: a hyperbolic meridional jet with optional swirl.

All profiles are built from the algebraic bump phi(s, eps, sigma) =
(s^2 + eps)^sigma.  With negative sigma it decays away from s = 0; the
positive-exponent factor in the matching function rho grows with |z| and
shapes the radial inflow/outflow split.  u_r = sign(z) * rho * u_z, with
sign(0) = 0, which points the radial flow inward below the jet center and
outward above it.  The result deliberately violates no-slip and exact
incompressibility: it is flagged pre_stage and the first solver step
projects it onto the discrete constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .grid import MeridianGrid
from .state import FieldState

if TYPE_CHECKING:  # pragma: no cover
    from .config import SimConfig


def phi(s, eps: float, sigma: float):
    """(s^2 + eps)^sigma, elementwise."""
    s = np.asarray(s, dtype=float)
    return (s * s + eps) ** sigma


@dataclass(frozen=True)
class InitialParams:
    eps: tuple[float, float, float, float, float, float] = (1.0,) * 6
    beta: tuple[float, float, float, float, float, float] = (1.0,) * 6
    swirl: bool = True

    @classmethod
    def from_config(cls, config: "SimConfig") -> "InitialParams":
        return cls(
            eps=(config.eps1, config.eps2, config.eps3,
                 config.eps4, config.eps5, config.eps6),
            beta=(config.beta1, config.beta2, config.beta3,
                  config.beta4, config.beta5, config.beta6),
            swirl=config.swirl,
        )


def initial_field(params: InitialParams, grid: MeridianGrid) -> FieldState:
    """Evaluate the initial data on grid nodes; returns a pre-stage state."""
    e, b = params.eps, params.beta
    R, Z = grid.meshes()

    u_z = phi(R, e[0], -b[0]) * phi(Z, e[1], -b[1])
    rho = phi(R, e[2], -b[2]) * phi(Z, e[3], +b[3])  # note the positive exponent
    u_r = np.sign(Z) * rho * u_z
    if params.swirl:
        u_theta = phi(R, e[4], -b[4]) * phi(Z, e[5], -b[5])
    else:
        u_theta = np.zeros_like(u_z)
    p = np.zeros_like(u_z)

    return FieldState(u_r=u_r, u_theta=u_theta, u_z=u_z, p=p,
                      t=0.0, pre_stage=True, grid=grid)
