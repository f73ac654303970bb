"""Nodal field state on a meridian grid."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .grid import MeridianGrid


@dataclass(frozen=True, eq=False)
class FieldState:
    """Velocity components, pressure, and time on grid nodes.

    Arrays have shape (nr, nz).  `pre_stage` marks initial data that has not
    yet passed through a solver step and so need not satisfy no-slip or the
    discrete continuity equation.  The grid reference lets single-argument
    diagnostics report node locations.
    """

    u_r: np.ndarray
    u_theta: np.ndarray
    u_z: np.ndarray
    p: np.ndarray
    t: float
    pre_stage: bool
    grid: MeridianGrid

    def __post_init__(self):
        shape = (self.grid.nr, self.grid.nz)
        for name in ("u_r", "u_theta", "u_z", "p"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, arr)

    def speed(self) -> np.ndarray:
        """Pointwise velocity magnitude |v|.

        Chained hypot keeps tiny and huge components exact where squaring
        would under/overflow.
        """
        return np.hypot(np.hypot(self.u_r, self.u_theta), self.u_z)

    def is_finite(self) -> bool:
        return all(np.isfinite(getattr(self, name)).all()
                   for name in ("u_r", "u_theta", "u_z", "p"))

    def with_time(self, t: float) -> "FieldState":
        return replace(self, t=t)


def zero_state(grid: MeridianGrid, t: float = 0.0, pre_stage: bool = False) -> FieldState:
    z = np.zeros((grid.nr, grid.nz))
    return FieldState(u_r=z.copy(), u_theta=z.copy(), u_z=z.copy(), p=z.copy(),
                      t=t, pre_stage=pre_stage, grid=grid)
