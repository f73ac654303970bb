"""Field operators: cylindrical quadrature, vorticity, and derived measures.

Every integral and norm here uses the cylindrical volume measure
2*pi * r dr dz, discretized by trapezoidal weights in both directions.
The axis node, whose trapezoidal r-weight would vanish, instead carries the
exact measure of its half cell, integral of r over [0, dr0/2] = dr0^2/8,
so near-axis values are not silently dropped from norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._fd import first_derivative_matrix
from .grid import MeridianGrid
from .state import FieldState


def radial_weights(grid: MeridianGrid) -> np.ndarray:
    """Nodal weights approximating integral of f(r) r dr over [0, 1]."""
    r = grid.r_nodes
    dr = grid.dr
    w = np.zeros_like(r)
    w[1:-1] = r[1:-1] * (dr[:-1] + dr[1:]) / 2.0
    w[-1] = r[-1] * dr[-1] / 2.0
    w[0] = dr[0] ** 2 / 8.0  # half-cell average replaces the vanishing r-weight
    return w


def axial_weights(grid: MeridianGrid) -> np.ndarray:
    """Trapezoidal weights for integral over [z_min, z_max]."""
    dz = grid.dz
    w = np.zeros_like(grid.z_nodes)
    w[1:-1] = (dz[:-1] + dz[1:]) / 2.0
    w[0] = dz[0] / 2.0
    w[-1] = dz[-1] / 2.0
    return w


def volume_weights(grid: MeridianGrid) -> np.ndarray:
    """(nr, nz) nodal weights for the full measure 2*pi * r dr dz."""
    return 2.0 * np.pi * np.outer(radial_weights(grid), axial_weights(grid))


def weighted_l2(field: np.ndarray, grid: MeridianGrid) -> float:
    """sqrt of the 2*pi r dr dz integral of field^2."""
    return float(np.sqrt((volume_weights(grid) * field**2).sum()))


def kinetic_energy(state: FieldState, grid: MeridianGrid) -> float:
    """(1/2) integral of |v|^2 over the cylinder volume."""
    w = volume_weights(grid)
    return float(0.5 * (w * (state.u_r**2 + state.u_theta**2 + state.u_z**2)).sum())


def max_velocity(state: FieldState) -> tuple[float, tuple[float, float]]:
    """Largest nodal |v| and its (r, z) location.

    Ties resolve to the smallest r, then the smallest z (first maximal node
    in row-major scan order over (r, z)).
    """
    speed = state.speed()
    k = int(np.argmax(speed))
    i, j = divmod(k, state.grid.nz)
    return float(speed[i, j]), (float(state.grid.r_nodes[i]), float(state.grid.z_nodes[j]))


def divergence_field(state: FieldState, grid: MeridianGrid) -> np.ndarray:
    """Nodal (1/r) d(r u_r)/dr + d(u_z)/dz; axis column via 2 du_r/dr + du_z/dz."""
    D1r = first_derivative_matrix(grid.r_nodes)
    D1z = first_derivative_matrix(grid.z_nodes)
    dur_dr = D1r @ state.u_r
    duz_dz = state.u_z @ D1z.T
    div = dur_dr + duz_dz
    div[1:, :] += state.u_r[1:, :] / grid.r_nodes[1:, None]
    div[0, :] += dur_dr[0, :]  # lim(u_r/r) = du_r/dr at the axis
    return div


def divergence_residual(state: FieldState, grid: MeridianGrid) -> float:
    """r-weighted L2 norm of the discrete meridional divergence."""
    return weighted_l2(divergence_field(state, grid), grid)


@dataclass(frozen=True, eq=False)
class VorticityField:
    """Cylindrical vorticity components on grid nodes."""

    w_r: np.ndarray
    w_theta: np.ndarray
    w_z: np.ndarray

    def magnitude(self) -> np.ndarray:
        # chained hypot: exact for tiny/huge components where squares would
        # under/overflow
        return np.hypot(np.hypot(self.w_r, self.w_theta), self.w_z)


def vorticity(state: FieldState, grid: MeridianGrid) -> VorticityField:
    """curl of (u_r, u_theta, u_z) in cylindrical components.

    w_r = -d(u_theta)/dz, w_theta = d(u_r)/dz - d(u_z)/dr, and
    w_z = (1/r) d(r u_theta)/dr with the axis limit 2 d(u_theta)/dr.
    One-sided second-order differences apply on all boundaries.
    """
    D1r = first_derivative_matrix(grid.r_nodes)
    D1z = first_derivative_matrix(grid.z_nodes)
    w_r = -(state.u_theta @ D1z.T)
    w_theta = state.u_r @ D1z.T - D1r @ state.u_z
    dut_dr = D1r @ state.u_theta
    w_z = dut_dr.copy()
    w_z[1:, :] += state.u_theta[1:, :] / grid.r_nodes[1:, None]
    w_z[0, :] = 2.0 * dut_dr[0, :]
    return VorticityField(w_r=w_r, w_theta=w_theta, w_z=w_z)


@dataclass(frozen=True, eq=False)
class DirectionField:
    """Unit vorticity alignment vectors xi with a validity mask.

    xi has shape (nr, nz, 3) in the (e_r, e_theta, e_z) frame; rows where
    `valid` is False are zeroed, not normalized, because |omega| sits below
    the floor there and the direction is numerically meaningless.
    """

    xi: np.ndarray
    valid: np.ndarray


def direction(w: VorticityField, floor: float = 1e-8) -> DirectionField:
    """Normalize the vorticity; flag |omega| <= floor * max|omega| invalid."""
    if floor < 0:
        raise ValueError(f"floor must be non-negative, got {floor}")
    mag = w.magnitude()
    peak = float(mag.max())
    valid = mag > floor * peak if peak > 0 else np.zeros_like(mag, dtype=bool)
    xi = np.zeros(mag.shape + (3,))
    safe = np.where(valid, mag, 1.0)
    for k, comp in enumerate((w.w_r, w.w_theta, w.w_z)):
        xi[..., k] = np.where(valid, comp / safe, 0.0)
    return DirectionField(xi=xi, valid=valid)
