"""Manufactured solution and discrete error norms.

The manufactured velocity derives from the meridional stream function

    psi = A r^2 (1 - r^2)^2 q(z) s(t),      u_r = -psi_z / r,  u_z = psi_r / r,

with q a quartic vanishing together with its derivative at both z-ends and
s a smooth time factor, plus the swirl profile u_theta = A r (1 - r)^2 q s
and a pressure whose normal derivative vanishes on the whole boundary.
The construction is exactly divergence-free, satisfies no-slip on all
walls, and matches the axis conditions the scheme imposes (u_r = 0,
gamma = 0, d(u_z)/dr = 0, d(p)/dr = 0), so discretization error alone
separates a numerical run from the exact fields.  The momentum forcing
that makes the triple solve the equations is derived symbolically once per
case and compiled to numpy callables; every 1/r division cancels exactly
because the radial profiles are polynomials with the right parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import sympy as sym

from ._fd import first_derivative_matrix
from .grid import MeridianGrid
from .ops import volume_weights
from .state import FieldState


def _wrap(fn: Callable, like_zero: bool = False):
    def g(r, z, t):
        r = np.asarray(r, dtype=float)
        z = np.asarray(z, dtype=float)
        shape = np.broadcast(r, z).shape
        out = np.asarray(fn(r, z, t), dtype=float)
        return np.broadcast_to(out, shape).copy()

    return g


@dataclass(frozen=True, eq=False)
class ManufacturedCase:
    """Closed-form fields, their forcing, and samplers for one parameter set."""

    re: float
    amplitude: float
    z_min: float
    z_max: float
    velocity: Callable  # (r, z, t) -> (u_r, u_theta, u_z)
    pressure: Callable  # (r, z, t) -> p
    forcing: Callable   # (r, z, t) -> (f_r, f_theta, f_z)

    def state(self, grid: MeridianGrid, t: float) -> FieldState:
        """Exact nodal sample as a (non-pre-stage) FieldState."""
        if abs(grid.z_min - self.z_min) > 1e-12 or abs(grid.z_max - self.z_max) > 1e-12:
            raise ValueError(
                f"grid z-range [{grid.z_min}, {grid.z_max}] does not match the "
                f"case domain [{self.z_min}, {self.z_max}]")
        R, Z = grid.meshes()
        u_r, u_t, u_z = self.velocity(R, Z, t)
        return FieldState(u_r=u_r, u_theta=u_t, u_z=u_z,
                          p=self.pressure(R, Z, t),
                          t=float(t), pre_stage=False, grid=grid)


def manufactured_case(re: float = 100.0, z_min: float = -0.125,
                      z_max: float = 0.5, amplitude: float = 0.1) -> ManufacturedCase:
    """Build the manufactured case on [0,1] x [z_min, z_max].

    The default amplitude is kept small on purpose: the once-per-step foot
    interpolation commits an error quadratic in the field amplitude while
    the centered spatial discretization error is linear in it, so a small
    amplitude keeps refinement ladders in the second-order regime.
    """
    r, z, t = sym.symbols("r z t", real=True)
    A = sym.Float(amplitude)
    z0, z1 = sym.Float(z_min), sym.Float(z_max)

    q = ((z - z0) * (z1 - z)) ** 2 / (((z1 - z0) / 2) ** 4)  # peaks at 1 mid-height
    s = 1 + sym.sin(t) / 2
    psi = A * r**2 * (1 - r**2) ** 2 * q * s

    u_r = sym.cancel(-sym.diff(psi, z) / r)
    u_z = sym.cancel(sym.diff(psi, r) / r)
    u_t = A * r * (1 - r) ** 2 * q * s
    p = A * sym.cos(sym.pi * r) * sym.cos(2 * sym.pi * (z - z0) / (z1 - z0)) * s

    def lap(f):
        return sym.diff(f, r, 2) + sym.cancel(sym.diff(f, r) / r) + sym.diff(f, z, 2)

    f_r = (sym.diff(u_r, t) + u_r * sym.diff(u_r, r) + u_z * sym.diff(u_r, z)
           - sym.cancel(u_t**2 / r) + sym.diff(p, r)
           - (lap(u_r) - sym.cancel(u_r / r**2)) / re)
    f_t = (sym.diff(u_t, t) + u_r * sym.diff(u_t, r) + u_z * sym.diff(u_t, z)
           + sym.cancel(u_r * u_t / r)
           - (lap(u_t) - sym.cancel(u_t / r**2)) / re)
    f_z = (sym.diff(u_z, t) + u_r * sym.diff(u_z, r) + u_z * sym.diff(u_z, z)
           + sym.diff(p, z) - lap(u_z) / re)

    exprs = [sym.cancel(sym.together(e)) for e in (u_r, u_t, u_z, f_r, f_t, f_z)]
    for e in exprs:
        den = sym.denom(e)
        if sym.simplify(den.subs(r, 0)) == 0:  # all 1/r factors must cancel
            raise RuntimeError(f"manufactured expression still singular at r=0: {e}")
    u_r, u_t, u_z, f_r, f_t, f_z = exprs

    fn_ur, fn_ut, fn_uz, fn_p, fn_fr, fn_ft, fn_fz = (
        _wrap(sym.lambdify((r, z, t), e, modules="numpy"))
        for e in (u_r, u_t, u_z, p, f_r, f_t, f_z))

    def velocity(rv, zv, tv):
        return fn_ur(rv, zv, tv), fn_ut(rv, zv, tv), fn_uz(rv, zv, tv)

    def forcing(rv, zv, tv):
        return fn_fr(rv, zv, tv), fn_ft(rv, zv, tv), fn_fz(rv, zv, tv)

    return ManufacturedCase(re=float(re), amplitude=float(amplitude),
                            z_min=float(z_min), z_max=float(z_max),
                            velocity=velocity, pressure=fn_p, forcing=forcing)


def discrete_norms(state: FieldState, case: ManufacturedCase,
                   grid: MeridianGrid, t: float) -> tuple[float, float]:
    """(L2, H1-seminorm) velocity errors in the r-weighted inner product.

    Both pool the three velocity components; the H1 seminorm applies the
    same one-sided-at-boundary difference matrices the solver uses.
    """
    exact = case.state(grid, t)
    w = volume_weights(grid)
    D1r = first_derivative_matrix(grid.r_nodes)
    D1z = first_derivative_matrix(grid.z_nodes)
    l2_sq = 0.0
    h1_sq = 0.0
    for name in ("u_r", "u_theta", "u_z"):
        e = getattr(state, name) - getattr(exact, name)
        l2_sq += (w * e**2).sum()
        h1_sq += (w * (D1r @ e) ** 2).sum() + (w * (e @ D1z.T) ** 2).sum()
    return float(np.sqrt(l2_sq)), float(np.sqrt(h1_sq))


def pressure_l2_error(state: FieldState, case: ManufacturedCase,
                      grid: MeridianGrid, t: float) -> float:
    """r-weighted L2 distance of the pressures after removing both means."""
    w = volume_weights(grid)
    exact = case.pressure(*grid.meshes(), t)
    diff = ((state.p - (w * state.p).sum() / w.sum())
            - (exact - (w * exact).sum() / w.sum()))
    return float(np.sqrt((w * diff**2).sum()))
