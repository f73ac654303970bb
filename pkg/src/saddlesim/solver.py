"""Semi-Lagrangian pressure-stabilized time stepping in the cylinder.

One step solves a single sparse linear system coupling (u_r, u_z, p):

    (u - u_prev(X))/tau - (1/Re)(lap u - singular terms) + grad p = f,
    (1/r) d(r u_r)/dr + d(u_z)/dz - delta0 h^2 lap p = 0,

where X(x) = x - tau v_prev(x) is the departure foot of the characteristic
through node x, clamped to the closed domain, and u_prev(X) is gathered by
bilinear interpolation.  The stabilized continuity block uses homogeneous
natural (one-sided Neumann) rows for p on the boundary and a zero-mean
constraint through one appended Lagrange multiplier.  No-slip walls and the
axis conditions (u_r = 0, one-sided d(u_z)/dr = 0) enter as strong rows.

Swirl travels as circulation gamma = r u_theta, whose transport equation

    (gamma - gamma_prev(X))/tau - (1/Re)(d2/dr2 - (1/r) d/dr + d2/dz2) gamma = r f_theta

has no singular zeroth-order term; gamma vanishes on the axis and on every
wall, and u_theta = gamma / r (axis value 0).  The centrifugal feedback
u_theta^2 / r enters the radial momentum right side explicitly, formed at
the previous level and evaluated at the backtracked foot.

Both linear operators are constant for a fixed (grid, tau, Re, delta0,
h_rule), so their LU factorizations are cached and reused across steps and
across runs on equal grids.
"""

from __future__ import annotations

import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ._fd import first_derivative_matrix, second_derivative_matrix
from .config import SimConfig, snapshot_schedule, step_count
from .errors import DivergenceError, StepFailure
from .grid import MeridianGrid, build_grid, grid_metrics
from .initial import InitialParams, initial_field
from .interp import BilinearPlan, clamp_to_domain
from .ops import volume_weights
from .state import FieldState

log = logging.getLogger(__name__)

# forcing callback: (R, Z, t) -> (f_r, f_theta, f_z) nodal arrays
ForcingFn = Callable[[np.ndarray, np.ndarray, float], tuple]


@dataclass(frozen=True)
class SolverSettings:
    lin_tol: float = 1e-8
    lin_maxit: int = 10
    delta0: float = 1.0
    h_rule: str = "local"

    @classmethod
    def from_config(cls, config: SimConfig) -> "SolverSettings":
        return cls(lin_tol=config.lin_tol, lin_maxit=config.lin_maxit,
                   delta0=config.delta0, h_rule=config.h_rule)


def _nodal_spacing(d: np.ndarray) -> np.ndarray:
    h = np.empty(d.size + 1)
    h[0] = d[0]
    h[-1] = d[-1]
    h[1:-1] = 0.5 * (d[:-1] + d[1:])
    return h


class _Stepper:
    """Assembled operators and factorizations for one (grid, tau, Re) triple."""

    def __init__(self, grid: MeridianGrid, tau: float, re: float,
                 delta0: float, h_rule: str):
        self.grid = grid
        self.tau = float(tau)
        self.re = float(re)
        nr, nz = grid.nr, grid.nz
        self.n = n = nr * nz
        r = grid.r_nodes
        self.R, self.Z = grid.meshes()

        D1r = first_derivative_matrix(r)
        D2r = second_derivative_matrix(r)
        D1z = first_derivative_matrix(grid.z_nodes)
        D2z = second_derivative_matrix(grid.z_nodes)
        Ir = sp.identity(nr, format="csr")
        Iz = sp.identity(nz, format="csr")
        I_n = sp.identity(n, format="csr")

        rinv = np.zeros(nr)
        rinv[1:] = 1.0 / r[1:]  # axis rows are replaced, entry 0 never used
        Rinv = sp.diags(rinv)
        Rinv2 = sp.diags(rinv**2)

        lap = sp.kron(D2r + Rinv @ D1r, Iz) + sp.kron(Ir, D2z)
        lap_ur = lap - sp.kron(Rinv2, Iz)
        lap_gam = sp.kron(D2r - Rinv @ D1r, Iz) + sp.kron(Ir, D2z)
        Gr = sp.kron(D1r, Iz).tocsr()
        Gz = sp.kron(Ir, D1z).tocsr()
        Div_r = sp.kron(D1r + Rinv, Iz)

        I2, J2 = np.meshgrid(np.arange(nr), np.arange(nz), indexing="ij")
        wall = ((I2 == nr - 1) | (J2 == 0) | (J2 == nz - 1)).ravel()
        on_axis = (I2 == 0).ravel()
        axis_open = on_axis & ~wall  # axis nodes away from the corners
        self.dir_ur = wall | on_axis
        self.int_ur = ~self.dir_ur
        self.wall = wall
        self.int_uz = ~(wall | axis_open)
        zband = ((J2 == 0) | (J2 == nz - 1)).ravel()
        rband = on_axis | (I2 == nr - 1).ravel()
        rband &= ~zband
        self.int_p = ~(zband | rband)
        self.dir_gam = wall | on_axis
        self.int_gam = ~self.dir_gam

        def rows(mask):
            return sp.diags(mask.astype(float))

        if h_rule == "representative":
            h2 = np.full(n, grid_metrics(grid).h_avg ** 2)
        else:  # local cell size, anisotropy averaged geometrically
            h2 = np.outer(_nodal_spacing(grid.dr), _nodal_spacing(grid.dz)).ravel()

        A_rr = rows(self.int_ur) @ (I_n / tau - lap_ur / re) + rows(self.dir_ur)
        A_rp = rows(self.int_ur) @ Gr
        A_zz = (rows(self.int_uz) @ (I_n / tau - lap / re)
                + rows(wall) + rows(axis_open) @ Gr)
        A_zp = rows(self.int_uz) @ Gz
        A_pr = rows(self.int_p) @ Div_r
        A_pz = rows(self.int_p) @ Gz
        A_pp = (-delta0 * rows(self.int_p) @ sp.diags(h2) @ lap
                + rows(rband) @ Gr + rows(zband) @ Gz)

        self.weights = volume_weights(grid).ravel()
        lam_col = sp.csr_matrix(self.int_p.astype(float)[:, None])
        w_row = sp.csr_matrix(self.weights[None, :])

        self.A = sp.bmat(
            [[A_rr, None, A_rp, None],
             [None, A_zz, A_zp, None],
             [A_pr, A_pz, A_pp, lam_col],
             [None, None, w_row, None]], format="csc")
        self.A_gam = (rows(self.int_gam) @ (I_n / tau - lap_gam / re)
                      + rows(self.dir_gam)).tocsc()

        log.info("factorizing operators: %d x %d monolithic, %d x %d swirl",
                 *self.A.shape, *self.A_gam.shape)
        self.lu = spla.splu(self.A)
        self.lu_gam = spla.splu(self.A_gam)

    def _solve(self, lu, A, b, lin_tol: float, lin_maxit: int) -> np.ndarray:
        x = lu.solve(b)
        scale = np.linalg.norm(b)
        if scale == 0.0:
            return x
        residuals = [float(np.linalg.norm(b - A @ x) / scale)]
        it = 0
        while residuals[-1] > lin_tol and it < lin_maxit:
            x = x + lu.solve(b - A @ x)
            residuals.append(float(np.linalg.norm(b - A @ x) / scale))
            it += 1
        if residuals[-1] > lin_tol or not np.isfinite(residuals[-1]):
            raise StepFailure(
                f"linear solve stalled at relative residual {residuals[-1]:.3e} "
                f"(target {lin_tol:.1e}, {it} refinement rounds)", residuals)
        return x

    def step(self, prev: FieldState, lin_tol: float, lin_maxit: int,
             forcing: Optional[ForcingFn] = None) -> FieldState:
        grid, tau, n = self.grid, self.tau, self.n
        r = grid.r_nodes

        # departure feet from nodal velocities, clamped to the domain
        fr, fz = clamp_to_domain(self.R, self.Z,
                                 self.R - tau * prev.u_r, self.Z - tau * prev.u_z,
                                 grid)
        plan = BilinearPlan(grid, fr, fz)

        gam_prev = r[:, None] * prev.u_theta
        s_cent = np.zeros_like(prev.u_theta)
        s_cent[1:, :] = prev.u_theta[1:, :] ** 2 / r[1:, None]

        ur_foot = plan.apply(prev.u_r)
        uz_foot = plan.apply(prev.u_z)
        gam_foot = plan.apply(gam_prev)
        cent_foot = plan.apply(s_cent)

        t_new = prev.t + tau
        if forcing is not None:
            f_r, f_theta, f_z = (np.asarray(f, dtype=float) for f in
                                 forcing(self.R, self.Z, t_new))
        else:
            f_r = f_theta = f_z = np.zeros((grid.nr, grid.nz))

        b = np.zeros(3 * n + 1)
        b[:n] = self.int_ur * (ur_foot / tau + cent_foot + f_r.ravel())
        b[n:2 * n] = self.int_uz * (uz_foot / tau + f_z.ravel())
        x = self._solve(self.lu, self.A, b, lin_tol, lin_maxit)
        if not np.isfinite(x).all():
            raise DivergenceError(t_new)

        u_r = x[:n].copy()
        u_z = x[n:2 * n].copy()
        p = x[2 * n:3 * n].copy()
        u_r[self.dir_ur] = 0.0
        u_z[self.wall] = 0.0
        p -= (self.weights @ p) / self.weights.sum()

        b_gam = self.int_gam * (gam_foot / tau + (r[:, None] * f_theta).ravel())
        gam = self._solve(self.lu_gam, self.A_gam, b_gam, lin_tol, lin_maxit)
        if not np.isfinite(gam).all():
            raise DivergenceError(t_new)
        gam[self.dir_gam] = 0.0
        gam = gam.reshape(grid.nr, grid.nz)
        u_theta = np.zeros_like(gam)
        u_theta[1:, :] = gam[1:, :] / r[1:, None]

        return FieldState(u_r=u_r.reshape(grid.nr, grid.nz),
                          u_theta=u_theta,
                          u_z=u_z.reshape(grid.nr, grid.nz),
                          p=p.reshape(grid.nr, grid.nz),
                          t=t_new, pre_stage=False, grid=grid)


_CACHE_MAX = 6
_cache: "OrderedDict[tuple, _Stepper]" = OrderedDict()
_cache_lock = threading.Lock()


def _get_stepper(grid: MeridianGrid, config: SimConfig) -> _Stepper:
    key = (grid.r_nodes.tobytes(), grid.z_nodes.tobytes(),
           config.tau, config.re, config.delta0, config.h_rule)
    with _cache_lock:
        if key in _cache:
            _cache.move_to_end(key)
            return _cache[key]
    stepper = _Stepper(grid, config.tau, config.re, config.delta0, config.h_rule)
    with _cache_lock:
        _cache[key] = stepper
        while len(_cache) > _CACHE_MAX:
            _cache.popitem(last=False)
    return stepper


def interpolate(state: FieldState, point: tuple[float, float]) -> tuple[float, float, float]:
    """Bilinear (u_r, u_theta, u_z) at a meridian point inside the domain."""
    from .grid import locate

    locate(state.grid, point)  # raises OutOfDomainError when outside
    plan = BilinearPlan(state.grid, np.array([point[0]]), np.array([point[1]]))
    return (float(plan.apply(state.u_r)[0]),
            float(plan.apply(state.u_theta)[0]),
            float(plan.apply(state.u_z)[0]))


def backtrack(state: FieldState, point: tuple[float, float], tau: float) -> tuple[float, float]:
    """Departure foot x - tau v(x) of the meridional characteristic, clamped.

    The velocity is interpolated at `point`; a foot that would exit the
    domain is pulled back to the boundary along the segment.
    """
    u_r, _, u_z = interpolate(state, point)
    fr, fz = clamp_to_domain(np.array([point[0]]), np.array([point[1]]),
                             np.array([point[0] - tau * u_r]),
                             np.array([point[1] - tau * u_z]), state.grid)
    return float(fr[0]), float(fz[0])


def advance(prev: FieldState, grid: MeridianGrid, config: SimConfig,
            forcing: Optional[ForcingFn] = None) -> FieldState:
    """One semi-Lagrangian step; returns a new state at t + tau.

    The previous state is never mutated.  Wall and axis rows are enforced
    exactly; the advanced state always has pre_stage False.
    """
    stepper = _get_stepper(grid, config)
    return stepper.step(prev, config.lin_tol, config.lin_maxit, forcing)


def run(config: SimConfig, forcing: Optional[ForcingFn] = None,
        initial: Optional[FieldState] = None, out_dir: Optional[str] = None):
    """Advance from t = 0 to t_end, recording diagnostics along the way.

    Returns (final_state, records).  Steps are tau-sized; the run stops at
    the largest multiple of tau not exceeding t_end.  Diagnostics are
    recorded at t = 0, every `record_every`-th step, and at the final step.
    When the configured out_dir (or the SADDLESIM_OUT environment variable)
    names a directory, artifacts are written there: the canonical config
    echo, the timeseries CSV, snapshots at the configured times, and a
    summary.  An explicit out_dir argument bypasses that resolution; the
    sweep driver uses it to pin cells under one root.
    """
    from .diagnostics import record as diag_record

    grid = build_grid(config)
    state = initial if initial is not None else initial_field(
        InitialParams.from_config(config), grid)
    records = [diag_record(state, grid, config.r_core)]
    n_steps = step_count(config)

    snap_steps = snapshot_schedule(config)
    snapshots: dict[float, FieldState] = {}
    if 0 in snap_steps:
        snapshots[snap_steps[0]] = state

    stepper = _get_stepper(grid, config) if n_steps else None
    for k in range(1, n_steps + 1):
        state = stepper.step(state, config.lin_tol, config.lin_maxit, forcing)
        if k in snap_steps:
            snapshots[snap_steps[k]] = state
        if k % config.record_every == 0 or k == n_steps:
            records.append(diag_record(state, grid, config.r_core))
        if k % 100 == 0:
            log.info("step %d/%d t=%.4f", k, n_steps, state.t)

    from .harness import resolve_out_dir, write_run_artifacts

    target = out_dir if out_dir is not None else resolve_out_dir(config.out_dir)
    if target:
        write_run_artifacts(config, state, records, snapshots, target)
    return state, records
