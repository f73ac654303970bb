"""Run diagnostics: scalar time series, probe lines, and alignment measures.

The record protocol tracks where the largest velocity lives (its distance
from the symmetry axis is just its r coordinate), the signed range of the
axial velocity in a thin core cylinder r < r_core, total kinetic energy,
and the vorticity peak.  Turning points are recorded whenever the distance
of the velocity maximum from the axis jumps by at least `jump` between two
consecutive records, the signature of the maximum migrating between
competing local maxima.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import OutOfDomainError
from .grid import MeridianGrid
from .interp import BilinearPlan
from .ops import (DirectionField, VorticityField, direction, kinetic_energy,
                  max_velocity, vorticity)
from .state import FieldState


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    max_v: float
    arg_r: float
    arg_z: float
    dist_axis: float
    min_core_uz: float
    max_core_uz: float
    energy: float
    max_w: float


def record(state: FieldState, grid: MeridianGrid, r_core: float = 0.1) -> DiagnosticsRecord:
    """Scalar diagnostics of one state.

    The core band r < r_core is never empty because the axis column always
    qualifies.  Works on pre-stage states too, so the t = 0 record of a run
    describes the raw initial data.
    """
    if not (0.0 < r_core <= 1.0):
        raise ValueError(f"r_core must lie in (0, 1], got {r_core}")
    v, (arg_r, arg_z) = max_velocity(state)
    core = grid.r_nodes < r_core
    core_uz = state.u_z[core, :]
    w = vorticity(state, grid)
    return DiagnosticsRecord(
        t=float(state.t),
        max_v=v,
        arg_r=arg_r,
        arg_z=arg_z,
        dist_axis=arg_r,
        min_core_uz=float(core_uz.min()),
        max_core_uz=float(core_uz.max()),
        energy=kinetic_energy(state, grid),
        max_w=float(w.magnitude().max()),
    )


def detect_turning_points(records: Sequence[DiagnosticsRecord], jump: float = 0.25) -> list[float]:
    """Times where dist_axis moves by at least `jump` between records."""
    if jump <= 0:
        raise ValueError(f"jump must be positive, got {jump}")
    out = []
    for prev, cur in zip(records, records[1:]):
        if abs(cur.dist_axis - prev.dist_axis) >= jump:
            out.append(cur.t)
    return out


def type_one_indicator(records: Sequence[DiagnosticsRecord], t_star: float) -> list[tuple[float, float]]:
    """(t, max_v * sqrt(t_star - t)) per record, for a putative blowup time.

    t_star must exceed every recorded time; the indicator of a self-similar
    type-one profile would plateau as t approaches t_star.
    """
    if records and t_star <= max(rec.t for rec in records):
        raise ValueError(f"t_star={t_star} does not exceed all recorded times")
    return [(rec.t, rec.max_v * np.sqrt(t_star - rec.t)) for rec in records]


class LineAxis(Enum):
    PARALLEL_Z = "z"
    PARALLEL_X2 = "x2"


@dataclass(frozen=True, eq=False)
class LineSample:
    """Vorticity sampled along a Cartesian probe line.

    Offsets are distances from the lower boundary (PARALLEL_Z) or from the
    saddle point on the lower wall (PARALLEL_X2).  `points` holds the 3-D
    Cartesian sample positions (x1, x2, x3); `xi` the Cartesian unit
    alignment vectors, zeroed where `valid` is False because |omega| sits
    below floor * max|omega|.
    """

    base: tuple[float, float, float]
    axis: LineAxis
    offsets: np.ndarray
    points: np.ndarray
    w_mag: np.ndarray
    xi: np.ndarray
    valid: np.ndarray


def sample_line(state: FieldState, grid: MeridianGrid,
                base: tuple[float, float, float], axis: LineAxis,
                offsets: Sequence[float], floor: float = 1e-8) -> LineSample:
    """Sample |omega| and its direction along a probe line.

    PARALLEL_Z walks parallel to the symmetry axis through `base`, with
    offsets measured from the lower boundary; PARALLEL_X2 walks parallel to
    the x2 axis at the base height, with offsets giving the x2 coordinate
    (distance from the saddle point when the base sits on the axis plane
    x1 = 0 at the lower wall).  Cylindrical vorticity components map to
    Cartesian vectors using each sample point's own azimuth.
    """
    offsets = np.asarray(offsets, dtype=float)
    x1b, x2b, zb = (float(c) for c in base)
    if axis is LineAxis.PARALLEL_Z:
        x1 = np.full_like(offsets, x1b)
        x2 = np.full_like(offsets, x2b)
        x3 = grid.z_min + offsets
    else:
        x1 = np.full_like(offsets, x1b)
        x2 = offsets.copy()
        x3 = np.full_like(offsets, zb)

    rr = np.hypot(x1, x2)
    bad = ((rr < grid.r_nodes[0]) | (rr > grid.r_nodes[-1])
           | (x3 < grid.z_min) | (x3 > grid.z_max))
    if bad.any():
        k = int(np.argmax(bad))
        raise OutOfDomainError((rr[k], x3[k]),
                               f"probe point (x1={x1[k]:.6g}, x2={x2[k]:.6g}, x3={x3[k]:.6g}) "
                               "lies outside the closed domain")

    w = vorticity(state, grid)
    peak = float(w.magnitude().max())
    plan = BilinearPlan(grid, rr, x3)
    w_r = plan.apply(w.w_r)
    w_t = plan.apply(w.w_theta)
    w_z = plan.apply(w.w_z)
    mag = np.sqrt(w_r**2 + w_t**2 + w_z**2)
    valid = mag > floor * peak if peak > 0 else np.zeros_like(mag, dtype=bool)

    theta = np.arctan2(x2, x1)
    ct, st = np.cos(theta), np.sin(theta)
    cart = np.stack([w_r * ct - w_t * st, w_r * st + w_t * ct, w_z], axis=-1)
    xi = np.zeros_like(cart)
    safe = np.where(valid, mag, 1.0)
    xi[valid, :] = cart[valid, :] / safe[valid, None]

    return LineSample(base=(x1b, x2b, zb), axis=axis, offsets=offsets,
                      points=np.stack([x1, x2, x3], axis=-1),
                      w_mag=mag, xi=xi, valid=valid)


def alignment_discontinuity(w: VorticityField, grid: MeridianGrid,
                            floor: float = 1e-8, sep: float = 0.05,
                            region: Optional[np.ndarray] = None) -> Optional[float]:
    """max |xi(x) - xi(y)| over valid node pairs closer than `sep`.

    Pairs live in the meridian plane (equal azimuth), so the cylindrical
    component triples are compared directly.  `region` optionally restricts
    the eligible nodes.  Returns None when no valid pair exists, which is
    distinct from a measured value of 0.
    """
    if not (0.0 <= sep <= 2.0):
        raise ValueError(f"sep must lie in [0, 2], got {sep}")
    dirfield: DirectionField = direction(w, floor)
    valid = dirfield.valid
    if region is not None:
        mask = np.asarray(region, dtype=bool)
        if mask.shape != valid.shape:
            raise ValueError(
                f"region mask shape {mask.shape} does not match grid {valid.shape}")
        valid = valid & mask
    if valid.sum() < 2:
        return None
    R, Z = grid.meshes()
    pts = np.column_stack([R[valid], Z[valid]])
    xi = dirfield.xi[valid, :]
    pairs = cKDTree(pts).query_pairs(sep, output_type="ndarray")
    if pairs.size == 0:
        return None
    d = xi[pairs[:, 0]] - xi[pairs[:, 1]]
    return float(np.sqrt((d * d).sum(axis=1)).max())
