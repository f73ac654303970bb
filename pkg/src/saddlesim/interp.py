"""Bilinear interpolation and departure-point clamping on tensor grids.

Bilinear weights on a tensor cell reproduce any field of the form
a + b r + c z + d r z exactly, and in particular nodal values and affine
fields.  A BilinearPlan caches the cell indices and weights of a point set
so several fields can be gathered at the same points cheaply.
"""

from __future__ import annotations

import numpy as np

from .grid import MeridianGrid, _locate_1d


class BilinearPlan:
    """Precomputed gather pattern for a batch of in-domain points."""

    def __init__(self, grid: MeridianGrid, pr: np.ndarray, pz: np.ndarray):
        pr = np.asarray(pr, dtype=float).ravel()
        pz = np.asarray(pz, dtype=float).ravel()
        i, xi = _locate_1d(grid.r_nodes, pr)
        j, eta = _locate_1d(grid.z_nodes, pz)
        nz = grid.nz
        self._k00 = i * nz + j
        self._k10 = (i + 1) * nz + j
        self._k01 = i * nz + (j + 1)
        self._k11 = (i + 1) * nz + (j + 1)
        self._w00 = (1.0 - xi) * (1.0 - eta)
        self._w10 = xi * (1.0 - eta)
        self._w01 = (1.0 - xi) * eta
        self._w11 = xi * eta

    def apply(self, field: np.ndarray) -> np.ndarray:
        f = np.ascontiguousarray(field).ravel()
        return (self._w00 * f[self._k00] + self._w10 * f[self._k10]
                + self._w01 * f[self._k01] + self._w11 * f[self._k11])


def clamp_to_domain(pr, pz, fr, fz, grid: MeridianGrid):
    """Clamp departure targets (fr, fz) to the closed domain.

    Each departure is pulled back along the segment from its arrival point
    (pr, pz), which must lie inside the domain, to the first boundary
    crossing, so clamped feet stay on the segment.
    """
    pr = np.asarray(pr, dtype=float)
    pz = np.asarray(pz, dtype=float)
    fr = np.asarray(fr, dtype=float)
    fz = np.asarray(fz, dtype=float)
    s = np.ones(np.broadcast(pr, fr).shape)
    for p, f, lo, hi in ((pr, fr, 0.0, 1.0), (pz, fz, grid.z_min, grid.z_max)):
        d = f - p
        # divide/overflow fire in the unselected where-branch when d is tiny;
        # the selected branch always has |lo - p| <= |d| or |hi - p| <= |d|
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            s_lo = np.where(f < lo, (lo - p) / d, 1.0)
            s_hi = np.where(f > hi, (hi - p) / d, 1.0)
        s = np.minimum(s, np.minimum(s_lo, s_hi))
    s = np.clip(s, 0.0, 1.0)
    cr = pr + s * (fr - pr)
    cz = pz + s * (fz - pz)
    return (np.clip(cr, 0.0, 1.0), np.clip(cz, grid.z_min, grid.z_max))
