"""Sample vorticity magnitude and direction on lines near the axis and floor.

Advances the swirling desk-scale run to t = 0.4, then reads |w| and the unit
direction xi along two probe lines: one parallel to the symmetry axis just
off the axis, and one along the bottom wall.  Near the lower corner the
direction flips between neighbouring samples while the magnitude stays well
above the validity floor -- the signature the alignment diagnostic keys on.

Runtime: a couple of seconds on one core.
"""

from saddlesim import solver
from saddlesim.config import SimConfig
from saddlesim.diagnostics import LineAxis, sample_line
from saddlesim.grid import build_grid

CONFIG = SimConfig(re=5000.0, tau=5e-3, nr=64, nz=160, grading=0.96,
                   t_end=0.4, snapshot_times=(), out_dir="")
AXIS_OFFSET = 0.01   # x2 coordinate of the axis-parallel line
WALL_HEIGHT = 0.01   # height of the wall-parallel line above the floor
N_SAMPLES = 12


def show(sample, label):
    print(f"\n{label}")
    print(f"{'offset':>8} {'|w|':>10}  direction xi")
    for k in range(sample.offsets.size):
        xi = sample.xi[k]
        tag = "" if sample.valid[k] else "   (below floor)"
        print(f"{sample.offsets[k]:8.4f} {sample.w_mag[k]:10.4f}  "
              f"({xi[0]:+.3f}, {xi[1]:+.3f}, {xi[2]:+.3f}){tag}")


if __name__ == "__main__":
    print(f"advancing to t = {CONFIG.t_end:g} ...")
    grid = build_grid(CONFIG)
    state, _ = solver.run(CONFIG)

    offsets = [0.02 * (k + 1) for k in range(N_SAMPLES)]
    along_axis = sample_line(state, grid, base=(0.0, AXIS_OFFSET, grid.z_min),
                             axis=LineAxis.PARALLEL_Z, offsets=offsets)
    show(along_axis, f"line parallel to the axis at x2 = {AXIS_OFFSET}")

    offsets = [0.015 * (k + 1) for k in range(N_SAMPLES)]
    along_wall = sample_line(state, grid,
                             base=(0.0, 0.0, grid.z_min + WALL_HEIGHT),
                             axis=LineAxis.PARALLEL_X2, offsets=offsets)
    show(along_wall, f"line along the floor at height {WALL_HEIGHT}")
