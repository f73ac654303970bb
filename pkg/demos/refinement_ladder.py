"""Verify the scheme's accuracy against a manufactured solution.

Builds the three-level refinement ladder at re = 100 (halving h and tau
together), prints the error table with fitted slopes, and then shows the
companion divergence check: the r-weighted divergence residual of a real
first step shrinking under grid refinement, as the h^2-scaled pressure
stabilization predicts.

Runtime: under ten seconds on one core.
"""

from saddlesim import solver
from saddlesim.config import SimConfig
from saddlesim.grid import build_grid
from saddlesim.harness import mms_convergence
from saddlesim.initial import InitialParams, initial_field
from saddlesim.ops import divergence_residual

LEVELS = 3
RE = 100.0


if __name__ == "__main__":
    report = mms_convergence(levels=LEVELS, re=RE)
    print(report.summary())

    print("\nfirst-step divergence residual under refinement (re = 5000):")
    for nr, nz in ((33, 81), (65, 161)):
        cfg = SimConfig(re=5000.0, tau=5e-3, nr=nr, nz=nz, grading=1.0,
                        t_end=2.0, out_dir="")
        grid = build_grid(cfg)
        state = initial_field(InitialParams.from_config(cfg), grid)
        state = solver.advance(state, grid, cfg)
        print(f"  {nr:3d}x{nz:3d}: {divergence_residual(state, grid):.5f}")
