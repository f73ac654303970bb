"""Follow one swirling desk-scale run from spin-up to the recirculating core.

Runs the re = 5000 protocol on the graded 64x160 grid and narrates the
diagnostics as they unfold: where the fastest fluid sits, when the axial
flow near the axis first reverses, and how the kinetic energy decays.
Pass --plot to also save max-|v| and core-u_z traces as a PNG.

Runtime: roughly ten seconds on one core.
"""

import argparse

from saddlesim import solver
from saddlesim.config import SimConfig
from saddlesim.diagnostics import detect_turning_points

CONFIG = SimConfig(re=5000.0, tau=5e-3, nr=64, nz=160, grading=0.96,
                   t_end=2.0, snapshot_times=(), out_dir="")
PRINT_EVERY = 40  # one table row per 0.2 time units


def describe(records, jump_threshold):
    print(f"{'t':>6} {'max|v|':>9} {'r of max':>9} {'min core u_z':>13} "
          f"{'energy':>10}")
    for rec in records[::PRINT_EVERY]:
        print(f"{rec.t:6.2f} {rec.max_v:9.4f} {rec.dist_axis:9.4f} "
              f"{rec.min_core_uz:+13.4f} {rec.energy:10.6f}")

    first_reversal = next((r.t for r in records if r.min_core_uz < 0.0), None)
    # the first few steps project the discontinuous initial jet onto the
    # discrete constraints; report the settled peak separately
    peak = max(records, key=lambda r: r.max_v)
    settled = max((r for r in records if r.t >= 0.3), key=lambda r: r.max_v)
    print()
    if first_reversal is not None:
        print(f"axial core flow first reverses at t = {first_reversal:.3f}")
    print(f"fastest fluid after the initial transient (t >= 0.3): "
          f"|v| = {settled.max_v:.4f} at t = {settled.t:.3f}, "
          f"r = {settled.dist_axis:.4f}")
    if peak.t < 0.3:
        print(f"(the global peak {peak.max_v:.4f} at t = {peak.t:.3f} is the "
              f"projection transient of the discontinuous initial jet)")
    turning = detect_turning_points(records, jump=jump_threshold)
    if turning:
        print(f"max-|v| location jumps (threshold {jump_threshold}): "
              f"{[round(t, 3) for t in turning]}")
    else:
        print(f"no max-|v| location jump exceeds {jump_threshold} at this "
              f"resolution; the largest excursions stay near the axis")


def save_plot(records, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = [r.t for r in records]
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ax1.plot(t, [r.max_v for r in records], label="max |v|")
    ax1.plot(t, [r.dist_axis for r in records], label="distance to axis")
    ax1.legend()
    ax2.plot(t, [r.min_core_uz for r in records], label="min core u_z")
    ax2.axhline(0.0, color="k", lw=0.5)
    ax2.set_xlabel("t")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    print(f"traces saved to {path}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot", action="store_true",
                        help="save spin_up_story.png next to this script")
    args = parser.parse_args()

    print(f"running re={CONFIG.re:g} swirl on {CONFIG.nr}x{CONFIG.nz}, "
          f"tau={CONFIG.tau:g}, to t={CONFIG.t_end:g} ...")
    _, records = solver.run(CONFIG)
    describe(records, CONFIG.jump_threshold)
    if args.plot:
        save_plot(records, __file__.replace(".py", ".png"))
