"""File formats, experiment drivers, and run comparison.

All numeric output uses 9-significant-digit scientific notation so that
identical configurations produce byte-identical files.  The timeseries and
snapshot CSV layouts are part of the public contract; snapshots can also
be written as legacy VTK structured grids by naming the file *.vtk.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import solver
from .config import SimConfig, echo_config, snapshot_schedule
from .diagnostics import DiagnosticsRecord, LineSample, detect_turning_points
from .errors import ConfigError, SolverError
from .grid import MeridianGrid, build_grid, grid_metrics
from .ops import VorticityField, vorticity
from .state import FieldState
from .verification import discrete_norms, manufactured_case, pressure_l2_error

log = logging.getLogger(__name__)

TIMESERIES_HEADER = "t,max_v,arg_r,arg_z,dist_axis,min_core_uz,max_core_uz,energy,max_w"
SNAPSHOT_HEADER = "r,z,u_r,u_theta,u_z,p,w_r,w_theta,w_z"
PROBE_HEADER = "offset,x1,x2,x3,w_mag,valid,xi_1,xi_2,xi_3"
QUALITATIVE_CORR = 0.9


def _num(x: float) -> str:
    return f"{x:.8e}"


def resolve_out_dir(configured: str) -> str:
    """Output root: the SADDLESIM_OUT environment variable wins over config."""
    return os.environ.get("SADDLESIM_OUT", "").strip() or configured


# ---------------------------------------------------------------------------
# writers / readers

def write_timeseries(records: Sequence[DiagnosticsRecord], path) -> None:
    lines = [TIMESERIES_HEADER]
    for rec in records:
        lines.append(",".join(_num(v) for v in (
            rec.t, rec.max_v, rec.arg_r, rec.arg_z, rec.dist_axis,
            rec.min_core_uz, rec.max_core_uz, rec.energy, rec.max_w)))
    Path(path).write_text("\n".join(lines) + "\n")


def read_timeseries(path) -> dict[str, np.ndarray]:
    text = Path(path).read_text().strip().splitlines()
    names = text[0].split(",")
    if names != TIMESERIES_HEADER.split(","):
        raise ValueError(f"{path}: unexpected timeseries header {text[0]!r}")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    data = data.reshape(-1, len(names))
    return {name: data[:, k] for k, name in enumerate(names)}


def _snapshot_columns(state: FieldState, grid: MeridianGrid):
    w = vorticity(state, grid)
    R, Z = grid.meshes()
    # row-major over (z outer, r inner): transpose then ravel
    return [arr.T.ravel() for arr in (R, Z, state.u_r, state.u_theta, state.u_z,
                                      state.p, w.w_r, w.w_theta, w.w_z)]


def write_snapshot(state: FieldState, grid: MeridianGrid, path) -> None:
    """Full-field snapshot; CSV by default, legacy VTK when path ends in .vtk."""
    path = Path(path)
    cols = _snapshot_columns(state, grid)
    if path.suffix.lower() == ".vtk":
        _write_snapshot_vtk(cols, grid, state.t, path)
        return
    rows = [SNAPSHOT_HEADER]
    for k in range(cols[0].size):
        rows.append(",".join(_num(c[k]) for c in cols))
    path.write_text("\n".join(rows) + "\n")


def _write_snapshot_vtk(cols, grid: MeridianGrid, t: float, path: Path) -> None:
    r_col, z_col, u_r, u_t, u_z, p, w_r, w_t, w_z = cols
    n = r_col.size
    out = [
        "# vtk DataFile Version 3.0",
        f"meridian snapshot t={_num(t)}",
        "ASCII",
        "DATASET STRUCTURED_GRID",
        f"DIMENSIONS {grid.nr} {grid.nz} 1",
        f"POINTS {n} double",
    ]
    out += [f"{_num(r_col[k])} {_num(z_col[k])} 0.0" for k in range(n)]
    out.append(f"POINT_DATA {n}")
    out.append("VECTORS velocity double")
    out += [f"{_num(u_r[k])} {_num(u_t[k])} {_num(u_z[k])}" for k in range(n)]
    out.append("SCALARS pressure double")
    out.append("LOOKUP_TABLE default")
    out += [_num(p[k]) for k in range(n)]
    out.append("VECTORS vorticity double")
    out += [f"{_num(w_r[k])} {_num(w_t[k])} {_num(w_z[k])}" for k in range(n)]
    path.write_text("\n".join(out) + "\n")


def read_snapshot(path, grid: MeridianGrid, t: float = 0.0):
    """Rebuild (FieldState, VorticityField) from a snapshot CSV."""
    text = Path(path).read_text().strip().splitlines()
    if text[0] != SNAPSHOT_HEADER:
        raise ValueError(f"{path}: unexpected snapshot header {text[0]!r}")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    if data.shape[0] != grid.nr * grid.nz:
        raise ValueError(f"{path}: {data.shape[0]} rows, expected {grid.nr * grid.nz}")

    def grab(k):  # stored (z outer, r inner)
        return data[:, k].reshape(grid.nz, grid.nr).T.copy()

    state = FieldState(u_r=grab(2), u_theta=grab(3), u_z=grab(4), p=grab(5),
                       t=t, pre_stage=False, grid=grid)
    w = VorticityField(w_r=grab(6), w_theta=grab(7), w_z=grab(8))
    return state, w


def write_line_sample(sample: LineSample, path) -> None:
    rows = [PROBE_HEADER]
    for k in range(sample.offsets.size):
        rows.append(",".join(
            [_num(sample.offsets[k])]
            + [_num(c) for c in sample.points[k]]
            + [_num(sample.w_mag[k]), "1" if sample.valid[k] else "0"]
            + [_num(c) for c in sample.xi[k]]))
    Path(path).write_text("\n".join(rows) + "\n")


# ---------------------------------------------------------------------------
# run artifacts

@dataclass(frozen=True)
class RunArtifacts:
    out_dir: Path
    config_path: Path
    timeseries_path: Path
    snapshot_paths: tuple[tuple[float, Path], ...]
    summary_path: Path


def artifact_paths(out_dir, config: SimConfig, snapshot_times=()) -> RunArtifacts:
    out = Path(out_dir)
    snaps = tuple((t, out / f"snapshot_t{t:.3f}.csv") for t in sorted(snapshot_times))
    return RunArtifacts(out_dir=out, config_path=out / "config.cfg",
                        timeseries_path=out / "timeseries.csv",
                        snapshot_paths=snaps, summary_path=out / "summary.json")


def write_run_artifacts(config: SimConfig, state: FieldState,
                        records: Sequence[DiagnosticsRecord],
                        snapshots: dict[float, FieldState], out_dir) -> RunArtifacts:
    art = artifact_paths(out_dir, config, snapshots.keys())
    art.out_dir.mkdir(parents=True, exist_ok=True)
    art.config_path.write_text(echo_config(config))
    write_timeseries(records, art.timeseries_path)
    for (t, path) in art.snapshot_paths:
        write_snapshot(snapshots[t], state.grid, path)
    turning = detect_turning_points(records, config.jump_threshold)
    peak = max(records, key=lambda rec: rec.max_v)
    low = min(records, key=lambda rec: rec.min_core_uz)
    summary = {
        "final_t": state.t,
        "n_records": len(records),
        "turning_points": turning,
        "peak_max_v": peak.max_v,
        "t_peak_max_v": peak.t,
        "initial_energy": records[0].energy,
        "final_energy": records[-1].energy,
        "min_core_uz": low.min_core_uz,
        "t_min_core_uz": low.t,
    }
    art.summary_path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return art


# ---------------------------------------------------------------------------
# parameter sweep

def _re_label(re: float) -> str:
    return str(int(re)) if float(re).is_integer() else repr(float(re))


def sweep(config: SimConfig, re_list: Sequence[float],
          swirl_list: Sequence[bool], max_workers: Optional[int] = None):
    """Run the (re x swirl) grid of cells under one output root.

    Cells are independent; failures are recorded per cell in
    sweep_summary.json without aborting the rest.  Returns the RunArtifacts
    of the successful cells in deterministic cell order.
    """
    root = resolve_out_dir(config.out_dir)
    if not root:
        raise ConfigError("sweep requires out_dir (or SADDLESIM_OUT) to be set",
                          key="out_dir")
    if not re_list or not swirl_list:
        raise ConfigError("sweep requires at least one re value and one swirl setting")
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)

    cells = [(re, sw) for re in re_list for sw in swirl_list]
    labels = [f"re{_re_label(re)}_{'swirl' if sw else 'noswirl'}" for re, sw in cells]

    def run_cell(args):
        (re, sw), label = args
        try:
            cfg = config.replace(re=re, swirl=sw, out_dir="")
            cell_dir = root / label
            solver.run(cfg, out_dir=str(cell_dir))
            captured = snapshot_schedule(cfg).values()
            return label, None, artifact_paths(cell_dir, cfg, captured)
        except (ConfigError, SolverError, OSError, ValueError) as exc:
            log.warning("sweep cell %s failed: %s", label, exc)
            return label, f"{type(exc).__name__}: {exc}", None

    workers = max_workers or min(len(cells), os.cpu_count() or 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_cell, zip(cells, labels)))
    else:
        results = [run_cell(args) for args in zip(cells, labels)]

    summary = {"cells": {label: {"status": "failed" if err else "ok",
                                 **({"error": err} if err else {})}
                         for label, err, _ in results}}
    (root / "sweep_summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return [art for _, err, art in results if err is None]


# ---------------------------------------------------------------------------
# run comparison

@dataclass(frozen=True)
class ComparisonReport:
    n_samples: int
    correlation: dict[str, float]
    max_abs_diff: dict[str, float]

    @property
    def similar(self) -> bool:
        return self.correlation["max_v"] >= QUALITATIVE_CORR

    @property
    def verdict(self) -> str:
        return "qualitatively similar" if self.similar else "qualitatively different"

    def summary(self) -> str:
        lines = [f"compared {self.n_samples} resampled records"]
        for name in sorted(self.correlation):
            lines.append(f"{name}: correlation {self.correlation[name]:.4f}, "
                         f"max abs diff {self.max_abs_diff[name]:.6e}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    sa, sb = a.std(), b.std()
    if sa == 0.0 or sb == 0.0:  # degenerate series: equal means identical
        return 1.0 if np.allclose(a, b) else 0.0
    return float(np.corrcoef(a, b)[0, 1])


def compare_runs(dir_a, dir_b) -> ComparisonReport:
    """Compare two run directories on the coarser common time grid.

    max_v and dist_axis are linearly resampled onto the time grid with
    fewer records, restricted to the overlapping time window.
    """
    ts_a = read_timeseries(Path(dir_a) / "timeseries.csv")
    ts_b = read_timeseries(Path(dir_b) / "timeseries.csv")
    coarse, fine = (ts_a, ts_b) if ts_a["t"].size <= ts_b["t"].size else (ts_b, ts_a)
    lo = max(coarse["t"][0], fine["t"][0])
    hi = min(coarse["t"][-1], fine["t"][-1])
    times = coarse["t"][(coarse["t"] >= lo) & (coarse["t"] <= hi)]
    if times.size == 0:
        raise ValueError("runs share no overlapping time window")
    corr, diff = {}, {}
    for name in ("max_v", "dist_axis"):
        a = np.interp(times, coarse["t"], coarse[name])
        b = np.interp(times, fine["t"], fine[name])
        corr[name] = _pearson(a, b)
        diff[name] = float(np.abs(a - b).max())
    return ComparisonReport(n_samples=int(times.size), correlation=corr,
                            max_abs_diff=diff)


# ---------------------------------------------------------------------------
# manufactured-solution refinement ladder

@dataclass(frozen=True)
class MMSLevel:
    nr: int
    nz: int
    h: float
    tau: float
    err_l2: float
    err_h1: float
    err_p: float


@dataclass(frozen=True)
class MMSReport:
    re: float
    t_final: float
    levels: tuple[MMSLevel, ...]
    slope_l2: float
    slope_h1: float
    successive_l2: tuple[float, ...]
    successive_h1: tuple[float, ...]

    def summary(self) -> str:
        lines = [f"manufactured-solution ladder at re={self.re:g}, "
                 f"t_final={self.t_final:g}",
                 "  nr   nz        h        tau       err_l2       err_h1        err_p"]
        for lv in self.levels:
            lines.append(f"{lv.nr:4d} {lv.nz:4d} {lv.h:.6f} {lv.tau:.6f} "
                         f"{lv.err_l2:.6e} {lv.err_h1:.6e} {lv.err_p:.6e}")
        lines.append(f"successive slopes: l2 {['%.2f' % s for s in self.successive_l2]}, "
                     f"h1 {['%.2f' % s for s in self.successive_h1]}")
        lines.append(f"fitted slopes: l2 {self.slope_l2:.3f}, h1 {self.slope_h1:.3f}")
        return "\n".join(lines)


def mms_convergence(levels: int = 3, re: float = 100.0, base_nr: int = 17,
                    base_nz: int = 11, tau0: float = 4e-3,
                    t_final: float = 0.048) -> MMSReport:
    """Halve h and tau together against the manufactured solution.

    Each level runs the scheme from the exact initial state with the
    manufactured forcing to t_final and measures the r-weighted velocity
    error norms; slopes are least-squares fits of log err against log h.
    """
    if levels < 2:
        raise ValueError(f"need at least 2 levels for slopes, got {levels}")
    case = manufactured_case(re=re)
    rows = []
    for lv in range(levels):
        scale = 2**lv
        cfg = SimConfig(re=re, tau=tau0 / scale, nr=(base_nr - 1) * scale + 1,
                        nz=(base_nz - 1) * scale + 1, grading=1.0,
                        t_end=t_final, out_dir="")
        grid = build_grid(cfg)
        state = case.state(grid, 0.0)
        n_steps = int(round(t_final / cfg.tau))
        for _ in range(n_steps):
            state = solver.advance(state, grid, cfg, forcing=case.forcing)
        err_l2, err_h1 = discrete_norms(state, case, grid, state.t)
        err_p = pressure_l2_error(state, case, grid, state.t)
        rows.append(MMSLevel(nr=cfg.nr, nz=cfg.nz, h=grid_metrics(grid).h_max,
                             tau=cfg.tau, err_l2=err_l2, err_h1=err_h1, err_p=err_p))
        log.info("mms level %d: h=%.4g tau=%.4g l2=%.4g h1=%.4g",
                 lv, rows[-1].h, cfg.tau, err_l2, err_h1)

    hs = np.array([lv.h for lv in rows])
    l2 = np.array([lv.err_l2 for lv in rows])
    h1 = np.array([lv.err_h1 for lv in rows])
    succ_l2 = tuple(float(np.log2(l2[k] / l2[k + 1])) for k in range(levels - 1))
    succ_h1 = tuple(float(np.log2(h1[k] / h1[k + 1])) for k in range(levels - 1))
    fit_l2 = float(np.polyfit(np.log(hs), np.log(l2), 1)[0])
    fit_h1 = float(np.polyfit(np.log(hs), np.log(h1), 1)[0])
    return MMSReport(re=re, t_final=t_final, levels=tuple(rows),
                     slope_l2=fit_l2, slope_h1=fit_h1,
                     successive_l2=succ_l2, successive_h1=succ_h1)
