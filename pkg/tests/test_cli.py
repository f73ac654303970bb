"""Exit codes, artifact side effects, and output of the saddlesim CLI."""

import pytest

from saddlesim.cli import main

TINY = """\
re = 1000
tau = 0.01
nr = 9
nz = 13
grading = 1.0
t_end = 0.03
snapshot_times = 0.02
"""


def _cfg(tmp_path, extra=""):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY + extra)
    return str(path)


def test_run_writes_artifacts(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SADDLESIM_OUT", raising=False)
    out = tmp_path / "out"
    code = main(["run", "--config", _cfg(tmp_path, f"out_dir = {out}\n")])
    assert code == 0
    text = capsys.readouterr().out
    assert "run finished at t=0.030000" in text
    assert "turning points" in text
    for name in ("config.cfg", "timeseries.csv", "summary.json",
                 "snapshot_t0.020.csv"):
        assert (out / name).exists(), name


def test_run_honors_env_output_root(tmp_path, monkeypatch):
    out = tmp_path / "env_out"
    monkeypatch.setenv("SADDLESIM_OUT", str(out))
    assert main(["run", "--config", _cfg(tmp_path)]) == 0
    assert (out / "timeseries.csv").exists()


def test_run_without_output_root_writes_nothing(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SADDLESIM_OUT", raising=False)
    assert main(["run", "--config", _cfg(tmp_path)]) == 0
    assert "artifacts written" not in capsys.readouterr().out
    assert not (tmp_path / "timeseries.csv").exists()


def test_missing_config_is_usage_error(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "absent.cfg")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_bad_config_key_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("viscosity = 1\n")
    assert main(["run", "--config", str(path)]) == 2
    assert "viscosity" in capsys.readouterr().err


def test_bad_override_is_usage_error(tmp_path, capsys):
    assert main(["run", "--config", _cfg(tmp_path), "--set", "re=fast"]) == 2
    assert "re" in capsys.readouterr().err


def test_solver_failure_is_runtime_error(tmp_path, capsys):
    code = main(["run", "--config", _cfg(tmp_path),
                 "--set", "lin_tol=1e-30", "--set", "lin_maxit=1"])
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_command_is_argparse_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_sweep_cli(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SADDLESIM_OUT", raising=False)
    out = tmp_path / "cells"
    code = main(["sweep", "--config", _cfg(tmp_path, f"out_dir = {out}\n"),
                 "--re", "100", "--swirl", "on"])
    assert code == 0
    assert "sweep wrote 1/1 cells" in capsys.readouterr().out
    assert (out / "re100_swirl" / "timeseries.csv").exists()
    assert (out / "sweep_summary.json").exists()


def test_compare_cli(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SADDLESIM_OUT", raising=False)
    for name in ("a", "b"):
        assert main(["run", "--config",
                     _cfg(tmp_path, f"out_dir = {tmp_path / name}\n")]) == 0
    capsys.readouterr()
    assert main(["compare", str(tmp_path / "a"), str(tmp_path / "b")]) == 0
    text = capsys.readouterr().out
    assert "verdict: qualitatively similar" in text
    assert "max_v: correlation 1.0000" in text


def test_compare_missing_dir_is_runtime_error(tmp_path, capsys):
    assert main(["compare", str(tmp_path / "no_a"), str(tmp_path / "no_b")]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_mms_cli(capsys):
    assert main(["mms", "--levels", "2"]) == 0
    text = capsys.readouterr().out
    assert "manufactured-solution ladder" in text
    assert "fitted slopes" in text


def test_probe_cli_stdout(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SADDLESIM_OUT", raising=False)
    code = main(["probe", "--config", _cfg(tmp_path), "--time", "0.02",
                 "--offsets", "0.05,0.1"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    assert "|w|=" in lines[0] and "xi=(" in lines[0]


def test_probe_cli_x2_line_to_file(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SADDLESIM_OUT", raising=False)
    out = tmp_path / "probe.csv"
    code = main(["probe", "--config", _cfg(tmp_path), "--time", "0.02",
                 "--line", "x2", "--height", "0.1", "--offsets", "0.1,0.2",
                 "--out", str(out)])
    assert code == 0
    assert "probe written" in capsys.readouterr().out
    assert out.exists()
    assert len(out.read_text().splitlines()) == 3


def test_probe_rejects_exit_through_wall(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SADDLESIM_OUT", raising=False)
    code = main(["probe", "--config", _cfg(tmp_path), "--time", "0.02",
                 "--offsets", "0.05,3.0"])
    assert code == 1
    assert "outside" in capsys.readouterr().err
