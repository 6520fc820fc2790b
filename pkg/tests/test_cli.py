import json

import numpy as np
import pytest
from click.testing import CliRunner

from stockwell.commands import verify as verify_commands
from stockwell.formats.files import read_grid, read_volume, read_window, write_grid
from stockwell.formats.images import read_pgm
from stockwell.router import router
from stockwell.transforms.grids import SignalGrid2D
from stockwell.transforms.signals import gaussian_ring
from stockwell.transforms.windows import admissibility_constant, freq_bump_window

AXES = ["--angles", "4", "--bmin", "-3", "--bmax", "3", "--bcount", "13",
        "--amin", "0.5", "--amax", "2", "--acount", "3"]


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def signal_file(tmp_path):
    f = gaussian_ring(SignalGrid2D.centered(48, 0.3), 2.0, 0.6, shift=(0.2, 0.1))
    return write_grid(tmp_path / "f.grid", f)


def test_window(runner, tmp_path):
    result = runner.invoke(router, ["window", "--output", str(tmp_path / "w.win"),
                                    "--report", str(tmp_path / "w.json")])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["s1_flag"] is True
    assert report["label"] == "bump(c=1, h=1)"
    assert len(report["moments"]) == 5
    assert report["constant"] is None
    assert (tmp_path / "w.win").is_file()
    assert json.loads((tmp_path / "w.json").read_text()) == report


def test_window_rejected(runner):
    result = runner.invoke(router, ["window", "--center", "-1", "--halfwidth", "0.5"])
    assert result.exit_code == 2
    assert "not S1-admissible" in result.stderr


def test_window_constant(runner):
    result = runner.invoke(router, ["window", "--emit-constant"])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    psi = freq_bump_window(1.0, 1.0)
    expected = admissibility_constant(psi, psi, 2).value
    assert report["constant"][0] == pytest.approx(expected.real, rel=1e-12)
    assert report["dim"] == 2


def test_window_derivative_and_moment(runner, tmp_path):
    result = runner.invoke(router, ["window", "--moment", "1", "--derivative", "1",
                                    "--output", str(tmp_path / "d.win")])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["label"] == "bump(c=1, h=1)'1*x^1"
    assert report["s1_flag"] is True
    psi = read_window(tmp_path / "d.win")
    assert (psi.derivative, psi.moment) == (1, 1)
    assert runner.invoke(router, ["window", "--derivative", "-1"]).exit_code == 2


def test_analyze_zero_grid(runner, tmp_path):
    grid = write_grid(tmp_path / "zero.grid", SignalGrid2D.centered(32, 0.3))
    result = runner.invoke(router, ["analyze", "--input", str(grid), "--output", str(tmp_path / "z.dst"), *AXES])
    assert result.exit_code == 0, result.stderr
    volume, probe = read_volume(tmp_path / "z.dst")
    assert volume.axes.shape == (4, 13, 6)
    assert not np.any(volume.values)
    assert probe is None


def test_analyze_with_probe(runner, tmp_path, signal_file):
    output = tmp_path / "f.dst"
    result = runner.invoke(router, ["--threads", "2", "analyze", "--input", str(signal_file), "--output",
                                    str(output), "--probe", "8", *AXES])
    assert result.exit_code == 0, result.stderr
    assert result.stdout.startswith("probe: 8 cells")
    _, probe = read_volume(output)
    assert probe["count"] == 8
    assert probe["max_error"] < 1e-3


def test_radon_route(runner, tmp_path, signal_file):
    result = runner.invoke(router, ["analyze", "--input", str(signal_file), "--output", str(tmp_path / "r.dst"),
                                    "--route", "radon", *AXES])
    assert result.exit_code == 0, result.stderr
    assert np.any(read_volume(tmp_path / "r.dst")[0].values)


def test_synthesize_and_export(runner, tmp_path, signal_file):
    volume = tmp_path / "f.dst"
    runner.invoke(router, ["analyze", "--input", str(signal_file), "--output", str(volume), *AXES])
    result = runner.invoke(router, ["synthesize", "--input", str(volume), "--like", str(signal_file),
                                    "--output", str(tmp_path / "g.grid"), "--normalize"])
    assert result.exit_code == 0, result.stderr
    rebuilt = read_grid(tmp_path / "g.grid")
    assert rebuilt.same_geometry(read_grid(signal_file))
    assert np.all(np.isfinite(rebuilt.values))
    assert np.any(rebuilt.values)

    image = tmp_path / "slice.pgm"
    result = runner.invoke(router, ["export-slice", "--input", str(volume), "--output", str(image),
                                    "--angle-index", "1"])
    assert result.exit_code == 0, result.stderr
    assert read_pgm(image).shape == (13, 6)
    assert read_pgm(image).max() == 255
    assert json.loads((tmp_path / "slice.pgm.json").read_text())["max"] > 0


def test_export_needs_one_index(runner, tmp_path, signal_file):
    volume = tmp_path / "f.dst"
    runner.invoke(router, ["analyze", "--input", str(signal_file), "--output", str(volume), *AXES])
    result = runner.invoke(router, ["export-slice", "--input", str(volume), "--output", str(tmp_path / "x.pgm")])
    assert result.exit_code == 2
    assert "Invalid input" in result.stderr


def test_verify_failure_exit_code(runner, tmp_path, signal_file):
    report = tmp_path / "parseval.json"
    result = runner.invoke(router, ["verify", "parseval", "--input", str(signal_file), "--tol", "1e-9",
                                    "--output", str(report), *AXES])
    assert result.exit_code == 1
    assert "FAIL" in result.stdout
    assert "Verification failed" in result.stderr
    assert json.loads(report.read_text())["passed"] is False


def test_verify_transpose(runner, signal_file):
    result = runner.invoke(router, ["verify", "transpose", "--input", str(signal_file), *AXES])
    assert result.exit_code == 0, result.stdout + result.stderr
    assert "transpose: error" in result.stdout


@pytest.mark.parametrize("arguments", [["--amin", "-1"], ["--bcount", "1"], ["--angles", "1"],
                                       ["--amin", "2", "--amax", "1"]])
def test_invalid_axes(runner, tmp_path, signal_file, arguments):
    result = runner.invoke(router, ["analyze", "--input", str(signal_file), "--output",
                                    str(tmp_path / "x.dst"), *AXES, *arguments])
    assert result.exit_code == 2
    assert "Invalid input" in result.stderr
    assert not (tmp_path / "x.dst").exists()


def test_thread_option_validated(runner):
    result = runner.invoke(router, ["--threads", "0", "window"])
    assert result.exit_code == 2


def test_decay_report(runner, tmp_path, signal_file):
    volume = tmp_path / "f.dst"
    runner.invoke(router, ["analyze", "--input", str(signal_file), "--output", str(volume), *AXES])
    report = tmp_path / "decay.json"
    result = runner.invoke(router, ["decay", "--input", str(volume), "--report", str(report)])
    assert result.exit_code == 0, result.stderr
    table = json.loads(result.stdout)
    assert [(entry["s"], entry["r"]) for entry in table["entries"]] == [(s, r) for s in range(3) for r in range(3)]
    assert table["limit"] == pytest.approx(1.05)
    assert json.loads(report.read_text()) == table
    assert runner.invoke(router, ["decay", "--input", str(volume), "--limit", "0.5"]).exit_code == 2


def test_verify_slice_samples_lines_cubically(runner, signal_file, monkeypatch):
    orders = []
    original = verify_commands.slice_check

    def recording(*args, **kwargs):
        orders.append(kwargs.get("order"))
        return original(*args, **kwargs)

    monkeypatch.setattr(verify_commands, "slice_check", recording)
    result = runner.invoke(router, ["verify", "slice", "--input", str(signal_file), "--tol", "1"])
    assert result.exit_code == 0, result.stdout + result.stderr
    assert orders == [3, 3, 3, 3]
