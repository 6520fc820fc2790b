import json
import math

import numpy as np
import pytest

from stockwell.errors import GridMismatch, InvalidInput
from stockwell.formats.files import (
    read_grid,
    read_sinogram,
    read_volume,
    read_window,
    write_grid,
    write_sinogram,
    write_volume,
    write_window,
)
from stockwell.formats.images import export_slice, read_pgm, sidecar_path, write_pgm, write_report
from stockwell.transforms.grids import CoefficientVolume, SignalGrid2D, make_coefficient_axes
from stockwell.transforms.radon import Projection1D
from stockwell.transforms.reports import VerificationReport
from stockwell.transforms.windows import derivative_window, moment_window


@pytest.fixture
def axes():
    return make_coefficient_axes(4, (-2.0, 2.0, 5), (0.5, 2.0, 3))


def test_grid_file(tmp_path, rng):
    f = SignalGrid2D(5, 3, -1.25, 0.5, 0.3, 0.7, rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5)))
    back = read_grid(write_grid(tmp_path / "f.grid", f))
    assert back.same_geometry(f)
    assert (back.x0, back.y0, back.dx, back.dy) == (f.x0, f.y0, f.dx, f.dy)
    np.testing.assert_array_equal(back.values, f.values)


def test_grid_file_layout(tmp_path):
    f = SignalGrid2D.centered(2, 1.0, np.array([[1, 2j], [3, 4]]))
    raw = write_grid(tmp_path / "f.grid", f).read_bytes()
    line, payload = raw.split(b"\n", 1)
    header = json.loads(line)
    assert header["format"] == "grid"
    assert header["dtype"] == "c128"
    assert len(payload) == 4 * 16
    assert np.frombuffer(payload, dtype="<c16")[1] == 2j


def test_volume_file(tmp_path, rng, axes):
    volume = CoefficientVolume(axes, rng.standard_normal(axes.shape) + 1j * rng.standard_normal(axes.shape))
    probe = {"count": 4, "max_error": 1.5e-5}
    back, stored = read_volume(write_volume(tmp_path / "f.dst", volume, probe=probe))
    assert back.axes.same_as(axes)
    assert back.axes.ratio == axes.ratio
    np.testing.assert_array_equal(back.values, volume.values)
    assert stored == probe
    assert read_volume(write_volume(tmp_path / "g.dst", volume))[1] is None


def test_sinogram_file(tmp_path, rng):
    projections = [Projection1D(2.0 * math.pi * i / 3, -4.0, 0.25, rng.standard_normal(33)) for i in range(3)]
    back = read_sinogram(write_sinogram(tmp_path / "f.sino", projections))
    assert [projection.theta for projection in back] == [projection.theta for projection in projections]
    for left, right in zip(back, projections):
        assert left.grid_key() == right.grid_key()
        np.testing.assert_array_equal(left.values, right.values)


def test_sinogram_needs_one_offset_grid(tmp_path):
    projections = [Projection1D(0.0, -4.0, 0.25, np.ones(33)), Projection1D(1.0, -4.0, 0.5, np.ones(17))]
    with pytest.raises(GridMismatch):
        write_sinogram(tmp_path / "f.sino", projections)
    with pytest.raises(InvalidInput):
        write_sinogram(tmp_path / "f.sino", [])


def test_window_file(tmp_path, bump):
    back = read_window(write_window(tmp_path / "bump.win", bump))
    np.testing.assert_array_equal(back.time_values, bump.time_values)
    np.testing.assert_array_equal(back.spectrum_values, bump.spectrum_values)
    assert back.label == bump.label
    assert back.support == bump.support
    xi = np.linspace(-0.5, 2.5, 31)
    np.testing.assert_array_equal(back.spectrum(xi), bump.spectrum(xi))


def test_derived_window_files(tmp_path, bump):
    first = derivative_window(bump, 1)
    back = read_window(write_window(tmp_path / "d.win", first))
    xi = np.linspace(0.1, 1.9, 7)
    np.testing.assert_allclose(back.spectrum(xi), first.spectrum(xi), atol=1e-15)
    shifted = read_window(write_window(tmp_path / "m.win", moment_window(bump, 1)))
    assert shifted.spectrum_fn is None
    assert shifted.moment == 1


@pytest.mark.parametrize("content", [b"", b"no newline", b"{not json}\n", b'{"format": "volume"}\n',
                                     b'{"format": "grid", "nx": 2, "ny": 2, "x0": 0, "y0": 0, "dx": 1, "dy": 1}\n'
                                     b"12345"])
def test_malformed_files(tmp_path, content):
    path = tmp_path / "bad.grid"
    path.write_bytes(content)
    with pytest.raises(InvalidInput):
        read_grid(path)


def test_headers_record_the_sample_type(tmp_path, axes, bump):
    volume = CoefficientVolume(axes, np.zeros(axes.shape, dtype=np.complex128))
    paths = [
        write_volume(tmp_path / "f.dst", volume),
        write_sinogram(tmp_path / "f.sino", [Projection1D(0.0, -1.0, 0.5, np.ones(5))]),
        write_window(tmp_path / "f.win", bump),
    ]
    for path in paths:
        assert json.loads(path.read_bytes().split(b"\n", 1)[0])["dtype"] == "c128"


@pytest.mark.parametrize("dtype", ["c64", "f8"])
def test_other_sample_types_are_rejected(tmp_path, dtype):
    f = SignalGrid2D.centered(2, 1.0, np.ones((2, 2)))
    path = write_grid(tmp_path / "f.grid", f)
    line, payload = path.read_bytes().split(b"\n", 1)
    header = json.loads(line)
    header["dtype"] = dtype
    path.write_bytes(json.dumps(header).encode() + b"\n" + payload)
    with pytest.raises(InvalidInput):
        read_grid(path)


def test_pgm(tmp_path):
    image = np.arange(12, dtype=np.uint8).reshape(3, 4)
    path = write_pgm(tmp_path / "a.pgm", image)
    assert path.read_bytes() == b"P5\n4 3\n255\n" + image.tobytes()
    np.testing.assert_array_equal(read_pgm(path), image)
    with pytest.raises(InvalidInput):
        write_pgm(tmp_path / "b.pgm", image.astype(np.float64))


def test_export_zero_slice(tmp_path, axes):
    path, peak = export_slice(CoefficientVolume.zeros(axes), tmp_path / "zero.pgm", angle_index=1)
    assert peak == 0.0
    assert not read_pgm(path).any()
    sidecar = json.loads(sidecar_path(path).read_text())
    assert sidecar["max"] == 0.0
    assert (sidecar["rows"], sidecar["columns"]) == (5, 6)


def test_export_hot_cell(tmp_path, axes):
    values = np.zeros(axes.shape, dtype=np.complex128)
    values[2, 3, 4] = 3.0 + 4.0j
    values[2, 0, 0] = 1.0
    volume = CoefficientVolume(axes, values)
    path, peak = export_slice(volume, tmp_path / "angle.pgm", angle_index=2)
    image = read_pgm(path)
    assert peak == pytest.approx(5.0)
    assert image.shape == (5, 6)
    assert image[3, 4] == 255
    assert image[0, 0] == 51
    assert image.sum() == 255 + 51

    path, _ = export_slice(volume, tmp_path / "scale.pgm", scale_index=4)
    image = read_pgm(path)
    assert image.shape == (5, 4)
    assert image[3, 2] == 255
    sidecar = json.loads(sidecar_path(path).read_text())
    assert sidecar["axis"] == "scale"
    assert sidecar["value"] == pytest.approx(1.0)


@pytest.mark.parametrize("indices", [{}, {"angle_index": 0, "scale_index": 0}, {"angle_index": 9},
                                     {"scale_index": -1}])
def test_export_index_validation(tmp_path, axes, indices):
    with pytest.raises(InvalidInput):
        export_slice(CoefficientVolume.zeros(axes), tmp_path / "x.pgm", **indices)


def test_report_file(tmp_path):
    report = VerificationReport.compare("isometry", 1.0 + 1e-3j, 1.0, grids="test").judge(1e-2)
    path = write_report(report, tmp_path / "report.json")
    content = json.loads(path.read_text())
    assert content["lhs"] == [1.0, 1e-3]
    assert content["passed"] is True
    assert content["tolerance"] == 1e-2
