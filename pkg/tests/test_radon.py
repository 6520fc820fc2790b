import math

import numpy as np
import pytest

from stockwell.config.config import settings
from stockwell.errors import GridMismatch, InvalidInput, NyquistError
from stockwell.transforms.grids import SignalGrid2D
from stockwell.transforms.radon import (
    PolarSpectrum,
    Projection1D,
    dual_radon,
    fourier_slice,
    projection_transform,
    radon_direct,
    sinogram,
    slice_check,
    uniform_offsets,
)
from stockwell.transforms.signals import gaussian, unit_disk


@pytest.fixture(scope="module")
def blob():
    return gaussian(SignalGrid2D.centered(121, 0.1), 1.0)


@pytest.mark.parametrize("theta", [0.0, math.pi / 4, 2.0])
def test_gaussian_projection(blob, theta):
    p = np.linspace(-3.0, 3.0, 61)
    projection = radon_direct(blob, theta, p, order=3)
    expected = math.sqrt(2.0 * math.pi) * np.exp(-0.5 * p ** 2)
    np.testing.assert_allclose(projection.values, expected, rtol=1e-4, atol=1e-7)


def test_bilinear_projection(blob):
    p = np.linspace(-3.0, 3.0, 31)
    projection = radon_direct(blob, 0.7, p, order=1)
    expected = math.sqrt(2.0 * math.pi) * np.exp(-0.5 * p ** 2)
    np.testing.assert_allclose(projection.values, expected, rtol=1e-2, atol=1e-4)


def test_uniform_offsets():
    assert uniform_offsets(np.array([1.0, 1.5, 2.0])) == pytest.approx((1.0, 0.5))
    with pytest.raises(InvalidInput):
        uniform_offsets(np.array([0.0, 1.0, 3.0]))
    with pytest.raises(InvalidInput):
        uniform_offsets(np.array([2.0, 1.0]))


def test_matched_slice_identity(small_ring):
    xi = np.linspace(-4.0, 4.0, 33)
    report = slice_check(small_ring, 0.0, xi, mode="direct", order=1)
    assert report.residual < 1e-8
    assert report.name == "slice"


def test_slice_theorem_with_cubic_lines(fine_ring):
    xi = np.linspace(-4.0, 4.0, 81)
    p = np.linspace(-14.0, 14.0, 281)
    for theta in (0.3, 1.9):
        report = slice_check(fine_ring, theta, xi, p=p, mode="direct", order=3)
        assert report.residual < 1e-3


def test_fast_slice_matches_direct(fine_ring):
    xi = np.linspace(-5.0, 5.0, 101)
    spectrum = PolarSpectrum(fine_ring).prepare()
    for theta in (0.0, 0.9, 4.0):
        fast = fourier_slice(fine_ring, theta, xi, "fast", spectrum).values
        direct = fourier_slice(fine_ring, theta, xi, "direct").values
        assert np.linalg.norm(fast - direct) < 1e-3 * np.linalg.norm(direct)


def test_slice_of_ring_matches_its_spectrum(fine_ring):
    xi = np.linspace(1.5, 5.0, 15)
    theta = 0.6
    values = fourier_slice(fine_ring, theta, xi, "direct").values
    shift = 0.3 * math.cos(theta) - 0.2 * math.sin(theta)
    expected = np.exp(-0.5 * ((xi - 3.0) / 0.5) ** 2 - 1j * xi * shift)
    np.testing.assert_allclose(values, expected, atol=2e-4)


def test_slice_nyquist(small_ring):
    with pytest.raises(NyquistError):
        fourier_slice(small_ring, 0.0, np.array([0.0, small_ring.nyquist * 1.01]))
    with pytest.raises(InvalidInput):
        fourier_slice(small_ring, 0.0, np.array([0.0, 1.0]), mode="polar")


def test_projection_transform_of_gaussian(blob):
    p = np.linspace(-8.0, 8.0, 321)
    projection = radon_direct(blob, 1.0, p, order=3)
    xi = np.linspace(-3.0, 3.0, 13)
    expected = 2.0 * math.pi * np.exp(-0.5 * xi ** 2)
    np.testing.assert_allclose(projection_transform(projection, xi), expected, rtol=1e-4, atol=1e-6)


def test_dual_radon_of_constant_projections():
    geometry = SignalGrid2D.centered(9, 0.5)
    p = np.linspace(-10.0, 10.0, 41)
    projections = [Projection1D(2.0 * math.pi * i / 6, -10.0, 0.5, np.ones(41)) for i in range(6)]
    back = dual_radon(projections, geometry)
    np.testing.assert_allclose(back.values, 2.0 * math.pi, rtol=1e-12)
    assert np.allclose(projections[0].p, p)


def test_dual_radon_validation():
    geometry = SignalGrid2D.centered(9, 0.5)
    first = Projection1D(0.0, -10.0, 0.5, np.ones(41))
    with pytest.raises(GridMismatch):
        dual_radon([first, Projection1D(math.pi, -10.0, 0.25, np.ones(81))], geometry)
    with pytest.raises(InvalidInput):
        dual_radon([first, Projection1D(1.0, -10.0, 0.5, np.ones(41))], geometry)
    with pytest.raises(InvalidInput):
        dual_radon([], geometry)


def test_sinogram_is_thread_invariant(small_ring):
    angles = 2.0 * math.pi * np.arange(6) / 6
    p = np.linspace(-10.0, 10.0, 41)
    single = sinogram(small_ring, angles, p, threads=1)
    pooled = sinogram(small_ring, angles, p, threads=3)
    for left, right in zip(single, pooled):
        assert left.theta == right.theta
        np.testing.assert_array_equal(left.values, right.values)


def test_default_line_sampling_is_bilinear(blob):
    assert settings.RADON_ORDER == 1
    p = np.linspace(-3.0, 3.0, 31)
    default = radon_direct(blob, 0.7, p)
    bilinear = radon_direct(blob, 0.7, p, order=1)
    np.testing.assert_array_equal(default.values, bilinear.values)


@pytest.mark.parametrize("theta", [0.0, 0.7, 2.0])
def test_projection_conserves_mass(blob, theta):
    p = np.arange(-8.0, 8.0 + 1e-9, 0.05)
    projection = radon_direct(blob, theta, p)
    mass = projection.values.sum() * projection.dp
    assert abs(mass - blob.values.sum() * blob.dx * blob.dy) < 1e-4 * 2.0 * math.pi
    assert abs(mass - 2.0 * math.pi) < 1e-4 * 2.0 * math.pi


@pytest.mark.parametrize("theta", [0.4, 1.3, 2.9])
def test_projection_is_even(theta):
    f = gaussian(SignalGrid2D.centered(121, 0.1), 1.0)
    f = f.with_values(f.values * np.exp(0.3j * f.mesh()[0]))
    p = np.linspace(-4.0, 4.0, 41)
    forward = radon_direct(f, theta, p, order=3).values
    backward = radon_direct(f, theta + math.pi, -p[::-1], order=3).values[::-1]
    assert np.abs(forward - backward).max() < 1e-5 * np.abs(forward).max()


def test_unit_disk_chords():
    disk = unit_disk(SignalGrid2D.centered(301, 0.01))
    p = np.linspace(-0.8, 0.8, 17)
    for theta in (0.0, 0.5, 2.2):
        projection = radon_direct(disk, theta, p)
        np.testing.assert_allclose(projection.values.real, 2.0 * np.sqrt(1.0 - p ** 2), atol=3e-2)
        assert not np.any(projection.values.imag)


def test_dual_radon_of_odd_projections_vanishes():
    geometry = SignalGrid2D.centered(9, 0.5)
    p = np.linspace(-10.0, 10.0, 41)
    projections = [Projection1D(2.0 * math.pi * i / 8, -10.0, 0.5, p.copy()) for i in range(8)]
    back = dual_radon(projections, geometry)
    assert np.abs(back.values).max() < 1e-12
