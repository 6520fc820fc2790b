import math

import numpy as np
import pytest

from stockwell.errors import DerivativeOrderError
from stockwell.transforms.diagnostics import (
    decay_report,
    inner_domain,
    seminorm_dot,
    seminorm_rho_m,
    seminorm_Y,
)
from stockwell.transforms.dst import dst_fourier
from stockwell.transforms.grids import CoefficientVolume, SignalGrid2D, make_coefficient_axes
from stockwell.transforms.signals import annulus_bump, gaussian, gaussian_ring


@pytest.fixture(scope="module")
def narrow_gaussian():
    f = SignalGrid2D.centered(161, 0.05)
    X, Y = f.mesh()
    return f.with_values(np.exp(-(X ** 2 + Y ** 2)))


@pytest.fixture(scope="module")
def decay_axes():
    return make_coefficient_axes(8, (-120.0, 120.0, 481), (0.1, 4.0, 12))


@pytest.fixture(scope="module")
def coarse_grid():
    return SignalGrid2D.centered(128, 0.25)


def test_rho_zero_of_gaussian(narrow_gaussian):
    estimate = seminorm_rho_m(narrow_gaussian, 0)
    assert estimate.family == "rho"
    assert estimate.value == pytest.approx(1.0, abs=1e-15)
    assert estimate.refinement_delta == pytest.approx(0.0, abs=1e-15)


def test_rho_one_against_dense_evaluation(narrow_gaussian):
    X, Y = narrow_gaussian.mesh()
    phi = np.exp(-(X ** 2 + Y ** 2))
    largest = np.maximum.reduce([phi, np.abs(2 * X * phi), np.abs(2 * Y * phi)])
    expected = float(np.max((1.0 + np.hypot(X, Y)) * largest))
    estimate = seminorm_rho_m(narrow_gaussian, 1)
    assert estimate.value == pytest.approx(expected, rel=1e-2)


def test_rho_converges_under_refinement(narrow_gaussian):
    estimate = seminorm_rho_m(narrow_gaussian, 2)
    assert estimate.refinement_delta < 5e-2


def test_rho_order_cap(narrow_gaussian):
    with pytest.raises(DerivativeOrderError):
        seminorm_rho_m(narrow_gaussian, 5)
    with pytest.raises(DerivativeOrderError):
        seminorm_rho_m(narrow_gaussian, -1)


def test_rho_of_zero_signal():
    assert seminorm_rho_m(SignalGrid2D.centered(8, 1.0), 3).value == 0.0


def test_y_of_its_own_weight():
    axes = make_coefficient_axes(4, (-5.0, 5.0, 21), (0.25, 4.0, 5))
    b = axes.offsets[None, :, None]
    a = np.abs(axes.scales)[None, None, :]
    values = np.broadcast_to(1.0 / ((1.0 + b ** 2) * (a + 1.0 / a)), axes.shape)
    estimate = seminorm_Y(CoefficientVolume(axes, values), 1, 2)
    assert estimate.value == pytest.approx(1.0, rel=1e-12)
    assert estimate.refinement_delta == pytest.approx(0.0, abs=1e-12)


def test_y_angular_laplacian_of_constant():
    axes = make_coefficient_axes(6, (-2.0, 2.0, 9), (0.5, 2.0, 3))
    volume = CoefficientVolume(axes, np.full(axes.shape, 2.0 + 1.0j))
    assert seminorm_Y(volume, 0, 0, k=1).value == 0.0
    assert seminorm_Y(volume, 0, 0).value == pytest.approx(2.0 * abs(2.0 + 1.0j))


def test_y_scale_derivative_per_branch():
    axes = make_coefficient_axes(4, (-2.0, 2.0, 9), (0.5, 2.0, 4))
    values = np.broadcast_to(axes.scales[None, None, :], axes.shape)
    volume = CoefficientVolume(axes, values)
    assert seminorm_Y(volume, 0, 0, l=1).value == pytest.approx(2.0, rel=1e-12)
    assert seminorm_Y(volume, 0, 0, l=2).value == pytest.approx(0.0, abs=1e-9)


def test_y_offset_derivative():
    axes = make_coefficient_axes(4, (-2.0, 2.0, 41), (0.5, 2.0, 3))
    values = np.broadcast_to(np.sin(axes.offsets)[None, :, None], axes.shape)
    estimate = seminorm_Y(CoefficientVolume(axes, values), 0, 0, m=1)
    assert estimate.value == pytest.approx(2.0, rel=5e-3)


@pytest.mark.parametrize("orders", [{"l": 3}, {"m": 3}, {"k": 2}, {"l": -1}])
def test_y_order_caps(orders):
    axes = make_coefficient_axes(4, (-2.0, 2.0, 9), (0.5, 2.0, 3))
    with pytest.raises(DerivativeOrderError):
        seminorm_Y(CoefficientVolume.zeros(axes), 0, 0, **orders)


def test_dot_of_zero_signal(coarse_grid):
    estimate = seminorm_dot(coarse_grid, 2, n_angles=16, n_radii=32)
    assert estimate.value == 0.0
    assert estimate.family == "dot"


def test_dot_of_annulus(coarse_grid):
    phi = annulus_bump(coarse_grid, 1.0, 3.0)
    n_radii = 256
    estimate = seminorm_dot(phi, 0, n_angles=32, n_radii=n_radii)
    w = (np.arange(n_radii) + 0.5) * coarse_grid.nyquist / n_radii
    t = w - 2.0
    inside = np.abs(t) < 1.0
    expected = np.max(math.e * np.exp(-1.0 / (1.0 - t[inside] ** 2)))
    assert estimate.value == pytest.approx(expected, rel=5e-2)


def test_negative_weight_detects_nonvanishing_spectrum(coarse_grid):
    annulus = seminorm_dot(annulus_bump(coarse_grid, 1.0, 3.0), -2, n_angles=32)
    blob = seminorm_dot(gaussian(coarse_grid, 1.0), -2, n_angles=32)
    assert blob.value > 100.0 * annulus.value


def test_dot_order_caps(coarse_grid):
    with pytest.raises(DerivativeOrderError):
        seminorm_dot(coarse_grid, 0, q=3)
    with pytest.raises(DerivativeOrderError):
        seminorm_dot(coarse_grid, 0, k=2)


def test_inner_domain(decay_axes):
    inner = inner_domain(CoefficientVolume.zeros(decay_axes))
    assert inner.axes.offsets[0] == pytest.approx(-60.0)
    assert inner.axes.offsets[-1] == pytest.approx(60.0)
    a = np.abs(inner.axes.scales)
    assert a.min() >= 0.2 - 1e-12
    assert a.max() <= 2.0 + 1e-12
    tiny = make_coefficient_axes(2, (-1.0, 1.0, 2), (0.5, 0.6, 2))
    assert inner_domain(CoefficientVolume.zeros(tiny)) is None


def test_decay_of_zero_volume(decay_axes):
    report = decay_report(CoefficientVolume.zeros(decay_axes))
    assert len(report.entries) == 9
    assert all(entry.value == 0.0 and entry.growth == 0.0 for entry in report.entries)
    assert report.flagged == []


@pytest.mark.slow
def test_decay_of_ring_and_gaussian(bump, decay_axes, caplog):
    geometry = SignalGrid2D.centered(160, 0.25)
    ring = decay_report(dst_fourier(gaussian_ring(geometry, 2.0, 0.35), bump, decay_axes))
    ring_entry = next(entry for entry in ring.entries if (entry.s, entry.r) == (1, 2))
    assert ring_entry.growth < 1.05
    assert not ring_entry.flagged

    blob = decay_report(dst_fourier(gaussian(geometry, 1.0), bump, decay_axes))
    blob_entry = next(entry for entry in blob.entries if (entry.s, entry.r) == (1, 2))
    assert blob_entry.flagged
    assert blob_entry.growth > 2.0
    assert "grows by" in caplog.text
