import math

import numpy as np
import pytest

from stockwell.errors import CoverageError, InvalidInput, NyquistError
from stockwell.transforms.stockwell1d import Signal1D, offset_indices, stockwell_direct, stockwell_fft


@pytest.fixture(scope="module")
def chirp():
    x = -20.0 + 0.1 * np.arange(401)
    return Signal1D(-20.0, 0.1, np.exp(-x ** 2 / 8.0) * np.cos(2.0 * x + 0.1 * x ** 2))


@pytest.mark.parametrize("a", [0.7, 1.5, -1.2])
def test_fast_matches_direct(chirp, bump, a):
    b = chirp.x[::20]
    row = stockwell_fft(chirp, bump, b, a)
    direct = np.array([stockwell_direct(chirp, bump, float(value), a) for value in b])
    assert row.scale == a
    assert np.abs(row.values - direct).max() < 1e-6 * np.abs(direct).max()


def test_offsets_outside_the_signal(chirp, bump):
    b = chirp.x0 + chirp.dx * np.array([-50, 200, 450])
    row = stockwell_fft(chirp, bump, b, 1.0)
    direct = np.array([stockwell_direct(chirp, bump, float(value), 1.0) for value in b])
    assert np.abs(row.values - direct).max() < 1e-6 * np.abs(direct).max()


def test_offset_lattice(chirp):
    np.testing.assert_array_equal(offset_indices(chirp, chirp.x[[0, 7, 400]]), [0, 7, 400])
    with pytest.raises(CoverageError):
        offset_indices(chirp, np.array([chirp.x0 + 0.05]))


def test_invalid_scale(chirp, bump):
    with pytest.raises(InvalidInput):
        stockwell_fft(chirp, bump, chirp.x[:3], 0.0)
    with pytest.raises(InvalidInput):
        stockwell_direct(chirp, bump, 0.0, 0.0)


def test_band_above_nyquist(bump):
    coarse = Signal1D(0.0, 1.0, np.ones(16))
    with pytest.raises(NyquistError):
        stockwell_fft(coarse, bump, np.array([0.0]), 2.0)


@pytest.fixture(scope="module")
def long_line():
    return -1000.0 + 0.1 * np.arange(20001)


@pytest.mark.parametrize("a", [0.7, 1.0, 1.3, 1.7, 2.5])
def test_single_mode_closed_form(bump, long_line, a):
    c = 2.0
    g = Signal1D(-1000.0, 0.1, np.exp(1j * c * long_line))
    b = np.array([-5.0, 0.0, 5.0])
    peak = np.abs(bump.spectrum(np.linspace(0.0, 2.0, 201))).max() / math.sqrt(2.0 * math.pi)
    weight = np.conj(bump.spectrum(np.array([c / a - 1.0]))[0])
    expected = np.exp(1j * (c - a) * b) * weight / math.sqrt(2.0 * math.pi)
    direct = np.array([stockwell_direct(g, bump, float(value), a) for value in b])
    fast = stockwell_fft(g, bump, b, a).values
    assert np.abs(direct - expected).max() < 1e-6 * peak
    assert np.abs(fast - expected).max() < 1e-6 * peak


def test_negative_frequencies_give_a_zero_row(bump, long_line):
    g = Signal1D(-1000.0, 0.1, np.exp(-long_line ** 2 / 8.0 - 6j * long_line))
    b = long_line[9900:10101:10]
    for a in (0.5, 1.0, 2.0):
        assert np.abs(stockwell_fft(g, bump, b, a).values).max() < 1e-12
    assert np.abs(stockwell_fft(g, bump, b, -3.0).values).max() > 1e-3
