"""
Test signals on planar grids.

The ring and annulus signals are synthesised from their spectra, so they are
band limited and their spectra vanish to all orders at the origin.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import fft

from stockwell.errors import InvalidInput
from stockwell.transforms.grids import SignalGrid2D


def from_spectrum(geometry: SignalGrid2D, spectrum) -> SignalGrid2D:
    """
    Samples of the function whose Fourier transform is ``spectrum(wx, wy)``.

    The inverse transform is evaluated by a periodic inverse FFT on the grid,
    so the function should be negligible at the grid boundary.
    """
    wx = 2.0 * math.pi * fft.fftfreq(geometry.nx, d=geometry.dx)
    wy = 2.0 * math.pi * fft.fftfreq(geometry.ny, d=geometry.dy)
    WX, WY = np.meshgrid(wx, wy)
    values = spectrum(WX, WY) * np.exp(1j * (WX * geometry.x0 + WY * geometry.y0))
    return geometry.with_values(fft.ifft2(values) / geometry.cell_area)


def gaussian_ring(geometry: SignalGrid2D, radius: float, width: float,
                  shift: tuple[float, float] = (0.0, 0.0), amplitude: float = 1.0) -> SignalGrid2D:
    """Signal with spectrum ``exp(-(|w| - radius)^2 / (2 width^2)) exp(-i w . shift)``."""
    if not (radius > 0 and width > 0):
        raise InvalidInput("ring radius and width must be positive")

    def spectrum(wx, wy):
        rho = np.hypot(wx, wy)
        return amplitude * np.exp(-0.5 * ((rho - radius) / width) ** 2 - 1j * (wx * shift[0] + wy * shift[1]))
    return from_spectrum(geometry, spectrum)


def annulus_bump(geometry: SignalGrid2D, inner: float, outer: float,
                 shift: tuple[float, float] = (0.0, 0.0)) -> SignalGrid2D:
    """Signal whose spectrum is a smooth radial bump supported on ``inner < |w| < outer``."""
    if not 0 <= inner < outer:
        raise InvalidInput(f"annulus [{inner}, {outer}] is empty")
    center, half = 0.5 * (inner + outer), 0.5 * (outer - inner)

    def spectrum(wx, wy):
        t = (np.hypot(wx, wy) - center) / half
        out = np.zeros(t.shape, dtype=np.complex128)
        inside = np.abs(t) < 1.0
        out[inside] = math.e * np.exp(-1.0 / (1.0 - t[inside] ** 2))
        return out * np.exp(-1j * (wx * shift[0] + wy * shift[1]))
    return from_spectrum(geometry, spectrum)


def gaussian(geometry: SignalGrid2D, sigma: float = 1.0) -> SignalGrid2D:
    """``exp(-|x|^2 / (2 sigma^2))``; its spectrum does not vanish at the origin."""
    X, Y = geometry.mesh()
    return geometry.with_values(np.exp(-(X ** 2 + Y ** 2) / (2.0 * sigma ** 2)))


def unit_disk(geometry: SignalGrid2D, radius: float = 1.0) -> SignalGrid2D:
    X, Y = geometry.mesh()
    return geometry.with_values((X ** 2 + Y ** 2 <= radius ** 2).astype(np.complex128))


def ridge(geometry: SignalGrid2D, theta: float, frequency: float, width: float = 4.0) -> SignalGrid2D:
    """
    Plane wave ``exp(i k x . u)`` along direction ``theta`` under a Gaussian envelope.

    Its spectrum is concentrated near ``k u``, so the transform is largest at
    the angle ``theta``.
    """
    X, Y = geometry.mesh()
    s = X * math.cos(theta) + Y * math.sin(theta)
    envelope = np.exp(-(X ** 2 + Y ** 2) / (2.0 * width ** 2))
    return geometry.with_values(envelope * np.exp(1j * frequency * s))


def reference_signal(size: int, spacing: float, radius: float, width: float) -> SignalGrid2D:
    """Shifted Gaussian ring used by the verification jobs."""
    geometry = SignalGrid2D.centered(size, spacing)
    return gaussian_ring(geometry, radius, width, shift=(0.8 * spacing * size / 32, -0.4 * spacing * size / 32))
