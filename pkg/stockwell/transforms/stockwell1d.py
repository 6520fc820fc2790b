"""
One-dimensional Stockwell transform of sampled functions.

``S g(b, a) = |a| / sqrt(2 pi) * int g(x) conj(psi(a (x - b))) exp(-i x a) dx``

The direct route sums this definition with the window read from its time
table. The fast route uses the equivalent spectral form
``(2 pi)^(-3/2) exp(-i a b) int g^(xi) conj(psi^(xi / a - 1)) exp(i xi b) dxi``
with one forward and one inverse FFT per scale.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft

from stockwell.errors import CoverageError, InvalidInput, NyquistError
from stockwell.transforms.windows import Window1D

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Signal1D:
    """
    Uniformly sampled function of one variable.

    Attributes:
        x0: Abscissa of the first sample.
        dx: Sample spacing.
        values: Complex samples.
    """
    x0: float
    dx: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128, copy=True).ravel()
        values.setflags(write=False)
        if not self.dx > 0:
            raise InvalidInput(f"sample spacing must be positive, got {self.dx}")
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.values.size)


@dataclass(frozen=True, eq=False)
class StockwellRow:
    """
    Transform values along the offset axis at a fixed scale.

    Attributes:
        scale: Nonzero scale a.
        offsets: Offsets b_j.
        values: Complex values S g(b_j, a).
    """
    scale: float
    offsets: np.ndarray
    values: np.ndarray = field(repr=False)


def _require_scale(a: float) -> None:
    if a == 0:
        raise InvalidInput("scale a = 0 is excluded")


def stockwell_direct(g: Signal1D, psi: Window1D, b: float, a: float) -> complex:
    """
    Direct quadrature of the one-dimensional Stockwell transform at ``(b, a)``.

    Raises:
        InvalidInput: If ``a == 0``.
    """
    _require_scale(a)
    x = g.x
    kernel = np.conj(psi(a * (x - b))) * np.exp(-1j * a * x)
    return complex(abs(a) / math.sqrt(2.0 * math.pi) * np.sum(g.values * kernel) * g.dx)


def offset_indices(g: Signal1D, b: np.ndarray) -> np.ndarray:
    """
    Lattice indices of the offsets relative to the first sample of ``g``.

    Raises:
        CoverageError: If an offset does not fall on the sampling lattice.
    """
    position = (np.asarray(b, dtype=np.float64) - g.x0) / g.dx
    index = np.rint(position).astype(np.int64)
    if np.any(np.abs(position - index) > 1e-6):
        raise CoverageError("offset grid is not commensurate with the sampling lattice")
    return index


def stockwell_fft(g: Signal1D, psi: Window1D, b: np.ndarray, a: float) -> StockwellRow:
    """
    Fast one-dimensional Stockwell transform on an offset grid.

    The signal is zero padded by the essential radius of the scaled window so
    the circular correlation equals the linear one on the requested offsets.

    Args:
        g: Sampled function.
        psi: Window.
        b: Offsets lying on the sampling lattice of ``g``.
        a: Nonzero scale.

    Returns:
        StockwellRow: Values at the requested offsets.

    Raises:
        InvalidInput: If ``a == 0``.
        CoverageError: If the offsets are off the sampling lattice.
        NyquistError: If the window band at this scale exceeds the Nyquist frequency.
    """
    _require_scale(a)
    b = np.asarray(b, dtype=np.float64)
    q = offset_indices(g, b)
    lo, hi = psi.band
    reach = abs(a) * max(abs(1.0 + lo), abs(1.0 + hi))
    if reach > math.pi / g.dx * (1.0 + 1e-9):
        if psi.support is not None:
            raise NyquistError(f"band of {psi.label} at scale {a:g} reaches {reach:.3g} > {math.pi / g.dx:.3g}")
        logger.warning("Window band at scale %g clipped by the Nyquist frequency", a)

    pad = int(math.ceil(psi.essential_radius / (abs(a) * g.dx))) + 1
    span = max(g.values.size, int(q.max(initial=0)) + 1) - min(0, int(q.min(initial=0)))
    length = fft.next_fast_len(span + 2 * pad)
    spectrum = fft.fft(g.values, n=length)
    xi = 2.0 * math.pi * fft.fftfreq(length, d=g.dx)
    weight = np.conj(psi.spectrum(xi / a - 1.0))
    row = fft.ifft(spectrum * weight)[np.mod(q, length)]
    values = np.exp(-1j * a * b) * row / math.sqrt(2.0 * math.pi)
    return StockwellRow(float(a), b, values)
