"""
Forward directional Stockwell transform.

``DS f(u, b, a) = |a| / (2 pi) * int f(x) conj(psi(a (x . u - b))) exp(-i a x . u) dx``

Three independent routes compute it:

* ``direct``: quadrature of the definition, the oracle.
* ``fourier``: per direction, the spectral form
  ``(2 pi)^-2 exp(-i a b) int f^(xi u) conj(psi^(xi / a - 1)) exp(i xi b) dxi``
  evaluated by one inverse FFT per scale.
* ``radon``: per direction, the Radon projection followed by a one-dimensional
  Stockwell transform, times ``(2 pi)^(-1/2)``.

A brief overview of exported classes and their usage:
    volume = dst_fourier(f, psi, axes)
        coefficient volume over all angles, offsets and scales

    rep = DistributionRep(((1, 0), f),)
        f = sum of derivatives of sampled functions

    volume = dst_distribution(rep, psi, axes)
        transform of the distribution through the derivative windows
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import fft
from scipy.special import comb

from stockwell.config.config import settings
from stockwell.errors import DerivativeOrderError, GridMismatch, InvalidInput, NyquistError
from stockwell.transforms.grids import CoefficientAxes, CoefficientVolume, SignalGrid2D
from stockwell.transforms.pool import map_ordered
from stockwell.transforms.radon import PolarSpectrum, RadonProjector, fourier_slice
from stockwell.transforms.reports import VerificationReport
from stockwell.transforms.stockwell1d import Signal1D, stockwell_fft
from stockwell.transforms.windows import Window1D, derivative_window

logger = logging.getLogger(__name__)

Route = Literal["direct", "fourier", "radon"]


def _require_plane(axes: CoefficientAxes) -> None:
    if axes.n != 2:
        raise InvalidInput(f"transforms are implemented for n = 2 only, got n = {axes.n}")


def _warn_s1(psi: Window1D) -> None:
    if not psi.s1_flag:
        logger.warning("Window %s is not S1-valid (defect %.3g)", psi.label, psi.s1_defect)


def _kernel_band(psi: Window1D, a: float, nyquist: float) -> tuple[float, float]:
    """Frequencies ``xi`` where ``psi^(xi / a - 1)`` is not negligible, checked against ``nyquist``."""
    lo, hi = psi.band
    ends = sorted((a * (1.0 + lo), a * (1.0 + hi)))
    if max(abs(ends[0]), abs(ends[1])) > nyquist * (1.0 + 1e-9):
        if psi.support is not None:
            raise NyquistError(
                f"band of {psi.label} at scale {a:g} reaches {max(map(abs, ends)):.4g} > {nyquist:.4g}"
            )
        logger.warning("Band of %s at scale %g clipped at the Nyquist frequency", psi.label, a)
        ends = [max(ends[0], -nyquist), min(ends[1], nyquist)]
    return ends[0], ends[1]


def dst_direct(f: SignalGrid2D, psi: Window1D, theta: float, b: float, a: float) -> complex:
    """
    Transform at one cell by direct summation over the signal grid.

    Args:
        f: Sampled signal.
        psi: Window, read by cubic spline interpolation of its time table.
        theta: Direction angle of ``u``.
        b: Offset.
        a: Nonzero scale.

    Returns:
        complex: ``DS f(u, b, a)``.

    Raises:
        InvalidInput: If ``a == 0``.
    """
    if a == 0:
        raise InvalidInput("scale a = 0 is excluded")
    X, Y = f.mesh()
    s = X * math.cos(theta) + Y * math.sin(theta)
    kernel = np.conj(psi(a * (s - b))) * np.exp(-1j * a * s)
    return complex(abs(a) / (2.0 * math.pi) * np.sum(f.values * kernel) * f.cell_area)


def dst_direct_cells(f: SignalGrid2D, psi: Window1D, axes: CoefficientAxes, cells: np.ndarray) -> np.ndarray:
    """Direct transform at the ``(angle, offset, scale)`` index triples in ``cells``."""
    cells = np.asarray(cells, dtype=np.int64).reshape(-1, 3)
    X, Y = f.mesh()
    out = np.empty(cells.shape[0], dtype=np.complex128)
    for i in np.unique(cells[:, 0]):
        theta = axes.angles[i]
        s = X * math.cos(theta) + Y * math.sin(theta)
        for row in np.nonzero(cells[:, 0] == i)[0]:
            b = axes.offsets[cells[row, 1]]
            a = axes.scales[cells[row, 2]]
            kernel = np.conj(psi(a * (s - b))) * np.exp(-1j * a * s)
            out[row] = abs(a) / (2.0 * math.pi) * np.sum(f.values * kernel) * f.cell_area
    return out


def dst_direct_volume(f: SignalGrid2D, psi: Window1D, axes: CoefficientAxes,
                      threads: int | None = None) -> CoefficientVolume:
    """Whole coefficient volume by direct summation; meant for small axes."""
    _require_plane(axes)
    X, Y = f.mesh()
    flat = f.values.ravel()

    def angle(i: int) -> np.ndarray:
        theta = axes.angles[i]
        s = (X * math.cos(theta) + Y * math.sin(theta)).ravel()
        block = np.empty(axes.shape[1:], dtype=np.complex128)
        for k, a in enumerate(axes.scales):
            modulated = flat * np.exp(-1j * a * s)
            for j, b in enumerate(axes.offsets):
                block[j, k] = np.vdot(psi(a * (s - b)), modulated)
            block[:, k] *= abs(a) / (2.0 * math.pi) * f.cell_area
        return block

    values = np.stack(map_ordered(angle, range(axes.angles.size), threads))
    return CoefficientVolume(axes, values)


def dst_fourier(f: SignalGrid2D, psi: Window1D, axes: CoefficientAxes, mode: str | None = None,
                threads: int | None = None) -> CoefficientVolume:
    """
    Coefficient volume through the spectral form of the transform.

    For every angle and scale the slice ``f^(xi u)`` is evaluated only where
    ``psi^(xi / a - 1)`` is not negligible, on the frequency lattice of an
    offset grid refined by an integer factor until the kernel band is below
    its Nyquist frequency. One inverse FFT then yields the whole offset row.

    Args:
        f: Sampled signal.
        psi: Analysis window, S1-valid recommended.
        axes: Coefficient axes with n = 2.
        mode: Slice evaluation mode, ``settings.SLICE_MODE`` when None.
        threads: Worker threads, ``settings.THREADS`` when None.

    Returns:
        CoefficientVolume: ``DS f`` on the axes.

    Raises:
        NyquistError: If a compact kernel band exceeds the Nyquist frequency of ``f``.
    """
    _require_plane(axes)
    _warn_s1(psi)
    mode = settings.SLICE_MODE if mode is None else mode
    spectrum = PolarSpectrum(f).prepare() if mode == "fast" else None
    bands = [_kernel_band(psi, a, f.nyquist) for a in axes.scales]
    offsets = axes.offsets
    b_min, b_max, db = float(offsets[0]), float(offsets[-1]), axes.offset_step

    def angle(i: int) -> np.ndarray:
        theta = float(axes.angles[i])
        p_min, p_max = f.projection_range(theta)
        block = np.zeros(axes.shape[1:], dtype=np.complex128)
        for k, a in enumerate(axes.scales):
            lo, hi = bands[k]
            if hi <= lo:
                continue
            refine = int(math.floor(db * max(abs(lo), abs(hi)) / math.pi)) + 1
            dp = db / refine
            reach = psi.essential_radius / abs(a)
            q_lo = math.floor((min(b_min, p_min - reach) - b_min) / dp)
            q_hi = math.ceil((max(b_max, p_max + reach) - b_min) / dp)
            length = fft.next_fast_len(q_hi - q_lo + 1)
            p_start = b_min + q_lo * dp
            xi = 2.0 * math.pi * fft.fftfreq(length, d=dp)
            inside = (xi >= lo) & (xi <= hi)
            if not inside.any():
                continue
            band = xi[inside]
            weight = np.conj(psi.spectrum(band / a - 1.0))
            slice_values = fourier_slice(f, theta, band, mode, spectrum).values
            spectrum_row = np.zeros(length, dtype=np.complex128)
            spectrum_row[inside] = slice_values * weight * np.exp(1j * band * p_start)
            row = fft.ifft(spectrum_row)
            index = np.rint((offsets - b_min) / dp).astype(np.int64) - q_lo
            block[:, k] = np.exp(-1j * a * offsets) * row[index] / (2.0 * math.pi * dp)
        return block

    values = np.stack(map_ordered(angle, range(axes.angles.size), threads))
    logger.info("Fourier route: %s", axes.summary())
    return CoefficientVolume(axes, values)


def dst_radon(f: SignalGrid2D, psi: Window1D, axes: CoefficientAxes, order: int | None = None,
              threads: int | None = None) -> CoefficientVolume:
    """
    Coefficient volume through Radon projections and one-dimensional transforms.

    Each projection is sampled on a refinement of the offset grid fine enough
    for both the signal and the widest kernel band, so the offsets fall on its
    lattice.

    Args:
        f: Sampled signal.
        psi: Analysis window.
        axes: Coefficient axes with n = 2.
        order: Spline order of the line sampling, ``settings.RADON_ROUTE_ORDER`` when None.
        threads: Worker threads, ``settings.THREADS`` when None.

    Returns:
        CoefficientVolume: ``DS f`` on the axes.
    """
    _require_plane(axes)
    _warn_s1(psi)
    bands = [_kernel_band(psi, a, f.nyquist) for a in axes.scales]
    top = max(max(abs(lo), abs(hi)) for lo, hi in bands)
    offsets = axes.offsets
    b_min, db = float(offsets[0]), axes.offset_step
    refine = max(int(math.floor(db * top / math.pi)) + 1, int(math.ceil(db / min(f.dx, f.dy) - 1e-9)))
    dp = db / refine
    projector = RadonProjector(f, settings.RADON_ROUTE_ORDER if order is None else order)

    def angle(i: int) -> np.ndarray:
        theta = float(axes.angles[i])
        p_min, p_max = f.projection_range(theta)
        q_lo = math.floor((p_min - b_min) / dp) - 1
        q_hi = math.ceil((p_max - b_min) / dp) + 1
        p = b_min + np.arange(q_lo, q_hi + 1) * dp
        projection = projector.project(theta, p)
        g = Signal1D(projection.p0, dp, projection.values)
        block = np.empty(axes.shape[1:], dtype=np.complex128)
        for k, a in enumerate(axes.scales):
            block[:, k] = stockwell_fft(g, psi, offsets, float(a)).values / math.sqrt(2.0 * math.pi)
        return block

    values = np.stack(map_ordered(angle, range(axes.angles.size), threads))
    logger.info("Radon route: %s", axes.summary())
    return CoefficientVolume(axes, values)


def transform(f: SignalGrid2D, psi: Window1D, axes: CoefficientAxes, route: Route = "fourier",
              threads: int | None = None) -> CoefficientVolume:
    """Dispatch to one of the three routes."""
    if route == "fourier":
        return dst_fourier(f, psi, axes, threads=threads)
    if route == "radon":
        return dst_radon(f, psi, axes, threads=threads)
    if route == "direct":
        return dst_direct_volume(f, psi, axes, threads=threads)
    raise InvalidInput(f"unknown route {route!r}")


@dataclass(frozen=True)
class DistributionRep:
    """
    Distribution written as ``sum_j d^alpha_j f_j``.

    Attributes:
        terms: Pairs of a multi-index ``(alpha_1, alpha_2)`` and a sampled function.
    """
    terms: tuple[tuple[tuple[int, int], SignalGrid2D], ...] = field(default=())

    def __post_init__(self):
        terms = tuple((tuple(int(v) for v in alpha), grid) for alpha, grid in self.terms)
        if not terms:
            raise InvalidInput("a distribution needs at least one term")
        for alpha, grid in terms:
            if len(alpha) != 2 or min(alpha) < 0:
                raise InvalidInput(f"multi-index {alpha} must have two nonnegative entries")
            if not grid.same_geometry(terms[0][1]):
                raise GridMismatch("all terms of a distribution must share one grid")
        object.__setattr__(self, "terms", terms)

    @property
    def geometry(self) -> SignalGrid2D:
        return self.terms[0][1]


def dst_distribution(rep: DistributionRep, psi: Window1D, axes: CoefficientAxes,
                     mode: str | None = None, threads: int | None = None) -> CoefficientVolume:
    """
    Transform of ``sum_j d^alpha_j f_j`` without differentiating the samples.

    Each term uses
    ``DS(d^alpha f) = (-1)^|alpha| (a u)^alpha sum_{k <= alpha} C(alpha, k) (-i)^|alpha - k| DS_{psi^(|k|)} f``
    where ``psi^(m)`` is the m-th derivative window.

    Raises:
        DerivativeOrderError: If a term exceeds ``settings.DERIVATIVE_CAP``.
    """
    _require_plane(axes)
    _warn_s1(psi)
    cap = settings.DERIVATIVE_CAP
    for alpha, _ in rep.terms:
        if sum(alpha) > cap:
            raise DerivativeOrderError(f"|alpha| = {sum(alpha)} exceeds the cap {cap}")

    u1 = np.cos(axes.angles)[:, None, None]
    u2 = np.sin(axes.angles)[:, None, None]
    a = axes.scales[None, None, :]
    total = np.zeros(axes.shape, dtype=np.complex128)
    for alpha, f in rep.terms:
        order = sum(alpha)
        cache: dict[int, np.ndarray] = {}
        combined = np.zeros(axes.shape, dtype=np.complex128)
        for k1, k2 in itertools.product(range(alpha[0] + 1), range(alpha[1] + 1)):
            level = k1 + k2
            if level not in cache:
                cache[level] = dst_fourier(f, derivative_window(psi, level), axes, mode, threads).values
            weight = comb(alpha[0], k1, exact=True) * comb(alpha[1], k2, exact=True) * (-1j) ** (order - level)
            combined += weight * cache[level]
        factor = (-1) ** order * a ** order * u1 ** alpha[0] * u2 ** alpha[1]
        total += factor * combined
    return CoefficientVolume(axes, total)


@dataclass(frozen=True)
class ProbeResult:
    """
    Cross-check of a volume against the direct route on random cells.

    Attributes:
        cells: Probed ``(angle, offset, scale)`` indices.
        fast: Values of the volume at the cells.
        direct: Direct quadrature at the cells.
        max_error: Largest deviation relative to the volume peak.
    """
    cells: np.ndarray
    fast: np.ndarray
    direct: np.ndarray
    max_error: float


def probe_cells(volume: CoefficientVolume, f: SignalGrid2D, psi: Window1D, count: int,
                seed: int | None = None) -> ProbeResult:
    """Compare ``count`` seeded random cells of ``volume`` with ``dst_direct``."""
    seed = settings.PROBE_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    size = volume.values.size
    flat = np.sort(rng.choice(size, size=min(count, size), replace=False))
    cells = np.stack(np.unravel_index(flat, volume.axes.shape), axis=1)
    fast = volume.values.ravel()[flat]
    direct = dst_direct_cells(f, psi, volume.axes, cells)
    scale = max(volume.peak, float(np.abs(direct).max(initial=0.0)))
    error = float(np.abs(fast - direct).max(initial=0.0) / scale) if scale > 0 else 0.0
    logger.info("Probed %d cells, max relative error %.3e", cells.shape[0], error)
    return ProbeResult(cells, fast, direct, error)


def relative_rms(left: np.ndarray, right: np.ndarray) -> float:
    scale = np.linalg.norm(right)
    gap = np.linalg.norm(np.asarray(left) - np.asarray(right))
    return float(gap / scale) if scale > 0 else float(gap)


def compare_routes(f: SignalGrid2D, psi: Window1D, axes: CoefficientAxes,
                   threads: int | None = None) -> VerificationReport:
    """Relative RMS between the fourier and the radon route."""
    fourier = dst_fourier(f, psi, axes, threads=threads)
    radon = dst_radon(f, psi, axes, threads=threads)
    gap = relative_rms(radon.values, fourier.values)
    lhs = complex(np.linalg.norm(radon.values))
    rhs = complex(np.linalg.norm(fourier.values))
    report = VerificationReport.compare("routes", lhs, rhs, grids=f"{f.summary()}; {axes.summary()}")
    return report.model_copy(update={"residual": gap})
