"""
One-dimensional windows, their spectral tables and the admissibility calculus.

The Fourier convention is ``f^(xi) = int f(x) exp(-i x xi) dx`` with the
inverse carrying ``1 / (2 pi)``. A window stores a time table and a spectral
table on reciprocal uniform grids (``dx * dxi = 2 pi / N``) and, when it is
known in closed form, the spectrum itself.

A brief overview of exported classes and their usage:
    psi = freq_bump_window(1.0, 1.0)
        smooth one-sided spectral bump supported on (0, 2), S1-valid

    flag, defect = check_s1(psi)
        flatness of the spectrum at xi = -1

    result = admissibility_constant(psi, eta)
        C = (1/pi) int conj(psi^(xi-1)) eta^(xi-1) |xi|^-n dxi

    dpsi = derivative_window(psi, 1)
        spectrum multiplied by (i xi)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable

import numpy as np
from scipy import fft, ndimage
from scipy.integrate import trapezoid

from stockwell.config.config import settings
from stockwell.errors import CoverageError, InvalidInput, NotReconstructionPair
from stockwell.transforms.quadrature import adaptive_simpson

logger = logging.getLogger(__name__)

Spectrum = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Window1D:
    """
    Window with reciprocal time and spectral tables.

    Attributes:
        kind: Family name, one of ``bump``, ``gaussian``, ``box`` or ``custom``.
        center: Spectral center of the family (0 for the Gaussian).
        halfwidth: Spectral half width, the time scale sigma for the Gaussian.
        dx: Time step; samples sit at ``(m - N/2) * dx``.
        time_values: Complex samples of the window.
        dxi: Spectral step; samples sit at ``(l - N/2) * dxi``.
        spectrum_values: Complex samples of the spectrum.
        s1_flag: Whether the spectrum is flat zero near ``xi = -1``.
        s1_defect: Largest spectral modulus within the inspected neighbourhood.
        support: Closed spectral support when known.
        derivative: Order k of the spectral factor ``(i xi)^k`` applied.
        moment: Order j of the time factor ``x^j`` applied.
        spectrum_fn: Closed form spectrum, used instead of table interpolation.
    """
    kind: str
    center: float
    halfwidth: float
    dx: float
    time_values: np.ndarray = field(repr=False)
    dxi: float
    spectrum_values: np.ndarray = field(repr=False)
    s1_flag: bool
    s1_defect: float
    support: tuple[float, float] | None = None
    derivative: int = 0
    moment: int = 0
    spectrum_fn: Spectrum | None = field(default=None, repr=False)

    @property
    def samples(self) -> int:
        return self.time_values.size

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.samples) - self.samples // 2) * self.dx

    @property
    def xi(self) -> np.ndarray:
        return (np.arange(self.samples) - self.samples // 2) * self.dxi

    @property
    def spectral_range(self) -> tuple[float, float]:
        return float(self.xi[0]), float(self.xi[-1])

    @cached_property
    def _time_coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        return _spline_coefficients(self.time_values)

    @cached_property
    def _spectrum_coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        return _spline_coefficients(self.spectrum_values)

    def __call__(self, t: np.ndarray) -> np.ndarray:
        """Cubic spline evaluation of the time table, zero outside the table."""
        t = np.asarray(t, dtype=np.float64)
        index = t / self.dx + self.samples // 2
        return _spline_eval(self._time_coefficients, index)

    def spectrum(self, xi: np.ndarray) -> np.ndarray:
        """Spectrum at arbitrary frequencies, closed form when available."""
        xi = np.asarray(xi, dtype=np.float64)
        if self.spectrum_fn is not None:
            return np.asarray(self.spectrum_fn(xi), dtype=np.complex128)
        index = xi / self.dxi + self.samples // 2
        return _spline_eval(self._spectrum_coefficients, index)

    @cached_property
    def peak(self) -> float:
        return float(np.abs(self.spectrum_values).max(initial=0.0))

    @cached_property
    def essential_radius(self) -> float:
        """Radius outside which the time table stays below ``WINDOW_TAIL`` of its peak."""
        magnitude = np.abs(self.time_values)
        top = magnitude.max(initial=0.0)
        if top == 0.0:
            return 0.0
        inside = np.nonzero(magnitude > settings.WINDOW_TAIL * top)[0]
        radius = float(np.abs(self.x[inside]).max()) + self.dx
        if radius > 0.95 * self.x[-1]:
            logger.warning("Window %s reaches the end of its time table (radius %.1f)", self.label, radius)
        return radius

    @cached_property
    def band(self) -> tuple[float, float]:
        """Interval outside which the spectrum is negligible (exactly zero for compact supports)."""
        if self.support is not None:
            return self.support
        magnitude = np.abs(self.spectrum_values)
        if self.peak == 0.0:
            return 0.0, 0.0
        inside = np.nonzero(magnitude > settings.WINDOW_TAIL * self.peak)[0]
        xi = self.xi
        return float(xi[inside[0]] - self.dxi), float(xi[inside[-1]] + self.dxi)

    @property
    def label(self) -> str:
        text = f"{self.kind}(c={self.center:g}, h={self.halfwidth:g})"
        if self.derivative:
            text += f"'{self.derivative}"
        if self.moment:
            text += f"*x^{self.moment}"
        return text

    def header(self) -> dict:
        return {
            "kind": self.kind,
            "center": self.center,
            "halfwidth": self.halfwidth,
            "derivative": self.derivative,
            "moment": self.moment,
            "support": list(self.support) if self.support is not None else None,
            "s1_flag": self.s1_flag,
            "s1_defect": self.s1_defect,
            "time_grid": {"x0": float(self.x[0]), "dx": self.dx, "count": self.samples},
            "spectral_grid": {"xi0": float(self.xi[0]), "dxi": self.dxi, "count": self.samples},
        }


@dataclass(frozen=True)
class AdmissibilityResult:
    """
    Admissibility constant of a window pair.

    Attributes:
        value: The constant C.
        abs_error_estimate: Quadrature error plus a bound on the defect contribution.
        n: Dimension used in the weight ``|xi|^-n``.
        warnings: Messages about windows that are not S1-valid.
    """
    value: complex
    abs_error_estimate: float
    n: int
    warnings: tuple[str, ...] = ()


def _spline_coefficients(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return (
        ndimage.spline_filter1d(values.real, order=3, mode="grid-constant"),
        ndimage.spline_filter1d(values.imag, order=3, mode="grid-constant"),
    )


def _spline_eval(coefficients: tuple[np.ndarray, np.ndarray], index: np.ndarray) -> np.ndarray:
    shape = index.shape
    coordinates = index.reshape(1, -1)
    real, imag = (ndimage.map_coordinates(part, coordinates, order=3, mode="grid-constant", cval=0.0, prefilter=False)
                  for part in coefficients)
    return (real + 1j * imag).reshape(shape)


def _table_steps(samples: int | None, nyquist: float | None) -> tuple[int, float, float]:
    samples = settings.WINDOW_SAMPLES if samples is None else int(samples)
    nyquist = settings.WINDOW_NYQUIST if nyquist is None else float(nyquist)
    if samples % 2:
        raise InvalidInput(f"window tables need an even sample count, got {samples}")
    if nyquist < 8.0:
        raise CoverageError(f"spectral table must cover [-8, 8], got half width {nyquist}")
    dx = math.pi / nyquist
    return samples, dx, 2.0 * math.pi / (samples * dx)


def synthesize_time(spectrum_values: np.ndarray, dx: float) -> np.ndarray:
    """Time samples ``(1/2pi) sum psi^ exp(i x xi) dxi`` of a centred spectral table."""
    return fft.fftshift(fft.ifft(fft.ifftshift(spectrum_values))) / dx


def analyze_time(time_values: np.ndarray, dx: float) -> np.ndarray:
    """Spectral samples ``sum psi exp(-i x xi) dx`` of a centred time table."""
    return dx * fft.fftshift(fft.fft(fft.ifftshift(time_values)))


def _s1_defect(xi: np.ndarray, spectrum_values: np.ndarray, tol: float, delta: float) -> tuple[bool, float]:
    if xi[0] > -1.0 - delta or xi[-1] < -1.0 + delta:
        raise CoverageError(f"spectral table [{xi[0]:g}, {xi[-1]:g}] does not cover [-1-{delta:g}, -1+{delta:g}]")
    magnitude = np.abs(spectrum_values)
    near = np.abs(xi + 1.0) <= delta
    defect = float(magnitude[near].max(initial=0.0))
    peak = float(magnitude.max(initial=0.0))
    return bool(peak > 0.0 and defect <= tol * peak), defect


def spectral_window(
    fn: Spectrum,
    kind: str = "custom",
    center: float = 0.0,
    halfwidth: float = 0.0,
    support: tuple[float, float] | None = None,
    samples: int | None = None,
    nyquist: float | None = None,
) -> Window1D:
    """
    Build a window from a vectorised spectrum.

    Args:
        fn: Spectrum as a function of frequency.
        kind: Family name stored with the window.
        center: Spectral center of the family.
        halfwidth: Spectral half width of the family.
        support: Closed spectral support when known.
        samples: Table length, ``settings.WINDOW_SAMPLES`` when None.
        nyquist: Half width of the spectral table, ``settings.WINDOW_NYQUIST`` when None.

    Returns:
        Window1D: Window with both tables filled and the S1 test evaluated.
    """
    samples, dx, dxi = _table_steps(samples, nyquist)
    xi = (np.arange(samples) - samples // 2) * dxi
    spectrum_values = np.asarray(fn(xi), dtype=np.complex128)
    time_values = synthesize_time(spectrum_values, dx)
    flag, defect = _s1_defect(xi, spectrum_values, settings.S1_TOLERANCE, settings.S1_DELTA)
    window = Window1D(kind, float(center), float(halfwidth), dx, time_values, dxi, spectrum_values,
                      flag, defect, support, spectrum_fn=fn)
    logger.debug("Built window %s, S1 %s (defect %.3g)", window.label, flag, defect)
    return window


def bump_spectrum(center: float, halfwidth: float) -> Spectrum:
    def fn(xi: np.ndarray) -> np.ndarray:
        t = (np.asarray(xi, dtype=np.float64) - center) / halfwidth
        inside = np.abs(t) < 1.0
        out = np.zeros(t.shape, dtype=np.complex128)
        out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
        return out
    return fn


def gaussian_spectrum(sigma: float) -> Spectrum:
    def fn(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=np.float64)
        return (sigma * math.sqrt(2.0 * math.pi) * np.exp(-0.5 * (sigma * xi) ** 2)).astype(np.complex128)
    return fn


def box_spectrum(lo: float, hi: float) -> Spectrum:
    def fn(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=np.float64)
        return ((xi >= lo) & (xi <= hi)).astype(np.complex128)
    return fn


def freq_bump_window(center: float, halfwidth: float, samples: int | None = None,
                     nyquist: float | None = None) -> Window1D:
    """
    Window whose spectrum is the smooth bump ``exp(-1 / (1 - ((xi - c)/h)^2))`` on ``|xi - c| < h``.

    Args:
        center: Spectral center c.
        halfwidth: Spectral half width h.
        samples: Table length, ``settings.WINDOW_SAMPLES`` when None.
        nyquist: Half width of the spectral table, ``settings.WINDOW_NYQUIST`` when None.

    Returns:
        Window1D: S1-valid exactly when ``-1`` lies outside ``[c - h, c + h]``.

    Raises:
        InvalidInput: If ``halfwidth <= 0``.
    """
    if not halfwidth > 0:
        raise InvalidInput(f"bump half width must be positive, got {halfwidth}")
    return spectral_window(bump_spectrum(center, halfwidth), "bump", center, halfwidth,
                           (center - halfwidth, center + halfwidth), samples, nyquist)


def gaussian_window(sigma: float = 1.0, samples: int | None = None, nyquist: float | None = None) -> Window1D:
    """Gaussian ``exp(-x^2 / (2 sigma^2))``; its spectrum does not vanish at -1."""
    if not sigma > 0:
        raise InvalidInput(f"Gaussian width must be positive, got {sigma}")
    return spectral_window(gaussian_spectrum(sigma), "gaussian", 0.0, sigma, None, samples, nyquist)


def box_window(lo: float, hi: float, samples: int | None = None, nyquist: float | None = None) -> Window1D:
    """Window whose spectrum is the indicator of ``[lo, hi]``."""
    if not hi > lo:
        raise InvalidInput(f"box interval [{lo}, {hi}] is empty")
    return spectral_window(box_spectrum(lo, hi), "box", 0.5 * (lo + hi), 0.5 * (hi - lo), (lo, hi), samples, nyquist)


def family_spectrum(kind: str, center: float, halfwidth: float) -> Spectrum | None:
    """Closed form spectrum of a named family, None for custom windows."""
    if kind == "bump":
        return bump_spectrum(center, halfwidth)
    if kind == "gaussian":
        return gaussian_spectrum(halfwidth)
    if kind == "box":
        return box_spectrum(center - halfwidth, center + halfwidth)
    return None


def check_s1(w: Window1D, tol: float | None = None, delta: float | None = None) -> tuple[bool, float]:
    """
    Test the flatness of the spectrum near ``xi = -1``.

    Args:
        w: Window to test.
        tol: Relative tolerance, ``settings.S1_TOLERANCE`` when None.
        delta: Half width of the neighbourhood, ``settings.S1_DELTA`` when None.

    Returns:
        tuple: ``(flag, defect)``; a zero window is never valid.

    Raises:
        CoverageError: If the spectral table misses the neighbourhood.
    """
    tol = settings.S1_TOLERANCE if tol is None else tol
    delta = settings.S1_DELTA if delta is None else delta
    return _s1_defect(w.xi, w.spectrum_values, tol, delta)


def moments(w: Window1D, k_max: int) -> list[complex]:
    """
    Moments ``int x^k exp(ix) psi(x) dx`` for ``k = 0 .. k_max`` by the trapezoid rule.

    They vanish for S1 windows since ``exp(ix) psi(x)`` then has a spectrum that
    is flat at the origin.
    """
    x = w.x
    base = np.exp(1j * x) * w.time_values
    return [complex(trapezoid(x ** k * base, dx=w.dx)) for k in range(k_max + 1)]


def moment_scales(w: Window1D, k_max: int) -> list[float]:
    """Absolute moments ``int |x|^k |psi(x)| dx``, the natural scale of each moment."""
    x = np.abs(w.x)
    magnitude = np.abs(w.time_values)
    return [float(trapezoid(x ** k * magnitude, dx=w.dx)) for k in range(k_max + 1)]


def derivative_window(psi: Window1D, k: int) -> Window1D:
    """
    Window of the k-th derivative: spectrum multiplied by ``(i xi)^k``.

    Raises:
        InvalidInput: If ``k < 0``.
    """
    if k < 0:
        raise InvalidInput(f"derivative order must be nonnegative, got {k}")
    if k == 0:
        return psi
    factor = (1j * psi.xi) ** k
    spectrum_values = psi.spectrum_values * factor
    fn = None
    if psi.spectrum_fn is not None:
        base = psi.spectrum_fn
        fn = lambda xi: (1j * np.asarray(xi, dtype=np.float64)) ** k * base(xi)
    flag, defect = _s1_defect(psi.xi, spectrum_values, settings.S1_TOLERANCE, settings.S1_DELTA)
    return replace(
        psi,
        time_values=synthesize_time(spectrum_values, psi.dx),
        spectrum_values=spectrum_values,
        s1_flag=flag,
        s1_defect=defect,
        derivative=psi.derivative + k,
        spectrum_fn=fn,
    )


def moment_window(psi: Window1D, j: int) -> Window1D:
    """
    Window ``x^j psi(x)``; its spectrum ``i^j d^j psi^ / dxi^j`` keeps the support of ``psi^``.
    """
    if j < 0:
        raise InvalidInput(f"moment order must be nonnegative, got {j}")
    if j == 0:
        return psi
    time_values = psi.time_values * psi.x ** j
    spectrum_values = analyze_time(time_values, psi.dx)
    flag, defect = _s1_defect(psi.xi, spectrum_values, settings.S1_TOLERANCE, settings.S1_DELTA)
    return replace(psi, time_values=time_values, spectrum_values=spectrum_values, s1_flag=flag,
                   s1_defect=defect, moment=psi.moment + j, spectrum_fn=None)


def _spectrum_at(w: Window1D, xi: float) -> complex:
    return complex(w.spectrum(np.array([xi]))[0])


def admissibility_constant(
    psi: Window1D,
    eta: Window1D,
    n: int = 2,
    eps: float | None = None,
    tol: float | None = None,
) -> AdmissibilityResult:
    """
    Admissibility constant ``(1/pi) int conj(psi^(xi - 1)) eta^(xi - 1) |xi|^-n dxi``.

    The integral runs over the joint spectral support shifted by one, with
    ``|xi| < eps`` excluded. Each half line is integrated in the variable
    ``t = ln |xi|`` by adaptive Simpson, where the weight becomes the smooth
    factor ``exp((1 - n) t)``.

    Args:
        psi: Analysis window.
        eta: Reconstruction window.
        n: Dimension.
        eps: Excluded half width around the origin, ``settings.ADMISSIBILITY_EPS`` when None.
        tol: Relative tolerance, ``settings.ADMISSIBILITY_TOL`` when None.

    Returns:
        AdmissibilityResult: Constant, error estimate and S1 warnings.

    Raises:
        NotReconstructionPair: If ``|C|`` is below ``settings.ADMISSIBILITY_MIN``.
    """
    eps = settings.ADMISSIBILITY_EPS if eps is None else eps
    tol = settings.ADMISSIBILITY_TOL if tol is None else tol

    warnings = []
    for name, window in (("analysis", psi), ("reconstruction", eta)):
        if not window.s1_flag:
            message = f"{name} window {window.label} is not S1-valid (defect {window.s1_defect:.3g})"
            logger.warning(message)
            warnings.append(message)

    lo = max(psi.support[0] if psi.support else psi.spectral_range[0],
             eta.support[0] if eta.support else eta.spectral_range[0]) + 1.0
    hi = min(psi.support[1] if psi.support else psi.spectral_range[1],
             eta.support[1] if eta.support else eta.spectral_range[1]) + 1.0

    def integrand(sign: float, a: float, b: float) -> Callable[[float], complex]:
        def f(t: float) -> complex:
            xi = min(max(sign * math.exp(t), a), b)
            product = _spectrum_at(psi, xi - 1.0).conjugate() * _spectrum_at(eta, xi - 1.0)
            return product * math.exp((1 - n) * t) / math.pi
        return f

    pieces = []
    if lo < -eps:
        a, b = lo, min(hi, -eps)
        pieces.append((integrand(-1.0, a, b), math.log(-b), math.log(-a)))
    if hi > eps:
        a, b = max(lo, eps), hi
        pieces.append((integrand(1.0, a, b), math.log(a), math.log(b)))

    value, error = 0j, 0.0
    for f, t0, t1 in pieces:
        # coarse pass sets the scale of the tolerance
        rough, _ = adaptive_simpson(f, t0, t1, tol=math.inf, min_depth=3, max_depth=3)
        part, part_error = adaptive_simpson(f, t0, t1, tol=tol * max(abs(rough), 1e-3))
        value += part
        error += part_error

    if psi.s1_defect > 0 and eta.s1_defect > 0:
        error += psi.s1_defect * eta.s1_defect * 2.0 * eps ** (1 - n) / ((n - 1) * math.pi)

    if abs(value) < settings.ADMISSIBILITY_MIN:
        raise NotReconstructionPair(f"|C| = {abs(value):.3g} for {psi.label} and {eta.label}")
    logger.info("Admissibility constant of %s, %s: %s +- %.2g", psi.label, eta.label, value, error)
    return AdmissibilityResult(complex(value), float(error), n, tuple(warnings))
