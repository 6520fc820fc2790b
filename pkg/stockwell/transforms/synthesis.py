"""
Synthesis operator, reconstruction and the identity harnesses.

The synthesis of a coefficient volume is
``DS* Phi(x) = sum_ijk w_ijk Phi_ijk psi_{u_i, b_j, a_k}(x)`` with atoms
``psi_{u,b,a}(x) = |a| / (2 pi) * psi(a (x . u - b)) exp(i a x . u)``.

A brief overview of exported classes and their usage:
    g = synthesize(volume, eta, f)
        synthesis on the grid of f

    f_rec, report = reconstruct(f, psi, eta, axes)
        analysis with psi, synthesis with eta, division by C

    report = parseval_check(f, h, psi, eta, axes)
        (f, h) against (DS_psi f, DS_eta h) / C
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import fft, ndimage

from stockwell.config.config import settings
from stockwell.errors import CoverageError, InvalidInput
from stockwell.transforms.dst import dst_fourier
from stockwell.transforms.grids import (
    CoefficientAxes,
    CoefficientVolume,
    SignalGrid2D,
    inner_product_R2,
    inner_product_Y,
)
from stockwell.transforms.pool import map_ordered
from stockwell.transforms.reports import VerificationReport
from stockwell.transforms.windows import Window1D, admissibility_constant

logger = logging.getLogger(__name__)


def _scale_factors(axes: CoefficientAxes) -> np.ndarray:
    """Per-scale part of weight times atom amplitude, ``(|a| / 2 pi) |a|^(n-2) da dtheta``."""
    a = np.abs(axes.scales)
    return a / (2.0 * math.pi) ** (axes.n / 2) * a ** (axes.n - 2) * axes.scale_widths() * axes.angle_step


def _ray_profile(Phi: CoefficientVolume, psi: Window1D, i: int, p_min: float, p_max: float,
                 phase_step: float) -> tuple[np.ndarray, float, float] | None:
    """
    Profile ``R(p) = sum_k c_k exp(i a_k p) sum_j Phi_ijk db_j psi(a_k (p - b_j))`` on a fine lattice.

    Returns the samples, the first lattice point and the lattice step, or None
    when the angle carries no coefficients.
    """
    axes = Phi.axes
    offsets = axes.offsets
    b_min, db = float(offsets[0]), axes.offset_step
    active = [k for k in range(axes.scales.size) if np.any(Phi.values[i, :, k])]
    if not active:
        return None
    lo, hi = psi.band
    ends = {k: sorted((axes.scales[k] * (1.0 + lo), axes.scales[k] * (1.0 + hi))) for k in active}
    top = max(max(abs(e[0]), abs(e[1])) for e in ends.values())
    refine = max(1, int(math.ceil(db * top / phase_step)))
    dp = db / refine
    reach = psi.essential_radius / min(abs(axes.scales[k]) for k in active)
    q_lo = math.floor((min(b_min, p_min - reach) - b_min) / dp)
    q_hi = math.ceil((max(float(offsets[-1]), p_max + reach) - b_min) / dp)

    coarse_index = np.rint((offsets - b_min) / db).astype(np.int64)
    size = fft.next_fast_len(max(int(coarse_index.max()) + 1, math.ceil((q_hi - q_lo + 1) / refine)))
    length = refine * size
    xi = 2.0 * math.pi * fft.fftfreq(length, d=dp)

    factors = _scale_factors(axes)
    offset_weights = axes.offset_weights()
    spectrum = np.zeros(length, dtype=np.complex128)
    for k in active:
        a = float(axes.scales[k])
        coarse = np.zeros(size, dtype=np.complex128)
        np.add.at(coarse, coarse_index, Phi.values[i, :, k] * offset_weights * np.exp(1j * a * offsets))
        coarse_spectrum = fft.fft(coarse)
        index = np.nonzero((xi >= ends[k][0]) & (xi <= ends[k][1]))[0]
        spectrum[index] += (factors[k] / abs(a)) * psi.spectrum(xi[index] / a - 1.0) * coarse_spectrum[index % size]
    spectrum *= np.exp(2j * math.pi * np.arange(length) * q_lo / length)
    profile = fft.ifft(spectrum) / dp
    return profile, b_min + q_lo * dp, dp


def synthesize(Phi: CoefficientVolume, psi: Window1D, target: SignalGrid2D, threads: int | None = None,
               phase_step: float | None = None) -> SignalGrid2D:
    """
    Synthesis operator on the grid of ``target``.

    Per angle, the offset sums of all scales are collected into one ray
    profile by spectral convolution on a lattice that refines the offset grid
    until the phase advances by at most ``phase_step`` per sample. The profile
    is read back at ``x . u`` by quintic spline interpolation. Angle partials
    are summed in angle order.

    Args:
        Phi: Coefficient volume.
        psi: Synthesis window.
        target: Grid whose geometry receives the result; its values are ignored.
        threads: Worker threads, ``settings.THREADS`` when None.
        phase_step: Phase per lattice sample, ``settings.SYNTHESIS_PHASE_STEP`` when None.

    Returns:
        SignalGrid2D: ``DS* Phi`` on the target geometry.
    """
    axes = Phi.axes
    if axes.n != 2:
        raise InvalidInput(f"synthesis is implemented for n = 2 only, got n = {axes.n}")
    phase_step = settings.SYNTHESIS_PHASE_STEP if phase_step is None else phase_step
    X, Y = target.mesh()

    def angle(i: int) -> np.ndarray | None:
        theta = float(axes.angles[i])
        s = X * math.cos(theta) + Y * math.sin(theta)
        ray = _ray_profile(Phi, psi, i, float(s.min()), float(s.max()), phase_step)
        if ray is None:
            return None
        profile, p_start, dp = ray
        coordinates = ((s - p_start) / dp).reshape(1, -1)
        parts = []
        for component in (profile.real, profile.imag):
            coefficients = ndimage.spline_filter1d(component, order=5, mode="grid-wrap")
            parts.append(ndimage.map_coordinates(coefficients, coordinates, order=5, mode="grid-wrap",
                                                 prefilter=False))
        return (parts[0] + 1j * parts[1]).reshape(s.shape)

    total = np.zeros((target.ny, target.nx), dtype=np.complex128)
    for partial in map_ordered(angle, range(axes.angles.size), threads):
        if partial is not None:
            total += partial
    return target.with_values(total)


def synthesize_direct(Phi: CoefficientVolume, psi: Window1D, target: SignalGrid2D) -> SignalGrid2D:
    """Synthesis by summing every nonzero cell's atom, the brute-force reference."""
    axes = Phi.axes
    X, Y = target.mesh()
    total = np.zeros((target.ny, target.nx), dtype=np.complex128)
    for i, j, k in zip(*np.nonzero(Phi.values)):
        theta, b, a = axes.angles[i], axes.offsets[j], axes.scales[k]
        s = X * math.cos(theta) + Y * math.sin(theta)
        atom = abs(a) / (2.0 * math.pi) * psi(a * (s - b)) * np.exp(1j * a * s)
        total += Phi.weights[i, j, k] * Phi.values[i, j, k] * atom
    return target.with_values(total)


def reconstruct(f: SignalGrid2D, psi: Window1D, eta: Window1D, axes: CoefficientAxes,
                threads: int | None = None) -> tuple[SignalGrid2D, VerificationReport]:
    """
    Analyse with ``psi``, synthesise with ``eta`` and divide by ``C_{psi,eta}``.

    Args:
        f: Sampled signal.
        psi: Analysis window.
        eta: Reconstruction window.
        axes: Coefficient axes carrying both scale signs.
        threads: Worker threads.

    Returns:
        tuple: Reconstructed grid and a report whose residual is ``|f_rec - f| / |f|``.

    Raises:
        CoverageError: If the axes lack one of the scale signs.
        NotReconstructionPair: If ``C_{psi,eta}`` vanishes.
    """
    if not axes.has_both_signs:
        raise CoverageError("reconstruction needs positive and negative scales")
    constant = admissibility_constant(psi, eta, axes.n)
    volume = dst_fourier(f, psi, axes, threads=threads)
    rebuilt = synthesize(volume, eta, f, threads=threads)
    rebuilt = rebuilt.with_values(rebuilt.values / constant.value)

    norm = f.norm()
    gap = rebuilt.with_values(rebuilt.values - f.values).norm()
    report = VerificationReport.compare(
        "reconstruction", norm, rebuilt.norm(), grids=f"{f.summary()}; {axes.summary()}",
        constant=[constant.value.real, constant.value.imag],
    )
    report = report.model_copy(update={"residual": gap / norm if norm > 0 else gap})
    logger.info("Reconstruction residual %.3e", report.residual)
    return rebuilt, report


def parseval_check(f: SignalGrid2D, h: SignalGrid2D, psi: Window1D, eta: Window1D, axes: CoefficientAxes,
                   threads: int | None = None) -> VerificationReport:
    """
    Compare ``(f, h)`` with ``(DS_psi f, DS_eta h) / C_{psi,eta}``.

    Raises:
        NotReconstructionPair: If ``C_{psi,eta}`` vanishes.
    """
    constant = admissibility_constant(psi, eta, axes.n)
    lhs = inner_product_R2(f, h)
    rhs = inner_product_Y(dst_fourier(f, psi, axes, threads=threads),
                          dst_fourier(h, eta, axes, threads=threads)) / constant.value
    return VerificationReport.compare("parseval", lhs, rhs, grids=f"{f.summary()}; {axes.summary()}",
                                      constant=[constant.value.real, constant.value.imag],
                                      norms=f.norm() * h.norm())


def transpose_check(f: SignalGrid2D, psi: Window1D, Phi: CoefficientVolume,
                    threads: int | None = None) -> VerificationReport:
    """Compare ``sum f conj(DS*(conj Phi)) dx dy`` with ``sum w DS f Phi``."""
    conjugate = Phi.with_values(np.conj(Phi.values))
    lhs = inner_product_R2(f, synthesize(conjugate, psi, f, threads=threads))
    rhs = inner_product_Y(dst_fourier(f, psi, Phi.axes, threads=threads), conjugate)
    return VerificationReport.compare("transpose", lhs, rhs, grids=f"{f.summary()}; {Phi.summary()}")


def isometry_check(f: SignalGrid2D, psi: Window1D, axes: CoefficientAxes,
                   threads: int | None = None) -> VerificationReport:
    """Compare ``|DS_psi f|^2 / C_{psi,psi}`` with ``|f|^2``."""
    constant = admissibility_constant(psi, psi, axes.n)
    volume = dst_fourier(f, psi, axes, threads=threads)
    lhs = inner_product_Y(volume, volume) / constant.value
    rhs = inner_product_R2(f, f)
    return VerificationReport.compare("isometry", lhs, rhs, grids=f"{f.summary()}; {axes.summary()}",
                                      constant=[constant.value.real, constant.value.imag])
