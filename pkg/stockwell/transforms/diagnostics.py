"""
Seminorm estimates of sampled signals and coefficient volumes.

All values are suprema over finite grids, so they are lower bounds of the
quantities they estimate. Each estimate carries the change observed when the
same quantity is evaluated on a grid coarsened by two, which tells how far the
finite differences are from converged.

A brief overview of exported classes and their usage:
    est = seminorm_rho_m(phi, 2)
        sup (1 + |x|)^m max |d^alpha phi| over |alpha| <= m

    est = seminorm_Y(volume, s, r, l, m, k)
        weighted sup of derivatives of a coefficient volume

    est = seminorm_dot(phi, N, q, k)
        weighted sup of derivatives of the spectrum in polar coordinates

    report = decay_report(volume)
        seminorm_Y over (s, r) in {0, 1, 2}^2 on the full and an inner domain
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

from stockwell.config.config import settings
from stockwell.errors import DerivativeOrderError
from stockwell.transforms.grids import CoefficientAxes, CoefficientVolume, SignalGrid2D
from stockwell.transforms.pool import map_ordered
from stockwell.transforms.radon import PolarSpectrum, fourier_slice

logger = logging.getLogger(__name__)

RHO_ORDER_CAP = 4
SCALE_ORDER_CAP = 2
OFFSET_ORDER_CAP = 2
ANGLE_ORDER_CAP = 1
RADIAL_ORDER_CAP = 2


class SeminormEstimate(BaseModel):
    """
    Finite-grid estimate of a seminorm.

    Attributes:
        family: ``rho`` for signals, ``Y`` for coefficient volumes, ``dot`` for spectra.
        indices: Orders and weights the estimate was taken with.
        value: Supremum over the sampling grid.
        refinement_delta: Relative change against the grid coarsened by two,
            None when the grid is too small to coarsen.
        grid: Summary of the sampling.
    """
    family: Literal["rho", "Y", "dot"]
    indices: dict[str, int]
    value: float = Field(ge=0)
    refinement_delta: float | None = None
    grid: str = ""


def _relative_change(value: float, coarse: float | None) -> float | None:
    if coarse is None:
        return None
    if value == 0:
        return 0.0 if coarse == 0 else math.inf
    return abs(value - coarse) / value


def _derivative(values: np.ndarray, axis: int, spacing) -> np.ndarray:
    """Central difference along ``axis``, second order in the interior and at the ends when possible."""
    if values.shape[axis] < 2:
        return np.zeros_like(values)
    edge = 2 if values.shape[axis] >= 3 else 1
    return np.gradient(values, spacing, axis=axis, edge_order=edge)


def _periodic_second(values: np.ndarray, axis: int, step: float) -> np.ndarray:
    return (np.roll(values, 1, axis=axis) - 2.0 * values + np.roll(values, -1, axis=axis)) / step ** 2


def _rho(values: np.ndarray, X: np.ndarray, Y: np.ndarray, dx: float, dy: float, m: int) -> float:
    if not values.size:
        return 0.0
    largest = np.abs(values)
    along_x = values
    for i in range(m + 1):
        mixed = along_x
        for j in range(m + 1 - i):
            if i + j:
                largest = np.maximum(largest, np.abs(mixed))
            mixed = _derivative(mixed, 0, dy)
        along_x = _derivative(along_x, 1, dx)
    weight = (1.0 + np.hypot(X, Y)) ** m
    return float(np.max(weight * largest))


def seminorm_rho_m(phi: SignalGrid2D, m: int) -> SeminormEstimate:
    """
    Estimate ``sup (1 + |x|)^m max_{|alpha| <= m} |d^alpha phi(x)|``.

    Derivatives are central differences on the sampling grid.

    Args:
        phi: Sampled signal.
        m: Weight exponent and derivative order.

    Returns:
        SeminormEstimate: Estimate of family ``rho``.

    Raises:
        DerivativeOrderError: If ``m`` is negative or exceeds 4.
    """
    if not 0 <= m <= RHO_ORDER_CAP:
        raise DerivativeOrderError(f"rho_m supports 0 <= m <= {RHO_ORDER_CAP}, got {m}")
    X, Y = phi.mesh()
    value = _rho(phi.values, X, Y, phi.dx, phi.dy, m)
    coarse = None
    if phi.nx >= 6 and phi.ny >= 6:
        coarse = _rho(phi.values[::2, ::2], X[::2, ::2], Y[::2, ::2], 2 * phi.dx, 2 * phi.dy, m)
    return SeminormEstimate(family="rho", indices={"m": m}, value=value,
                            refinement_delta=_relative_change(value, coarse), grid=phi.summary())


def _y_sup(values: np.ndarray, axes: CoefficientAxes, s: int, r: int, l: int, m: int, k: int) -> float:
    if not values.size:
        return 0.0
    for _ in range(k):
        values = _periodic_second(values, 0, axes.angle_step)
    for _ in range(m):
        values = _derivative(values, 1, axes.offset_step)
    if l:
        differentiated = np.zeros_like(values)
        for branch in (axes.scales < 0, axes.scales > 0):
            part = values[:, :, branch]
            coordinates = axes.scales[branch]
            for _ in range(l):
                part = _derivative(part, 2, coordinates) if coordinates.size >= 2 else np.zeros_like(part)
            differentiated[:, :, branch] = part
        values = differentiated
    a = np.abs(axes.scales)
    weight = ((1.0 + axes.offsets ** 2) ** (r / 2.0))[:, None] * (a ** s + a ** (-s))[None, :]
    return float(np.max(weight[None, :, :] * np.abs(values)))


def _coarser(Phi: CoefficientVolume) -> tuple[np.ndarray, CoefficientAxes] | None:
    axes = Phi.axes
    if axes.offsets.size < 5:
        return None
    angle_stride = 2 if axes.angles.size % 2 == 0 and axes.angles.size >= 4 else 1
    coarse = CoefficientAxes(axes.angles[::angle_stride], axes.offsets[::2], axes.scales, axes.ratio, axes.n)
    return Phi.values[::angle_stride, ::2, :], coarse


def seminorm_Y(Phi: CoefficientVolume, s: int, r: int, l: int = 0, m: int = 0, k: int = 0) -> SeminormEstimate:
    """
    Estimate ``sup (1 + b^2)^(r/2) (|a|^s + |a|^-s) |d_a^l d_b^m (d_theta^2)^k Phi|``.

    The angular Laplacian of the circle is the second derivative in
    ``theta``, taken periodically. Scale derivatives are taken separately on
    each sign branch with their nonuniform coordinates.

    Args:
        Phi: Coefficient volume.
        s: Scale weight exponent.
        r: Offset weight exponent.
        l: Scale derivative order, at most 2.
        m: Offset derivative order, at most 2.
        k: Power of the angular Laplacian, at most 1.

    Returns:
        SeminormEstimate: Estimate of family ``Y``.

    Raises:
        DerivativeOrderError: If an order is negative or above its cap.
    """
    for name, order, cap in (("l", l, SCALE_ORDER_CAP), ("m", m, OFFSET_ORDER_CAP), ("k", k, ANGLE_ORDER_CAP)):
        if not 0 <= order <= cap:
            raise DerivativeOrderError(f"{name} = {order} outside [0, {cap}]")
    value = _y_sup(Phi.values, Phi.axes, s, r, l, m, k)
    coarse = _coarser(Phi)
    coarse_value = _y_sup(coarse[0], coarse[1], s, r, l, m, k) if coarse is not None else None
    return SeminormEstimate(family="Y", indices={"s": s, "r": r, "l": l, "m": m, "k": k}, value=value,
                            refinement_delta=_relative_change(value, coarse_value), grid=Phi.summary())


def _dot_sup(table: np.ndarray, w: np.ndarray, angle_step: float, N: int, q: int, k: int) -> float:
    for _ in range(k):
        table = _periodic_second(table, 0, angle_step)
    for _ in range(q):
        table = _derivative(table, 1, w[1] - w[0])
    return float(np.max(np.abs(table) * np.abs(w)[None, :] ** N))


def seminorm_dot(phi: SignalGrid2D, N: int, q: int = 0, k: int = 0, n_angles: int = 64, n_radii: int = 256,
                 mode: str | None = None, threads: int | None = None) -> SeminormEstimate:
    """
    Estimate ``sup |w^N d_w^q (d_theta^2)^k phi^(w u)|`` over the polar frequency grid.

    Radii are ``(j + 1/2) dw`` up to the Nyquist frequency of ``phi``, so the
    origin is never sampled and negative ``N`` detects spectra that do not
    vanish there.

    Args:
        phi: Sampled signal.
        N: Radial weight exponent, negative values allowed.
        q: Radial derivative order, at most 2.
        k: Power of the angular Laplacian, at most 1.
        n_angles: Uniform directions on the circle.
        n_radii: Radii per direction.
        mode: Slice evaluation mode, ``settings.SLICE_MODE`` when None.
        threads: Worker threads.

    Returns:
        SeminormEstimate: Estimate of family ``dot``.

    Raises:
        DerivativeOrderError: If ``q`` or ``k`` is negative or above its cap.
    """
    if not 0 <= q <= RADIAL_ORDER_CAP:
        raise DerivativeOrderError(f"q = {q} outside [0, {RADIAL_ORDER_CAP}]")
    if not 0 <= k <= ANGLE_ORDER_CAP:
        raise DerivativeOrderError(f"k = {k} outside [0, {ANGLE_ORDER_CAP}]")
    mode = settings.SLICE_MODE if mode is None else mode
    spectrum = PolarSpectrum(phi).prepare() if mode == "fast" else None
    dw = phi.nyquist / n_radii
    w = (np.arange(n_radii) + 0.5) * dw
    angles = 2.0 * math.pi * np.arange(n_angles) / n_angles
    rows = map_ordered(lambda theta: fourier_slice(phi, float(theta), w, mode, spectrum).values, angles, threads)
    table = np.stack(rows)

    step = 2.0 * math.pi / n_angles
    value = _dot_sup(table, w, step, N, q, k)
    coarse = None
    if n_angles % 2 == 0 and n_angles >= 8 and n_radii >= 8:
        coarse = _dot_sup(table[::2, ::2], w[::2], 2 * step, N, q, k)
    return SeminormEstimate(family="dot", indices={"N": N, "q": q, "k": k}, value=value,
                            refinement_delta=_relative_change(value, coarse),
                            grid=f"{phi.summary()}; {n_angles} angles x {n_radii} radii")


class DecayEntry(BaseModel):
    """
    Seminorm of one weight pair on the full and the inner domain.

    Attributes:
        s: Scale weight exponent.
        r: Offset weight exponent.
        value: Estimate on the full coefficient domain.
        inner_value: Estimate on the inner domain.
        growth: ``value / inner_value``.
        flagged: Whether the growth exceeds the configured limit.
    """
    s: int
    r: int
    value: float = Field(ge=0)
    inner_value: float = Field(ge=0)
    growth: float = Field(ge=0)
    flagged: bool


class DecayReport(BaseModel):
    """Growth of ``seminorm_Y`` when the coefficient domain is doubled."""
    grid: str
    inner_grid: str
    limit: float
    entries: list[DecayEntry]

    @property
    def flagged(self) -> list[DecayEntry]:
        return [entry for entry in self.entries if entry.flagged]


def inner_domain(Phi: CoefficientVolume) -> CoefficientVolume | None:
    """
    Restriction to half the offset range and ``2 a_min <= |a| <= a_max / 2``.

    Returns None when the restriction keeps no scale or fewer than two offsets.
    """
    axes = Phi.axes
    offsets = axes.offsets
    middle = 0.5 * (offsets[0] + offsets[-1])
    half = 0.25 * (offsets[-1] - offsets[0])
    keep_b = np.nonzero(np.abs(offsets - middle) <= half * (1.0 + 1e-12))[0]
    a = np.abs(axes.scales)
    keep_a = np.nonzero((a >= 2.0 * a.min() * (1.0 - 1e-12)) & (a <= 0.5 * a.max() * (1.0 + 1e-12)))[0]
    if keep_b.size < 2 or keep_a.size == 0:
        return None
    inner = CoefficientAxes(axes.angles, offsets[keep_b], axes.scales[keep_a], axes.ratio, axes.n)
    return CoefficientVolume(inner, Phi.values[:, keep_b][:, :, keep_a])


def decay_report(Phi: CoefficientVolume, limit: float | None = None) -> DecayReport:
    """
    Tabulate ``seminorm_Y(Phi, s, r, 0, 0, 0)`` for ``(s, r)`` in ``{0, 1, 2}^2``.

    A coefficient volume of an S0 signal keeps its supremum inside the inner
    domain, so doubling the domain leaves the estimate unchanged; growth
    above ``limit`` is flagged.
    """
    limit = settings.DECAY_GROWTH_LIMIT if limit is None else limit
    inner = inner_domain(Phi)
    if inner is None:
        logger.warning("Coefficient domain too small for an inner domain")
    entries = []
    for s, r in itertools.product(range(3), range(3)):
        value = seminorm_Y(Phi, s, r).value
        inner_value = seminorm_Y(inner, s, r).value if inner is not None else 0.0
        if value == 0:
            growth = 0.0
        elif inner_value == 0:
            growth = math.inf
        else:
            growth = value / inner_value
        entries.append(DecayEntry(s=s, r=r, value=value, inner_value=inner_value, growth=growth,
                                  flagged=growth > limit))
    report = DecayReport(grid=Phi.summary(), inner_grid=inner.summary() if inner is not None else "",
                         limit=limit, entries=entries)
    for entry in report.flagged:
        logger.warning("Seminorm (s=%d, r=%d) grows by %.3g under domain doubling", entry.s, entry.r, entry.growth)
    return report
