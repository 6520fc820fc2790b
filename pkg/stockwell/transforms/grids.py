"""
Sampling domains for the plane and for the coefficient space.

The coefficient space is the product of the circle of directions, the real
line of offsets and the punctured line of scales, carrying the measure
``|a|^(n-2) db da du``.

A brief overview of exported classes and their usage:
    f = SignalGrid2D.centered(128, 0.3, values)
        uniformly sampled complex function, values indexed (row=y, column=x)

    axes = make_coefficient_axes(64, (-60, 60, 401), (0.2, 3.4, 24))
        angles, offsets and signed geometric scales

    volume = CoefficientVolume(axes, values)
        sampled function on the coefficient space with quadrature weights
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from stockwell.errors import GridMismatch, InvalidInput

logger = logging.getLogger(__name__)


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=np.complex128, copy=True)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class SignalGrid2D:
    """
    Uniformly sampled complex function on a rectangle of the plane.

    Sample ``values[n, m]`` sits at ``(x0 + m * dx, y0 + n * dy)``.

    Attributes:
        nx: Number of samples along x.
        ny: Number of samples along y.
        x0: Abscissa of the first column.
        y0: Ordinate of the first row.
        dx: Spacing along x.
        dy: Spacing along y.
        values: Complex array of shape ``(ny, nx)``.
    """
    nx: int
    ny: int
    x0: float
    y0: float
    dx: float
    dy: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise InvalidInput(f"grid needs at least 2x2 samples, got {self.nx}x{self.ny}")
        if not (self.dx > 0 and self.dy > 0):
            raise InvalidInput(f"grid spacing must be positive, got dx={self.dx}, dy={self.dy}")
        values = _frozen(self.values)
        if values.shape != (self.ny, self.nx):
            raise InvalidInput(f"values of shape {values.shape} do not match grid ({self.ny}, {self.nx})")
        if not np.all(np.isfinite(values)):
            raise InvalidInput("grid values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def centered(cls, n: int, spacing: float, values: np.ndarray | None = None) -> SignalGrid2D:
        """Square grid of ``n x n`` samples symmetric about the origin."""
        origin = -0.5 * (n - 1) * spacing
        if values is None:
            values = np.zeros((n, n), dtype=np.complex128)
        return cls(n, n, origin, origin, spacing, spacing, values)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y0 + self.dy * np.arange(self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays ``(X, Y)`` of shape ``(ny, nx)``."""
        return np.meshgrid(self.x, self.y)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def center(self) -> tuple[float, float]:
        return self.x0 + 0.5 * (self.nx - 1) * self.dx, self.y0 + 0.5 * (self.ny - 1) * self.dy

    @property
    def nyquist(self) -> float:
        """Largest radial frequency resolved along every direction."""
        return math.pi / max(self.dx, self.dy)

    def corners(self) -> np.ndarray:
        x1 = self.x0 + (self.nx - 1) * self.dx
        y1 = self.y0 + (self.ny - 1) * self.dy
        return np.array([[self.x0, self.y0], [x1, self.y0], [self.x0, y1], [x1, y1]])

    def projection_range(self, theta: float) -> tuple[float, float]:
        """Range of ``x . u`` over the grid rectangle for direction ``theta``."""
        p = self.corners() @ np.array([math.cos(theta), math.sin(theta)])
        return float(p.min()), float(p.max())

    def with_values(self, values: np.ndarray) -> SignalGrid2D:
        return SignalGrid2D(self.nx, self.ny, self.x0, self.y0, self.dx, self.dy, values)

    def zeros_like(self) -> SignalGrid2D:
        return self.with_values(np.zeros((self.ny, self.nx), dtype=np.complex128))

    def same_geometry(self, other: SignalGrid2D) -> bool:
        return (self.nx, self.ny) == (other.nx, other.ny) and np.allclose(
            [self.x0, self.y0, self.dx, self.dy],
            [other.x0, other.y0, other.dx, other.dy],
            rtol=1e-12,
            atol=1e-12,
        )

    def require_same_geometry(self, other: SignalGrid2D) -> None:
        if not self.same_geometry(other):
            raise GridMismatch(f"{self.summary()} vs {other.summary()}")

    def norm(self) -> float:
        return math.sqrt(max(inner_product_R2(self, self).real, 0.0))

    def header(self) -> dict:
        return {"nx": self.nx, "ny": self.ny, "x0": self.x0, "y0": self.y0, "dx": self.dx, "dy": self.dy}

    def summary(self) -> str:
        return f"{self.nx}x{self.ny} grid, origin ({self.x0:g}, {self.y0:g}), spacing ({self.dx:g}, {self.dy:g})"


@dataclass(frozen=True, eq=False)
class CoefficientAxes:
    """
    Sampling of directions, offsets and scales.

    Attributes:
        angles: Uniform angles ``2 pi i / N`` on ``[0, 2 pi)``.
        offsets: Uniform offset grid.
        scales: Signed geometric scales, negative branch first, mirrored.
        ratio: Geometric ratio between consecutive scales of one sign.
        n: Dimension of the underlying space.
    """
    angles: np.ndarray
    offsets: np.ndarray
    scales: np.ndarray
    ratio: float
    n: int = 2

    def __post_init__(self):
        for name in ("angles", "offsets", "scales"):
            array = np.array(getattr(self, name), dtype=np.float64, copy=True)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if self.angles.size < 2:
            raise InvalidInput("at least two angles are required")
        if np.any(self.scales == 0):
            raise InvalidInput("scale a = 0 is excluded")
        if self.ratio <= 1:
            raise InvalidInput(f"scale ratio must exceed 1, got {self.ratio}")
        if self.n < 2:
            raise InvalidInput(f"dimension must be at least 2, got {self.n}")

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.angles.size, self.offsets.size, self.scales.size

    @property
    def angle_step(self) -> float:
        return 2.0 * math.pi / self.angles.size

    @property
    def offset_step(self) -> float:
        if self.offsets.size < 2 or self.offsets[-1] == self.offsets[0]:
            return 1.0
        return float(self.offsets[1] - self.offsets[0])

    @property
    def has_both_signs(self) -> bool:
        return bool(np.any(self.scales > 0) and np.any(self.scales < 0))

    def offset_weights(self) -> np.ndarray:
        """
        Trapezoid weights of the offset axis, endpoints halved.

        A collapsed range carries one unit of measure shared by its repeated offsets.
        """
        if self.offsets.size > 1 and self.offsets[-1] == self.offsets[0]:
            return np.full(self.offsets.size, 1.0 / self.offsets.size)
        weights = np.full(self.offsets.size, self.offset_step)
        if weights.size > 1:
            weights[0] *= 0.5
            weights[-1] *= 0.5
        return weights

    def scale_widths(self) -> np.ndarray:
        """Exact log-cell widths ``|a| ln r``."""
        return np.abs(self.scales) * math.log(self.ratio)

    def same_as(self, other: CoefficientAxes) -> bool:
        return (
            self.n == other.n
            and self.shape == other.shape
            and np.array_equal(self.angles, other.angles)
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.scales, other.scales)
        )

    def header(self) -> dict:
        return {
            "angles": self.angles.tolist(),
            "offsets": self.offsets.tolist(),
            "scales": self.scales.tolist(),
            "ratio": self.ratio,
            "n": self.n,
        }

    @classmethod
    def from_header(cls, header: dict) -> CoefficientAxes:
        return cls(
            np.asarray(header["angles"]),
            np.asarray(header["offsets"]),
            np.asarray(header["scales"]),
            float(header["ratio"]),
            int(header["n"]),
        )

    def summary(self) -> str:
        a = np.abs(self.scales)
        return (
            f"{self.angles.size} angles, {self.offsets.size} offsets on [{self.offsets[0]:g}, {self.offsets[-1]:g}], "
            f"{a.size} scales with |a| on [{a.min():g}, {a.max():g}], n={self.n}"
        )


def make_coefficient_axes(
    n_angles: int,
    b_spec: tuple[float, float, int],
    a_spec: tuple[float, float, int],
    n: int = 2,
) -> CoefficientAxes:
    """
    Build validated coefficient axes.

    Args:
        n_angles: Number of uniform directions on the circle.
        b_spec: ``(b_min, b_max, count)`` of the offset grid.
        a_spec: ``(a_min, a_max, count_per_sign)`` of the geometric scale grid.
        n: Dimension of the underlying space.

    Returns:
        CoefficientAxes: Axes with scales ``-a_max .. -a_min, a_min .. a_max``.

    Raises:
        InvalidInput: If a range or a count is not admissible.
    """
    b_min, b_max, b_count = b_spec
    a_min, a_max, a_count = a_spec
    if n_angles < 2:
        raise InvalidInput(f"angle count must be at least 2, got {n_angles}")
    if int(b_count) < 2 or int(a_count) < 2:
        raise InvalidInput("offset and scale counts must be at least 2")
    if b_max < b_min:
        raise InvalidInput(f"offset range [{b_min}, {b_max}] is reversed")
    if b_max == b_min:
        logger.warning("Offset range collapses to b = %g; its %d offsets share one unit of measure",
                       b_min, int(b_count))
    if a_min <= 0:
        raise InvalidInput(f"a_min must be positive, got {a_min}")
    if a_max <= a_min:
        raise InvalidInput(f"a_max must exceed a_min, got [{a_min}, {a_max}]")

    ratio = (a_max / a_min) ** (1.0 / (int(a_count) - 1))
    positive = a_min * ratio ** np.arange(int(a_count))
    positive[-1] = a_max
    scales = np.concatenate([-positive[::-1], positive])
    angles = 2.0 * math.pi * np.arange(n_angles) / n_angles
    offsets = np.linspace(b_min, b_max, int(b_count))
    return CoefficientAxes(angles, offsets, scales, ratio, n)


def measure_weights(axes: CoefficientAxes) -> np.ndarray:
    """
    Quadrature weights ``|a_k|^(n-2) * db_j * da_k * dtheta`` of every cell.

    Args:
        axes: Coefficient axes.

    Returns:
        numpy.ndarray: Positive weights of shape ``axes.shape``.
    """
    scale_part = np.abs(axes.scales) ** (axes.n - 2) * axes.scale_widths()
    weights = axes.angle_step * axes.offset_weights()[:, None] * scale_part[None, :]
    return np.broadcast_to(weights, axes.shape).copy()


@dataclass(frozen=True, eq=False)
class CoefficientVolume:
    """
    Sampled function on the coefficient space.

    Attributes:
        axes: Sampling of directions, offsets and scales.
        values: Complex array indexed ``(angle, offset, scale)``.
        weights: Measure weights of the cells, derived from ``axes``.
    """
    axes: CoefficientAxes
    values: np.ndarray = field(repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != self.axes.shape:
            raise InvalidInput(f"values of shape {values.shape} do not match axes {self.axes.shape}")
        object.__setattr__(self, "values", values)
        weights = measure_weights(self.axes)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def zeros(cls, axes: CoefficientAxes) -> CoefficientVolume:
        return cls(axes, np.zeros(axes.shape, dtype=np.complex128))

    def with_values(self, values: np.ndarray) -> CoefficientVolume:
        return CoefficientVolume(self.axes, values)

    @cached_property
    def peak(self) -> float:
        return float(np.abs(self.values).max(initial=0.0))

    def norm(self) -> float:
        return math.sqrt(max(inner_product_Y(self, self).real, 0.0))

    def summary(self) -> str:
        return self.axes.summary()


def inner_product_Y(F: CoefficientVolume, G: CoefficientVolume) -> complex:
    """
    Weighted inner product ``sum w F conj(G)`` on the coefficient space.

    The real and imaginary parts are reduced separately so that swapping the
    arguments yields the exact complex conjugate.

    Raises:
        GridMismatch: If the volumes are sampled on different axes.
    """
    if not F.axes.same_as(G.axes):
        raise GridMismatch(f"coefficient axes differ: {F.summary()} vs {G.summary()}")
    fr, fi = F.values.real, F.values.imag
    gr, gi = G.values.real, G.values.imag
    real = np.sum(F.weights * (fr * gr + fi * gi))
    imag = np.sum(F.weights * (fi * gr - fr * gi))
    return complex(real, imag)


def inner_product_R2(f: SignalGrid2D, h: SignalGrid2D) -> complex:
    """
    Riemann sum ``sum f conj(h) dx dy`` on a shared grid.

    Raises:
        GridMismatch: If the grids differ.
    """
    f.require_same_geometry(h)
    return complex(np.vdot(h.values, f.values) * f.cell_area)
