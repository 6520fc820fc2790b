"""
Binary files of grids, coefficient volumes, sinograms and windows.

Every file is one line of JSON describing the content, terminated by a newline,
followed by the raw little endian ``complex128`` payload, recorded as
``"dtype": "c128"`` in the header. Writing and reading
back reproduces the arrays bit for bit.

A brief overview of exported classes and their usage:
    write_grid(path, f) / read_grid(path)
        sampled planar signals

    write_volume(path, volume, probe=...) / read_volume(path)
        coefficient volumes with their axes and optional probe summary

    write_sinogram(path, projections) / read_sinogram(path)
        projections sharing one offset grid

    write_window(path, psi) / read_window(path)
        windows with both tables
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ValidationError

from stockwell.errors import GridMismatch, InvalidInput
from stockwell.transforms.grids import CoefficientAxes, CoefficientVolume, SignalGrid2D
from stockwell.transforms.radon import Projection1D
from stockwell.transforms.windows import Window1D, family_spectrum

logger = logging.getLogger(__name__)

DTYPE = np.dtype("<c16")


class GridHeader(BaseModel):
    format: Literal["grid"] = "grid"
    dtype: Literal["c128"] = "c128"
    nx: int
    ny: int
    x0: float
    y0: float
    dx: float
    dy: float


class VolumeHeader(BaseModel):
    format: Literal["volume"] = "volume"
    dtype: Literal["c128"] = "c128"
    axes: dict[str, Any]
    probe: dict[str, Any] | None = None


class SinogramHeader(BaseModel):
    format: Literal["sinogram"] = "sinogram"
    dtype: Literal["c128"] = "c128"
    angles: list[float]
    p0: float
    dp: float
    count: int


class WindowHeader(BaseModel):
    format: Literal["window"] = "window"
    dtype: Literal["c128"] = "c128"
    kind: str
    center: float
    halfwidth: float
    derivative: int = 0
    moment: int = 0
    support: list[float] | None = None
    s1_flag: bool
    s1_defect: float
    time_grid: dict[str, float]
    spectral_grid: dict[str, float]


def _write(path: str | Path, header: BaseModel, *arrays: np.ndarray) -> Path:
    path = Path(path)
    with path.open("wb") as handle:
        handle.write(header.model_dump_json().encode("utf-8") + b"\n")
        for array in arrays:
            handle.write(np.ascontiguousarray(array, dtype=DTYPE).tobytes())
    logger.debug("Wrote %s", path)
    return path


def _read(path: str | Path, model: type[BaseModel]) -> tuple[Any, np.ndarray]:
    path = Path(path)
    raw = path.read_bytes()
    line, separator, payload = raw.partition(b"\n")
    if not separator:
        raise InvalidInput(f"{path} has no header line")
    try:
        header = model.model_validate(json.loads(line))
    except (json.JSONDecodeError, ValidationError) as error:
        raise InvalidInput(f"{path} has a malformed header: {error}") from error
    if len(payload) % DTYPE.itemsize:
        raise InvalidInput(f"{path} payload is not a whole number of complex samples")
    return header, np.frombuffer(payload, dtype=DTYPE)


def write_grid(path: str | Path, f: SignalGrid2D) -> Path:
    return _write(path, GridHeader(**f.header()), f.values)


def read_grid(path: str | Path) -> SignalGrid2D:
    header, payload = _read(path, GridHeader)
    if payload.size != header.nx * header.ny:
        raise InvalidInput(f"{path} holds {payload.size} samples, header says {header.nx}x{header.ny}")
    return SignalGrid2D(header.nx, header.ny, header.x0, header.y0, header.dx, header.dy,
                        payload.reshape(header.ny, header.nx))


def write_volume(path: str | Path, volume: CoefficientVolume, probe: dict[str, Any] | None = None) -> Path:
    """Write a coefficient volume; ``probe`` records a cross-check in the header."""
    return _write(path, VolumeHeader(axes=volume.axes.header(), probe=probe), volume.values)


def read_volume(path: str | Path) -> tuple[CoefficientVolume, dict[str, Any] | None]:
    """Read a coefficient volume and the probe summary stored with it."""
    header, payload = _read(path, VolumeHeader)
    axes = CoefficientAxes.from_header(header.axes)
    if payload.size != int(np.prod(axes.shape)):
        raise InvalidInput(f"{path} holds {payload.size} coefficients, axes need {axes.shape}")
    return CoefficientVolume(axes, payload.reshape(axes.shape)), header.probe


def write_sinogram(path: str | Path, projections: list[Projection1D]) -> Path:
    """
    Write projections that share one offset grid.

    Raises:
        InvalidInput: If there are no projections.
        GridMismatch: If the offset grids differ.
    """
    if not projections:
        raise InvalidInput("no projections to write")
    p0, dp, count = projections[0].grid_key()
    if any(projection.grid_key() != (p0, dp, count) for projection in projections):
        raise GridMismatch("projections do not share one offset grid")
    header = SinogramHeader(angles=[projection.theta for projection in projections], p0=p0, dp=dp, count=count)
    return _write(path, header, np.stack([projection.values for projection in projections]))


def read_sinogram(path: str | Path) -> list[Projection1D]:
    header, payload = _read(path, SinogramHeader)
    if payload.size != len(header.angles) * header.count:
        raise InvalidInput(f"{path} holds {payload.size} samples, header needs {len(header.angles)}x{header.count}")
    rows = payload.reshape(len(header.angles), header.count)
    return [Projection1D(theta, header.p0, header.dp, row) for theta, row in zip(header.angles, rows)]


def write_window(path: str | Path, psi: Window1D) -> Path:
    return _write(path, WindowHeader(**psi.header()), psi.time_values, psi.spectrum_values)


def read_window(path: str | Path) -> Window1D:
    """
    Read a window; the closed form spectrum of a named family is restored.

    Derivative windows get the ``(i xi)^k`` factor back on the closed form,
    moment windows fall back to table interpolation.
    """
    header, payload = _read(path, WindowHeader)
    count = int(header.time_grid["count"])
    if payload.size != 2 * count:
        raise InvalidInput(f"{path} holds {payload.size} samples, header needs 2x{count}")
    fn = family_spectrum(header.kind, header.center, header.halfwidth) if header.moment == 0 else None
    if fn is not None and header.derivative:
        base, order = fn, header.derivative
        fn = lambda xi: (1j * np.asarray(xi, dtype=np.float64)) ** order * base(xi)
    support = tuple(header.support) if header.support is not None else None
    return Window1D(header.kind, header.center, header.halfwidth, header.time_grid["dx"], payload[:count].copy(),
                    header.spectral_grid["dxi"], payload[count:].copy(), header.s1_flag, header.s1_defect,
                    support, header.derivative, header.moment, fn)
