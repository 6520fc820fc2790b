"""
Image export of coefficient slices and JSON reports.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from stockwell.errors import InvalidInput
from stockwell.transforms.grids import CoefficientVolume

logger = logging.getLogger(__name__)


def write_pgm(path: str | Path, image: np.ndarray) -> Path:
    """
    Write an 8-bit grayscale image as binary PGM (magic ``P5``, maxval 255).

    Raises:
        InvalidInput: If the image is not a two dimensional ``uint8`` array.
    """
    image = np.asarray(image)
    if image.ndim != 2 or image.dtype != np.uint8:
        raise InvalidInput(f"PGM needs a 2-D uint8 image, got {image.ndim}-D {image.dtype}")
    rows, columns = image.shape
    path = Path(path)
    with path.open("wb") as handle:
        handle.write(f"P5\n{columns} {rows}\n255\n".encode("ascii"))
        handle.write(np.ascontiguousarray(image).tobytes())
    return path


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a binary PGM written by :func:`write_pgm`."""
    raw = Path(path).read_bytes()
    parts = raw.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P5" or parts[2] != b"255":
        raise InvalidInput(f"{path} is not an 8-bit binary PGM")
    columns, rows = (int(token) for token in parts[1].split())
    pixels = np.frombuffer(parts[3], dtype=np.uint8)
    if pixels.size != rows * columns:
        raise InvalidInput(f"{path} holds {pixels.size} pixels, header says {columns}x{rows}")
    return pixels.reshape(rows, columns)


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def export_slice(volume: CoefficientVolume, path: str | Path, angle_index: int | None = None,
                 scale_index: int | None = None) -> tuple[Path, float]:
    """
    Export ``|coefficients|`` at one angle or one scale as a PGM image.

    At a fixed angle the rows are offsets and the columns scales, at a fixed
    scale the rows are offsets and the columns angles. Magnitudes are scaled
    linearly so that the maximum maps to 255; the maximum is written to a JSON
    sidecar next to the image.

    Args:
        volume: Coefficient volume.
        path: Image path; the sidecar is ``path`` with ``.json`` appended.
        angle_index: Angle to export.
        scale_index: Scale to export.

    Returns:
        tuple: Image path and the maximum magnitude.

    Raises:
        InvalidInput: If not exactly one index is given or it is out of range.
    """
    if (angle_index is None) == (scale_index is None):
        raise InvalidInput("give exactly one of the angle index and the scale index")
    count_angles, _, count_scales = volume.axes.shape
    if angle_index is not None:
        if not 0 <= angle_index < count_angles:
            raise InvalidInput(f"angle index {angle_index} outside [0, {count_angles})")
        magnitude = np.abs(volume.values[angle_index, :, :])
        fixed = {"axis": "angle", "index": angle_index, "value": float(volume.axes.angles[angle_index])}
    else:
        if not 0 <= scale_index < count_scales:
            raise InvalidInput(f"scale index {scale_index} outside [0, {count_scales})")
        magnitude = np.abs(volume.values[:, :, scale_index]).T
        fixed = {"axis": "scale", "index": scale_index, "value": float(volume.axes.scales[scale_index])}

    peak = float(magnitude.max(initial=0.0))
    if peak > 0:
        image = np.rint(magnitude * (255.0 / peak)).clip(0, 255).astype(np.uint8)
    else:
        image = np.zeros(magnitude.shape, dtype=np.uint8)
    path = write_pgm(path, image)
    sidecar = {"max": peak, "rows": image.shape[0], "columns": image.shape[1], **fixed}
    sidecar_path(path).write_text(json.dumps(sidecar, indent=2))
    logger.info("Exported %s slice %d to %s (max %.4g)", fixed["axis"], fixed["index"], path, peak)
    return path, peak


def write_report(report: BaseModel, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(report.model_dump_json(indent=2))
    return path
