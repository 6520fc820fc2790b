"""
Command exporting coefficient slices as images.

A brief overview of exported classes and their usage:
    router = click.Group()
        collects the commands of this module, merged by stockwell.router

    stockwell export-slice --input f.dst --output angle0.pgm --angle-index 0
        |coefficients| at one angle, offsets by scales, as 8-bit PGM
"""

from __future__ import annotations

import logging
from pathlib import Path

import click

from stockwell.commands.common import exits_on_error
from stockwell.formats.files import read_volume
from stockwell.formats.images import export_slice as export_volume_slice

logger = logging.getLogger(__name__)

router = click.Group()


@router.command("export-slice")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True,
              help="Coefficient file.")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), required=True, help="PGM file to write.")
@click.option("--angle-index", type=int, default=None, help="Export the slice at this angle index.")
@click.option("--scale-index", type=int, default=None, help="Export the slice at this scale index.")
@exits_on_error
def export_slice(input_path: Path, output: Path, angle_index: int | None, scale_index: int | None) -> None:
    """
    Write |coefficients| at a fixed angle or scale as a binary PGM.

    The maximum magnitude, which maps to gray level 255, is written to a JSON
    sidecar named after the image with ``.json`` appended.
    """
    volume, _ = read_volume(input_path)
    path, peak = export_volume_slice(volume, output, angle_index=angle_index, scale_index=scale_index)
    click.echo(f"{path}: max {peak:.6g}")
