"""
Command building and validating windows.

A brief overview of exported classes and their usage:
    router = click.Group()
        collects the commands of this module, merged by stockwell.router

    stockwell window --center 1 --halfwidth 1 --output bump.win
        S1-valid bump window written to a file, validity report on stdout
"""

from __future__ import annotations

import logging
from pathlib import Path

import click
from pydantic import BaseModel, ConfigDict, field_serializer

from stockwell.commands.common import exits_on_error
from stockwell.errors import InvalidInput, NotAdmissible
from stockwell.formats.files import write_window
from stockwell.formats.images import write_report
from stockwell.transforms.windows import (
    admissibility_constant,
    box_window,
    check_s1,
    derivative_window,
    freq_bump_window,
    gaussian_window,
    moment_scales,
    moment_window,
    moments,
)

logger = logging.getLogger(__name__)

router = click.Group()

MOMENT_ORDER = 4


class WindowReport(BaseModel):
    """
    Validity report of a window.

    Attributes:
        label: Family and parameters.
        s1_flag: Outcome of the S1 flatness test.
        s1_defect: Largest spectral modulus near ``xi = -1``.
        essential_radius: Radius of the time support above the tail threshold.
        band: Spectral interval above the tail threshold.
        moments: ``int x^k exp(ix) psi(x) dx`` for ``k = 0 .. 4``.
        moment_scales: ``int |x|^k |psi(x)| dx`` for the same orders.
        constant: ``C_{psi,psi}`` when requested.
        constant_error: Error estimate of the constant.
        dim: Dimension used for the constant.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: str
    s1_flag: bool
    s1_defect: float
    essential_radius: float
    band: tuple[float, float]
    moments: list[complex]
    moment_scales: list[float]
    constant: complex | None = None
    constant_error: float | None = None
    dim: int | None = None

    @field_serializer("moments")
    def _serialize_moments(self, values: list[complex]) -> list[list[float]]:
        return [[value.real, value.imag] for value in values]

    @field_serializer("constant")
    def _serialize_constant(self, value: complex | None) -> list[float] | None:
        return None if value is None else [value.real, value.imag]


def build_window(kind: str, center: float, halfwidth: float):
    if kind == "bump":
        return freq_bump_window(center, halfwidth)
    if kind == "gaussian":
        return gaussian_window(halfwidth)
    if kind == "box":
        return box_window(center - halfwidth, center + halfwidth)
    raise InvalidInput(f"unknown window kind {kind!r}")


@router.command("window")
@click.option("--center", type=float, default=1.0, show_default=True, help="Spectral center.")
@click.option("--halfwidth", type=float, default=1.0, show_default=True,
              help="Spectral half width (time width sigma for gaussian).")
@click.option("--kind", type=click.Choice(["bump", "gaussian", "box"]), default="bump", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Window file to write.")
@click.option("--report", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="JSON file receiving the validity report.")
@click.option("--emit-constant", is_flag=True, help="Compute the admissibility constant C_{psi,psi}.")
@click.option("--dim", type=int, default=2, show_default=True, help="Dimension n of the constant.")
@click.option("--derivative", type=int, default=0, show_default=True,
              help="Replace the window by its derivative of this order.")
@click.option("--moment", type=int, default=0, show_default=True,
              help="Multiply the window by x to this power.")
@exits_on_error
def window(center: float, halfwidth: float, kind: str, output: Path | None, report: Path | None,
           emit_constant: bool, dim: int, derivative: int, moment: int) -> None:
    """
    Build a window, test it for S1 validity and write it.

    Prints the validity report as JSON, for example:

        {
          "label": "bump(c=1, h=1)",
          "s1_flag": true,
          "s1_defect": 0.0,
          ...
        }

    Windows whose spectrum does not vanish near -1 are rejected with exit
    code 2. --moment and --derivative derive the auxiliary windows x^j psi
    and psi^(k) of the decay estimates, in that order.
    """
    if dim < 2:
        raise InvalidInput(f"dimension must be at least 2, got {dim}")
    psi = derivative_window(moment_window(build_window(kind, center, halfwidth), moment), derivative)
    flag, defect = check_s1(psi)
    if not flag:
        raise NotAdmissible(f"{psi.label} has spectral modulus {defect:.3g} near xi = -1")

    result = WindowReport(label=psi.label, s1_flag=flag, s1_defect=defect, essential_radius=psi.essential_radius,
                          band=psi.band, moments=moments(psi, MOMENT_ORDER),
                          moment_scales=moment_scales(psi, MOMENT_ORDER))
    if emit_constant:
        constant = admissibility_constant(psi, psi, dim)
        result = result.model_copy(update={"constant": constant.value, "constant_error": constant.abs_error_estimate,
                                           "dim": dim})
    if output is not None:
        write_window(output, psi)
        logger.info("Wrote window %s to %s", psi.label, output)
    if report is not None:
        write_report(result, report)
    click.echo(result.model_dump_json(indent=2))
