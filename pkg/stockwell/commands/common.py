"""
Shared pieces of the command groups: job validation, option sets and the
error boundary that turns toolkit errors into exit codes.

A brief overview of exported classes and their usage:
    job = JobConfig.build(command="analyze", input=path, ...)
        validated job description, raises InvalidInput on bad values

    @axes_options
        adds --angles, --bmin/--bmax/--bcount and --amin/--amax/--acount

    @exits_on_error
        logs the detail of a StockwellError and exits with its status code
"""

from __future__ import annotations

import functools
import logging
from pathlib import Path
from typing import Literal

import click
from pydantic import BaseModel, Field, ValidationError, model_validator

from stockwell.errors import InvalidInput, StockwellError
from stockwell.formats.files import read_window
from stockwell.transforms.grids import CoefficientAxes, make_coefficient_axes
from stockwell.transforms.windows import Window1D, freq_bump_window

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = {
    "parseval": 2e-2,
    "reconstruction": 5e-2,
    "transpose": 1e-3,
    "routes": 1e-3,
    "slice": 1e-3,
    "isometry": 2e-2,
}


class JobConfig(BaseModel):
    """
    Validated description of one command invocation.

    Attributes:
        command: Name of the command.
        input: Input file, None when the command synthesises its own input.
        output: Output file.
        window: Window file, None for the default bump window.
        angles: Number of uniform directions.
        b_spec: ``(b_min, b_max, count)`` of the offsets.
        a_spec: ``(a_min, a_max, count_per_sign)`` of the scales.
        route: Route of the forward transform.
        probe: Number of random cells cross-checked against the direct route.
        tol: Tolerance override of a verification.
        threads: Worker threads, None for ``settings.THREADS``.
    """
    command: str
    input: Path | None = None
    output: Path | None = None
    window: Path | None = None
    angles: int = Field(default=64, ge=2)
    b_spec: tuple[float, float, int] = (-60.0, 60.0, 401)
    a_spec: tuple[float, float, int] = (0.2, 3.4, 24)
    route: Literal["direct", "fourier", "radon"] = "fourier"
    probe: int = Field(default=0, ge=0)
    tol: float | None = Field(default=None, gt=0)
    threads: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check(self) -> JobConfig:
        for name in ("input", "window"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise InvalidInput(f"{name} file {path} does not exist")
        self.axes()
        return self

    @classmethod
    def build(cls, **values) -> JobConfig:
        """Validate ``values``, reporting pydantic failures as InvalidInput."""
        try:
            return cls(**values)
        except ValidationError as error:
            problems = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in error.errors())
            raise InvalidInput(problems) from error

    def axes(self) -> CoefficientAxes:
        return make_coefficient_axes(self.angles, self.b_spec, self.a_spec)

    def load_window(self) -> Window1D:
        return read_window(self.window) if self.window is not None else freq_bump_window(1.0, 1.0)


def axes_options(fn):
    """Options of the coefficient axes, defaulting to the reference job."""
    options = [
        click.option("--angles", type=int, default=64, show_default=True, help="Number of directions."),
        click.option("--bmin", type=float, default=-60.0, show_default=True, help="First offset."),
        click.option("--bmax", type=float, default=60.0, show_default=True, help="Last offset."),
        click.option("--bcount", type=int, default=401, show_default=True, help="Number of offsets."),
        click.option("--amin", type=float, default=0.2, show_default=True, help="Smallest positive scale."),
        click.option("--amax", type=float, default=3.4, show_default=True, help="Largest positive scale."),
        click.option("--acount", type=int, default=24, show_default=True, help="Scales per sign."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def axes_values(angles: int, bmin: float, bmax: float, bcount: int, amin: float, amax: float,
                acount: int) -> dict:
    return {"angles": angles, "b_spec": (bmin, bmax, bcount), "a_spec": (amin, amax, acount)}


def exits_on_error(fn):
    """Turn a StockwellError raised by a command into its exit status."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except StockwellError as error:
            logger.error(error.detail)
            click.echo(error.detail, err=True)
            click.get_current_context().exit(error.status_code)
    return wrapper


def threads_from(ctx: click.Context) -> int | None:
    obj = ctx.find_root().obj or {}
    return obj.get("threads")
