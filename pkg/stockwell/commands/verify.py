"""
Commands running the identity harnesses.

Every subcommand computes a VerificationReport, judges it against its
tolerance, prints it and exits with status 1 when the tolerance is exceeded.
Without --input the reference Gaussian ring built from the ``REFERENCE_*``
settings is used.

A brief overview of exported classes and their usage:
    router = click.Group()
        collects the commands of this module, merged by stockwell.router

    stockwell verify reconstruction --tol 5e-2 --output report.json
        analysis followed by synthesis of the reference signal
"""

from __future__ import annotations

import functools
import logging
from pathlib import Path

import click
import numpy as np

from stockwell.commands.common import (
    DEFAULT_TOLERANCES,
    JobConfig,
    axes_options,
    axes_values,
    exits_on_error,
    threads_from,
)
from stockwell.config.config import settings
from stockwell.errors import VerificationFailed
from stockwell.formats.files import read_grid
from stockwell.formats.images import write_report
from stockwell.transforms.dst import compare_routes, dst_fourier
from stockwell.transforms.grids import CoefficientVolume, SignalGrid2D
from stockwell.transforms.radon import slice_check
from stockwell.transforms.reports import VerificationReport
from stockwell.transforms.signals import gaussian_ring, reference_signal
from stockwell.transforms.synthesis import isometry_check, parseval_check, reconstruct, transpose_check

logger = logging.getLogger(__name__)

router = click.Group()


@router.group("verify")
def verify() -> None:
    """Check the transform identities on a signal and exit 1 on failure."""


def load_signal(job: JobConfig) -> SignalGrid2D:
    if job.input is not None:
        return read_grid(job.input)
    return reference_signal(settings.REFERENCE_SIZE, settings.REFERENCE_SPACING,
                            settings.REFERENCE_RING_RADIUS, settings.REFERENCE_RING_WIDTH)


def companion_signal(f: SignalGrid2D) -> SignalGrid2D:
    """``f`` plus a wider shifted ring, the other argument of Parseval."""
    extent = 0.1 * min(f.nx * f.dx, f.ny * f.dy)
    ring = gaussian_ring(f, 1.2 * settings.REFERENCE_RING_RADIUS, settings.REFERENCE_RING_WIDTH,
                         shift=(-0.1 * extent, 0.05 * extent), amplitude=0.5)
    return f.with_values(f.values + ring.values)


def random_volume(f: SignalGrid2D, job: JobConfig) -> CoefficientVolume:
    """Coefficients of ``f`` with seeded complex Gaussian perturbations of relative size 1/2."""
    volume = dst_fourier(f, job.load_window(), job.axes(), threads=job.threads)
    rng = np.random.default_rng(settings.PROBE_SEED)
    noise = rng.standard_normal(volume.values.shape) + 1j * rng.standard_normal(volume.values.shape)
    return volume.with_values(volume.values * (1.0 + 0.5 * noise))


def harness(name: str):
    """Register a verify subcommand that judges and prints the report returned by ``fn``."""
    def decorate(fn):
        @verify.command(name)
        @click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
                      default=None, help="Grid file of the signal, the reference ring when omitted.")
        @click.option("--window", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
                      help="Window file, bump(1, 1) when omitted.")
        @click.option("--tol", type=float, default=None,
                      help=f"Tolerance, {DEFAULT_TOLERANCES[name]:g} when omitted.")
        @click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
                      help="JSON file receiving the report.")
        @axes_options
        @click.pass_context
        @exits_on_error
        @functools.wraps(fn)
        def command(ctx: click.Context, input_path: Path | None, window: Path | None, tol: float | None,
                    output: Path | None, **axes) -> None:
            job = JobConfig.build(command=f"verify {name}", input=input_path, window=window, output=output, tol=tol,
                                  threads=threads_from(ctx), **axes_values(**axes))
            report: VerificationReport = fn(job).judge(job.tol if job.tol is not None else DEFAULT_TOLERANCES[name])
            if job.output is not None:
                write_report(report, job.output)
            click.echo(report.model_dump_json(indent=2))
            click.echo(report.detail_line())
            if not report.passed:
                raise VerificationFailed(report.detail_line())
        return command
    return decorate


@harness("parseval")
def parseval(job: JobConfig) -> VerificationReport:
    """Compare (f, h) with (DS f, DS h) / C for the signal and a second ring."""
    f = load_signal(job)
    psi = job.load_window()
    return parseval_check(f, companion_signal(f), psi, psi, job.axes(), threads=job.threads)


@harness("reconstruction")
def reconstruction(job: JobConfig) -> VerificationReport:
    """Analyse and synthesise the signal; the residual is the relative L2 error."""
    psi = job.load_window()
    _, report = reconstruct(load_signal(job), psi, psi, job.axes(), threads=job.threads)
    return report


@harness("transpose")
def transpose(job: JobConfig) -> VerificationReport:
    """Compare both sides of the transpose identity for seeded random coefficients."""
    f = load_signal(job)
    return transpose_check(f, job.load_window(), random_volume(f, job), threads=job.threads)


@harness("routes")
def routes(job: JobConfig) -> VerificationReport:
    """Relative RMS between the fourier and the radon route."""
    return compare_routes(load_signal(job), job.load_window(), job.axes(), threads=job.threads)


@harness("slice")
def fourier_slice_theorem(job: JobConfig) -> VerificationReport:
    """Transformed Radon projection against the fast Fourier slice, at the worst of four angles."""
    f = load_signal(job)
    top = min(f.nyquist, settings.REFERENCE_RING_RADIUS + 4.0 * settings.REFERENCE_RING_WIDTH)
    xi = np.linspace(-top, top, 257)
    reports = [slice_check(f, theta, xi, mode="fast", order=settings.RADON_ROUTE_ORDER)
               for theta in (0.0, 0.4, 1.1, 2.5)]
    return max(reports, key=lambda report: report.error)


@harness("isometry")
def isometry(job: JobConfig) -> VerificationReport:
    """Compare |DS f|^2 / C with |f|^2."""
    return isometry_check(load_signal(job), job.load_window(), job.axes(), threads=job.threads)
