"""
Commands running the forward transform and the synthesis operator on files.

A brief overview of exported classes and their usage:
    router = click.Group()
        collects the commands of this module, merged by stockwell.router

    stockwell analyze --input f.grid --output f.dst --route fourier --probe 16
        coefficient volume of a grid file

    stockwell synthesize --input f.dst --like f.grid --output g.grid --normalize
        synthesis of a coefficient volume on the geometry of a grid file

    stockwell decay --input f.dst --report decay.json
        seminorm growth of a coefficient volume under domain doubling
"""

from __future__ import annotations

import logging
from pathlib import Path

import click

from stockwell.commands.common import JobConfig, axes_options, axes_values, exits_on_error, threads_from
from stockwell.errors import InvalidInput
from stockwell.formats.files import read_grid, read_volume, read_window, write_grid, write_volume
from stockwell.formats.images import write_report
from stockwell.transforms.diagnostics import decay_report
from stockwell.transforms.dst import probe_cells, transform
from stockwell.transforms.synthesis import synthesize as synthesize_volume
from stockwell.transforms.windows import admissibility_constant

logger = logging.getLogger(__name__)

router = click.Group()

existing_file = click.Path(exists=True, dir_okay=False, path_type=Path)
new_file = click.Path(dir_okay=False, path_type=Path)


@router.command("analyze")
@click.option("--input", "input_path", type=existing_file, required=True, help="Grid file of the signal.")
@click.option("--output", type=new_file, required=True, help="Coefficient file to write.")
@click.option("--window", type=existing_file, default=None, help="Window file, bump(1, 1) when omitted.")
@axes_options
@click.option("--route", type=click.Choice(["direct", "fourier", "radon"]), default="fourier", show_default=True)
@click.option("--probe", type=int, default=0, show_default=True,
              help="Cross-check this many random cells against the direct route.")
@click.pass_context
@exits_on_error
def analyze(ctx: click.Context, input_path: Path, output: Path, window: Path | None, route: str, probe: int,
            **axes) -> None:
    """
    Compute the directional Stockwell transform of a grid file.

    With --probe the largest deviation from direct quadrature, relative to the
    volume peak, is stored in the coefficient file header and printed:

        probe: 16 cells, max relative error 3.1e-05
    """
    job = JobConfig.build(command="analyze", input=input_path, output=output, window=window, route=route,
                          probe=probe, threads=threads_from(ctx), **axes_values(**axes))
    f = read_grid(job.input)
    psi = job.load_window()
    volume = transform(f, psi, job.axes(), job.route, threads=job.threads)

    summary = None
    if job.probe:
        result = probe_cells(volume, f, psi, job.probe)
        summary = {"count": int(result.cells.shape[0]), "max_error": result.max_error}
        click.echo(f"probe: {summary['count']} cells, max relative error {result.max_error:.3g}")
    write_volume(job.output, volume, probe=summary)
    logger.info("Wrote %s coefficients to %s", job.route, job.output)


@router.command("synthesize")
@click.option("--input", "input_path", type=existing_file, required=True, help="Coefficient file.")
@click.option("--like", type=existing_file, required=True, help="Grid file whose geometry receives the result.")
@click.option("--output", type=new_file, required=True, help="Grid file to write.")
@click.option("--window", type=existing_file, default=None, help="Synthesis window, bump(1, 1) when omitted.")
@click.option("--analysis-window", type=existing_file, default=None,
              help="Window the coefficients were computed with, the synthesis window when omitted.")
@click.option("--normalize", is_flag=True, help="Divide by the admissibility constant of the pair.")
@click.pass_context
@exits_on_error
def synthesize(ctx: click.Context, input_path: Path, like: Path, output: Path, window: Path | None,
               analysis_window: Path | None, normalize: bool) -> None:
    """
    Apply the synthesis operator to a coefficient file.

    With --normalize the result is divided by ``C_{psi,eta}``, so a volume
    produced by ``analyze`` is mapped back to the signal.
    """
    job = JobConfig.build(command="synthesize", input=input_path, output=output, window=window,
                          threads=threads_from(ctx))
    volume, _ = read_volume(job.input)
    target = read_grid(like)
    eta = job.load_window()
    rebuilt = synthesize_volume(volume, eta, target, threads=job.threads)
    if normalize:
        if not volume.axes.has_both_signs:
            raise InvalidInput("normalized synthesis needs positive and negative scales")
        psi = read_window(analysis_window) if analysis_window is not None else eta
        constant = admissibility_constant(psi, eta, volume.axes.n)
        rebuilt = rebuilt.with_values(rebuilt.values / constant.value)
    write_grid(job.output, rebuilt)
    logger.info("Wrote synthesis to %s", job.output)


@router.command("decay")
@click.option("--input", "input_path", type=existing_file, required=True, help="Coefficient file.")
@click.option("--report", type=new_file, default=None, help="JSON file receiving the decay table.")
@click.option("--limit", type=float, default=None, help="Growth factor above which an entry is flagged.")
@exits_on_error
def decay(input_path: Path, report: Path | None, limit: float | None) -> None:
    """
    Estimate the weighted suprema of a coefficient file on its full and its inner domain.

    Prints the table as JSON; flagged entries are also logged as warnings.
    """
    if limit is not None and limit <= 1.0:
        raise InvalidInput(f"growth limit must exceed 1, got {limit}")
    volume, _ = read_volume(input_path)
    result = decay_report(volume, limit)
    if report is not None:
        write_report(result, report)
    click.echo(result.model_dump_json(indent=2))
