# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

from pathlib import Path

import click

from twistring.errors import EigenvalueConvergenceError
from twistring.io import write_spectrum
from twistring.stability import ZERO_TOL, build_linearization, eigenvalues, outside_band
from twistring.tools._common import NonConvergenceError, load_solution


@click.command(name="spectrum")
@click.option(
    "--solution",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Solution file written by 'solve'",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="spectrum.csv",
    show_default=True,
)
@click.option(
    "--zero-tol",
    type=float,
    default=ZERO_TOL,
    help="Threshold for kernel eigenvalues and for the stability verdict",
    show_default=True,
)
def command(solution: Path, out: Path, zero_tol: float):
    """Eigenvalues of the linearization about a stored standing wave.

    Writes one (re, im) row per eigenvalue and prints the stability verdict.
    """
    stored = load_solution(solution)
    cfg = stored.config
    matrix = build_linearization(stored.standing_wave(), cfg)
    try:
        spectrum = eigenvalues(matrix, zero_tol)
    except EigenvalueConvergenceError as err:
        raise NonConvergenceError(str(err)) from err
    write_spectrum(out, spectrum)

    click.echo(f"eigenvalues: {spectrum.eigenvalues.size}")
    click.echo(f"max Re: {spectrum.max_real_part:.3e}")
    click.echo(f"max |Re|: {spectrum.max_abs_real_part:.3e}")
    click.echo(
        f"kernel: {spectrum.kernel_algebraic_multiplicity} eigenvalues "
        f"(null space dimension {spectrum.kernel_geometric_multiplicity})"
    )
    click.echo(f"outside band: {outside_band(spectrum, cfg).size}")
    click.echo(f"classification: {spectrum.classification.value}")
