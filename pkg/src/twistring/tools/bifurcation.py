# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

from pathlib import Path
from typing import Optional

import click

from twistring.continuation import detect_k0, reduced_branch
from twistring.errors import ContinuationError, TwistringError
from twistring.io import write_branch
from twistring.seed_factory import Parity
from twistring.tools._common import NonConvergenceError, load_solver_config, solver_config_option


@click.command(name="bifurcation")
@click.option("--n", "n_sites", type=int, required=True, help="Number of cores on the ring")
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--k-max", type=float, default=None, help="End of the branch [default: omega]")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="bifurcation.csv",
    show_default=True,
)
@solver_config_option
def command(
    n_sites: int,
    omega: float,
    k_max: Optional[float],
    out: Path,
    solver_config: Optional[Path],
):
    """l2 norm of the dark-node solution at phi = pi/N against the coupling k.

    The branch starts at the anti-continuum point (norm sqrt(omega)) and ends where it merges
    with the zero solution, whose coupling k0 is printed.
    """
    solver = load_solver_config(solver_config)
    parity = Parity.of(n_sites)
    try:
        branch = reduced_branch(
            parity, n_sites, omega, k_max, solver.continuation, solver.newton
        )
        write_branch(out, branch)
        k0 = detect_k0(parity, n_sites, omega, solver.continuation, solver.newton)
    except ContinuationError as err:
        raise NonConvergenceError(str(err)) from err
    except TwistringError as err:
        raise click.BadParameter(str(err)) from err
    click.echo(f"points: {len(branch.points)}")
    click.echo(f"last point: k={branch.last.param_value:.6g}, l2={branch.last.l2_norm:.6g}")
    click.echo(f"k0: {k0:.8f}")
