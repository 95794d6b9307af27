# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

from pathlib import Path
from typing import Optional

import click

from twistring.continuation import sweep_k0
from twistring.errors import ContinuationError, UnsupportedConfigurationError
from twistring.io import write_k0_sweep
from twistring.tools._common import (
    NonConvergenceError,
    load_solver_config,
    parse_int_range,
    parse_range,
    solver_config_option,
)
from twistring.worker import WorkerConfig


@click.command(name="sweep-k0")
@click.option("--n", "n_sites", type=int, default=None, help="Fixed (even) ring size")
@click.option("--n-range", default=None, help="Ring sizes start:step:stop")
@click.option("--omega", type=float, default=None, help="Fixed propagation constant")
@click.option("--omega-range", default=None, help="Propagation constants start:step:stop")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="k0.csv",
    show_default=True,
)
@solver_config_option
def command(
    n_sites: Optional[int],
    n_range: Optional[str],
    omega: Optional[float],
    omega_range: Optional[str],
    out: Path,
    solver_config: Optional[Path],
):
    """Critical coupling k0 of the even dark-node branch over ring sizes or omega.

    Use --n-range with --omega, or --n with --omega-range. Omega sweeps also print the slope of
    the least-squares line through k0(omega). TWISTRING_THREADS caps the number of threads.
    """
    if n_range is not None and omega_range is None and omega is not None and n_sites is None:
        kwargs = dict(n_values=parse_int_range(n_range, "'--n-range'"), omega=omega)
    elif omega_range is not None and n_range is None and n_sites is not None and omega is None:
        kwargs = dict(omega_values=parse_range(omega_range, "'--omega-range'"), n_sites=n_sites)
    else:
        raise click.UsageError("Use either --n-range with --omega or --n with --omega-range")
    solver = load_solver_config(solver_config)
    try:
        sweep = sweep_k0(
            opts=solver.continuation,
            newton_opts=solver.newton,
            worker_config=WorkerConfig.from_env(),
            progress=True,
            **kwargs,
        )
    except UnsupportedConfigurationError as err:
        raise click.BadParameter(str(err)) from err
    except ContinuationError as err:
        raise NonConvergenceError(str(err)) from err
    write_k0_sweep(out, sweep)

    for value, k0 in zip(sweep.values, sweep.k0):
        click.echo(f"{sweep.variable}={value:g}: k0={k0:.8f}")
    if sweep.slope is not None:
        click.echo(f"slope: {sweep.slope:.6f}")
        click.echo(f"intercept: {sweep.intercept:.6f}")
