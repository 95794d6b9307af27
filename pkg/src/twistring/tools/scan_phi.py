# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

from pathlib import Path
from typing import Optional

import click
import numpy as np

from twistring.continuation import scan_min_node_vs_phi
from twistring.errors import TwistringError
from twistring.io import write_phi_scan
from twistring.lattice_model import LatticeConfig
from twistring.seed_factory import parse_seed
from twistring.tools._common import (
    load_solver_config,
    parse_float_list,
    parse_phi,
    solver_config_option,
)
from twistring.worker import WorkerConfig


@click.command(name="scan-phi")
@click.option("--n", "n_sites", type=int, required=True, help="Number of cores on the ring")
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--k-values", required=True, help="Couplings to scan, e.g. 0.1,0.25,0.4")
@click.option(
    "--phi-max", default="2*pi/N", help="Upper end of the open twist interval", show_default=True
)
@click.option("--phi-points", type=int, default=40, help="Interior grid points", show_default=True)
@click.option("--seed", default="single:1", show_default=True)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="phi_scan.csv",
    show_default=True,
)
@solver_config_option
def command(
    n_sites: int,
    omega: float,
    k_values: str,
    phi_max: str,
    phi_points: int,
    seed: str,
    out: Path,
    solver_config: Optional[Path],
):
    """Amplitude of the weakest node over a grid of twists in (0, phi-max).

    Grid points that the continuation could not reach are written with min_node 0 and a NaN
    amplitude.
    """
    if phi_points < 1:
        raise click.BadParameter("Needs at least one point", param_hint="'--phi-points'")
    couplings = parse_float_list(k_values, "'--k-values'")
    phis = parse_phi(phi_max, n_sites) * np.arange(1, phi_points + 1) / (phi_points + 1)
    solver = load_solver_config(solver_config)
    try:
        cfg = LatticeConfig.uniform(n_sites, 0.0, 0.0, omega)
        excited = parse_seed(seed, n_sites)
    except TwistringError as err:
        raise click.BadParameter(str(err)) from err
    rows = scan_min_node_vs_phi(
        cfg,
        couplings,
        phis,
        excited,
        solver.continuation,
        solver.newton,
        WorkerConfig.from_env(),
        progress=True,
    )
    write_phi_scan(out, rows)

    for k in couplings:
        amplitudes = np.array([abs(r.min_amplitude) for r in rows if r.k == k])
        reached = amplitudes[~np.isnan(amplitudes)]
        if reached.size:
            click.echo(
                f"k={k:g}: smallest node amplitude {reached.min():.6e} "
                f"({reached.size}/{amplitudes.size} grid points)"
            )
        else:
            click.echo(f"k={k:g}: no grid point reached")
