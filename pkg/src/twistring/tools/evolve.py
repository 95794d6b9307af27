# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

from pathlib import Path
from typing import Optional

import click
import numpy as np

from twistring.errors import TwistringError
from twistring.evolution import (
    boundedness_report,
    conservation_drift,
    evolve,
    first_oscillation_period,
    oscillation_periods,
    perturb_amplitude,
)
from twistring.io import write_trajectory
from twistring.lattice_model import to_complex
from twistring.tools._common import (
    DivergedError,
    load_solution,
    load_solver_config,
    parse_perturb,
    solver_config_option,
)


@click.command(name="evolve")
@click.option(
    "--solution",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Solution file written by 'solve'",
)
@click.option("--z-max", type=float, default=50.0, help="Propagation length", show_default=True)
@click.option("--dz", type=float, default=None, help="Integration step [default: 1e-3]")
@click.option("--stride", type=int, default=None, help="Steps between stored samples")
@click.option(
    "--perturb", default=None, help="Add amp to the amplitude of a node: node=<i>,amp=<d>"
)
@click.option(
    "--k-evolve",
    type=float,
    default=None,
    help="Propagate with this (maximum) coupling instead of the solution's",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="trajectory.csv",
    show_default=True,
)
@solver_config_option
def command(
    solution: Path,
    z_max: float,
    dz: Optional[float],
    stride: Optional[int],
    perturb: Optional[str],
    k_evolve: Optional[float],
    out: Path,
    solver_config: Optional[Path],
):
    """Propagate a stored standing wave with fourth-order Runge-Kutta.

    Writes z, the node moduli |c_n| and the conserved quantities per sample, and reports whether
    the moduli stayed close to those of the unperturbed solution.
    """
    opts = load_solver_config(solver_config).evolution
    stored = load_solution(solution)
    cfg = stored.config
    sw = stored.standing_wave()
    reference = to_complex(sw, 0.0, cfg)
    try:
        if perturb is not None:
            node, amp = parse_perturb(perturb)
            c0 = perturb_amplitude(sw, node, amp)
        else:
            c0 = reference
        run_cfg = cfg if k_evolve is None else cfg.with_max_coupling(k_evolve)
        traj = evolve(c0, run_cfg, z_max, dz=dz, stride=stride, opts=opts, progress=True)
    except (TwistringError, ValueError) as err:
        raise click.BadParameter(str(err)) from err
    write_trajectory(out, traj)
    if traj.diverged:
        raise DivergedError(
            f"The state diverged at z={traj.z_samples[-1]:.6g}; samples up to there are in {out}"
        )

    reference_z = None
    if perturb is None and k_evolve is not None:
        # an unperturbed start has no deviation at z = 0
        reference_z = first_oscillation_period(traj, reference)
    else:
        oscillation_periods(traj, reference)
    report = boundedness_report(traj, reference, opts, reference_z=reference_z)
    drift = conservation_drift(traj)
    click.echo(f"samples: {traj.z_samples.size}")
    click.echo(f"max deviation per node: {np.array2string(report.max_deviation, precision=3)}")
    click.echo(f"initial deviation: {report.initial_deviation:.3e}")
    click.echo(f"overall deviation: {report.overall_deviation:.3e}")
    click.echo(f"growth ratio: {report.growth_ratio:.3g}{' (growing)' if report.growing else ''}")
    click.echo(f"bounded: {'yes' if report.bounded else 'no'}")
    if drift.hamiltonian is not None:
        click.echo(f"relative H drift: {drift.hamiltonian:.3e}")
    click.echo(f"relative P drift: {drift.power:.3e}")
