# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

import logging
import math
from pathlib import Path
from typing import List, Optional, Tuple

import click
import numpy as np

from twistring.config import SolverConfig
from twistring.continuation import Branch, continue_from_ac, reduced_branch
from twistring.errors import ContinuationError, TwistringError
from twistring.io import Provenance, SolutionFile, describe_branch, write_branch, write_solution
from twistring.lattice_model import (
    CouplingProfile,
    LatticeConfig,
    Nonlinearity,
    PerEdge,
    StandingWave,
    Uniform,
)
from twistring.seed_factory import TWIST_TOLERANCE, Parity, parse_seed, reconstruct
from twistring.tools._common import (
    NonConvergenceError,
    load_solver_config,
    parse_float_list,
    parse_phi,
    solver_config_option,
)

logger = logging.getLogger(__name__)


def dark_node_excitation(n_sites: int) -> List[int]:
    """Excited sites whose continuation to ``phi = pi/N`` is the reduced dark-node solution."""
    if n_sites % 2 == 0:
        return [1]
    m = (n_sites + 1) // 2
    return [m, m + 1]


def use_reduced_route(cfg: LatticeConfig, excited: List[int]) -> bool:
    return (
        cfg.is_uniform
        and cfg.nonlinearity is Nonlinearity.DEFOCUSING
        and cfg.omega > 0
        and abs(cfg.twist - math.pi / cfg.n_sites) <= TWIST_TOLERANCE
        and sorted(excited) == dark_node_excitation(cfg.n_sites)
    )


def sidecar_path(out: Path) -> Path:
    return out.with_suffix(".branch.csv")


def _fail(out: Path, branch: Branch, msg: str) -> NonConvergenceError:
    path = sidecar_path(out)
    write_branch(path, branch)
    return NonConvergenceError(f"{msg}; the traced branch was written to {path}")


def solve_reduced_route(
    cfg: LatticeConfig, out: Path, solver: SolverConfig
) -> Tuple[StandingWave, List[Branch]]:
    k = cfg.max_coupling()
    branch = reduced_branch(
        Parity.of(cfg.n_sites), cfg.n_sites, cfg.omega, k, solver.continuation, solver.newton
    )
    if branch.truncated or branch.last.param_value != k:
        raise _fail(
            out,
            branch,
            f"The dark-node branch ends at k={branch.last.param_value:.6g} before k={k:.6g}",
        )
    return reconstruct(branch.last.solution, cfg), [branch]


def solve_continuation_route(
    cfg: LatticeConfig, excited: List[int], out: Path, solver: SolverConfig
) -> Tuple[StandingWave, List[Branch]]:
    try:
        coupling_branch, twist_branch = continue_from_ac(
            cfg, excited, solver.continuation, solver.newton
        )
    except ContinuationError as err:
        if err.branch is not None:
            raise _fail(out, err.branch, str(err)) from err
        raise NonConvergenceError(str(err)) from err
    for branch in (coupling_branch, twist_branch):
        if branch is not None and branch.truncated:
            raise _fail(
                out,
                branch,
                f"Continuation in {branch.parameter.value} stopped at "
                f"{branch.last.param_value:.6g}",
            )
    final = twist_branch or coupling_branch
    return final.last.solution, [b for b in (coupling_branch, twist_branch) if b is not None]


@click.command(name="solve")
@click.option("--n", "n_sites", type=int, required=True, help="Number of cores on the ring")
@click.option("--omega", type=float, default=1.0, help="Propagation constant", show_default=True)
@click.option("--k", type=float, default=None, help="Uniform coupling coefficient")
@click.option(
    "--k-list",
    default=None,
    help=(
        "Per-core couplings k_1,...,k_N (instead of --k). In the default site convention a "
        "profile such as 0.4,0.25,...,0.25 keeps the solution mirror-symmetric about core 1; "
        "use --k-convention bond for the asymmetric solution"
    ),
)
@click.option(
    "--k-convention",
    type=click.Choice(["site", "bond"]),
    default="site",
    help="Index convention of --k-list: site (k_n belongs to core n) or bond (k_n couples n, n+1)",
    show_default=True,
)
@click.option(
    "--phi", default="0", help="Twist: a number or [a*]pi[/N|/<int>]", show_default=True
)
@click.option(
    "--seed",
    default="single:1",
    help="Excitation: single:<i>, adjacent:<i> or double:<i>,<j>",
    show_default=True,
)
@click.option(
    "--nonlinearity",
    type=click.Choice([n.value for n in Nonlinearity]),
    default=Nonlinearity.DEFOCUSING.value,
    show_default=True,
)
@click.option(
    "--method",
    type=click.Choice(["auto", "continuation", "reduced"]),
    default="auto",
    help="auto uses the reduced dark-node system where it applies",
    show_default=True,
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default="solution.json",
    show_default=True,
)
@solver_config_option
def command(
    n_sites: int,
    omega: float,
    k: Optional[float],
    k_list: Optional[str],
    k_convention: str,
    phi: str,
    seed: str,
    nonlinearity: str,
    method: str,
    out: Path,
    solver_config: Optional[Path],
):
    """Continue a standing wave from the anti-continuum limit and write it to a JSON file.

    The coupling is raised at zero twist first, then the twist. At phi = pi/N with the dark-node
    excitation (single:1 for even N, adjacent:(N+1)/2 for odd N) the reduced dark-node system is
    solved instead, which places the dark node at exactly zero.
    """
    if (k is None) == (k_list is None):
        raise click.UsageError("Give exactly one of --k and --k-list")
    solver = load_solver_config(solver_config)
    couplings: CouplingProfile
    if k_list is not None:
        couplings = PerEdge(parse_float_list(k_list, "'--k-list'"), k_convention)
    else:
        couplings = Uniform(k)
    try:
        cfg = LatticeConfig(
            n_sites, couplings, parse_phi(phi, n_sites), omega, Nonlinearity(nonlinearity)
        )
        excited = parse_seed(seed, n_sites)
    except TwistringError as err:
        raise click.BadParameter(str(err)) from err

    reduced = use_reduced_route(cfg, excited)
    if method == "reduced" and not reduced:
        raise click.UsageError(
            "--method reduced needs uniform coupling, --phi pi/N and the dark-node seed "
            f"({','.join(map(str, dark_node_excitation(n_sites)))})"
        )
    if method == "continuation":
        reduced = False
    logger.info(f"Solving {cfg} by {'reduced system' if reduced else 'continuation'}")
    try:
        if reduced:
            sw, branches = solve_reduced_route(cfg, out, solver)
        else:
            sw, branches = solve_continuation_route(cfg, excited, out, solver)
    except TwistringError as err:
        raise NonConvergenceError(str(err)) from err

    provenance = Provenance(
        seed=seed,
        method="reduced" if reduced else "continuation",
        continuation_path=[describe_branch(b) for b in branches],
    )
    solution = SolutionFile.from_solution(sw, cfg, provenance)
    write_solution(out, solution)

    intensity = np.asarray(solution.amplitudes) ** 2
    lo, hi = int(np.argmin(intensity)), int(np.argmax(intensity))
    click.echo(f"residual norm: {solution.residual_norm:.3e}")
    click.echo(f"min intensity: {intensity[lo]:.6e} at node {lo + 1}")
    click.echo(f"max intensity: {intensity[hi]:.6e} at node {hi + 1}")
    click.echo(f"amplitudes: {' '.join(f'{a:.10g}' for a in solution.amplitudes)}")
    click.echo(f"phases: {' '.join(f'{t:.10g}' for t in solution.phases)}")
