# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""Comma-separated tables for plotting: one header line naming columns and units, then rows."""

import logging
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from twistring.continuation import Branch, K0Sweep, PhiScanRow
from twistring.evolution import Trajectory
from twistring.stability import Spectrum

__all__ = (
    "read_table",
    "write_table",
    "write_branch",
    "write_k0_sweep",
    "write_phi_scan",
    "write_spectrum",
    "write_trajectory",
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def write_table(path: PathLike, columns: Sequence[str], rows: np.ndarray) -> None:
    """Writes ``rows`` (one column per name) with full double precision."""
    rows = np.asarray(rows, dtype=float).reshape(-1, len(columns))
    np.savetxt(path, rows, fmt="%.17g", delimiter=",", header=",".join(columns), comments="")
    logger.info(f"Wrote {rows.shape[0]} rows to {path}")


def read_table(path: PathLike) -> Tuple[List[str], np.ndarray]:
    """Header names and the rows of a table written by :func:`write_table`."""
    with open(path) as f:
        header = f.readline().strip().split(",")
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, rows.reshape(-1, len(header))


def write_spectrum(path: PathLike, spectrum: Spectrum) -> None:
    eigs = spectrum.eigenvalues
    write_table(path, ["re [1/mm]", "im [1/mm]"], np.column_stack([eigs.real, eigs.imag]))


def write_trajectory(path: PathLike, traj: Trajectory) -> None:
    n = traj.states.shape[1]
    columns = ["z [mm]"] + [f"|c{i}|" for i in range(1, n + 1)] + ["H [1/mm]", "P"]
    write_table(
        path,
        columns,
        np.column_stack([traj.z_samples, traj.intensities, traj.hamiltonian, traj.power]),
    )


def write_branch(path: PathLike, branch: Branch) -> None:
    unit = "[1/mm]" if branch.parameter.value == "coupling_k" else "[rad]"
    write_table(
        path,
        [f"{branch.parameter.value} {unit}", "l2_norm", "converged", "residual_norm"],
        np.array(
            [
                [p.param_value, p.l2_norm, float(p.converged), p.residual_norm]
                for p in branch.points
            ]
        ),
    )


def write_k0_sweep(path: PathLike, sweep: K0Sweep) -> None:
    unit = "" if sweep.variable == "n_sites" else " [1/mm]"
    write_table(
        path, [f"{sweep.variable}{unit}", "k0 [1/mm]"], np.column_stack([sweep.values, sweep.k0])
    )


def write_phi_scan(path: PathLike, rows: Sequence[PhiScanRow]) -> None:
    write_table(
        path,
        ["k [1/mm]", "phi [rad]", "min_node", "min_amplitude"],
        np.array([[r.k, r.phi, r.min_node, r.min_amplitude] for r in rows]),
    )
