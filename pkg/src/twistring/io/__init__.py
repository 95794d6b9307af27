# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

from twistring.io.solution_file import (
    SCHEMA_VERSION,
    Provenance,
    SolutionFile,
    describe_branch,
    read_solution,
    write_solution,
)
from twistring.io.tables import (
    read_table,
    write_branch,
    write_k0_sweep,
    write_phi_scan,
    write_spectrum,
    write_table,
    write_trajectory,
)

__all__ = [
    "SCHEMA_VERSION",
    "Provenance",
    "SolutionFile",
    "describe_branch",
    "read_solution",
    "write_solution",
    "read_table",
    "write_branch",
    "write_k0_sweep",
    "write_phi_scan",
    "write_spectrum",
    "write_table",
    "write_trajectory",
]
