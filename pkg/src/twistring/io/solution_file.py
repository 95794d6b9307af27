# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""JSON file holding one standing wave together with its configuration and provenance."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from twistring.continuation import Branch
from twistring.errors import SolutionFileError, compact_str
from twistring.lattice_model import LatticeConfig, StandingWave, residual
from twistring.typed_converter import JsonValueError, raw_to_typed, typed_to_raw

__all__ = (
    "SCHEMA_VERSION",
    "Provenance",
    "SolutionFile",
    "describe_branch",
    "read_solution",
    "write_solution",
)

logger = logging.getLogger(__name__)

#: Version written into new files. Files with a different version are rejected.
SCHEMA_VERSION = 1


@dataclass
class Provenance:
    #: Seed description, e.g. ``single:1``.
    seed: str
    #: How the solution was obtained: ``continuation``, ``reduced`` or ``splice``.
    method: str
    #: One line per traced branch, in order.
    continuation_path: List[str] = field(default_factory=list)


@dataclass
class SolutionFile:
    #: Format version.
    schema_version: int
    #: Ring the solution belongs to.
    config: LatticeConfig
    #: Amplitudes a_1..a_N.
    amplitudes: List[float]
    #: Phases theta_1..theta_N [rad].
    phases: List[float]
    #: 2-norm of the full ring equations at the stored solution.
    residual_norm: float
    #: Where the solution came from.
    provenance: Provenance

    @classmethod
    def from_solution(
        cls, sw: StandingWave, cfg: LatticeConfig, provenance: Provenance
    ) -> "SolutionFile":
        return cls(
            schema_version=SCHEMA_VERSION,
            config=cfg,
            amplitudes=[float(a) for a in sw.amplitudes],
            phases=[float(t) for t in sw.phases],
            residual_norm=float(np.linalg.norm(residual(sw, cfg))),
            provenance=provenance,
        )

    def standing_wave(self) -> StandingWave:
        return StandingWave(np.array(self.amplitudes), np.array(self.phases))

    def to_json(self) -> str:
        return json.dumps(typed_to_raw(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str, source: str = "<string>") -> "SolutionFile":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as err:
            raise SolutionFileError(f"{source} is not valid JSON: {err}") from err
        if not isinstance(raw, dict):
            raise SolutionFileError(f"{source} must hold a JSON object, got {compact_str(raw)}")
        version = raw.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SolutionFileError(
                f"{source} has schema_version {version!r}, expected {SCHEMA_VERSION}"
            )
        try:
            solution = raw_to_typed(raw, cls, strict=True)
        except JsonValueError as err:
            raise SolutionFileError(f"{source} does not match the solution schema: {err}") from err
        n = solution.config.n_sites
        if len(solution.amplitudes) != n or len(solution.phases) != n:
            raise SolutionFileError(
                f"{source} holds {len(solution.amplitudes)} amplitudes and "
                f"{len(solution.phases)} phases for a ring of {n} sites"
            )
        return solution


def describe_branch(branch: Optional[Branch]) -> str:
    """One-line summary of a traced branch for the provenance record."""
    if branch is None or not branch.points:
        return "none"
    first, last = branch.points[0].param_value, branch.last.param_value
    text = (
        f"{branch.parameter.value}: {first!r} -> {last!r} "
        f"({len(branch.points)} points, {branch.method})"
    )
    return text + (" truncated" if branch.truncated else "")


def write_solution(path: Union[str, Path], solution: SolutionFile) -> None:
    path = Path(path)
    path.write_text(solution.to_json())
    logger.info(f"Wrote solution (residual {solution.residual_norm:.3e}) to {path}")


def read_solution(path: Union[str, Path]) -> SolutionFile:
    """Reads a solution file.

    Raises:
        SolutionFileError: If the file is missing or corrupt.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise SolutionFileError(f"Cannot read solution file {path}: {err}") from err
    return SolutionFile.from_json(text, str(path))
