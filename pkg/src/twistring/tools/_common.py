# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""Option parsing and exit codes shared by the command line tools."""

import math
import re
from pathlib import Path
from typing import List, Optional, Tuple

import click
import numpy as np
import yaml

from twistring.config import SolverConfig, load_config
from twistring.errors import SolutionFileError
from twistring.io import SolutionFile, read_solution
from twistring.typed_converter import JsonValueError


class NonConvergenceError(click.ClickException):
    """A solve or continuation did not reach its target."""

    exit_code = 1


class CorruptInputError(click.ClickException):
    """An input file is missing or does not match its format."""

    exit_code = 2


class DivergedError(click.ClickException):
    """A propagated state blew up."""

    exit_code = 3


_PHI_RE = re.compile(
    r"^(?:(?P<factor>[0-9.eE+-]+)\s*\*?\s*)?pi(?:\s*/\s*(?P<divisor>N|[0-9]+))?$"
)


def parse_phi(text: str, n_sites: int) -> float:
    """Twist from text: a number or ``[factor*]pi[/N|/<int>]``, e.g. ``pi/N`` or ``2pi/7``.

    ``pi/N`` evaluates to ``math.pi / n_sites`` without any decimal round trip.
    """
    text = text.strip()
    match = _PHI_RE.match(text)
    if match is None:
        try:
            return float(text)
        except ValueError:
            raise click.BadParameter(
                f"{text!r} is neither a number nor of the form [a*]pi[/N|/<int>]",
                param_hint="'--phi'",
            ) from None
    value = math.pi
    if match.group("factor") is not None:
        try:
            value = float(match.group("factor")) * math.pi
        except ValueError:
            raise click.BadParameter(f"Invalid factor in {text!r}", param_hint="'--phi'") from None
    divisor = match.group("divisor")
    if divisor is not None:
        value = value / (n_sites if divisor == "N" else int(divisor))
    return value


def parse_float_list(text: str, param_hint: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise click.BadParameter(
            f"{text!r} is not a comma-separated list of numbers", param_hint=param_hint
        ) from None
    if not values:
        raise click.BadParameter("The list is empty", param_hint=param_hint)
    return values


def parse_range(text: str, param_hint: str) -> List[float]:
    """Inclusive range ``start:step:stop``."""
    parts = text.split(":")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        raise click.BadParameter(
            f"{text!r} is not of the form start:step:stop", param_hint=param_hint
        ) from None
    if not step > 0 or stop < start:
        raise click.BadParameter(
            f"{text!r} needs a positive step and stop >= start", param_hint=param_hint
        )
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [float(v) for v in start + step * np.arange(count)]


def parse_int_range(text: str, param_hint: str) -> List[int]:
    values = parse_range(text, param_hint)
    if any(v != round(v) for v in values):
        raise click.BadParameter(f"{text!r} must consist of integers", param_hint=param_hint)
    return [int(round(v)) for v in values]


_PERTURB_RE = re.compile(r"^node=(\d+),amp=([0-9.eE+-]+)$")


def parse_perturb(text: str) -> Tuple[int, float]:
    """``node=<i>,amp=<d>`` as ``(i, d)``."""
    match = _PERTURB_RE.match(text.replace(" ", ""))
    if match is None:
        raise click.BadParameter(
            f"{text!r} is not of the form node=<i>,amp=<d>", param_hint="'--perturb'"
        )
    try:
        return int(match.group(1)), float(match.group(2))
    except ValueError:
        raise click.BadParameter(
            f"Invalid amplitude in {text!r}", param_hint="'--perturb'"
        ) from None


def load_solver_config(path: Optional[Path]) -> SolverConfig:
    if path is None:
        return SolverConfig()
    try:
        return load_config(path, default_type=SolverConfig)
    except (OSError, yaml.YAMLError, JsonValueError) as err:
        raise click.BadParameter(str(err), param_hint="'--solver-config'") from err


def load_solution(path: Path) -> SolutionFile:
    try:
        return read_solution(path)
    except SolutionFileError as err:
        raise CorruptInputError(str(err)) from err


solver_config_option = click.option(
    "--solver-config",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="YAML file with newton/continuation/evolution settings",
)
