# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar, Union

import yaml

from twistring.continuation import ContinuationOptions
from twistring.evolution import EvolutionOptions
from twistring.newton_solver import NewtonOptions
from twistring.typed_converter import JsonValueError, raw_to_typed

__all__ = ("SolverConfig", "load_config")

T = TypeVar("T")


@dataclass
class SolverConfig:
    """Numerical settings, as read from a ``--solver-config`` YAML file.

    Example::

        newton:
          tol_residual: 1.0e-12
          max_iter: 50
        continuation:
          ds: 0.005
        evolution:
          dz: 0.001
    """

    #: Damped Newton settings.
    newton: NewtonOptions = field(default_factory=NewtonOptions)
    #: Branch tracing settings.
    continuation: ContinuationOptions = field(default_factory=ContinuationOptions)
    #: Runge-Kutta settings.
    evolution: EvolutionOptions = field(default_factory=EvolutionOptions)


def load_config(
    path: Union[Path, str, Dict[str, Any]],
    *,
    default_type: Type[T] = SolverConfig,
    strict: bool = True,
    default_kwargs: Optional[Dict[str, Any]] = None,
) -> T:
    """
    Loads a config from a YAML file or directly from a dictionary.

    Args:
        path: Path to the config to load or a dictionary containing the config.
        default_type: The dataclass to build.
        strict: If true, don't allow additional attributes in the config.
        default_kwargs: Default kwargs to use, will be overridden by the config.

    Returns:
        The instantiated type.

    Raises:
        JsonValueError: If the content does not match ``default_type``.
    """
    if isinstance(path, dict):
        data = path
    else:
        # Read the config from a file
        with Path(path).absolute().open() as f:
            data = yaml.safe_load(f)
        if data is None:
            data = {}
    if not isinstance(data, dict):
        raise JsonValueError(
            f"Expected a mapping at the top of {path}, got {type(data).__name__}",
            default_type,
            data,
            "root",
            (),
        )

    if default_kwargs is not None:
        new_data = default_kwargs.copy()
        new_data.update(data)
        data = new_data

    return raw_to_typed(data, default_type, strict=strict)
