# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

import itertools
from typing import TYPE_CHECKING, Any, Optional, Sequence, Union

import numpy as np

if TYPE_CHECKING:
    from twistring.continuation import Branch

__all__ = (
    "compact_str",
    "compact_array",
    "TwistringError",
    "DimensionMismatchError",
    "UnsupportedConfigurationError",
    "InvalidSeedError",
    "ParityMismatchError",
    "TwistMismatchError",
    "SingularJacobianError",
    "ContinuationError",
    "EigenvalueConvergenceError",
    "SolutionFileError",
)


def _join(items: Sequence[str], total: int, max_items: int, brackets: str) -> str:
    if total > max_items:
        items = list(items) + [f"... ({total} entries)"]
    return brackets[0] + ", ".join(items) + brackets[1]


def compact_str(
    value: Any,
    depth: int = 3,
    max_items: int = 10,
    max_str_len: int = 50,
) -> str:
    """Short printable form of parsed json data, for error messages.

    Containers deeper than ``depth`` are elided, at most ``max_items`` entries are shown per
    container and long strings are cut. Numeric arrays go through :func:`compact_array`.

    Args:
        value: The value to render.
        depth: Number of nested containers to expand.
        max_items: Entries shown per container.
        max_str_len: Characters shown per string.
    """

    def inner(v: Any) -> str:
        return compact_str(v, depth - 1, max_items, max_str_len)

    if isinstance(value, np.ndarray):
        return compact_array(value, max_items)
    if isinstance(value, dict):
        if depth <= 0:
            return "{...}"
        entries = [f"{k}: {inner(v)}" for k, v in itertools.islice(value.items(), max_items)]
        return _join(entries, len(value), max_items, "{}")
    if isinstance(value, (list, tuple)):
        if depth <= 0:
            return "[...]"
        return _join([inner(v) for v in value[:max_items]], len(value), max_items, "[]")
    if isinstance(value, str) and len(value) > max_str_len:
        return repr(value[:max_str_len] + "...")
    if isinstance(value, float):
        return f"{value:.6g}"
    return repr(value)


def compact_array(values: Union[np.ndarray, Sequence[Any]], max_items: int = 8) -> str:
    """Short printable form of a numeric vector, e.g. for error messages."""
    arr = np.asarray(values).ravel()
    if np.iscomplexobj(arr):
        items = [f"{complex(v):.4g}" for v in arr[:max_items]]
    else:
        items = [f"{float(v):.6g}" for v in arr[:max_items]]
    return _join(items, arr.size, max_items, "[]")


class TwistringError(ValueError):
    """Base class of all errors raised by the library."""


class DimensionMismatchError(TwistringError):
    """A vector does not match the ring size of its configuration."""

    def __init__(self, what: str, expected: int, got: int) -> None:
        super().__init__(f"{what} has length {got}, expected {expected}")
        self.what = what
        self.expected = expected
        self.got = got


class UnsupportedConfigurationError(TwistringError):
    pass


class InvalidSeedError(TwistringError):
    pass


class ParityMismatchError(TwistringError):
    pass


class TwistMismatchError(TwistringError):
    def __init__(self, expected: float, got: float, what: str = "twist") -> None:
        super().__init__(f"{what} must be {expected!r}, got {got!r}")
        self.expected = expected
        self.got = got


class SingularJacobianError(TwistringError):
    """The Newton linear system could not be solved."""

    def __init__(self, iteration: int, detail: str = "") -> None:
        msg = f"Singular Jacobian at Newton iteration {iteration}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.iteration = iteration


class ContinuationError(TwistringError):
    """A continuation failed. The branch traced so far is attached."""

    def __init__(self, msg: str, branch: Optional["Branch"] = None) -> None:
        super().__init__(msg)
        self.branch = branch


class EigenvalueConvergenceError(TwistringError):
    pass


class SolutionFileError(TwistringError):
    """A solution file is missing, unreadable or does not match the schema."""
