# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause
"""Conversion between plain json/yaml data and the typed option and file dataclasses."""

import dataclasses
import typing
from enum import Enum
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple, Type, TypeVar, Union

import numpy as np

__all__ = ("JsonValueError", "raw_to_typed", "typed_to_raw")

Raw = Union[dict, list, str, int, bool, float, None]

T = TypeVar("T")


class JsonValueError(ValueError):
    """Raised when raw data does not fit the requested type.

    ``path`` names the offending entry from the root (``root -> SolverConfig:newton``), ``stage``
    holds its position as a tuple of indices and is used to pick the most specific error when
    several union variants fail.
    """

    def __init__(
        self, msg: str, expected_type: Type, value: Any, path: str, stage: Tuple[int, ...]
    ) -> None:
        super().__init__(msg)
        self.expected_type = expected_type
        self.value = value
        self.path = path
        self.stage = stage


class _Missing:
    def __repr__(self) -> str:
        return "missing value"


_MISSING = _Missing()

_PRIMITIVES = (str, int, float, bool, type(None))


def _type_name(tp: Any) -> str:
    return getattr(tp, "__name__", repr(tp))


def _default_of(fld: dataclasses.Field) -> Any:
    if fld.default is not dataclasses.MISSING:
        return fld.default
    if fld.default_factory is not dataclasses.MISSING:
        return fld.default_factory()
    return _MISSING


@dataclasses.dataclass
class _Node:
    """One position in the raw tree while it is converted."""

    raw: Any
    tp: Any
    path: str
    stage: Tuple[int, ...]

    def fail(self, msg: Optional[str] = None) -> JsonValueError:
        return JsonValueError(
            msg or f"Expected {_type_name(self.tp)} at {self.path}, got {self.raw!r}",
            self.tp,
            self.raw,
            self.path,
            self.stage,
        )

    def child(self, raw: Any, tp: Any, label: str, index: int) -> "_Node":
        return _Node(raw, tp, f"{self.path} -> {label}", self.stage + (index,))


class _Converter:
    def __init__(self, strict: bool):
        self.strict = strict
        self._by_origin: Dict[Any, Callable[[_Node], Any]] = {
            Literal: self._literal,
            Union: self._union,
            list: self._list,
            tuple: self._tuple,
            dict: self._dict,
        }

    def convert(self, node: _Node) -> Any:
        if node.raw is _MISSING:
            raise node.fail(f"Missing value at {node.path}")
        tp = type(None) if node.tp is None else node.tp
        if tp in _PRIMITIVES:
            return self._primitive(dataclasses.replace(node, tp=tp))
        if tp is Any:
            return node.raw
        handler = self._by_origin.get(typing.get_origin(tp))
        if handler is not None:
            return handler(node)
        if isinstance(tp, type) and issubclass(tp, Enum):
            return self._enum(node)
        if dataclasses.is_dataclass(tp):
            return self._dataclass(node)
        if tp in (dict, list) and not isinstance(node.raw, tp):
            raise node.fail()
        return node.raw

    def _primitive(self, node: _Node) -> Any:
        raw, tp = node.raw, node.tp
        if isinstance(raw, bool) and tp in (int, float):
            raise node.fail(f"Expected {_type_name(tp)} at {node.path}, got boolean {raw!r}")
        if isinstance(raw, tp):
            return float(raw) if tp is float else raw
        if tp is float and isinstance(raw, int):
            return float(raw)
        raise node.fail(
            f"Type does not match, expected {_type_name(tp)} at {node.path}, got {raw!r}"
        )

    def _literal(self, node: _Node) -> Any:
        if node.raw not in typing.get_args(node.tp):
            raise node.fail()
        return node.raw

    def _enum(self, node: _Node) -> Enum:
        try:
            return node.tp(node.raw)
        except ValueError:
            choices = ", ".join(repr(member.value) for member in node.tp)
            raise node.fail(f"Expected one of {choices} at {node.path}, got {node.raw!r}") from None

    def _union(self, node: _Node) -> Any:
        variants = typing.get_args(node.tp)
        if node.raw is None and type(None) in variants:
            return None
        errors: List[JsonValueError] = []
        for variant in variants:
            try:
                return self.convert(node.child(node.raw, variant, _type_name(variant), 1))
            except JsonValueError as err:
                errors.append(err)
        if not errors:
            raise node.fail()
        # the variant that got furthest explains the mismatch best
        raise max(errors, key=lambda err: len(err.stage))

    def _dataclass(self, node: _Node) -> Any:
        if not isinstance(node.raw, dict):
            raise node.fail()
        cls = node.tp
        name = _type_name(cls)
        hints = typing.get_type_hints(cls)
        fields = [fld for fld in dataclasses.fields(cls) if fld.init]
        known = {fld.name for fld in fields}
        kwargs = {}
        for index, fld in enumerate(fields):
            raw = node.raw.get(fld.name, _default_of(fld))
            kwargs[fld.name] = self.convert(
                node.child(raw, hints[fld.name], f"{name}:{fld.name}", index)
            )
        if self.strict:
            extra = sorted(set(node.raw) - known)
            if extra:
                raise node.fail(f"Additional attributes {extra} for {name} at {node.path}")
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as err:
            raise node.fail(f"Invalid {name} at {node.path}: {err}") from err

    def _list(self, node: _Node) -> list:
        if not isinstance(node.raw, list):
            raise node.fail()
        (item_type,) = typing.get_args(node.tp)
        return [
            self.convert(node.child(item, item_type, str(index), index))
            for index, item in enumerate(node.raw)
        ]

    def _tuple(self, node: _Node) -> tuple:
        if not isinstance(node.raw, (list, tuple)):
            raise node.fail()
        item_types = typing.get_args(node.tp)
        if len(item_types) == 2 and item_types[1] is Ellipsis:
            item_types = (item_types[0],) * len(node.raw)
        if len(item_types) != len(node.raw):
            raise node.fail()
        return tuple(
            self.convert(node.child(item, item_type, str(index), index))
            for index, (item, item_type) in enumerate(zip(node.raw, item_types))
        )

    def _dict(self, node: _Node) -> dict:
        if not isinstance(node.raw, dict):
            raise node.fail()
        key_type, value_type = typing.get_args(node.tp)
        if key_type is not str:
            raise TypeError(f"Only str keys are supported, got {key_type!r}")
        return {
            key: self.convert(node.child(value, value_type, repr(key), index))
            for index, (key, value) in enumerate(node.raw.items())
        }


def raw_to_typed(raw_data: Raw, inst_type: Type[T], strict: bool = False) -> T:
    """Builds ``inst_type`` from raw json/yaml data and checks it against the type hints.

    Dataclasses are filled field by field (missing fields take their defaults), enums are built
    from their values, ints are accepted for floats but booleans are not.

    Usage::

        @dataclass
        class Options:
            tol: float
            kind: Literal["a", "b"] = "a"

        assert raw_to_typed({"tol": 1}, Options) == Options(tol=1.0, kind="a")

    Args:
        raw_data: The parsed json or yaml data.
        inst_type: The type to build.
        strict: If true, reject keys that are not fields of the dataclass.

    Raises:
        JsonValueError: If the data does not fit the type.
    """
    return _Converter(strict).convert(_Node(raw_data, inst_type, "root", ()))


def typed_to_raw(value: Any) -> Raw:
    """Plain json data for a typed value.

    Dataclass fields keep their declaration order, enums are written by value, tuples and arrays
    as lists.
    """
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            fld.name: typed_to_raw(getattr(value, fld.name)) for fld in dataclasses.fields(value)
        }
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return [typed_to_raw(item) for item in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [typed_to_raw(item) for item in value]
    if isinstance(value, dict):
        return {str(key): typed_to_raw(item) for key, item in value.items()}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        raise TypeError(f"Complex value {value!r} has no json representation")
    return value
