# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""Anti-continuum seeds, the reduced dark-node systems and their reconstruction.

At ``phi = pi/N`` the full ring equations admit solutions with a site of exactly zero amplitude.
They are obtained from a real system on half of the ring:

* even ``N`` with ``M = N/2 + 1``: unknowns ``a_1..a_{M-1}``, the dark node sits at site ``M``
  opposite the bright node at site 1;
* odd ``N`` with ``M = (N+1)/2``: unknowns ``a_2..a_M``, the dark node sits at site 1 opposite the
  bright pair at sites ``M, M+1``.

Both reduced systems read ``k (a_{n-1} + a_{n+1}) + omega a_n - a_n^3 = 0`` and differ only in the
padding at their ends, which is encoded in :func:`reduced_operator`.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence

import numpy as np

from twistring.errors import (
    DimensionMismatchError,
    InvalidSeedError,
    ParityMismatchError,
    TwistMismatchError,
    UnsupportedConfigurationError,
    compact_array,
)
from twistring.lattice_model import LatticeConfig, Nonlinearity, StandingWave

__all__ = (
    "Parity",
    "ReducedAmplitudes",
    "TWIST_TOLERANCE",
    "reduced_size",
    "reduced_operator",
    "ac_seed",
    "ac_reduced_seed",
    "parse_seed",
    "reduced_residual",
    "reduced_residual_even",
    "reduced_residual_odd",
    "reduced_jacobian",
    "reduced_jacobian_even",
    "reduced_jacobian_odd",
    "reduced_coupling_derivative",
    "reconstruct",
    "reconstruct_even",
    "reconstruct_odd",
    "extract_reduced",
    "splice_double_pulse",
)

#: Accepted deviation of the twist from its dark-node value.
TWIST_TOLERANCE = 1e-14


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, n_sites: int) -> "Parity":
        return cls.EVEN if n_sites % 2 == 0 else cls.ODD


def reduced_size(parity: Parity, n_sites: int) -> int:
    """Number of unknowns ``M - 1`` of the reduced system."""
    if Parity.of(n_sites) is not Parity(parity):
        raise ParityMismatchError(f"Ring of {n_sites} sites has no {Parity(parity).value} system")
    return n_sites // 2 if n_sites % 2 == 0 else (n_sites - 1) // 2


@dataclass(frozen=True, eq=False)
class ReducedAmplitudes:
    """Unknowns of a reduced dark-node system (even: ``a_1..a_{M-1}``, odd: ``a_2..a_M``)."""

    #: Amplitudes in the reduced index range.
    values: np.ndarray
    #: Which reduced system the values belong to.
    parity: Parity
    #: Size N of the full ring.
    n_sites: int

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        object.__setattr__(self, "parity", Parity(self.parity))
        expected = reduced_size(self.parity, self.n_sites)
        if values.size != expected:
            raise DimensionMismatchError(
                f"{self.parity.value} reduced amplitudes", expected, values.size
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "ReducedAmplitudes":
        return ReducedAmplitudes(values, self.parity, self.n_sites)

    def __repr__(self) -> str:
        return (
            f"ReducedAmplitudes({self.parity.value}, N={self.n_sites}, "
            f"values={compact_array(self.values)})"
        )


def reduced_operator(parity: Parity, n_sites: int) -> np.ndarray:
    """Neighbour-sum matrix L of the reduced system, including its end padding.

    Even rings reflect at the bright node (``a_0 = a_2``) and end at the dark node (``a_M = 0``).
    Odd rings start next to the dark node (``a_1 = 0``) and reflect between the bright pair
    (``a_{M+1} = a_M``).
    """
    size = reduced_size(parity, n_sites)
    op = np.zeros((size, size))
    idx = np.arange(size - 1)
    op[idx, idx + 1] = 1.0
    op[idx + 1, idx] = 1.0
    if Parity(parity) is Parity.EVEN:
        op[0, 1] += 1.0
    else:
        op[-1, -1] += 1.0
    return op


def _ac_amplitude(omega: float, nonlinearity: Nonlinearity) -> float:
    squared = omega * Nonlinearity(nonlinearity).sign
    if squared <= 0:
        raise UnsupportedConfigurationError(
            f"Excited anti-continuum sites need omega*sign > 0, got omega={omega!r} "
            f"({Nonlinearity(nonlinearity).value})"
        )
    return math.sqrt(squared)


def ac_seed(
    cfg: LatticeConfig, excited: Iterable[int], signs: Optional[Sequence[int]] = None
) -> StandingWave:
    """Anti-continuum standing wave with ``+-sqrt(omega)`` on the excited sites.

    Args:
        cfg: Ring configuration. Only ``n_sites``, ``omega`` and the nonlinearity are used.
        excited: 1-based indices of the excited sites.
        signs: Optional sign (+1/-1) per excited site, in the order of ``excited``.

    Returns:
        The seed with all phases zero.
    """
    sites = list(excited)
    if not sites:
        raise InvalidSeedError("At least one excited site is required")
    if signs is None:
        signs = [1] * len(sites)
    if len(signs) != len(sites):
        raise DimensionMismatchError("seed signs", len(sites), len(signs))
    amplitude = _ac_amplitude(cfg.omega, cfg.nonlinearity)
    a = np.zeros(cfg.n_sites)
    for site, sign in zip(sites, signs):
        if not 1 <= site <= cfg.n_sites:
            raise InvalidSeedError(f"Site {site} is outside the ring 1..{cfg.n_sites}")
        if sign not in (1, -1):
            raise InvalidSeedError(f"Seed sign must be +1 or -1, got {sign!r}")
        a[site - 1] = sign * amplitude
    return StandingWave(a, np.zeros(cfg.n_sites))


_SEED_RE = re.compile(r"^(single|adjacent|double):(\d+)(?:,(\d+))?$")


def parse_seed(text: str, n_sites: int) -> List[int]:
    """Excited sites of a seed description.

    ``single:<i>`` excites site i, ``adjacent:<i>`` the pair i, i+1 (wrapping at the ring end) and
    ``double:<i>,<j>`` the two given sites.
    """
    match = _SEED_RE.match(text.strip())
    if match is None:
        raise InvalidSeedError(
            f"Cannot parse seed {text!r}, expected single:<i>, adjacent:<i> or double:<i>,<j>"
        )
    kind, first, second = match.group(1), int(match.group(2)), match.group(3)
    if (kind == "double") != (second is not None):
        raise InvalidSeedError(f"Seed {text!r} has the wrong number of sites for {kind!r}")
    if not 1 <= first <= n_sites:
        raise InvalidSeedError(f"Site {first} is outside the ring 1..{n_sites}")
    if kind == "single":
        return [first]
    if kind == "adjacent":
        return [first, first % n_sites + 1]
    second_site = int(second)
    if not 1 <= second_site <= n_sites or second_site == first:
        raise InvalidSeedError(f"Invalid second site {second_site} in {text!r}")
    return [first, second_site]


def ac_reduced_seed(parity: Parity, n_sites: int, omega: float) -> ReducedAmplitudes:
    """Reduced system solution at ``k = 0``: the bright node is the single excited entry."""
    size = reduced_size(parity, n_sites)
    values = np.zeros(size)
    amplitude = _ac_amplitude(omega, Nonlinearity.DEFOCUSING)
    if Parity(parity) is Parity.EVEN:
        values[0] = amplitude
    else:
        values[-1] = amplitude
    return ReducedAmplitudes(values, parity, n_sites)


def _check_parity(a: ReducedAmplitudes, parity: Parity) -> None:
    if a.parity is not parity:
        raise ParityMismatchError(
            f"Expected {parity.value} reduced amplitudes, got {a.parity.value}"
        )


def reduced_residual(
    a: ReducedAmplitudes,
    k: float,
    omega: float,
    nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
) -> np.ndarray:
    x = a.values
    sigma = Nonlinearity(nonlinearity).sign
    return k * (reduced_operator(a.parity, a.n_sites) @ x) + omega * x - sigma * x**3


def reduced_residual_even(
    a: ReducedAmplitudes,
    k: float,
    omega: float,
    nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
) -> np.ndarray:
    """Residual of the even dark-node system in the unknowns ``a_1..a_{M-1}``."""
    _check_parity(a, Parity.EVEN)
    return reduced_residual(a, k, omega, nonlinearity)


def reduced_residual_odd(
    a: ReducedAmplitudes,
    k: float,
    omega: float,
    nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
) -> np.ndarray:
    """Residual of the odd dark-node system in the unknowns ``a_2..a_M``."""
    _check_parity(a, Parity.ODD)
    return reduced_residual(a, k, omega, nonlinearity)


def reduced_jacobian(
    a: ReducedAmplitudes,
    k: float,
    omega: float,
    nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
) -> np.ndarray:
    sigma = Nonlinearity(nonlinearity).sign
    return k * reduced_operator(a.parity, a.n_sites) + np.diag(omega - 3 * sigma * a.values**2)


def reduced_jacobian_even(
    a: ReducedAmplitudes,
    k: float,
    omega: float,
    nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
) -> np.ndarray:
    _check_parity(a, Parity.EVEN)
    return reduced_jacobian(a, k, omega, nonlinearity)


def reduced_jacobian_odd(
    a: ReducedAmplitudes,
    k: float,
    omega: float,
    nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
) -> np.ndarray:
    _check_parity(a, Parity.ODD)
    return reduced_jacobian(a, k, omega, nonlinearity)


def reduced_coupling_derivative(a: ReducedAmplitudes) -> np.ndarray:
    """Derivative of the reduced residual with respect to ``k``."""
    return reduced_operator(a.parity, a.n_sites) @ a.values


def _check_dark_node_config(a: ReducedAmplitudes, cfg: LatticeConfig, parity: Parity) -> None:
    _check_parity(a, parity)
    if cfg.n_sites != a.n_sites:
        raise DimensionMismatchError("ring", a.n_sites, cfg.n_sites)
    if not cfg.is_uniform:
        raise UnsupportedConfigurationError("Dark-node reconstruction needs uniform coupling")
    expected = math.pi / cfg.n_sites
    if abs(cfg.twist - expected) > TWIST_TOLERANCE:
        raise TwistMismatchError(expected, cfg.twist)


def reconstruct_even(a: ReducedAmplitudes, cfg: LatticeConfig) -> StandingWave:
    """Full ring solution with a dark node at site ``M = N/2 + 1``.

    Raises:
        ParityMismatchError: If ``a`` is not an even reduced vector.
        TwistMismatchError: If the twist is not ``pi/N``.
    """
    _check_dark_node_config(a, cfg, Parity.EVEN)
    n = cfg.n_sites
    m = n // 2 + 1
    amplitudes = np.zeros(n)
    phases = np.zeros(n)
    amplitudes[: m - 1] = a.values
    phases[: m - 1] = np.arange(m - 1) * cfg.twist
    mirror = np.arange(1, m - 1)
    amplitudes[m - 1 + mirror] = amplitudes[m - 1 - mirror]
    phases[m - 1 + mirror] = -phases[m - 1 - mirror]
    return StandingWave(amplitudes, phases)


def reconstruct_odd(a: ReducedAmplitudes, cfg: LatticeConfig) -> StandingWave:
    """Full ring solution with a dark node at site 1 and a bright pair at sites ``M, M+1``."""
    _check_dark_node_config(a, cfg, Parity.ODD)
    n = cfg.n_sites
    m = (n + 1) // 2
    amplitudes = np.zeros(n)
    phases = np.zeros(n)
    amplitudes[1:m] = a.values
    phases[1:m] = np.arange(1, m) * cfg.twist - math.pi / 2
    mirror = np.arange(1, m)
    amplitudes[m - 1 + mirror] = amplitudes[m - mirror]
    phases[m - 1 + mirror] = -phases[m - mirror]
    return StandingWave(amplitudes, phases)


def reconstruct(a: ReducedAmplitudes, cfg: LatticeConfig) -> StandingWave:
    if a.parity is Parity.EVEN:
        return reconstruct_even(a, cfg)
    return reconstruct_odd(a, cfg)


def extract_reduced(sw: StandingWave, parity: Parity) -> ReducedAmplitudes:
    """Reduced unknowns of a full dark-node solution (inverse of the reconstruction)."""
    n = sw.n_sites
    size = reduced_size(parity, n)
    if Parity(parity) is Parity.EVEN:
        values = sw.amplitudes[:size]
    else:
        values = sw.amplitudes[1 : size + 1]
    return ReducedAmplitudes(values.copy(), parity, n)


def splice_double_pulse(half: StandingWave, cfg: LatticeConfig) -> StandingWave:
    """Double pulse made of two copies of a dark-node solution of the half ring.

    Args:
        half: Even dark-node solution on ``N/2`` sites at twist ``pi/(N/2)``.
        cfg: Configuration of the full ring with ``N`` a multiple of 4 and twist ``2 pi / N``.

    Returns:
        ``N``-site solution with bright nodes at sites 1 and ``N/2 + 1``.
    """
    n = cfg.n_sites
    if n % 4 != 0:
        raise ParityMismatchError(f"Splicing needs a ring size divisible by 4, got {n}")
    if half.n_sites != n // 2:
        raise DimensionMismatchError("half-ring solution", n // 2, half.n_sites)
    expected = 2 * math.pi / n
    if abs(cfg.twist - expected) > TWIST_TOLERANCE:
        raise TwistMismatchError(expected, cfg.twist)
    return StandingWave(np.tile(half.amplitudes, 2), np.tile(half.phases, 2))
