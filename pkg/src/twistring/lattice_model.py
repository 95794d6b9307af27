# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""Model types and the standing-wave equations of the twisted ring.

The ring carries complex field amplitudes ``c_n`` on ``N`` cores. Along the propagation direction
``z`` they obey::

    i dc_n/dz = k_f e^{-i phi} c_{n+1} + k_b e^{i phi} c_{n-1} - sigma |c_n|^2 c_n

with cyclic indices, the Peierls phase ``phi`` (twist) and ``sigma = +1`` for the defocusing
nonlinearity. All linear coupling terms are collected in the complex coupling matrix ``K``
returned by :func:`coupling_matrix`; every other operation in this module is assembled from it.
"""

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal, Tuple, Union

import numpy as np

from twistring.errors import (
    DimensionMismatchError,
    UnsupportedConfigurationError,
    compact_array,
)

__all__ = (
    "Nonlinearity",
    "Uniform",
    "PerEdge",
    "CouplingProfile",
    "LatticeConfig",
    "StandingWave",
    "ComplexState",
    "wrap_phase",
    "coupling_matrix",
    "residual",
    "jacobian",
    "untwisted_residual",
    "untwisted_jacobian",
    "evolution_rhs",
    "field_derivative",
    "hamiltonian",
    "power",
    "weighted_power",
    "gauge_rotate",
    "to_complex",
    "normalize_half_plane",
    "symmetry_defect",
)


class Nonlinearity(str, Enum):
    DEFOCUSING = "defocusing"
    FOCUSING = "focusing"

    @property
    def sign(self) -> float:
        """Sign of the cubic term in the standing-wave equation (+1 for defocusing)."""
        return 1.0 if self is Nonlinearity.DEFOCUSING else -1.0


@dataclass(frozen=True)
class Uniform:
    """Every core is coupled to both neighbours by the same coefficient."""

    #: Coupling coefficient k [1/mm].
    k: float

    def edge_weights(self, n_sites: int) -> Tuple[np.ndarray, np.ndarray]:
        full = np.full(n_sites, float(self.k))
        return full, full.copy()

    def max_coupling(self) -> float:
        return float(self.k)

    def scaled(self, k_max: float) -> "Uniform":
        return Uniform(k=float(k_max))


@dataclass(frozen=True)
class PerEdge:
    """Individual coupling coefficients ``k_1..k_N``.

    With ``convention="site"`` the coefficient ``k_n`` belongs to site ``n``: the equation of site
    ``n`` carries ``k_{n+1}`` on its ``c_{n+1}`` term and ``k_{n-1}`` on its ``c_{n-1}`` term.
    With ``convention="bond"`` the coefficient ``k_n`` couples the pair ``(n, n+1)`` (``k_N``
    closes the ring), which makes the coupling matrix Hermitian.
    """

    #: Coupling coefficients k_1..k_N [1/mm].
    values: Tuple[float, ...]
    #: Index convention of the coefficients.
    convention: Literal["site", "bond"] = "site"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.convention not in ("site", "bond"):
            raise UnsupportedConfigurationError(
                f"Unknown coupling convention {self.convention!r}, expected 'site' or 'bond'"
            )

    def edge_weights(self, n_sites: int) -> Tuple[np.ndarray, np.ndarray]:
        """Coefficients on the forward (``c_{n+1}``) and backward (``c_{n-1}``) terms."""
        if len(self.values) != n_sites:
            raise DimensionMismatchError("PerEdge couplings", n_sites, len(self.values))
        k = np.asarray(self.values, dtype=float)
        idx = np.arange(n_sites)
        fwd = (idx + 1) % n_sites
        bwd = (idx - 1) % n_sites
        if self.convention == "site":
            return k[fwd], k[bwd]
        return k.copy(), k[bwd]

    def max_coupling(self) -> float:
        return float(max(self.values))

    def scaled(self, k_max: float) -> "PerEdge":
        current = self.max_coupling()
        if current == 0:
            raise UnsupportedConfigurationError("Cannot rescale an all-zero coupling profile")
        ratio = float(k_max) / current
        return PerEdge(values=tuple(v * ratio for v in self.values), convention=self.convention)


CouplingProfile = Union[Uniform, PerEdge]


@dataclass(frozen=True)
class LatticeConfig:
    """Parameters of the twisted ring."""

    #: Number of cores N on the ring (N >= 3).
    n_sites: int
    #: Nearest-neighbour coupling [1/mm].
    couplings: CouplingProfile
    #: Peierls phase phi [rad].
    twist: float
    #: Propagation constant omega [1/mm].
    omega: float
    #: Sign of the Kerr term.
    nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 3:
            raise UnsupportedConfigurationError(
                f"A ring needs at least 3 sites, got {self.n_sites}"
            )
        object.__setattr__(self, "nonlinearity", Nonlinearity(self.nonlinearity))
        kf, kb = self.couplings.edge_weights(self.n_sites)
        if not (np.all(np.isfinite(kf)) and np.all(np.isfinite(kb))):
            raise UnsupportedConfigurationError(f"Non-finite couplings: {self.couplings!r}")
        if not (math.isfinite(self.twist) and math.isfinite(self.omega)):
            raise UnsupportedConfigurationError(
                f"Twist and omega must be finite, got twist={self.twist!r}, omega={self.omega!r}"
            )

    @classmethod
    def uniform(
        cls,
        n_sites: int,
        k: float,
        twist: float,
        omega: float,
        nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
    ) -> "LatticeConfig":
        return cls(n_sites, Uniform(k), twist, omega, nonlinearity)

    @property
    def sigma(self) -> float:
        return self.nonlinearity.sign

    @property
    def is_uniform(self) -> bool:
        return isinstance(self.couplings, Uniform)

    def max_coupling(self) -> float:
        return self.couplings.max_coupling()

    def with_max_coupling(self, k_max: float) -> "LatticeConfig":
        """The same coupling shape, rescaled so that its largest coefficient is ``k_max``."""
        return dataclasses.replace(self, couplings=self.couplings.scaled(k_max))

    def with_twist(self, twist: float) -> "LatticeConfig":
        return dataclasses.replace(self, twist=float(twist))


def wrap_phase(theta: Union[np.ndarray, float]) -> np.ndarray:
    """Maps phases into (-pi, pi]."""
    theta = np.asarray(theta, dtype=float)
    return theta - 2 * np.pi * np.ceil((theta - np.pi) / (2 * np.pi))


@dataclass(frozen=True, eq=False)
class StandingWave:
    """Bound state ``c_n = a_n exp(i (omega z + theta_n))``.

    Amplitudes may be negative. Phases are stored wrapped into (-pi, pi]. Solutions produced by
    the solvers are gauge-fixed to ``theta_1 = 0``.
    """

    #: Amplitudes a_1..a_N.
    amplitudes: np.ndarray
    #: Phases theta_1..theta_N [rad].
    phases: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=float).reshape(-1)
        theta = wrap_phase(np.array(self.phases, dtype=float).reshape(-1))
        if a.shape != theta.shape:
            raise DimensionMismatchError("phases", a.size, theta.size)
        a.setflags(write=False)
        theta.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "phases", theta)

    @property
    def n_sites(self) -> int:
        return self.amplitudes.size

    @classmethod
    def zeros(cls, n_sites: int) -> "StandingWave":
        return cls(np.zeros(n_sites), np.zeros(n_sites))

    def gauge_fixed(self) -> "StandingWave":
        """Shifts all phases so that ``theta_1 = 0``."""
        return StandingWave(self.amplitudes, self.phases - self.phases[0])

    def to_vector(self) -> np.ndarray:
        """Interleaved unknowns ``(a_1, theta_1, ..., a_N, theta_N)``."""
        x = np.empty(2 * self.n_sites)
        x[0::2] = self.amplitudes
        x[1::2] = self.phases
        return x

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "StandingWave":
        return cls(x[0::2], x[1::2])

    def __repr__(self) -> str:
        return (
            f"StandingWave(amplitudes={compact_array(self.amplitudes)}, "
            f"phases={compact_array(self.phases)})"
        )


@dataclass(frozen=True, eq=False)
class ComplexState:
    """The field ``c_1..c_N`` at a fixed propagation distance."""

    #: Complex amplitudes c_1..c_N.
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_sites(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"ComplexState({compact_array(self.values)})"


def _check_sites(n: int, cfg: LatticeConfig, what: str) -> None:
    if n != cfg.n_sites:
        raise DimensionMismatchError(what, cfg.n_sites, n)


def coupling_matrix(cfg: LatticeConfig) -> np.ndarray:
    """Complex matrix K such that ``(K c)_n`` is the linear coupling term of site ``n``."""
    n = cfg.n_sites
    kf, kb = cfg.couplings.edge_weights(n)
    idx = np.arange(n)
    mat = np.zeros((n, n), dtype=complex)
    mat[idx, (idx + 1) % n] = kf * np.exp(-1j * cfg.twist)
    mat[idx, (idx - 1) % n] = kb * np.exp(1j * cfg.twist)
    return mat


def _residual_parts(
    a: np.ndarray, theta: np.ndarray, cfg: LatticeConfig
) -> Tuple[np.ndarray, np.ndarray]:
    rotor = np.exp(1j * theta)
    coupled = (coupling_matrix(cfg) @ (a * rotor)) * rotor.conj()
    real = coupled.real + cfg.omega * a - cfg.sigma * a**3
    return real, coupled.imag


def residual(sw: StandingWave, cfg: LatticeConfig) -> np.ndarray:
    """Real and imaginary parts of the standing-wave equation at every site.

    The returned vector is interleaved as ``(real_1, imag_1, ..., real_N, imag_N)``. It vanishes
    exactly when ``sw`` is a bound state of ``cfg``.

    Args:
        sw: Candidate standing wave.
        cfg: Ring configuration.

    Returns:
        Vector of length ``2N``.
    """
    _check_sites(sw.n_sites, cfg, "standing wave")
    real, imag = _residual_parts(sw.amplitudes, sw.phases, cfg)
    out = np.empty(2 * cfg.n_sites)
    out[0::2] = real
    out[1::2] = imag
    return out


def jacobian(sw: StandingWave, cfg: LatticeConfig) -> np.ndarray:
    """Analytic derivative of :func:`residual` with respect to the interleaved unknowns
    ``(a_1, theta_1, ..., a_N, theta_N)``."""
    _check_sites(sw.n_sites, cfg, "standing wave")
    a, theta = sw.amplitudes, sw.phases
    n = cfg.n_sites
    # transfer[n, m] = K[n, m] exp(i (theta_m - theta_n))
    transfer = coupling_matrix(cfg) * np.exp(1j * (theta[None, :] - theta[:, None]))
    d_amp = transfer.copy()
    d_amp[np.diag_indices(n)] += cfg.omega - 3 * cfg.sigma * a**2
    d_phase = 1j * transfer * a[None, :]
    d_phase[np.diag_indices(n)] -= 1j * (transfer @ a)

    jac = np.empty((2 * n, 2 * n))
    jac[0::2, 0::2] = d_amp.real
    jac[1::2, 0::2] = d_amp.imag
    jac[0::2, 1::2] = d_phase.real
    jac[1::2, 1::2] = d_phase.imag
    return jac


def _real_coupling(cfg: LatticeConfig) -> np.ndarray:
    mat = coupling_matrix(cfg)
    if np.any(mat.imag != 0):
        raise UnsupportedConfigurationError(
            f"The amplitude-only system needs an untwisted ring, got twist={cfg.twist!r}"
        )
    return mat.real


def untwisted_residual(amplitudes: np.ndarray, cfg: LatticeConfig) -> np.ndarray:
    """Residual of the real amplitude system at zero twist with all phases zero."""
    a = np.asarray(amplitudes, dtype=float)
    _check_sites(a.size, cfg, "amplitudes")
    return _real_coupling(cfg) @ a + cfg.omega * a - cfg.sigma * a**3


def untwisted_jacobian(amplitudes: np.ndarray, cfg: LatticeConfig) -> np.ndarray:
    a = np.asarray(amplitudes, dtype=float)
    _check_sites(a.size, cfg, "amplitudes")
    return _real_coupling(cfg) + np.diag(cfg.omega - 3 * cfg.sigma * a**2)


def evolution_rhs(c: ComplexState, cfg: LatticeConfig) -> np.ndarray:
    """Right-hand side ``dc/dz`` of the coupled-mode equations."""
    _check_sites(c.n_sites, cfg, "state")
    return field_derivative(c.values, coupling_matrix(cfg), cfg.sigma)


def field_derivative(values: np.ndarray, mat: np.ndarray, sigma: float) -> np.ndarray:
    return -1j * (mat @ values - sigma * (values.real**2 + values.imag**2) * values)


def hamiltonian(c: ComplexState, cfg: LatticeConfig) -> float:
    """Conserved energy of the uniformly coupled ring.

    Raises:
        UnsupportedConfigurationError: For per-edge coupling profiles.
    """
    if not cfg.is_uniform:
        raise UnsupportedConfigurationError(
            "The energy functional is only defined for uniform coupling"
        )
    _check_sites(c.n_sites, cfg, "state")
    values = c.values
    hop = np.sum(np.roll(values, -1) * values.conj()) * np.exp(-1j * cfg.twist)
    intensity = values.real**2 + values.imag**2
    return float(cfg.couplings.k * 2 * hop.real - 0.5 * cfg.sigma * np.sum(intensity**2))


def power(c: ComplexState) -> float:
    """Total power ``sum |c_n|^2``."""
    return float(np.sum(c.values.real**2 + c.values.imag**2))


def weighted_power(c: ComplexState, cfg: LatticeConfig) -> float:
    """Coupling-weighted power ``sum k_n |c_n|^2``.

    This is the invariant of the site-convention per-edge flow, whose coupling matrix is not
    Hermitian.
    """
    _check_sites(c.n_sites, cfg, "state")
    if isinstance(cfg.couplings, PerEdge):
        if cfg.couplings.convention != "site":
            raise UnsupportedConfigurationError(
                "The weighted power belongs to the site convention; bond-convention rings "
                "conserve the plain power"
            )
        weights = np.asarray(cfg.couplings.values)
    else:
        weights = np.full(cfg.n_sites, cfg.couplings.k)
    return float(np.sum(weights * (c.values.real**2 + c.values.imag**2)))


def gauge_rotate(c: ComplexState, theta: float) -> ComplexState:
    return ComplexState(c.values * np.exp(1j * theta))


def to_complex(sw: StandingWave, z: float, cfg: LatticeConfig) -> ComplexState:
    """Field of the standing wave at propagation distance ``z``."""
    _check_sites(sw.n_sites, cfg, "standing wave")
    return ComplexState(sw.amplitudes * np.exp(1j * (cfg.omega * z + sw.phases)))


def normalize_half_plane(sw: StandingWave) -> StandingWave:
    """Moves every phase into (-pi/2, pi/2] by flipping the sign of the amplitude."""
    flip = (sw.phases > np.pi / 2) | (sw.phases <= -np.pi / 2)
    a = np.where(flip, -sw.amplitudes, sw.amplitudes)
    theta = np.where(flip, sw.phases - np.pi, sw.phases)
    return StandingWave(a, np.where(theta <= -np.pi / 2, theta + 2 * np.pi, theta))


def symmetry_defect(sw: StandingWave) -> float:
    """Largest violation of the reflection symmetry about site 1.

    Measured as ``max_j |c_j - conj(c_{N-j+2})|`` over ``j = 2..N`` after gauge fixing, i.e. the
    relations ``a_j = a_{N-j+2}`` and ``theta_j = -theta_{N-j+2}`` in a form that is blind to
    the phase of dark nodes and to the sign convention of the amplitudes.
    """
    c = sw.amplitudes * np.exp(1j * (sw.phases - sw.phases[0]))
    n = sw.n_sites
    idx = np.arange(1, n)
    return float(np.max(np.abs(c[idx] - c[n - idx].conj())))
