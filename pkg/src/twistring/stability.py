# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""Spectral stability of standing waves.

Perturbations are written as ``c_n = (v_n + p_n + i (w_n + q_n)) e^{i omega z}`` around the
standing wave ``v_n + i w_n``. The linearized flow ``d(p, q)/dz = A (p, q)`` is a real
``2N x 2N`` system whose eigenvalues decide neutral stability.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from twistring.errors import (
    EigenvalueConvergenceError,
    UnsupportedConfigurationError,
    compact_array,
)
from twistring.lattice_model import (
    ComplexState,
    LatticeConfig,
    StandingWave,
    coupling_matrix,
    evolution_rhs,
    to_complex,
)

__all__ = (
    "Classification",
    "LinearizationMatrix",
    "Spectrum",
    "ZERO_TOL",
    "build_linearization",
    "linearization_by_differences",
    "eigenvalues",
    "classify",
    "dispersion",
    "zero_solution_spectrum",
    "band_edges",
    "outside_band",
)

logger = logging.getLogger(__name__)

#: Eigenvalues closer than this to zero count as kernel eigenvalues.
ZERO_TOL = 1e-8


class Classification(str, Enum):
    NEUTRALLY_STABLE = "neutrally_stable"
    UNSTABLE = "unstable"


@dataclass(frozen=True, eq=False)
class LinearizationMatrix:
    """Real matrix of the linearized flow in the coordinates ``(p_1..p_N, q_1..q_N)``."""

    #: The ``2N x 2N`` matrix.
    entries: np.ndarray
    #: The infinitesimal gauge rotation ``(-w, v)`` of the linearized state, which lies in the
    #: kernel when the state is a standing wave. ``None`` for the zero state or generic matrices.
    gauge_mode: Optional[np.ndarray] = None

    @property
    def n_sites(self) -> int:
        return self.entries.shape[0] // 2


@dataclass
class Spectrum:
    #: All eigenvalues of the linearization.
    eigenvalues: np.ndarray
    #: Largest real part over the eigenvalues.
    max_real_part: float
    #: Number of eigenvalues within ``zero_tol`` of zero.
    kernel_algebraic_multiplicity: int
    #: Stability verdict.
    classification: Classification
    #: Dimension of the numerical null space (informational).
    kernel_geometric_multiplicity: Optional[int] = None
    #: Threshold used for the kernel and the verdict.
    zero_tol: float = ZERO_TOL

    @classmethod
    def from_eigenvalues(
        cls, values: Union[Sequence[complex], np.ndarray], zero_tol: float = ZERO_TOL
    ) -> "Spectrum":
        eigs = np.asarray(values, dtype=complex)
        spectrum = cls(
            eigenvalues=eigs,
            max_real_part=float(np.max(eigs.real)) if eigs.size else 0.0,
            kernel_algebraic_multiplicity=int(np.count_nonzero(np.abs(eigs) <= zero_tol)),
            classification=Classification.NEUTRALLY_STABLE,
            zero_tol=zero_tol,
        )
        spectrum.classification = classify(spectrum, zero_tol)
        return spectrum

    @property
    def max_abs_real_part(self) -> float:
        return float(np.max(np.abs(self.eigenvalues.real))) if self.eigenvalues.size else 0.0

    def nonzero(self) -> np.ndarray:
        return self.eigenvalues[np.abs(self.eigenvalues) > self.zero_tol]


def build_linearization(sw: StandingWave, cfg: LatticeConfig) -> LinearizationMatrix:
    """Linearization of the flow in the frame rotating with the standing wave.

    The block layout is ``[[Ki, Kr], [-Kr, Ki]] + omega [[0, I], [-I, 0]] - sigma N`` where
    ``K = Kr + i Ki`` is the coupling matrix and ``N`` holds the Kerr blocks
    ``[[diag(2vw), diag(v^2 + 3w^2)], [-diag(3v^2 + w^2), -diag(2vw)]]``. For uniform coupling
    ``Ki = k S`` and ``Kr = k C`` with the cyclic sine and cosine band matrices.
    """
    c = to_complex(sw, 0.0, cfg).values
    v, w = c.real, c.imag
    n = cfg.n_sites
    mat = coupling_matrix(cfg)
    eye = np.eye(n)
    entries = np.block(
        [
            [mat.imag, mat.real + cfg.omega * eye],
            [-mat.real - cfg.omega * eye, mat.imag],
        ]
    )
    kerr = np.block(
        [
            [np.diag(2 * v * w), np.diag(v**2 + 3 * w**2)],
            [-np.diag(3 * v**2 + w**2), -np.diag(2 * v * w)],
        ]
    )
    entries -= cfg.sigma * kerr
    gauge = np.concatenate([-w, v])
    return LinearizationMatrix(entries, gauge if np.any(gauge != 0) else None)


def linearization_by_differences(
    sw: StandingWave, cfg: LatticeConfig, step: float = 1e-6
) -> np.ndarray:
    """Central-difference Jacobian of the rotating-frame flow ``-i omega u + rhs(u)``."""
    base = to_complex(sw, 0.0, cfg).values
    n = cfg.n_sites

    def flow(u: np.ndarray) -> np.ndarray:
        du = evolution_rhs(ComplexState(u), cfg) - 1j * cfg.omega * u
        return np.concatenate([du.real, du.imag])

    out = np.empty((2 * n, 2 * n))
    for j in range(2 * n):
        direction = np.zeros(n, dtype=complex)
        direction[j % n] = 1.0 if j < n else 1j
        out[:, j] = (flow(base + step * direction) - flow(base - step * direction)) / (2 * step)
    return out


def _eigvals(mat: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.eigvals(mat)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenvalueConvergenceError(f"Eigenvalue computation failed: {exc}") from exc


def _generalized_kernel_basis(entries: np.ndarray, gauge: np.ndarray) -> Optional[np.ndarray]:
    """Orthonormal basis of the gauge mode and its generalized eigenvector, if the gauge mode is
    a numerical kernel vector."""
    scale = max(1.0, float(np.linalg.norm(entries, 2)))
    mode = gauge / np.linalg.norm(gauge)
    defect = float(np.linalg.norm(entries @ mode))
    if defect > 1e-7 * scale:
        logger.warning(
            f"Gauge mode is not in the kernel (|A g| = {defect:.3e}); the state is probably not a "
            f"standing wave, no deflation is applied"
        )
        return None
    generalized = scipy.linalg.lstsq(entries, mode, cond=1e-12)[0]
    generalized -= (generalized @ mode) * mode
    if np.linalg.norm(generalized) < 1e-12:
        return mode[:, None]
    return np.column_stack([mode, generalized / np.linalg.norm(generalized)])


def eigenvalues(m: LinearizationMatrix, zero_tol: float = ZERO_TOL) -> Spectrum:
    """All eigenvalues of the linearization.

    Gauge invariance places a defective double eigenvalue at zero. Plain QR iteration resolves a
    defective pair only to about the square root of the working precision, so when the matrix
    carries its gauge mode the invariant subspace spanned by that mode and its generalized
    eigenvector is split off analytically: its eigenvalues are reported as exact zeros and the
    rest of the spectrum is computed from the compression of the matrix to the orthogonal
    complement.

    Raises:
        EigenvalueConvergenceError: If the dense eigenvalue iteration fails.
    """
    entries = m.entries
    if not np.all(np.isfinite(entries)):
        raise EigenvalueConvergenceError("Linearization has non-finite entries")
    basis = None if m.gauge_mode is None else _generalized_kernel_basis(entries, m.gauge_mode)
    if basis is None:
        eigs = _eigvals(entries)
    else:
        full, _ = np.linalg.qr(basis, mode="complete")
        complement = full[:, basis.shape[1] :]
        eigs = np.concatenate(
            [np.zeros(basis.shape[1], dtype=complex), _eigvals(complement.T @ entries @ complement)]
        )
    spectrum = Spectrum.from_eigenvalues(eigs, zero_tol)
    spectrum.kernel_geometric_multiplicity = int(
        entries.shape[0] - np.linalg.matrix_rank(entries, tol=zero_tol)
    )
    logger.debug(
        f"Spectrum of {entries.shape[0]}x{entries.shape[0]} linearization: "
        f"max Re {spectrum.max_real_part:.3e}, kernel {spectrum.kernel_algebraic_multiplicity}"
        f" (geometric {spectrum.kernel_geometric_multiplicity})"
    )
    return spectrum


def classify(spec: Spectrum, zero_tol: float = ZERO_TOL) -> Classification:
    """Neutrally stable iff no eigenvalue has a real part above ``zero_tol``."""
    if spec.eigenvalues.size and float(np.max(spec.eigenvalues.real)) > zero_tol:
        return Classification.UNSTABLE
    return Classification.NEUTRALLY_STABLE


def _uniform_k(cfg: LatticeConfig) -> float:
    if not cfg.is_uniform:
        raise UnsupportedConfigurationError("The plane-wave dispersion needs uniform coupling")
    return cfg.couplings.k


def dispersion(q: float, cfg: LatticeConfig) -> Tuple[complex, complex]:
    """Eigenvalue pair of the plane wave ``e^{i q n}`` around the zero solution."""
    freq = cfg.omega + 2 * _uniform_k(cfg) * np.cos(q + cfg.twist)
    return 1j * freq, -1j * freq


def zero_solution_spectrum(cfg: LatticeConfig) -> np.ndarray:
    """Analytic eigenvalues of the zero solution, from the ``N`` discrete wavenumbers."""
    q = 2 * np.pi * np.arange(cfg.n_sites) / cfg.n_sites
    freq = cfg.omega + 2 * _uniform_k(cfg) * np.cos(q + cfg.twist)
    return np.concatenate([1j * freq, -1j * freq])


def band_edges(cfg: LatticeConfig) -> Tuple[float, float]:
    """Frequency interval ``[omega - 2k, omega + 2k]`` of the linear band."""
    k = abs(cfg.max_coupling())
    return cfg.omega - 2 * k, cfg.omega + 2 * k


def outside_band(spec: Spectrum, cfg: LatticeConfig, tol: float = 1e-6) -> np.ndarray:
    """Non-kernel eigenvalues that are not within ``tol`` of the imaginary band ``+-i[lo, hi]``."""
    lo, hi = band_edges(cfg)
    eigs = spec.nonzero()
    freq = np.abs(eigs.imag)
    inside = (np.abs(eigs.real) <= tol) & (freq >= lo - tol) & (freq <= hi + tol)
    offenders = eigs[~inside]
    if offenders.size:
        logger.info(f"{offenders.size} eigenvalues outside the band: {compact_array(offenders)}")
    return offenders
