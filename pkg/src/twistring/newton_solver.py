# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from twistring.errors import InvalidSeedError, SingularJacobianError, UnsupportedConfigurationError
from twistring.lattice_model import (
    LatticeConfig,
    Nonlinearity,
    StandingWave,
    jacobian,
    residual,
    untwisted_jacobian,
    untwisted_residual,
)
from twistring.seed_factory import ReducedAmplitudes, reduced_jacobian, reduced_residual

__all__ = (
    "NewtonOptions",
    "SolveReport",
    "newton",
    "solve_full",
    "solve_reduced",
    "solve_untwisted",
)

logger = logging.getLogger(__name__)


@dataclass
class NewtonOptions:
    """Settings of the damped Newton iteration."""

    #: Convergence threshold on the 2-norm of the solved (square) system.
    tol_residual: float = 1e-12
    #: Maximum number of Newton steps.
    max_iter: int = 50
    #: Factor by which a rejected step is shortened during backtracking.
    damping: float = 0.5
    #: Smallest step fraction tried before the iteration is declared stalled.
    min_step: float = 1e-14

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise ValueError(f"tol_residual must be positive, got {self.tol_residual!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter!r}")
        if not 0 < self.damping < 1:
            raise ValueError(f"damping must lie in (0, 1), got {self.damping!r}")
        if not 0 < self.min_step < 1:
            raise ValueError(f"min_step must lie in (0, 1), got {self.min_step!r}")


@dataclass
class SolveReport:
    #: Whether the residual reached the tolerance.
    converged: bool
    #: Number of Newton steps taken.
    iterations: int
    #: 2-norm of the solved system at the returned iterate.
    final_residual_norm: float
    #: Absolute value of the equation removed by gauge fixing, evaluated at the returned iterate.
    discarded_equation_residual: float = 0.0
    #: Residual norm before the first and after every step.
    residual_history: List[float] = field(default_factory=list)


def _newton_step(jac: np.ndarray, rhs: np.ndarray, iteration: int) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        try:
            lu, piv = lu_factor(jac)
        except ValueError as exc:
            raise SingularJacobianError(iteration, str(exc)) from exc
    if np.any(np.diag(lu) == 0):
        raise SingularJacobianError(iteration, "zero pivot in the LU factorization")
    step = lu_solve((lu, piv), rhs)
    if not np.all(np.isfinite(step)):
        raise SingularJacobianError(iteration, "non-finite Newton step")
    return step


def newton(
    residual_fn: Callable[[np.ndarray], np.ndarray],
    jacobian_fn: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    opts: NewtonOptions,
) -> Tuple[np.ndarray, SolveReport]:
    """Damped Newton iteration for a square system.

    A full step is tried first and halved (by ``opts.damping``) until the residual norm decreases
    sufficiently. Convergence is tested before every linear solve, so an exact solution is
    returned without factorizing its Jacobian.

    Args:
        residual_fn: Maps the unknowns to the residual vector.
        jacobian_fn: Maps the unknowns to the square Jacobian.
        x0: Starting point.
        opts: Iteration settings.

    Returns:
        The last iterate and a report. Non-convergence is reported, not raised.

    Raises:
        SingularJacobianError: If the Newton system cannot be solved.
    """
    x = np.array(x0, dtype=float)
    f = residual_fn(x)
    norm = float(np.linalg.norm(f))
    history = [norm]
    iteration = 0
    while True:
        if not math.isfinite(norm):
            logger.debug(f"Newton residual became non-finite after {iteration} steps")
            break
        if norm <= opts.tol_residual:
            return x, SolveReport(True, iteration, norm, residual_history=history)
        if iteration >= opts.max_iter:
            break
        step = _newton_step(jacobian_fn(x), -f, iteration)
        fraction = 1.0
        while True:
            trial = x + fraction * step
            f_trial = residual_fn(trial)
            trial_norm = float(np.linalg.norm(f_trial))
            if math.isfinite(trial_norm) and trial_norm < (1 - 1e-4 * fraction) * norm:
                break
            fraction *= opts.damping
            if fraction < opts.min_step:
                logger.debug(f"Newton stalled at iteration {iteration} with residual {norm:.3e}")
                return x, SolveReport(False, iteration, norm, residual_history=history)
        x, f, norm = trial, f_trial, trial_norm
        iteration += 1
        history.append(norm)
        logger.debug(
            f"Newton iteration {iteration}: residual {norm:.3e}, step fraction {fraction:g}"
        )
    return x, SolveReport(False, iteration, norm, residual_history=history)


def _check_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise InvalidSeedError(f"{what} contains non-finite entries")


def solve_full(
    seed: StandingWave, cfg: LatticeConfig, opts: Optional[NewtonOptions] = None
) -> Tuple[StandingWave, SolveReport]:
    """Solves the gauge-fixed standing-wave system.

    The unknowns are ``a_1..a_N`` and ``theta_2..theta_N``; ``theta_1 = 0`` fixes the gauge and
    the imaginary equation of site 1 is dropped to keep the system square. That equation is a
    combination of the others whenever ``a_1 != 0``; it is evaluated afterwards and must also
    vanish (to ``10 * tol``) for the solve to count as converged.

    Args:
        seed: Starting point (re-gauged to ``theta_1 = 0``).
        cfg: Ring configuration.
        opts: Newton settings.

    Returns:
        The gauge-fixed solution and the solve report.
    """
    opts = opts or NewtonOptions()
    _check_finite(seed.amplitudes, "seed amplitudes")
    _check_finite(seed.phases, "seed phases")
    n = cfg.n_sites
    keep = np.delete(np.arange(2 * n), 1)
    start = seed.gauge_fixed().to_vector()

    def expand(y: np.ndarray) -> StandingWave:
        x = np.zeros(2 * n)
        x[keep] = y
        return StandingWave.from_vector(x)

    def residual_fn(y: np.ndarray) -> np.ndarray:
        return residual(expand(y), cfg)[keep]

    def jacobian_fn(y: np.ndarray) -> np.ndarray:
        return jacobian(expand(y), cfg)[np.ix_(keep, keep)]

    y, report = newton(residual_fn, jacobian_fn, start[keep], opts)
    solution = expand(y)
    report.discarded_equation_residual = float(abs(residual(solution, cfg)[1]))
    if report.converged and report.discarded_equation_residual > 10 * opts.tol_residual:
        logger.warning(
            f"Dropped gauge equation is not satisfied ({report.discarded_equation_residual:.3e});"
            f" the solution is rejected"
        )
        report.converged = False
    return solution, report


def solve_reduced(
    seed: ReducedAmplitudes,
    k: float,
    omega: float,
    opts: Optional[NewtonOptions] = None,
    nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
) -> Tuple[ReducedAmplitudes, SolveReport]:
    """Solves the reduced dark-node system of the seed's parity at coupling ``k``."""
    opts = opts or NewtonOptions()
    _check_finite(seed.values, "seed")
    x, report = newton(
        lambda x: reduced_residual(seed.with_values(x), k, omega, nonlinearity),
        lambda x: reduced_jacobian(seed.with_values(x), k, omega, nonlinearity),
        seed.values,
        opts,
    )
    return seed.with_values(x), report


def _signed_real_amplitudes(seed: StandingWave) -> np.ndarray:
    c = seed.amplitudes * np.exp(1j * (seed.phases - seed.phases[0]))
    if np.any(np.abs(c.imag) > 1e-12 * max(1.0, float(np.max(np.abs(c))))):
        raise UnsupportedConfigurationError(
            "The amplitude-only solve needs a real seed (all phases 0 or pi)"
        )
    return c.real


def solve_untwisted(
    seed: StandingWave, cfg: LatticeConfig, opts: Optional[NewtonOptions] = None
) -> Tuple[StandingWave, SolveReport]:
    """Solves the real amplitude system of an untwisted ring (all phases zero).

    At zero twist real states stay real, so the imaginary equations vanish identically. This
    keeps the system regular at the anti-continuum point, where the phase columns of the full
    Jacobian are zero.
    """
    opts = opts or NewtonOptions()
    _check_finite(seed.amplitudes, "seed amplitudes")
    a, report = newton(
        lambda a: untwisted_residual(a, cfg),
        lambda a: untwisted_jacobian(a, cfg),
        _signed_real_amplitudes(seed),
        opts,
    )
    return StandingWave(a, np.zeros(cfg.n_sites)), report
