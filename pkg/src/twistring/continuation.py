# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""Branch tracing from the anti-continuum limit.

Solutions are followed in the coupling ``k`` (at zero twist, with the real amplitude system)
and then in the twist ``phi`` (with the full gauge-fixed system). Reduced dark-node branches are
followed in ``k`` until they merge with the zero solution at the critical coupling ``k0``.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Generic, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
import tqdm

from twistring.errors import ContinuationError, UnsupportedConfigurationError
from twistring.lattice_model import (
    LatticeConfig,
    Nonlinearity,
    StandingWave,
    normalize_half_plane,
    residual,
)
from twistring.newton_solver import (
    NewtonOptions,
    SolveReport,
    newton,
    solve_full,
    solve_reduced,
    solve_untwisted,
)
from twistring.seed_factory import (
    Parity,
    ReducedAmplitudes,
    ac_reduced_seed,
    ac_seed,
    reconstruct,
    reduced_coupling_derivative,
    reduced_jacobian,
    reduced_residual,
)
from twistring.worker import WorkerConfig

__all__ = (
    "Parameter",
    "ContinuationOptions",
    "BranchPoint",
    "Branch",
    "BranchProblem",
    "FullSystemProblem",
    "UntwistedProblem",
    "ReducedProblem",
    "l2_norm_reduced",
    "continue_natural",
    "continue_pseudo_arclength",
    "continue_from_ac",
    "reduced_branch",
    "branch_jumps",
    "norm_is_monotone",
    "PhiScanRow",
    "scan_min_node_vs_phi",
    "detect_k0",
    "K0Sweep",
    "sweep_k0",
)

logger = logging.getLogger(__name__)

T = TypeVar("T", StandingWave, ReducedAmplitudes)
Solution = Union[StandingWave, ReducedAmplitudes]


class Parameter(str, Enum):
    COUPLING = "coupling_k"
    TWIST = "twist_phi"


@dataclass
class ContinuationOptions:
    #: Natural parameter step (in k [1/mm] or phi [rad]).
    ds: float = 1e-2
    #: Consecutive step halvings before a branch is given up.
    max_halvings: int = 4
    #: A reduced branch whose l2 norm falls below this value has reached the zero solution.
    norm_floor: float = 1e-3
    #: Width of the final bisection bracket of k0.
    k0_tolerance: float = 1e-6
    #: Continue with pseudo-arclength steps where natural steps fail (reduced branches only).
    allow_arclength: bool = True
    #: Maximum number of pseudo-arclength steps.
    arclength_max_steps: int = 2000

    def __post_init__(self):
        if not self.ds > 0:
            raise ValueError(f"ds must be positive, got {self.ds!r}")
        if self.max_halvings < 0:
            raise ValueError(f"max_halvings must be non-negative, got {self.max_halvings!r}")

    @property
    def min_ds(self) -> float:
        return self.ds / 2**self.max_halvings


@dataclass
class BranchPoint:
    #: Value of the continuation parameter.
    param_value: float
    #: Solution at this parameter value.
    solution: Solution
    #: l2 norm of the stored solution (full amplitudes or reduced vector).
    l2_norm: float
    #: Whether the Newton solve converged.
    converged: bool
    #: Residual norm of the full ring equations at this point.
    residual_norm: float = 0.0


@dataclass
class Branch:
    #: Which parameter varies along the branch.
    parameter: Parameter
    #: Configuration of the first point.
    config: LatticeConfig
    #: Points in continuation order.
    points: List[BranchPoint] = field(default_factory=list)
    #: Set when the continuation stopped before its target.
    truncated: bool = False
    #: "natural", "arclength" or "natural+arclength".
    method: str = "natural"

    @property
    def param_values(self) -> np.ndarray:
        return np.array([p.param_value for p in self.points])

    @property
    def l2_norms(self) -> np.ndarray:
        return np.array([p.l2_norm for p in self.points])

    @property
    def last(self) -> BranchPoint:
        return self.points[-1]


def l2_norm_reduced(a: ReducedAmplitudes) -> float:
    """Euclidean norm of the reduced unknowns."""
    return float(np.linalg.norm(a.values))


class BranchProblem(ABC, Generic[T]):
    """One-parameter family of systems that a branch is traced through."""

    parameter: Parameter

    @abstractmethod
    def config_at(self, value: float) -> LatticeConfig:
        ...

    @abstractmethod
    def solve(self, seed: T, value: float) -> Tuple[T, SolveReport]:
        ...

    @abstractmethod
    def l2_norm(self, solution: T) -> float:
        ...

    def full_residual_norm(self, solution: T, value: float) -> float:
        return float(np.linalg.norm(residual(solution, self.config_at(value))))

    def point(self, solution: T, value: float, report: SolveReport) -> BranchPoint:
        return BranchPoint(
            param_value=value,
            solution=solution,
            l2_norm=self.l2_norm(solution),
            converged=report.converged,
            residual_norm=self.full_residual_norm(solution, value),
        )


class FullSystemProblem(BranchProblem[StandingWave]):
    """Gauge-fixed ring equations, continued in the maximum coupling or in the twist."""

    def __init__(
        self, cfg: LatticeConfig, parameter: Parameter, newton_opts: Optional[NewtonOptions] = None
    ):
        self.cfg = cfg
        self.parameter = Parameter(parameter)
        self.newton_opts = newton_opts or NewtonOptions()

    def config_at(self, value: float) -> LatticeConfig:
        if self.parameter is Parameter.COUPLING:
            return self.cfg.with_max_coupling(value)
        return self.cfg.with_twist(value)

    def solve(self, seed: StandingWave, value: float) -> Tuple[StandingWave, SolveReport]:
        return solve_full(seed, self.config_at(value), self.newton_opts)

    def l2_norm(self, solution: StandingWave) -> float:
        return float(np.linalg.norm(solution.amplitudes))


class UntwistedProblem(FullSystemProblem):
    """Real amplitude system of the untwisted ring, continued in the maximum coupling."""

    def __init__(self, cfg: LatticeConfig, newton_opts: Optional[NewtonOptions] = None):
        super().__init__(cfg.with_twist(0.0), Parameter.COUPLING, newton_opts)

    def solve(self, seed: StandingWave, value: float) -> Tuple[StandingWave, SolveReport]:
        return solve_untwisted(seed, self.config_at(value), self.newton_opts)


class ReducedProblem(BranchProblem[ReducedAmplitudes]):
    """Reduced dark-node system of the uniformly coupled ring, continued in ``k``."""

    parameter = Parameter.COUPLING

    def __init__(
        self,
        parity: Parity,
        n_sites: int,
        omega: float,
        newton_opts: Optional[NewtonOptions] = None,
        nonlinearity: Nonlinearity = Nonlinearity.DEFOCUSING,
    ):
        self.parity = Parity(parity)
        self.n_sites = n_sites
        self.omega = omega
        self.newton_opts = newton_opts or NewtonOptions()
        self.nonlinearity = Nonlinearity(nonlinearity)

    def config_at(self, value: float) -> LatticeConfig:
        return LatticeConfig.uniform(
            self.n_sites, value, math.pi / self.n_sites, self.omega, self.nonlinearity
        )

    def solve(self, seed: ReducedAmplitudes, value: float) -> Tuple[ReducedAmplitudes, SolveReport]:
        return solve_reduced(seed, value, self.omega, self.newton_opts, self.nonlinearity)

    def l2_norm(self, solution: ReducedAmplitudes) -> float:
        return l2_norm_reduced(solution)

    def full_residual_norm(self, solution: ReducedAmplitudes, value: float) -> float:
        cfg = self.config_at(value)
        return float(np.linalg.norm(residual(reconstruct(solution, cfg), cfg)))

    def seed(self) -> ReducedAmplitudes:
        return ac_reduced_seed(self.parity, self.n_sites, self.omega)

    def augmented(self, tangent: np.ndarray, origin: np.ndarray, ds: float):
        """Residual and Jacobian of the pseudo-arclength system in ``u = (x, k)``."""
        template = self.seed()

        def residual_fn(u: np.ndarray) -> np.ndarray:
            a = template.with_values(u[:-1])
            return np.append(
                reduced_residual(a, u[-1], self.omega, self.nonlinearity),
                tangent @ (u - origin) - ds,
            )

        def jacobian_fn(u: np.ndarray) -> np.ndarray:
            return self._bordered(u, tangent)

        return residual_fn, jacobian_fn

    def _bordered(self, u: np.ndarray, border: np.ndarray) -> np.ndarray:
        a = self.seed().with_values(u[:-1])
        top = np.column_stack(
            [
                reduced_jacobian(a, u[-1], self.omega, self.nonlinearity),
                reduced_coupling_derivative(a),
            ]
        )
        return np.vstack([top, border])

    def tangent(self, u: np.ndarray, previous: np.ndarray) -> np.ndarray:
        """Unit tangent of the branch at ``u``, oriented along ``previous``."""
        rhs = np.zeros(u.size)
        rhs[-1] = 1.0
        direction = np.linalg.solve(self._bordered(u, previous), rhs)
        return direction / np.linalg.norm(direction)


def continue_pseudo_arclength(
    problem: ReducedProblem,
    start: ReducedAmplitudes,
    start_value: float,
    ds: float,
    opts: Optional[ContinuationOptions] = None,
    target: Optional[float] = None,
    direction: float = 1.0,
    stop: Optional[Callable[[BranchPoint], bool]] = None,
) -> Branch:
    """Follows a reduced branch by pseudo-arclength steps of length ``ds``.

    The predictor moves along the unit tangent; the corrector solves the reduced equations
    bordered by the arclength constraint. Continuation ends when the coupling passes ``target``
    (the last point is then corrected onto ``target`` exactly), when ``stop`` accepts a point or
    after ``opts.arclength_max_steps`` steps.
    """
    opts = opts or ContinuationOptions()
    branch = Branch(Parameter.COUPLING, problem.config_at(start_value), method="arclength")
    u = np.append(start.values, start_value)
    a0 = start
    # initial tangent from J t_x = -dF/dk with t_k = 1
    t_x = np.linalg.solve(
        reduced_jacobian(a0, start_value, problem.omega, problem.nonlinearity),
        -reduced_coupling_derivative(a0),
    )
    tangent = np.append(t_x, 1.0)
    tangent *= math.copysign(1.0, direction) / np.linalg.norm(tangent)
    step = ds
    halvings = 0
    steps = 0
    while steps < opts.arclength_max_steps:
        residual_fn, jacobian_fn = problem.augmented(tangent, u, step)
        try:
            u_new, report = newton(
                residual_fn, jacobian_fn, u + step * tangent, problem.newton_opts
            )
        except ValueError as exc:
            logger.debug(f"Arclength corrector failed: {exc}")
            report = SolveReport(False, 0, math.inf)
        if not report.converged:
            halvings += 1
            if halvings > opts.max_halvings:
                branch.truncated = True
                logger.warning(f"Arclength continuation stopped at k={u[-1]:.6g}")
                break
            step /= 2
            continue
        steps += 1
        halvings = 0
        tangent = problem.tangent(u_new, tangent)
        u = u_new
        if target is not None and (u[-1] - target) * direction >= 0:
            solution, final = problem.solve(start.with_values(u[:-1]), target)
            if final.converged:
                branch.points.append(problem.point(solution, target, final))
            else:
                branch.truncated = True
            break
        point = problem.point(start.with_values(u[:-1]), float(u[-1]), report)
        if stop is not None and stop(point):
            break
        branch.points.append(point)
    else:
        branch.truncated = target is not None
    return branch


def continue_natural(
    problem: BranchProblem,
    seed: Solution,
    start_value: float,
    target: float,
    opts: Optional[ContinuationOptions] = None,
    stop: Optional[Callable[[BranchPoint], bool]] = None,
    progress: bool = False,
) -> Branch:
    """Natural-parameter continuation from ``start_value`` to ``target``.

    Every step is seeded with the previous solution. A failed step is retried with half the step
    size, at most ``opts.max_halvings`` times in a row; a successful step restores the step size
    gradually. When the step size is exhausted, reduced branches switch to pseudo-arclength
    continuation (if enabled); other branches are returned truncated.

    Args:
        problem: The family of systems.
        seed: Starting guess at ``start_value``.
        start_value: First parameter value.
        target: Final parameter value.
        opts: Step control.
        stop: Optional predicate; the first point it accepts ends the branch and is not kept.
        progress: Show a progress bar.

    Returns:
        The branch. ``branch.truncated`` is set if ``target`` was not reached.

    Raises:
        ContinuationError: If the starting point does not converge.
    """
    opts = opts or ContinuationOptions()
    branch = Branch(problem.parameter, problem.config_at(start_value))
    solution, report = problem.solve(seed, start_value)
    if not report.converged:
        raise ContinuationError(
            f"Starting point at {problem.parameter.value}={start_value:.6g} did not converge "
            f"(residual {report.final_residual_norm:.3e})",
            branch,
        )
    branch.points.append(problem.point(solution, start_value, report))
    direction = math.copysign(1.0, target - start_value)
    value = start_value
    step = opts.ds
    halvings = 0
    logger.info(
        f"Continuing {problem.parameter.value} from {start_value:.6g} to {target:.6g} "
        f"(ds={opts.ds:g})"
    )
    bar = tqdm.tqdm(total=abs(target - start_value), disable=not progress, leave=False)
    try:
        while (target - value) * direction > 1e-15:
            next_value = target if abs(target - value) <= step else value + direction * step
            try:
                candidate, report = problem.solve(solution, next_value)
            except ValueError as exc:
                logger.debug(f"Step to {next_value:.6g} failed: {exc}")
                report = None
            if report is not None and report.converged:
                point = problem.point(candidate, next_value, report)
                if stop is not None and stop(point):
                    break
                branch.points.append(point)
                bar.update(abs(next_value - value))
                solution, value = candidate, next_value
                halvings = 0
                step = min(opts.ds, 2 * step)
                continue
            halvings += 1
            if halvings <= opts.max_halvings:
                step /= 2
                logger.debug(f"Halving step to {step:.3g} at {problem.parameter.value}={value:.6g}")
                continue
            if opts.allow_arclength and isinstance(problem, ReducedProblem):
                logger.info(f"Switching to pseudo-arclength continuation at k={value:.6g}")
                tail = continue_pseudo_arclength(
                    problem,
                    solution,
                    value,
                    step,
                    opts,
                    target=target,
                    direction=direction,
                    stop=stop,
                )
                branch.points.extend(tail.points)
                branch.truncated = tail.truncated
                branch.method = "natural+arclength"
            else:
                branch.truncated = True
            break
    finally:
        bar.close()
    if branch.truncated:
        logger.warning(
            f"Branch truncated at {problem.parameter.value}={branch.last.param_value:.6g}, "
            f"target was {target:.6g}"
        )
    return branch


def continue_from_ac(
    cfg: LatticeConfig,
    excited: Sequence[int],
    opts: Optional[ContinuationOptions] = None,
    newton_opts: Optional[NewtonOptions] = None,
    signs: Optional[Sequence[int]] = None,
) -> Tuple[Branch, Optional[Branch]]:
    """Continues an anti-continuum seed to ``cfg``.

    The coupling is raised first at zero twist (continuation parameter: the largest coupling
    coefficient, the profile shape is kept), then the twist is raised at fixed coupling.

    Returns:
        The coupling branch and the twist branch (``None`` if the target twist is zero or the
        coupling branch was truncated).
    """
    opts = opts or ContinuationOptions()
    seed = ac_seed(cfg, excited, signs)
    coupling_problem = UntwistedProblem(cfg, newton_opts)
    coupling_branch = continue_natural(coupling_problem, seed, 0.0, cfg.max_coupling(), opts)
    if coupling_branch.truncated or cfg.twist == 0:
        return coupling_branch, None
    twist_problem = FullSystemProblem(cfg, Parameter.TWIST, newton_opts)
    twist_branch = continue_natural(
        twist_problem, coupling_branch.last.solution, 0.0, cfg.twist, opts
    )
    return coupling_branch, twist_branch


def reduced_branch(
    parity: Parity,
    n_sites: int,
    omega: float,
    k_max: Optional[float] = None,
    opts: Optional[ContinuationOptions] = None,
    newton_opts: Optional[NewtonOptions] = None,
) -> Branch:
    """The reduced dark-node branch from ``k = 0`` (l2 norm ``sqrt(omega)``) towards ``k0``.

    Stops at ``k_max`` (default ``omega``) or where the branch reaches the zero solution.
    """
    opts = opts or ContinuationOptions()
    problem = ReducedProblem(parity, n_sites, omega, newton_opts)
    return continue_natural(
        problem,
        problem.seed(),
        0.0,
        omega if k_max is None else k_max,
        opts,
        stop=lambda point: point.l2_norm < opts.norm_floor,
    )


def _solution_vector(solution: Solution) -> np.ndarray:
    if isinstance(solution, ReducedAmplitudes):
        return solution.values
    return solution.amplitudes * np.exp(1j * solution.phases)


def branch_jumps(branch: Branch, factor: float = 10.0) -> List[int]:
    """Indices of points whose change from the predecessor exceeds ``factor`` times the median
    change along the branch."""
    if len(branch.points) < 3:
        return []
    changes = np.array(
        [
            np.linalg.norm(_solution_vector(b.solution) - _solution_vector(a.solution))
            for a, b in zip(branch.points[:-1], branch.points[1:])
        ]
    )
    median = float(np.median(changes))
    logger.debug(f"Median solution change per step: {median:.3e}, max: {changes.max():.3e}")
    return [int(i) + 1 for i in np.flatnonzero(changes > factor * median)]


def norm_is_monotone(branch: Branch, tol: float = 1e-9) -> bool:
    """Whether the l2 norm is non-increasing along the branch (within ``tol``)."""
    increases = np.diff(branch.l2_norms)
    monotone = bool(np.all(increases <= tol))
    if not monotone:
        worst = int(np.argmax(increases)) + 1
        logger.warning(
            f"l2 norm increases by {increases.max():.3e} at {branch.parameter.value}="
            f"{branch.points[worst].param_value:.6g}"
        )
    return monotone


@dataclass
class PhiScanRow:
    #: Largest coupling coefficient [1/mm].
    k: float
    #: Twist [rad].
    phi: float
    #: 1-based index of the site with the smallest |a_n| (0 for gaps).
    min_node: int
    #: Amplitude of that site with phases normalized to (-pi/2, pi/2] (NaN for gaps).
    min_amplitude: float


def _scan_one_coupling(
    cfg: LatticeConfig,
    k: float,
    phis: Sequence[float],
    excited: Sequence[int],
    opts: ContinuationOptions,
    newton_opts: Optional[NewtonOptions],
) -> List[PhiScanRow]:
    rows = [PhiScanRow(k, float(phi), 0, math.nan) for phi in phis]
    coupled = cfg.with_max_coupling(k)
    coupling_branch = continue_natural(
        UntwistedProblem(coupled, newton_opts), ac_seed(coupled, excited), 0.0, k, opts
    )
    if coupling_branch.truncated:
        return rows
    solution = coupling_branch.last.solution
    current = 0.0
    twist_problem = FullSystemProblem(coupled, Parameter.TWIST, newton_opts)
    for row in sorted(rows, key=lambda r: r.phi):
        if row.phi != current:
            twist_branch = continue_natural(twist_problem, solution, current, row.phi, opts)
            if twist_branch.truncated:
                break
            solution, current = twist_branch.last.solution, row.phi
        idx = int(np.argmin(np.abs(solution.amplitudes)))
        row.min_node = idx + 1
        row.min_amplitude = float(normalize_half_plane(solution).amplitudes[idx])
    return rows


def scan_min_node_vs_phi(
    cfg: LatticeConfig,
    k_values: Sequence[float],
    phis: Sequence[float],
    excited: Sequence[int] = (1,),
    opts: Optional[ContinuationOptions] = None,
    newton_opts: Optional[NewtonOptions] = None,
    worker_config: Optional[WorkerConfig] = None,
    progress: bool = False,
) -> List[PhiScanRow]:
    """Amplitude of the weakest site over a grid of couplings and twists.

    For every ``k`` the seed is continued in the coupling at zero twist and then through the
    sorted twist grid. Grid points behind a truncated branch are reported as gaps
    (``min_node = 0``, ``min_amplitude = NaN``).
    """
    opts = opts or ContinuationOptions()
    worker_config = worker_config or WorkerConfig(num_workers=0)
    per_k = worker_config.map(
        lambda k: _scan_one_coupling(cfg, float(k), phis, excited, opts, newton_opts),
        list(k_values),
        progress=progress,
        desc="phi scan",
    )
    return [row for rows in per_k for row in rows]


def detect_k0(
    parity: Parity,
    n_sites: int,
    omega: float,
    opts: Optional[ContinuationOptions] = None,
    newton_opts: Optional[NewtonOptions] = None,
) -> float:
    """Critical coupling at which the reduced dark-node branch merges with the zero solution.

    The branch is stepped in ``k`` until a step either fails or lands below
    ``opts.norm_floor``. The last good and first bad coupling are then bisected down to
    ``opts.k0_tolerance``. Near the merge the squared norm falls linearly in ``k``; this is used
    to extrapolate from the bisected floor crossing to the merge point itself.

    Raises:
        UnsupportedConfigurationError: If ``omega <= 0``.
        ContinuationError: If the branch ends (e.g. at a fold) before its norm has decayed.
    """
    if not omega > 0:
        raise UnsupportedConfigurationError(f"k0 detection needs omega > 0, got {omega!r}")
    opts = opts or ContinuationOptions()
    problem = ReducedProblem(parity, n_sites, omega, newton_opts)
    branch = Branch(Parameter.COUPLING, problem.config_at(0.0))
    lo_solution = problem.seed()
    k_lo = 0.0
    branch.points.append(BranchPoint(0.0, lo_solution, l2_norm_reduced(lo_solution), True))

    def good(k: float, seed: ReducedAmplitudes) -> Tuple[bool, ReducedAmplitudes]:
        try:
            candidate, report = problem.solve(seed, k)
        except ValueError as exc:
            logger.debug(f"Reduced solve at k={k:.8f} failed: {exc}")
            return False, seed
        return report.converged and l2_norm_reduced(candidate) >= opts.norm_floor, candidate

    k_limit = 4 * omega
    step = opts.ds
    while True:
        k_next = k_lo + step
        if k_next > k_limit:
            raise ContinuationError(
                f"Reduced branch (N={n_sites}, omega={omega:g}) did not decay up to k={k_limit:g}",
                branch,
            )
        ok, candidate = good(k_next, lo_solution)
        if ok:
            k_lo, lo_solution = k_next, candidate
            branch.points.append(BranchPoint(k_lo, candidate, l2_norm_reduced(candidate), True))
            step = opts.ds
            continue
        if step > opts.min_ds and l2_norm_reduced(candidate) >= opts.norm_floor:
            # Newton failed without collapsing; retry closer
            step /= 2
            continue
        k_hi = k_next
        break

    while k_hi - k_lo > opts.k0_tolerance:
        k_mid = 0.5 * (k_lo + k_hi)
        ok, candidate = good(k_mid, lo_solution)
        if ok:
            k_lo, lo_solution = k_mid, candidate
        else:
            k_hi = k_mid
    norm_lo = l2_norm_reduced(lo_solution)
    if norm_lo > 0.1 * math.sqrt(omega):
        raise ContinuationError(
            f"Reduced branch (N={n_sites}, omega={omega:g}) ends at k={k_lo:.6g} with l2 norm "
            f"{norm_lo:.3g}; it did not decay to zero",
            branch,
        )

    k0 = k_hi
    probe_k = k_lo - 100 * opts.k0_tolerance
    if probe_k > 0:
        probe, report = problem.solve(lo_solution, probe_k)
        slope = (l2_norm_reduced(probe) ** 2 - norm_lo**2) / (k_lo - probe_k)
        if report.converged and slope > 0:
            k0 = k_lo + norm_lo**2 / slope
    logger.info(
        f"k0(N={n_sites}, omega={omega:g}, {Parity(parity).value}) = {k0:.8f} "
        f"(bracket [{k_lo:.8f}, {k_hi:.8f}])"
    )
    return float(k0)


@dataclass
class K0Sweep:
    #: "n_sites" or "omega".
    variable: str
    #: Values of the swept variable.
    values: List[float]
    #: Critical couplings, one per value.
    k0: List[float]
    #: Least-squares slope of k0 over omega (omega sweeps with at least two values).
    slope: Optional[float] = None
    #: Least-squares intercept belonging to ``slope``.
    intercept: Optional[float] = None


def sweep_k0(
    n_values: Optional[Sequence[int]] = None,
    omega_values: Optional[Sequence[float]] = None,
    n_sites: Optional[int] = None,
    omega: Optional[float] = None,
    opts: Optional[ContinuationOptions] = None,
    newton_opts: Optional[NewtonOptions] = None,
    worker_config: Optional[WorkerConfig] = None,
    progress: bool = False,
) -> K0Sweep:
    """Critical coupling of the even dark-node branch over ring sizes or propagation constants.

    Pass ``n_values`` together with a fixed ``omega``, or ``omega_values`` together with a fixed
    ``n_sites``. Omega sweeps with at least two entries are fitted by a straight line.
    """
    worker_config = worker_config or WorkerConfig.from_env()
    if (n_values is None) == (omega_values is None):
        raise ValueError("Sweep either over ring sizes or over omega values")
    if n_values is not None:
        if omega is None:
            raise ValueError("A ring-size sweep needs a fixed omega")
        odd = [n for n in n_values if n % 2]
        if odd:
            raise UnsupportedConfigurationError(f"k0 sweeps need even ring sizes, got {odd}")
        cells: List[Tuple[int, float]] = [(int(n), float(omega)) for n in n_values]
        variable, values = "n_sites", [float(n) for n in n_values]
    else:
        if n_sites is None or n_sites % 2:
            raise UnsupportedConfigurationError(
                f"An omega sweep needs a fixed even ring size, got {n_sites!r}"
            )
        cells = [(int(n_sites), float(w)) for w in omega_values]
        variable, values = "omega", [float(w) for w in omega_values]

    k0 = worker_config.map(
        lambda cell: detect_k0(Parity.EVEN, cell[0], cell[1], opts, newton_opts),
        cells,
        progress=progress,
        desc="k0 sweep",
    )
    sweep = K0Sweep(variable, values, list(k0))
    if variable == "omega" and len(values) >= 2:
        slope, intercept = np.polyfit(values, k0, 1)
        sweep.slope, sweep.intercept = float(slope), float(intercept)
        logger.info(f"k0 over omega: slope {slope:.6f}, intercept {intercept:.6f}")
    return sweep
