# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""Propagation of the coupled-mode equations in ``z`` with the classical Runge-Kutta scheme."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import tqdm

from twistring.errors import InvalidSeedError
from twistring.lattice_model import (
    ComplexState,
    LatticeConfig,
    PerEdge,
    StandingWave,
    coupling_matrix,
    field_derivative,
    hamiltonian,
    power,
    to_complex,
    weighted_power,
)

__all__ = (
    "EvolutionOptions",
    "Trajectory",
    "BoundednessReport",
    "ConservationDrift",
    "evolve",
    "perturb_amplitude",
    "boundedness_report",
    "oscillation_periods",
    "first_oscillation_period",
    "conservation_drift",
    "coupling_mismatch_experiment",
)

logger = logging.getLogger(__name__)

#: Relative drift of the conserved quantities tolerated at ``dz = 1e-3`` over ``z <= 100``.
CONSERVATION_HEALTH = 1e-8


@dataclass
class EvolutionOptions:
    #: Nominal integration step [mm]. The actual step divides ``z_max`` evenly.
    dz: float = 1e-3
    #: Approximate number of stored samples when no stride is given.
    target_samples: int = 2000
    #: A run is bounded if its deviation stays below this multiple of the initial deviation.
    bound_factor: float = 5.0
    #: Number of equal stretches of the run compared for a growth trend.
    trend_segments: int = 4
    #: Largest tolerated ratio between the peak deviation of the last and the first stretch,
    #: when the peaks rise from stretch to stretch.
    growth_limit: float = 1.5
    #: Lower limit of the initial deviation, for runs that start on an exact solution.
    floor: float = 1e-6

    def __post_init__(self):
        if not self.dz > 0:
            raise ValueError(f"dz must be positive, got {self.dz!r}")
        if self.target_samples < 1:
            raise ValueError(f"target_samples must be positive, got {self.target_samples!r}")
        if self.trend_segments < 2:
            raise ValueError(f"trend_segments must be at least 2, got {self.trend_segments!r}")
        if not self.growth_limit > 1:
            raise ValueError(f"growth_limit must exceed 1, got {self.growth_limit!r}")


@dataclass(eq=False)
class Trajectory:
    #: Propagation distances of the stored samples, strictly increasing from 0 [mm].
    z_samples: np.ndarray
    #: Complex fields, one row per sample.
    states: np.ndarray
    #: Configuration the run was propagated with.
    config: LatticeConfig
    #: Energy per sample (NaN for per-edge couplings, which have no energy functional here).
    hamiltonian: np.ndarray
    #: Conserved power per sample (coupling-weighted for site-convention per-edge couplings).
    power: np.ndarray
    #: Set if the state became non-finite; the samples end before the blow-up.
    diverged: bool = False

    @property
    def intensities(self) -> np.ndarray:
        """Moduli ``|c_n|`` per sample and node."""
        return np.abs(self.states)

    def state(self, index: int) -> ComplexState:
        return ComplexState(self.states[index])

    @property
    def final(self) -> ComplexState:
        return self.state(-1)

    @property
    def hamiltonian_change(self) -> np.ndarray:
        return np.abs(self.hamiltonian - self.hamiltonian[0])

    @property
    def power_change(self) -> np.ndarray:
        return np.abs(self.power - self.power[0])


def _conserved_power(c: ComplexState, cfg: LatticeConfig) -> float:
    if isinstance(cfg.couplings, PerEdge) and cfg.couplings.convention == "site":
        return weighted_power(c, cfg)
    return power(c)


def _energy(c: ComplexState, cfg: LatticeConfig) -> float:
    return hamiltonian(c, cfg) if cfg.is_uniform else math.nan


def evolve(
    c0: ComplexState,
    cfg: LatticeConfig,
    z_max: float,
    dz: Optional[float] = None,
    stride: Optional[int] = None,
    opts: Optional[EvolutionOptions] = None,
    progress: bool = False,
) -> Trajectory:
    """Integrates ``dc/dz`` from ``z = 0`` to ``z_max`` with fourth-order Runge-Kutta.

    The step is ``z_max / ceil(z_max / dz)``, so the last sample lands on ``z_max``. Every
    ``stride``-th state is stored; the final state is always stored.

    Args:
        c0: Field at ``z = 0``.
        cfg: Ring configuration.
        z_max: End of the run [mm].
        dz: Nominal step (default ``opts.dz``).
        stride: Steps between stored samples (default: about ``opts.target_samples`` samples).
        opts: Evolution settings.
        progress: Show a progress bar.

    Returns:
        The sampled trajectory. A blow-up ends it early with ``diverged`` set.
    """
    opts = opts or EvolutionOptions()
    dz = opts.dz if dz is None else dz
    if not dz > 0:
        raise ValueError(f"dz must be positive, got {dz!r}")
    if not z_max >= dz:
        raise ValueError(f"z_max must be at least dz, got z_max={z_max!r}, dz={dz!r}")
    if c0.n_sites != cfg.n_sites:
        raise InvalidSeedError(f"Initial state has {c0.n_sites} sites, ring has {cfg.n_sites}")
    n_steps = max(1, math.ceil(z_max / dz - 1e-9))
    h = z_max / n_steps
    if stride is None:
        stride = max(1, n_steps // opts.target_samples)
    elif stride < 1:
        raise ValueError(f"stride must be positive, got {stride!r}")
    logger.info(f"RK4 over z in [0, {z_max:g}] with {n_steps} steps of {h:.3e}, stride {stride}")

    mat = coupling_matrix(cfg)
    sigma = cfg.sigma
    y = np.array(c0.values, dtype=complex)
    z_samples = [0.0]
    states = [y.copy()]
    diverged = False
    with np.errstate(over="ignore", invalid="ignore"):
        for step in tqdm.trange(1, n_steps + 1, desc="RK4", disable=not progress, leave=False):
            k1 = field_derivative(y, mat, sigma)
            k2 = field_derivative(y + 0.5 * h * k1, mat, sigma)
            k3 = field_derivative(y + 0.5 * h * k2, mat, sigma)
            k4 = field_derivative(y + h * k3, mat, sigma)
            y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(y)):
                diverged = True
                logger.warning(f"Evolution diverged at z={step * h:.6g}")
                break
            if step % stride == 0 or step == n_steps:
                z_samples.append(step * h)
                states.append(y.copy())

    samples = [ComplexState(s) for s in states]
    return Trajectory(
        z_samples=np.array(z_samples),
        states=np.array(states),
        config=cfg,
        hamiltonian=np.array([_energy(c, cfg) for c in samples]),
        power=np.array([_conserved_power(c, cfg) for c in samples]),
        diverged=diverged,
    )


def perturb_amplitude(sw: StandingWave, node: int, delta: float) -> ComplexState:
    """Field at ``z = 0`` with ``delta`` added to the amplitude of the 1-based ``node``."""
    if not 1 <= node <= sw.n_sites:
        raise InvalidSeedError(f"Node {node} is outside the ring 1..{sw.n_sites}")
    a = np.array(sw.amplitudes)
    a[node - 1] += delta
    return ComplexState(a * np.exp(1j * sw.phases))


@dataclass
class BoundednessReport:
    #: Largest deviation of ``|c_n|`` from the reference, per node.
    max_deviation: np.ndarray
    #: Deviation at ``z = 0``, or the largest one up to ``reference_z`` (before the floor).
    initial_deviation: float
    #: Largest deviation over the whole run.
    overall_deviation: float
    #: Peak deviation of the last stretch of the run over that of the first (both floored).
    growth_ratio: float
    #: Whether the stretch peaks rise monotonically by more than ``growth_limit`` overall.
    growing: bool
    #: Whether the run stayed within ``bound_factor`` times the floored initial deviation
    #: without a growth trend.
    bounded: bool
    #: End of the stretch the initial deviation is taken from [mm].
    reference_z: float = 0.0


def _stretch_peaks(peaks: np.ndarray, opts: EvolutionOptions) -> np.ndarray:
    segments = np.array_split(peaks, min(opts.trend_segments, peaks.size))
    return np.maximum(np.array([segment.max() for segment in segments]), opts.floor)


def boundedness_report(
    traj: Trajectory,
    reference: ComplexState,
    opts: Optional[EvolutionOptions] = None,
    reference_z: Optional[float] = None,
) -> BoundednessReport:
    """Compares the node moduli of a run with those of ``reference``.

    The initial deviation is the one at ``z = 0``. Runs that start on ``reference`` and drift
    away from it by construction pass ``reference_z``; the initial deviation is then the
    largest one over ``z <= reference_z``. A run is bounded if it did not diverge, its overall
    deviation stays below ``bound_factor`` times the floored initial deviation and the peak
    deviation of successive stretches does not keep rising beyond ``growth_limit``.
    """
    opts = opts or EvolutionOptions()
    deviation = np.abs(traj.intensities - np.abs(reference.values)[None, :])
    if reference_z is None:
        initial = float(deviation[0].max())
        reference_z = 0.0
    else:
        initial = float(deviation[traj.z_samples <= reference_z].max())
    overall = float(deviation.max())
    base = max(initial, opts.floor)
    stretches = _stretch_peaks(deviation.max(axis=1), opts)
    growth_ratio = float(stretches[-1] / stretches[0])
    growing = bool(
        stretches.size > 1 and np.all(np.diff(stretches) > 0) and growth_ratio > opts.growth_limit
    )
    report = BoundednessReport(
        max_deviation=deviation.max(axis=0),
        initial_deviation=initial,
        overall_deviation=overall,
        growth_ratio=growth_ratio,
        growing=growing,
        bounded=not traj.diverged and overall <= opts.bound_factor * base and not growing,
        reference_z=float(reference_z),
    )
    log = logger.info if report.bounded else logger.warning
    log(
        f"Deviation from reference: initial {initial:.3e} (z <= {reference_z:g}), "
        f"overall {overall:.3e}, growth ratio {growth_ratio:.3g}"
        f"{' (growing)' if growing else ''} -> {'bounded' if report.bounded else 'unbounded'}"
    )
    return report


def oscillation_periods(traj: Trajectory, reference: ComplexState) -> np.ndarray:
    """Dominant oscillation period of ``|c_n| - |reference_n|`` per node, from zero crossings
    of the mean-free signal. NaN for nodes with fewer than three crossings."""
    signal = traj.intensities - np.abs(reference.values)[None, :]
    signal = signal - signal.mean(axis=0)
    periods = np.full(signal.shape[1], math.nan)
    for node in range(signal.shape[1]):
        crossings = np.flatnonzero(np.diff(np.signbit(signal[:, node])))
        if crossings.size >= 3:
            span = traj.z_samples[crossings[-1]] - traj.z_samples[crossings[0]]
            periods[node] = 2 * span / (crossings.size - 1)
    logger.info(f"Oscillation periods per node: {np.array2string(periods, precision=3)}")
    return periods


def first_oscillation_period(traj: Trajectory, reference: ComplexState) -> float:
    """Longest finite per-node period of the deviation from ``reference``.

    Falls back to the phase period ``2 pi / omega`` when no node oscillates within the run.
    """
    periods = oscillation_periods(traj, reference)
    finite = periods[np.isfinite(periods)]
    if finite.size == 0:
        return 2 * math.pi / traj.config.omega
    return float(finite.max())


@dataclass
class ConservationDrift:
    #: Largest relative change of the energy (``None`` without an energy functional).
    hamiltonian: Optional[float]
    #: Largest relative change of the conserved power.
    power: float


def _relative_drift(values: np.ndarray) -> float:
    scale = max(abs(float(values[0])), 1e-300)
    return float(np.max(np.abs(values - values[0]))) / scale


def conservation_drift(traj: Trajectory) -> ConservationDrift:
    energy = None if np.isnan(traj.hamiltonian[0]) else _relative_drift(traj.hamiltonian)
    drift = ConservationDrift(hamiltonian=energy, power=_relative_drift(traj.power))
    worst = max(drift.power, drift.hamiltonian or 0.0)
    if worst > CONSERVATION_HEALTH:
        logger.warning(f"Conserved quantities drift by {worst:.3e} (relative)")
    return drift


def coupling_mismatch_experiment(
    sw: StandingWave,
    cfg_solution: LatticeConfig,
    k_evolve: float,
    z_max: float,
    opts: Optional[EvolutionOptions] = None,
    progress: bool = False,
) -> Tuple[Trajectory, BoundednessReport]:
    """Propagates a standing wave of ``cfg_solution`` in a ring whose coupling is ``k_evolve``.

    The deviation starts at zero, so its reference is the largest deviation over the first
    oscillation period (see :func:`first_oscillation_period`).

    Returns:
        The trajectory and its deviation from the initial moduli.
    """
    opts = opts or EvolutionOptions()
    c0 = to_complex(sw, 0.0, cfg_solution)
    cfg = cfg_solution.with_max_coupling(k_evolve)
    logger.info(f"Evolving a k={cfg_solution.max_coupling():g} solution at k={k_evolve:g}")
    traj = evolve(c0, cfg, z_max, opts=opts, progress=progress)
    period = first_oscillation_period(traj, c0)
    return traj, boundedness_report(traj, c0, opts, reference_z=period)
