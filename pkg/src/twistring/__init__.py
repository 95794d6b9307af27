# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

from twistring.config import SolverConfig, load_config
from twistring.continuation import (
    Branch,
    BranchPoint,
    ContinuationOptions,
    K0Sweep,
    Parameter,
    PhiScanRow,
    branch_jumps,
    continue_from_ac,
    continue_natural,
    continue_pseudo_arclength,
    detect_k0,
    l2_norm_reduced,
    norm_is_monotone,
    reduced_branch,
    scan_min_node_vs_phi,
    sweep_k0,
)
from twistring.errors import (
    ContinuationError,
    DimensionMismatchError,
    EigenvalueConvergenceError,
    InvalidSeedError,
    ParityMismatchError,
    SingularJacobianError,
    SolutionFileError,
    TwistMismatchError,
    TwistringError,
    UnsupportedConfigurationError,
)
from twistring.evolution import (
    BoundednessReport,
    ConservationDrift,
    EvolutionOptions,
    Trajectory,
    boundedness_report,
    conservation_drift,
    coupling_mismatch_experiment,
    evolve,
    first_oscillation_period,
    oscillation_periods,
    perturb_amplitude,
)
from twistring.lattice_model import (
    ComplexState,
    CouplingProfile,
    LatticeConfig,
    Nonlinearity,
    PerEdge,
    StandingWave,
    Uniform,
    coupling_matrix,
    evolution_rhs,
    gauge_rotate,
    hamiltonian,
    jacobian,
    normalize_half_plane,
    power,
    residual,
    symmetry_defect,
    to_complex,
    weighted_power,
)
from twistring.newton_solver import (
    NewtonOptions,
    SolveReport,
    solve_full,
    solve_reduced,
    solve_untwisted,
)
from twistring.seed_factory import (
    Parity,
    ReducedAmplitudes,
    ac_reduced_seed,
    ac_seed,
    extract_reduced,
    parse_seed,
    reconstruct,
    reconstruct_even,
    reconstruct_odd,
    reduced_residual_even,
    reduced_residual_odd,
    splice_double_pulse,
)
from twistring.stability import (
    Classification,
    LinearizationMatrix,
    Spectrum,
    build_linearization,
    classify,
    dispersion,
    eigenvalues,
    zero_solution_spectrum,
)
from twistring.worker import WorkerConfig

__all__ = [
    "BoundednessReport",
    "Branch",
    "BranchPoint",
    "Classification",
    "ComplexState",
    "ConservationDrift",
    "ContinuationError",
    "ContinuationOptions",
    "CouplingProfile",
    "DimensionMismatchError",
    "EigenvalueConvergenceError",
    "EvolutionOptions",
    "InvalidSeedError",
    "K0Sweep",
    "LatticeConfig",
    "LinearizationMatrix",
    "NewtonOptions",
    "Nonlinearity",
    "Parameter",
    "Parity",
    "ParityMismatchError",
    "PerEdge",
    "PhiScanRow",
    "ReducedAmplitudes",
    "SingularJacobianError",
    "SolutionFileError",
    "SolveReport",
    "SolverConfig",
    "Spectrum",
    "StandingWave",
    "Trajectory",
    "TwistMismatchError",
    "TwistringError",
    "Uniform",
    "UnsupportedConfigurationError",
    "WorkerConfig",
    "ac_reduced_seed",
    "ac_seed",
    "boundedness_report",
    "branch_jumps",
    "build_linearization",
    "classify",
    "conservation_drift",
    "continue_from_ac",
    "continue_natural",
    "continue_pseudo_arclength",
    "coupling_matrix",
    "coupling_mismatch_experiment",
    "detect_k0",
    "dispersion",
    "eigenvalues",
    "evolution_rhs",
    "evolve",
    "extract_reduced",
    "gauge_rotate",
    "hamiltonian",
    "jacobian",
    "load_config",
    "l2_norm_reduced",
    "norm_is_monotone",
    "normalize_half_plane",
    "first_oscillation_period",
    "oscillation_periods",
    "parse_seed",
    "perturb_amplitude",
    "power",
    "reconstruct",
    "reconstruct_even",
    "reconstruct_odd",
    "reduced_branch",
    "reduced_residual_even",
    "reduced_residual_odd",
    "residual",
    "scan_min_node_vs_phi",
    "solve_full",
    "solve_reduced",
    "solve_untwisted",
    "splice_double_pulse",
    "sweep_k0",
    "symmetry_defect",
    "to_complex",
    "weighted_power",
    "zero_solution_spectrum",
]
