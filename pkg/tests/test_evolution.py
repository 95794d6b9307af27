# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""This module defines tests for the Runge-Kutta propagation."""

import logging
import math
import sys
import unittest

import numpy as np

from twistring.continuation import reduced_branch
from twistring.errors import InvalidSeedError
from twistring.evolution import (
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
    LatticeConfig,
    PerEdge,
    gauge_rotate,
    to_complex,
)
from twistring.seed_factory import Parity, reconstruct


def dark_node(n_sites: int, k: float = 0.25, omega: float = 1.0):
    cfg = LatticeConfig.uniform(n_sites, k, math.pi / n_sites, omega)
    branch = reduced_branch(Parity.of(n_sites), n_sites, omega, k_max=k)
    return reconstruct(branch.last.solution, cfg), cfg


class TestEvolution(unittest.TestCase):
    def setUp(self):
        logging.basicConfig(stream=sys.stderr, level=logging.INFO)

    def test_options(self):
        with self.assertRaises(ValueError):
            EvolutionOptions(dz=0.0)
        with self.assertRaises(ValueError):
            EvolutionOptions(growth_limit=1.0)
        with self.assertRaises(ValueError):
            EvolutionOptions(trend_segments=1)

    def test_sampling(self):
        cfg = LatticeConfig.uniform(4, 0.2, 0.1, 1.0)
        traj = evolve(ComplexState(np.zeros(4)), cfg, 1.0, dz=0.3)
        assert np.allclose(traj.z_samples, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert np.all(traj.states == 0)
        assert not traj.diverged

        traj = evolve(ComplexState([1.0, 0, 0, 0]), cfg, 1.0, dz=0.1, stride=3)
        assert np.allclose(traj.z_samples, [0.0, 0.3, 0.6, 0.9, 1.0])
        assert traj.final.n_sites == 4

        with self.assertRaises(ValueError):
            evolve(ComplexState(np.zeros(4)), cfg, 0.5, dz=1.0)
        with self.assertRaises(ValueError):
            evolve(ComplexState(np.zeros(4)), cfg, 1.0, stride=0)
        with self.assertRaises(InvalidSeedError):
            evolve(ComplexState(np.zeros(5)), cfg, 1.0)

    def test_standing_wave_is_stationary(self):
        sw, cfg = dark_node(6)
        c0 = to_complex(sw, 0.0, cfg)
        traj = evolve(c0, cfg, 50.0, dz=1e-3)
        intensities = traj.intensities
        assert abs(traj.z_samples[-1] - 50.0) < 1e-9
        assert np.max(np.abs(intensities - np.abs(c0.values)[None, :])) <= 1e-6
        assert np.max(intensities[:, 3]) <= 1e-6

        drift = conservation_drift(traj)
        assert drift.hamiltonian is not None and drift.hamiltonian <= 1e-8, drift
        assert drift.power <= 1e-8, drift

        report = boundedness_report(traj, c0)
        assert report.bounded
        assert not report.growing
        assert report.overall_deviation <= 1e-6

    def test_phase_advance(self):
        sw, cfg = dark_node(6)
        c0 = to_complex(sw, 0.0, cfg)
        traj = evolve(c0, cfg, 2 * math.pi / cfg.omega, dz=1e-3)
        assert np.max(np.abs(traj.final.values - c0.values)) <= 1e-6

        half = evolve(c0, cfg, 1.0, dz=1e-3)
        expected = to_complex(sw, 1.0, cfg).values
        assert np.max(np.abs(half.final.values - expected)) <= 1e-9

    def test_gauge_equivariance(self):
        sw, cfg = dark_node(6)
        c0 = perturb_amplitude(sw, 2, 0.05)
        plain = evolve(c0, cfg, 1.0, dz=0.01)
        rotated = evolve(gauge_rotate(c0, 0.9), cfg, 1.0, dz=0.01)
        assert np.allclose(rotated.states, plain.states * np.exp(0.9j), rtol=0, atol=1e-10)

    def test_fourth_order(self):
        sw, cfg = dark_node(6)
        c0 = perturb_amplitude(sw, 4, 0.1)
        reference = evolve(c0, cfg, 2.0, dz=0.0125).final.values
        coarse = np.max(np.abs(evolve(c0, cfg, 2.0, dz=0.1).final.values - reference))
        fine = np.max(np.abs(evolve(c0, cfg, 2.0, dz=0.05).final.values - reference))
        ratio = coarse / fine
        assert 12 <= ratio <= 20, ratio

    def test_perturb_amplitude(self):
        sw, cfg = dark_node(6)
        unperturbed = perturb_amplitude(sw, 1, 0.0).values
        assert np.array_equal(unperturbed, to_complex(sw, 0.0, cfg).values)
        perturbed = perturb_amplitude(sw, 4, 0.05)
        assert abs(abs(perturbed.values[3]) - 0.05) < 1e-15
        with self.assertRaises(InvalidSeedError):
            perturb_amplitude(sw, 0, 0.05)
        with self.assertRaises(InvalidSeedError):
            perturb_amplitude(sw, 7, 0.05)

    def test_perturbed_dark_nodes_stay_bounded(self):
        opts = EvolutionOptions(dz=1e-2)
        for n_sites, node in ((6, 4), (7, 1)):
            sw, cfg = dark_node(n_sites)
            reference = to_complex(sw, 0.0, cfg)
            traj = evolve(perturb_amplitude(sw, node, 0.05), cfg, 200.0, opts=opts)
            report = boundedness_report(traj, reference, opts)
            assert abs(report.initial_deviation - 0.05) < 1e-12
            assert report.reference_z == 0.0
            assert not report.growing, (n_sites, report)
            assert report.bounded, (n_sites, report)

            periods = oscillation_periods(traj, reference)
            assert periods.shape == (n_sites,)
            assert np.all(periods[np.isfinite(periods)] > 0)
            assert conservation_drift(traj).power <= 1e-6

    def test_coupling_mismatch(self):
        opts = EvolutionOptions(dz=1e-2)
        sw, cfg = dark_node(10, k=0.45)
        for k_evolve in (0.35, 0.55):
            traj, report = coupling_mismatch_experiment(sw, cfg, k_evolve, 200.0, opts)
            assert traj.config.max_coupling() == k_evolve
            assert not traj.diverged
            assert 0 < report.reference_z < 200.0
            assert report.initial_deviation > 0
            assert not report.growing, (k_evolve, report)
            assert report.bounded, (k_evolve, report)

    def synthetic_run(self, deviation: np.ndarray, z_samples: np.ndarray):
        reference = ComplexState([1.0, 0.0, 0.5])
        states = np.tile(reference.values, (z_samples.size, 1)).astype(complex)
        states[:, 1] += deviation
        traj = Trajectory(
            z_samples=z_samples,
            states=states,
            config=LatticeConfig.uniform(3, 0.2, 0.0, 1.0),
            hamiltonian=np.zeros(z_samples.size),
            power=np.zeros(z_samples.size),
        )
        return traj, reference

    def test_growing_deviation_is_unbounded(self):
        z = np.linspace(0.0, 200.0, 2001)
        opts = EvolutionOptions()

        # linear growth past the bound
        traj, reference = self.synthetic_run(0.05 + 0.275 * z / 200.0, z)
        report = boundedness_report(traj, reference, opts)
        assert abs(report.initial_deviation - 0.05) < 1e-12
        assert abs(report.overall_deviation - 0.325) < 1e-12
        assert report.growing
        assert report.growth_ratio > opts.growth_limit
        assert not report.bounded, report

        # linear growth that stays below the bound is still a trend
        traj, reference = self.synthetic_run(0.05 + 0.15 * z / 200.0, z)
        report = boundedness_report(traj, reference, opts)
        assert report.overall_deviation <= opts.bound_factor * report.initial_deviation
        assert report.growing
        assert not report.bounded, report

        # a steady oscillation of the same size is bounded
        traj, reference = self.synthetic_run(0.05 * np.cos(z), z)
        report = boundedness_report(traj, reference, opts)
        assert abs(report.initial_deviation - 0.05) < 1e-12
        assert abs(report.growth_ratio - 1.0) < 1e-2
        assert not report.growing
        assert report.bounded, report

    def test_reference_stretch(self):
        z = np.linspace(0.0, 200.0, 2001)
        deviation = 0.02 * np.sin(2 * math.pi * z / 25.0) ** 2
        traj, reference = self.synthetic_run(deviation, z)

        # starts on the reference, so z = 0 alone gives only the floor
        assert not boundedness_report(traj, reference).bounded

        period = first_oscillation_period(traj, reference)
        assert abs(period - 12.5) < 0.5, period
        report = boundedness_report(traj, reference, reference_z=period)
        assert report.reference_z == period
        assert abs(report.initial_deviation - 0.02) < 1e-4
        assert report.bounded, report

    def test_per_edge_invariants(self):
        values = (0.4, 0.25, 0.25, 0.25, 0.25, 0.25)
        c0 = ComplexState([1.0, 0.2j, 0.1, 0.0, -0.1, 0.3])

        site = LatticeConfig(6, PerEdge(values, "site"), 0.25, 1.0)
        traj = evolve(c0, site, 5.0, dz=1e-3)
        assert np.all(np.isnan(traj.hamiltonian))
        drift = conservation_drift(traj)
        assert drift.hamiltonian is None
        assert drift.power <= 1e-8, drift
        assert abs(traj.power[0] - np.sum(np.asarray(values) * np.abs(c0.values) ** 2)) < 1e-14

        bond = LatticeConfig(6, PerEdge(values, "bond"), 0.25, 1.0)
        traj = evolve(c0, bond, 5.0, dz=1e-3)
        assert abs(traj.power[0] - np.sum(np.abs(c0.values) ** 2)) < 1e-14
        assert conservation_drift(traj).power <= 1e-8

    def test_divergence_is_flagged(self):
        cfg = LatticeConfig.uniform(4, 0.5, 0.0, 1.0)
        traj = evolve(ComplexState([3.0, 0, 0, 0]), cfg, 1000.0, dz=10.0)
        assert traj.diverged
        assert np.all(np.isfinite(traj.states))
        assert traj.z_samples[-1] < 1000.0
        assert not boundedness_report(traj, ComplexState([3.0, 0, 0, 0])).bounded


if __name__ == "__main__":
    unittest.main()
