# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""This module defines tests for the ring model and its residual."""

import logging
import math
import sys
import unittest

import numpy as np

from twistring.errors import DimensionMismatchError, UnsupportedConfigurationError
from twistring.lattice_model import (
    ComplexState,
    LatticeConfig,
    PerEdge,
    StandingWave,
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
    untwisted_jacobian,
    untwisted_residual,
    weighted_power,
    wrap_phase,
)
from twistring.seed_factory import Parity, ac_reduced_seed, reconstruct

ASYMMETRIC = (0.4, 0.25, 0.25, 0.25, 0.25, 0.25)


def finite_difference_jacobian(sw: StandingWave, cfg: LatticeConfig, step: float = 1e-6):
    x = sw.to_vector()
    out = np.empty((x.size, x.size))
    for j in range(x.size):
        dx = np.zeros(x.size)
        dx[j] = step
        plus = residual(StandingWave.from_vector(x + dx), cfg)
        minus = residual(StandingWave.from_vector(x - dx), cfg)
        out[:, j] = (plus - minus) / (2 * step)
    return out


class TestLatticeModel(unittest.TestCase):
    def setUp(self):
        logging.basicConfig(stream=sys.stderr, level=logging.INFO)
        self.rng = np.random.default_rng(42)

    def random_wave(self, n: int) -> StandingWave:
        return StandingWave(self.rng.uniform(-1.5, 1.5, n), self.rng.uniform(-np.pi, np.pi, n))

    def test_config_validation(self):
        with self.assertRaises(UnsupportedConfigurationError):
            LatticeConfig.uniform(2, 0.1, 0.0, 1.0)
        with self.assertRaises(UnsupportedConfigurationError):
            LatticeConfig.uniform(6, math.nan, 0.0, 1.0)
        with self.assertRaises(DimensionMismatchError):
            LatticeConfig(6, PerEdge((0.1, 0.2)), 0.0, 1.0)
        with self.assertRaises(UnsupportedConfigurationError):
            PerEdge((0.1, 0.2, 0.3), "edge")

    def test_wrap_phase(self):
        assert wrap_phase(math.pi) == math.pi
        assert wrap_phase(-math.pi) == math.pi
        assert abs(wrap_phase(1.5 * math.pi) + 0.5 * math.pi) < 1e-15
        assert abs(wrap_phase(0.25) - 0.25) < 1e-15

        sw = StandingWave([1.0, 2.0], [2.5 * math.pi, -0.5])
        assert abs(sw.phases[0] - 0.5 * math.pi) < 1e-12, sw.phases

    def test_standing_wave_dimensions(self):
        with self.assertRaises(DimensionMismatchError):
            StandingWave(np.ones(4), np.zeros(3))
        cfg = LatticeConfig.uniform(6, 0.1, 0.0, 1.0)
        with self.assertRaises(DimensionMismatchError):
            residual(StandingWave.zeros(5), cfg)
        with self.assertRaises(DimensionMismatchError):
            evolution_rhs(ComplexState(np.zeros(7)), cfg)

    def test_uniform_coupling_matrix(self):
        cfg = LatticeConfig.uniform(6, 0.25, math.pi / 6, 1.0)
        mat = coupling_matrix(cfg)
        assert abs(mat[0, 1] - 0.25 * np.exp(-1j * math.pi / 6)) < 1e-15
        assert abs(mat[0, 5] - 0.25 * np.exp(1j * math.pi / 6)) < 1e-15
        assert abs(mat[5, 0] - 0.25 * np.exp(-1j * math.pi / 6)) < 1e-15
        assert np.count_nonzero(mat) == 12
        assert np.allclose(mat, mat.conj().T, atol=1e-15)

    def test_per_edge_conventions(self):
        site = coupling_matrix(LatticeConfig(6, PerEdge(ASYMMETRIC, "site"), 0.0, 1.0))
        # the equation of site n weights c_{n+1} with k_{n+1} and c_{n-1} with k_{n-1}
        assert site[0, 1] == 0.25
        assert site[1, 0] == 0.4
        assert site[5, 0] == 0.4
        assert site[0, 5] == 0.25
        assert not np.allclose(site, site.conj().T)

        bond = coupling_matrix(LatticeConfig(6, PerEdge(ASYMMETRIC, "bond"), 0.3, 1.0))
        assert abs(abs(bond[0, 1]) - 0.4) < 1e-15
        assert abs(abs(bond[1, 0]) - 0.4) < 1e-15
        assert abs(abs(bond[5, 0]) - 0.25) < 1e-15
        assert np.allclose(bond, bond.conj().T, atol=1e-15)

    def test_uniform_per_edge_equivalence(self):
        sw = self.random_wave(5)
        uniform = LatticeConfig.uniform(5, 0.3, 0.4, 1.2)
        for convention in ("site", "bond"):
            per_edge = LatticeConfig(5, PerEdge((0.3,) * 5, convention), 0.4, 1.2)
            assert np.allclose(residual(sw, uniform), residual(sw, per_edge), atol=1e-15)

    def test_scaling(self):
        cfg = LatticeConfig(6, PerEdge(ASYMMETRIC, "bond"), 0.0, 1.0)
        scaled = cfg.with_max_coupling(0.2)
        assert scaled.max_coupling() == 0.2
        assert np.allclose(scaled.couplings.values, np.array(ASYMMETRIC) / 2)
        assert scaled.couplings.convention == "bond"
        assert LatticeConfig.uniform(6, 0.1, 0.0, 1.0).with_max_coupling(0.3).couplings.k == 0.3

    def test_anti_continuum_residual(self):
        cfg = LatticeConfig.uniform(6, 0.0, 0.3, 1.0)
        sw = StandingWave([1.0, 0, 0, -1.0, 0, 0], np.zeros(6))
        assert np.all(residual(sw, cfg) == 0)

        coupled = LatticeConfig.uniform(6, 0.1, 0.0, 1.0)
        r = residual(StandingWave([1.0, 0, 0, 0, 0, 0], np.zeros(6)), coupled)
        assert abs(r[2] - 0.1) < 1e-15 and abs(r[10] - 0.1) < 1e-15, r

    def test_jacobian_matches_differences(self):
        configs = [
            LatticeConfig.uniform(6, 0.25, math.pi / 6, 1.0),
            LatticeConfig.uniform(7, 0.4, 0.3, 0.7),
            LatticeConfig(6, PerEdge(ASYMMETRIC, "site"), 0.25, 1.0),
            LatticeConfig(6, PerEdge(ASYMMETRIC, "bond"), 0.25, 1.0),
        ]
        for trial in range(100):
            cfg = configs[trial % len(configs)]
            sw = self.random_wave(cfg.n_sites)
            analytic = jacobian(sw, cfg)
            numeric = finite_difference_jacobian(sw, cfg)
            scale = max(1.0, float(np.max(np.abs(analytic))))
            error = float(np.max(np.abs(analytic - numeric)))
            assert error <= 1e-6 * scale, (trial, error)

    def test_untwisted_system(self):
        cfg = LatticeConfig.uniform(5, 0.2, 0.0, 1.0)
        a = self.rng.uniform(-1, 1, 5)
        full = residual(StandingWave(a, np.zeros(5)), cfg)
        assert np.allclose(untwisted_residual(a, cfg), full[0::2], atol=1e-15)
        assert np.all(full[1::2] == 0)
        assert np.allclose(
            untwisted_jacobian(a, cfg),
            jacobian(StandingWave(a, np.zeros(5)), cfg)[0::2, 0::2],
            atol=1e-15,
        )
        with self.assertRaises(UnsupportedConfigurationError):
            untwisted_residual(a, cfg.with_twist(0.1))

    def test_gauge_equivariance(self):
        cfg = LatticeConfig.uniform(6, 0.3, 0.4, 1.0)
        sw = self.random_wave(6)
        rotated = StandingWave(sw.amplitudes, sw.phases + 0.7)
        assert np.allclose(residual(sw, cfg), residual(rotated, cfg), atol=1e-12)

        c = to_complex(sw, 0.0, cfg)
        lhs = evolution_rhs(gauge_rotate(c, 0.7), cfg)
        rhs = np.exp(0.7j) * evolution_rhs(c, cfg)
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_conserved_quantities(self):
        cfg = LatticeConfig.uniform(3, 0.5, 0.0, 1.0)
        c = ComplexState([1.0, 0.0, 0.0])
        assert power(c) == 1.0
        # only the -sigma/2 |c|^4 term survives a single excited site
        assert abs(hamiltonian(c, cfg) + 0.5) < 1e-15
        assert weighted_power(c, cfg) == 0.5

        uniform = ComplexState(np.ones(3))
        assert abs(hamiltonian(uniform, cfg) - (2 * 0.5 * 3 - 1.5)) < 1e-14

        site = LatticeConfig(6, PerEdge(ASYMMETRIC, "site"), 0.0, 1.0)
        with self.assertRaises(UnsupportedConfigurationError):
            hamiltonian(ComplexState(np.ones(6)), site)
        assert abs(weighted_power(ComplexState(np.ones(6)), site) - sum(ASYMMETRIC)) < 1e-14
        with self.assertRaises(UnsupportedConfigurationError):
            weighted_power(
                ComplexState(np.ones(6)), LatticeConfig(6, PerEdge(ASYMMETRIC, "bond"), 0.0, 1.0)
            )

    def test_normalize_half_plane(self):
        sw = normalize_half_plane(StandingWave([1.0, 2.0, 3.0], [math.pi, -math.pi / 2, 0.3]))
        assert np.allclose(sw.amplitudes, [-1.0, -2.0, 3.0])
        assert np.allclose(sw.phases, [0.0, math.pi / 2, 0.3])

    def test_symmetry_defect(self):
        cfg = LatticeConfig.uniform(6, 0.0, math.pi / 6, 1.0)
        sw = reconstruct(ac_reduced_seed(Parity.EVEN, 6, 1.0), cfg)
        assert symmetry_defect(sw) == 0.0

        symmetric = StandingWave([1.0, 0.5, 0.2, 0.1, 0.2, 0.5], [0, 0.3, 0.6, 0.0, -0.6, -0.3])
        assert symmetry_defect(symmetric) < 1e-15
        broken = StandingWave([1.0, 0.5, 0.2, 0.1, 0.2, 0.4], [0, 0.3, 0.6, 0.0, -0.6, -0.3])
        assert abs(symmetry_defect(broken) - 0.1) < 1e-12


if __name__ == "__main__":
    unittest.main()
