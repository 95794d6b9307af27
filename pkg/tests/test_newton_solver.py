# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""This module defines tests for the Newton solvers."""

import logging
import math
import sys
import unittest

import numpy as np

from twistring.errors import InvalidSeedError, SingularJacobianError, UnsupportedConfigurationError
from twistring.lattice_model import LatticeConfig, StandingWave, residual
from twistring.newton_solver import (
    NewtonOptions,
    newton,
    solve_full,
    solve_reduced,
    solve_untwisted,
)
from twistring.seed_factory import Parity, ac_reduced_seed, ac_seed


class TestNewtonSolver(unittest.TestCase):
    def setUp(self):
        logging.basicConfig(stream=sys.stderr, level=logging.INFO)

    def test_options(self):
        for kwargs in (
            dict(tol_residual=0.0),
            dict(max_iter=0),
            dict(damping=1.5),
            dict(min_step=0.0),
        ):
            with self.assertRaises(ValueError, msg=str(kwargs)):
                NewtonOptions(**kwargs)

    def test_scalar_problem(self):
        x, report = newton(
            lambda x: x**2 - 2.0, lambda x: np.diag(2 * x), np.array([1.0]), NewtonOptions()
        )
        assert report.converged
        assert abs(x[0] - math.sqrt(2)) < 1e-12
        assert report.residual_history[0] == 1.0
        assert len(report.residual_history) == report.iterations + 1

    def test_exact_start(self):
        _, report = newton(
            lambda x: x - 1.0, lambda x: np.eye(1), np.array([1.0]), NewtonOptions()
        )
        assert report.converged and report.iterations == 0

    def test_singular_jacobian(self):
        with self.assertRaises(SingularJacobianError) as ctx:
            newton(
                lambda x: x**2 + 1.0, lambda x: np.zeros((1, 1)), np.array([0.0]), NewtonOptions()
            )
        assert ctx.exception.iteration == 0

    def test_stall_is_reported(self):
        # x^2 + 1 has no real root, the residual cannot decrease below 1
        x, report = newton(
            lambda x: x**2 + 1.0, lambda x: np.diag(2 * x), np.array([0.5]), NewtonOptions()
        )
        assert not report.converged
        assert report.final_residual_norm >= 1.0

    def test_quadratic_convergence(self):
        seed = ac_reduced_seed(Parity.EVEN, 6, 1.0)
        solution, report = solve_reduced(seed, 0.1, 1.0)
        assert report.converged, report
        assert report.iterations <= 8, report
        history = report.residual_history
        assert history[-1] <= 1e-12
        for before, after in zip(history[:-1], history[1:]):
            if 1e-10 < before < 1e-2:
                assert after <= 100 * before**2, history

    def test_iteration_limit(self):
        seed = ac_reduced_seed(Parity.EVEN, 6, 1.0)
        _, report = solve_reduced(seed, 0.25, 1.0, NewtonOptions(max_iter=1))
        assert not report.converged
        assert report.iterations == 1

    def test_untwisted_and_full(self):
        cfg = LatticeConfig.uniform(6, 0.1, 0.0, 1.0)
        seed = ac_seed(cfg, [1])
        untwisted, report = solve_untwisted(seed, cfg)
        assert report.converged
        assert np.all(untwisted.phases == 0)
        assert np.linalg.norm(residual(untwisted, cfg)) <= 1e-12

        twisted = cfg.with_twist(0.05)
        full, report = solve_full(untwisted, twisted)
        assert report.converged, report
        assert full.phases[0] == 0.0
        assert report.discarded_equation_residual <= 1e-11
        assert np.linalg.norm(residual(full, twisted)) <= 1e-10

        with self.assertRaises(UnsupportedConfigurationError):
            solve_untwisted(seed, twisted)
        with self.assertRaises(UnsupportedConfigurationError):
            solve_untwisted(StandingWave(np.ones(6), [0, 0.5, 0, 0, 0, 0]), cfg)

    def test_full_solve_regauges_seed(self):
        cfg = LatticeConfig.uniform(6, 0.1, 0.0, 1.0)
        untwisted, _ = solve_untwisted(ac_seed(cfg, [1]), cfg)
        rotated = StandingWave(untwisted.amplitudes, untwisted.phases + 1.0)
        full, report = solve_full(rotated, cfg)
        assert report.converged and report.iterations == 0
        assert np.allclose(full.amplitudes, untwisted.amplitudes)
        assert np.allclose(full.phases, 0.0, atol=1e-15)

    def test_invalid_seeds(self):
        cfg = LatticeConfig.uniform(6, 0.1, 0.0, 1.0)
        with self.assertRaises(InvalidSeedError):
            solve_full(StandingWave([math.nan, 0, 0, 0, 0, 0], np.zeros(6)), cfg)
        seed = ac_reduced_seed(Parity.EVEN, 6, 1.0)
        with self.assertRaises(InvalidSeedError):
            solve_reduced(seed.with_values(np.array([math.inf, 0, 0])), 0.1, 1.0)


if __name__ == "__main__":
    unittest.main()
