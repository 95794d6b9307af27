# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""This module defines tests for the file formats and the settings loader."""

import json
import logging
import math
import sys
import tempfile
import unittest
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

import numpy as np

from twistring.config import SolverConfig, load_config
from twistring.continuation import reduced_branch
from twistring.errors import SolutionFileError
from twistring.evolution import evolve
from twistring.io import (
    SCHEMA_VERSION,
    Provenance,
    SolutionFile,
    describe_branch,
    read_solution,
    read_table,
    write_branch,
    write_solution,
    write_spectrum,
    write_trajectory,
)
from twistring.lattice_model import (
    ComplexState,
    LatticeConfig,
    Nonlinearity,
    PerEdge,
    StandingWave,
    Uniform,
)
from twistring.seed_factory import Parity
from twistring.stability import Spectrum
from twistring.typed_converter import JsonValueError, raw_to_typed, typed_to_raw


class Color(Enum):
    RED = "red"
    BLUE = "blue"


@dataclass
class Inner:
    value: float
    label: Literal["a", "b"] = "a"


@dataclass
class Outer:
    inner: Inner
    color: Color = Color.RED
    items: List[int] = field(default_factory=list)
    pair: Tuple[int, str] = (0, "")
    table: Dict[str, float] = field(default_factory=dict)
    maybe: Optional[Inner] = None
    either: Union[int, Inner] = 0


class TestTypedConverter(unittest.TestCase):
    def test_conversion(self):
        raw = {
            "inner": {"value": 1},
            "color": "blue",
            "items": [1, 2],
            "pair": [3, "x"],
            "table": {"q": 0.5},
            "maybe": {"value": 2.5, "label": "b"},
            "either": {"value": 4.0},
        }
        outer = raw_to_typed(raw, Outer, strict=True)
        assert outer.inner == Inner(1.0)
        assert isinstance(outer.inner.value, float)
        assert outer.color is Color.BLUE
        assert outer.pair == (3, "x")
        assert outer.maybe == Inner(2.5, "b")
        assert outer.either == Inner(4.0)

        back = typed_to_raw(outer)
        assert list(back) == ["inner", "color", "items", "pair", "table", "maybe", "either"]
        assert back["color"] == "blue"
        assert back["pair"] == [3, "x"]

    def test_mismatches(self):
        for raw in (
            {"inner": {"value": True}},
            {"inner": {"value": 1.0, "label": "c"}},
            {"inner": {"value": 1.0}, "color": "green"},
            {"inner": {"value": 1.0}, "pair": [1]},
            {"inner": {"value": 1.0}, "either": "text"},
            {"color": "red"},
        ):
            with self.assertRaises(JsonValueError, msg=str(raw)):
                raw_to_typed(raw, Outer)

        with self.assertRaises(JsonValueError) as ctx:
            raw_to_typed({"inner": {"value": 1.0, "extra": 1}}, Outer, strict=True)
        assert "extra" in str(ctx.exception)
        assert ctx.exception.path == "root -> Outer:inner"
        # lenient mode ignores unknown keys
        assert raw_to_typed({"inner": {"value": 1.0, "extra": 1}}, Outer).inner == Inner(1.0)

        with self.assertRaises(TypeError):
            typed_to_raw(1j)

    def test_numpy_values(self):
        assert typed_to_raw(np.array([1.0, 2.0])) == [1.0, 2.0]
        assert typed_to_raw(np.float64(0.5)) == 0.5
        assert typed_to_raw(Nonlinearity.FOCUSING) == "focusing"


class TestSolverConfig(unittest.TestCase):
    def setUp(self):
        logging.basicConfig(stream=sys.stderr, level=logging.INFO)
        self.temp_dir = tempfile.TemporaryDirectory()
        self.path = Path(self.temp_dir.name)

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_defaults(self):
        cfg = load_config({})
        assert cfg == SolverConfig()
        (self.path / "empty.yaml").write_text("")
        assert load_config(self.path / "empty.yaml") == SolverConfig()

    def test_yaml(self):
        (self.path / "solver.yaml").write_text(
            "newton:\n"
            "  tol_residual: 1.0e-11\n"
            "  max_iter: 10\n"
            "continuation:\n"
            "  ds: 0.005\n"
            "evolution:\n"
            "  dz: 0.01\n"
        )
        cfg = load_config(self.path / "solver.yaml", default_type=SolverConfig)
        assert cfg.newton.tol_residual == 1e-11
        assert cfg.newton.max_iter == 10
        assert cfg.newton.damping == 0.5
        assert cfg.continuation.ds == 0.005
        assert cfg.evolution.dz == 0.01

        cfg = load_config({}, default_kwargs={"newton": {"max_iter": 3}})
        assert cfg.newton.max_iter == 3

    def test_invalid(self):
        with self.assertRaises(JsonValueError):
            load_config({"newton": {"max_iterations": 10}})
        with self.assertRaises(JsonValueError):
            load_config({"newton": {"damping": 2.0}})
        with self.assertRaises(JsonValueError):
            load_config({"evolution": {"dz": "small"}})
        (self.path / "list.yaml").write_text("- 1\n- 2\n")
        with self.assertRaises(JsonValueError):
            load_config(self.path / "list.yaml")


class TestSolutionFile(unittest.TestCase):
    def setUp(self):
        logging.basicConfig(stream=sys.stderr, level=logging.INFO)
        self.temp_dir = tempfile.TemporaryDirectory()
        self.path = Path(self.temp_dir.name)

    def tearDown(self):
        self.temp_dir.cleanup()

    def sample(self, cfg: LatticeConfig) -> SolutionFile:
        rng = np.random.default_rng(3)
        n = cfg.n_sites
        sw = StandingWave(rng.uniform(-1, 1, n), rng.uniform(-math.pi, math.pi, n))
        return SolutionFile.from_solution(
            sw.gauge_fixed(), cfg, Provenance("single:1", "continuation", ["a", "b"])
        )

    def test_round_trip(self):
        configs = [
            LatticeConfig.uniform(6, 0.25, math.pi / 6, 1.0),
            LatticeConfig(
                6,
                PerEdge((0.4, 0.25, 0.25, 0.25, 0.25, 0.25), "bond"),
                0.25,
                1.3,
                Nonlinearity.FOCUSING,
            ),
        ]
        for cfg in configs:
            original = self.sample(cfg)
            write_solution(self.path / "sol.json", original)
            text = (self.path / "sol.json").read_text()
            loaded = read_solution(self.path / "sol.json")

            assert loaded.config == cfg
            assert loaded.config.twist == cfg.twist
            assert loaded.amplitudes == original.amplitudes
            assert loaded.phases == original.phases
            assert loaded.provenance == original.provenance
            assert loaded.to_json() == text

            raw = json.loads(text)
            assert raw["schema_version"] == SCHEMA_VERSION
            assert list(raw) == [
                "schema_version",
                "config",
                "amplitudes",
                "phases",
                "residual_norm",
                "provenance",
            ]

        assert isinstance(read_solution(self.path / "sol.json").config.couplings, PerEdge)

    def test_standing_wave(self):
        original = self.sample(LatticeConfig.uniform(5, 0.1, 0.0, 1.0))
        sw = original.standing_wave()
        assert np.array_equal(sw.amplitudes, original.amplitudes)
        assert isinstance(SolutionFile.from_json(original.to_json()).config.couplings, Uniform)

    def test_corrupt_files(self):
        good = json.loads(self.sample(LatticeConfig.uniform(6, 0.25, 0.0, 1.0)).to_json())
        short = dict(good, amplitudes=good["amplitudes"][:-1])
        extra = dict(good, comment="hand edited")
        wrong_version = dict(good, schema_version=SCHEMA_VERSION + 1)
        bad_coupling = dict(good, config=dict(good["config"], couplings={"k": "strong"}))
        for name, text in (
            ("truncated", '{"schema_version": 1, "config": '),
            ("array", "[1, 2, 3]"),
            ("short", json.dumps(short)),
            ("extra", json.dumps(extra)),
            ("version", json.dumps(wrong_version)),
            ("coupling", json.dumps(bad_coupling)),
        ):
            (self.path / f"{name}.json").write_text(text)
            with self.assertRaises(SolutionFileError, msg=name):
                read_solution(self.path / f"{name}.json")

        with self.assertRaises(SolutionFileError):
            read_solution(self.path / "missing.json")


class TestTables(unittest.TestCase):
    def setUp(self):
        logging.basicConfig(stream=sys.stderr, level=logging.INFO)
        self.temp_dir = tempfile.TemporaryDirectory()
        self.path = Path(self.temp_dir.name)

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_trajectory_table(self):
        cfg = LatticeConfig.uniform(3, 0.2, 0.1, 1.0)
        traj = evolve(ComplexState([1.0, 0.0, 0.5j]), cfg, 1.0, dz=0.25)
        write_trajectory(self.path / "traj.csv", traj)
        header, rows = read_table(self.path / "traj.csv")
        assert header == ["z [mm]", "|c1|", "|c2|", "|c3|", "H [1/mm]", "P"]
        assert rows.shape == (5, 6)
        assert np.array_equal(rows[:, 0], traj.z_samples)
        assert np.array_equal(rows[:, 1:4], traj.intensities)

    def test_spectrum_table(self):
        spectrum = Spectrum.from_eigenvalues([0.0, 1j, -1j, 0.1 + 2j])
        write_spectrum(self.path / "spectrum.csv", spectrum)
        header, rows = read_table(self.path / "spectrum.csv")
        assert header == ["re [1/mm]", "im [1/mm]"]
        assert np.array_equal(rows[:, 0] + 1j * rows[:, 1], spectrum.eigenvalues)

    def test_branch_table(self):
        branch = reduced_branch(Parity.EVEN, 6, 1.0, k_max=0.05)
        write_branch(self.path / "branch.csv", branch)
        header, rows = read_table(self.path / "branch.csv")
        assert header == ["coupling_k [1/mm]", "l2_norm", "converged", "residual_norm"]
        assert rows.shape == (len(branch.points), 4)
        assert rows[0, 1] == 1.0
        assert np.all(rows[:, 2] == 1.0)
        assert describe_branch(branch).startswith("coupling_k: 0.0 -> 0.05")
        assert describe_branch(None) == "none"


if __name__ == "__main__":
    unittest.main()
