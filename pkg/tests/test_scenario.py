"""
Unit Tests for Scenario Parsing
"""

import os
import sys
import tempfile

import numpy as np
import pytest

# Add repository root to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.errors import ConfigError
from src.scenario import OBSERVABLE_COLUMNS, ScenarioConfig, parse_config


def write_scenario(directory: str, text: str) -> str:
    path = os.path.join(directory, "scenario.txt")
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    return path


class TestParseConfig:
    """Test cases for parse_config."""

    def setup_method(self):
        """Set up test fixtures."""
        self.temp_dir = tempfile.TemporaryDirectory()

    def teardown_method(self):
        self.temp_dir.cleanup()

    def test_file_with_flag_override(self):
        """File values are parsed and flags take precedence."""
        path = write_scenario(self.temp_dir.name, "solver=full\nn_a0=9\n")
        config = parse_config(path, {"tau_max": 3.0, "solver": None})
        assert config.solver == "full"
        assert config.n_a0 == 9.0
        assert config.tau_max == 3.0

    def test_comments_and_all_keys(self):
        """Comments are skipped and every key is understood."""
        text = (
            "# shipped example\n"
            "solver=shorttime\n"
            "pump=fock\n"
            "n_a0=4\n"
            "tau_max=2.5\n"
            "d_tau=0.05\n"
            "cutoff=12\n"
            "tol=1e-9\n"
            "outputs=Nb,F_b\n"
            "out_path=out/run.csv\n"
            "workers=2\n"
            "integrator=adaptive\n"
            "omega_b=2.0\n"
        )
        config = parse_config(write_scenario(self.temp_dir.name, text))
        assert config.pump == "fock"
        assert config.cutoff == 12
        assert config.tol == 1e-9
        assert config.outputs == ("Nb", "F_b")
        assert config.columns() == ("tau", "Nb", "F_b")
        assert config.workers == 2
        assert config.integrator == "adaptive"

    def test_empty_file_with_flags(self):
        """An empty file plus complete flags is valid."""
        path = write_scenario(self.temp_dir.name, "")
        config = parse_config(path, {"solver": "parametric", "n_a0": 9.0})
        assert config.solver == "parametric"
        assert config.cutoff is None

    def test_flags_only(self):
        """No file at all."""
        config = parse_config(None, {"solver": "semiclassical", "n_a0": "1", "cutoff": "auto"})
        assert config.n_a0 == 1.0
        assert config.outputs == OBSERVABLE_COLUMNS

    def test_defaults_have_lowest_precedence(self):
        """Environment defaults yield to file values."""
        path = write_scenario(self.temp_dir.name, "solver=full\nn_a0=1\nd_tau=0.5\n")
        config = parse_config(path, defaults={"d_tau": 0.01, "workers": 3})
        assert config.d_tau == 0.5
        assert config.workers == 3

    def test_invalid_solver(self):
        """solver=warp names the solver key."""
        path = write_scenario(self.temp_dir.name, "solver=warp\nn_a0=9\n")
        with pytest.raises(ConfigError) as excinfo:
            parse_config(path)
        assert excinfo.value.field == "solver"

    def test_unknown_key(self):
        """Unknown keys are rejected by name."""
        path = write_scenario(self.temp_dir.name, "solver=full\nn_a0=9\nspeed=3\n")
        with pytest.raises(ConfigError) as excinfo:
            parse_config(path)
        assert excinfo.value.field == "speed"

    def test_type_mismatch(self):
        """Unparsable values name their key."""
        path = write_scenario(self.temp_dir.name, "solver=full\nn_a0=nine\n")
        with pytest.raises(ConfigError) as excinfo:
            parse_config(path)
        assert excinfo.value.field == "n_a0"

    def test_missing_required_key(self):
        """solver and n_a0 are required."""
        with pytest.raises(ConfigError) as excinfo:
            parse_config(None, {"solver": "full"})
        assert excinfo.value.field == "n_a0"

    def test_missing_file(self):
        """A missing scenario file is reported."""
        with pytest.raises(FileNotFoundError):
            parse_config(os.path.join(self.temp_dir.name, "absent.txt"))


class TestScenarioConfig:
    """Test cases for ScenarioConfig validation and helpers."""

    @pytest.mark.parametrize(
        "kwargs, field",
        [
            ({"tau_max": 0.0}, "tau_max"),
            ({"d_tau": -0.1}, "d_tau"),
            ({"n_a0": -1.0}, "n_a0"),
            ({"pump": "squeezed"}, "pump"),
            ({"pump": "fock", "n_a0": 2.5}, "n_a0"),
            ({"workers": 0}, "workers"),
            ({"integrator": "rk4"}, "integrator"),
            ({"outputs": ("Nb", "entropy")}, "outputs"),
            ({"cutoff": -3}, "cutoff"),
        ],
    )
    def test_invariants(self, kwargs, field):
        """Every invariant violation names its field."""
        params = {"solver": "full", "n_a0": 9.0}
        params.update(kwargs)
        with pytest.raises(ConfigError) as excinfo:
            ScenarioConfig(**params)
        assert excinfo.value.field == field

    def test_parametric_needs_amplitude(self):
        """A = sqrt(n_a0) must be positive."""
        with pytest.raises(ConfigError):
            ScenarioConfig(solver="parametric", n_a0=0.0)
        assert ScenarioConfig(solver="parametric", n_a0=9.0).amplitude == 3.0

    def test_tau_grid(self):
        """Grid spans [0, tau_max] with the requested spacing."""
        grid = ScenarioConfig(solver="full", n_a0=1.0, tau_max=1.0, d_tau=0.1).tau_grid()
        assert grid.size == 11
        assert grid[0] == 0.0 and grid[-1] == 1.0
        assert np.allclose(np.diff(grid), 0.1)

    def test_to_dict(self):
        """The resolved config echoes 'auto' for the automatic cutoff."""
        resolved = ScenarioConfig(solver="full", n_a0=1.0).to_dict()
        assert resolved["cutoff"] == "auto"
        assert resolved["outputs"] == list(OBSERVABLE_COLUMNS)


if __name__ == "__main__":
    pytest.main([__file__])
