"""Tests for configuration loading and exit codes."""
import pydantic
import pytest

from affgroup.cli import EXIT_CHART, EXIT_ERROR, EXIT_SHAPE, EXIT_SINGULAR, EXIT_USAGE, exit_code, load_config, parse_value, read_config_file
from affgroup.errors import ChartMismatch, EmptySearchBox, ShapeMismatch, SingularMatrix
from affgroup.models.config import ProjectionMeasure, RunConfig


class TestParseValue:
    @pytest.mark.parametrize(
        "raw, expected",
        [
            ("3", 3),
            ("1e-3", 1e-3),
            ("true", True),
            ("[1, 2]", [1, 2]),
            ("1,-1", [1, -1]),
            ("haar", "haar"),
            (" c0-w1 ", "c0-w1"),
        ],
    )
    def test_values(self, raw, expected):
        assert parse_value(raw) == expected


class TestConfigFile:
    def test_comments_and_blanks(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("# pipeline\n\nseed = 3  # fixed\nchart.rho_count=8\n")
        assert read_config_file(path) == {"seed": 3, "chart.rho_count": 8}

    def test_line_without_equals(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("seed\n")
        with pytest.raises(ValueError):
            read_config_file(path)


class TestLoadConfig:
    def test_defaults(self):
        assert load_config() == RunConfig()

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("seed=3\nrun_chart.rho_count=2\nprojection_measure=lebesgue\n")
        config = load_config(path, {"seed": 5})
        assert config.seed == 5
        assert config.run_chart.rho_count == 2
        assert config.run_chart.theta_count == RunConfig().run_chart.theta_count
        assert config.projection_measure is ProjectionMeasure.LEBESGUE

    def test_nested_search_axis(self):
        config = load_config(overrides={"search.theta.count": 3, "search.theta.hi": 0.2})
        assert config.search.theta.count == 3
        assert config.search.theta.hi == 0.2
        assert config.search.theta.lo == RunConfig().search.theta.lo

    def test_list_values(self):
        assert load_config(overrides={"chart.signs": [1]}).chart.signs == (1,)

    @pytest.mark.parametrize("key", ["bogus", "chart.bogus", "seed.bogus"])
    def test_unknown_keys(self, key):
        with pytest.raises(pydantic.ValidationError):
            load_config(overrides={key: 1})

    def test_invalid_value(self):
        with pytest.raises(pydantic.ValidationError):
            load_config(overrides={"lift_width": -1.0})


class TestExitCode:
    def test_mapping(self):
        assert exit_code(ShapeMismatch("x")) == EXIT_SHAPE
        assert exit_code(ShapeMismatch("x"), shape_code=EXIT_USAGE) == EXIT_USAGE
        assert exit_code(ChartMismatch("x")) == EXIT_CHART
        assert exit_code(SingularMatrix("x")) == EXIT_SINGULAR
        assert exit_code(EmptySearchBox("x")) == EXIT_ERROR
        assert exit_code(FileNotFoundError("x")) == EXIT_USAGE
        assert exit_code(KeyError("x")) == EXIT_USAGE
        assert exit_code(RuntimeError("x")) == EXIT_ERROR
