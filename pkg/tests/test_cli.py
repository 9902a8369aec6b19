"""End-to-end tests of the command line."""
import json

import numpy as np
import pytest

from affgroup.cli import EXIT_CRITERION, EXIT_OK, EXIT_USAGE, main
from affgroup.codecs import CSVCodec, LiftedCodec, PGMCodec
from affgroup.models.grid import Grid2
from affgroup.modules.synth import blobs


# Two-node run chart, one-node search box and a single kernel keep every command fast.
SMALL = [
    "--set", "run_chart.rho_count=1",
    "--set", "run_chart.theta_count=2",
    "--set", "run_chart.u_count=1",
    "--set", "run_chart.w_count=1",
    "--set", "search.tx.count=1",
    "--set", "search.ty.count=1",
    "--set", "search.rho.count=1",
    "--set", "search.theta.count=1",
    "--set", "search.u.count=1",
    "--set", "search.w.count=1",
    "--set", "search.levels=0",
]


@pytest.fixture
def picture_path(tmp_path):
    path = tmp_path / "picture.pgm"
    PGMCodec().write(blobs((16, 16), np.random.default_rng(11)), path)
    return path


class TestGenPair:
    def test_identity_pair_is_byte_identical(self, tmp_path, picture_path, capsys):
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        code = main([
            "gen-pair", "--input", str(picture_path), "--output", str(a), "--output-b", str(b),
            "--params", "0", "0", "0", "0", "0", "0",
        ])
        assert code == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        truth = json.loads(capsys.readouterr().out)
        assert truth["params"] == [0.0] * 6
        assert truth["g"]["A"] == [[1.0, 0.0], [0.0, 1.0]]

    def test_random_pair_from_seed(self, tmp_path):
        truth = tmp_path / "truth.json"
        args = ["gen-pair", "--seed", "4", "--output", str(tmp_path / "a.csv"), "--output-b", str(tmp_path / "b.csv"),
                "--truth", str(truth)]
        assert main(args) == EXIT_OK
        first = json.loads(truth.read_text())
        assert main(args) == EXIT_OK
        assert json.loads(truth.read_text()) == first
        assert CSVCodec().read(tmp_path / "a.csv").shape == (24, 24)

    def test_binary_output(self, tmp_path, picture_path):
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        assert main(["gen-pair", "--input", str(picture_path), "--output", str(a), "--output-b", str(b), "--binary"]) == EXIT_OK
        assert a.read_bytes().startswith(b"P5")

    def test_missing_output(self, picture_path):
        assert main(["gen-pair", "--input", str(picture_path)]) == EXIT_USAGE


class TestPipeline:
    def test_lift_gconv_project(self, tmp_path, picture_path):
        lifted, convolved, projected = tmp_path / "f.lifted", tmp_path / "g.lifted", tmp_path / "p.csv"
        assert main(["lift", *SMALL, "--input", str(picture_path), "--output", str(lifted)]) == EXIT_OK
        assert main(["gconv", *SMALL, "--kernel", "c0-w1", "--input", str(lifted), "--output", str(convolved)]) == EXIT_OK
        assert main(["project", *SMALL, "--input", str(convolved), "--output", str(projected)]) == EXIT_OK
        F = LiftedCodec().read(convolved)
        assert F.values.shape == (2, 16, 16)
        f = CSVCodec().read(projected)
        assert f.shape == (16, 16)
        assert np.all(np.isfinite(f.values))

    def test_lift_is_deterministic(self, tmp_path, picture_path):
        first, second = tmp_path / "1.lifted", tmp_path / "2.lifted"
        assert main(["lift", *SMALL, "--input", str(picture_path), "--output", str(first)]) == EXIT_OK
        assert main(["lift", *SMALL, "--threads", "1", "--input", str(picture_path), "--output", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_unknown_kernel(self, tmp_path, picture_path):
        lifted = tmp_path / "f.lifted"
        assert main(["lift", *SMALL, "--input", str(picture_path), "--output", str(lifted)]) == EXIT_OK
        code = main(["gconv", *SMALL, "--kernel", "nope", "--input", str(lifted), "--output", str(tmp_path / "g.lifted")])
        assert code == EXIT_USAGE

    def test_missing_input_file(self, tmp_path):
        assert main(["lift", "--input", str(tmp_path / "absent.pgm"), "--output", str(tmp_path / "f.lifted")]) == EXIT_USAGE


class TestInvariance:
    def test_identical_images_pass(self, picture_path, capsys):
        code = main(["invariance", *SMALL, "--kernel", "c0-w1", "--input", str(picture_path), "--input-b", str(picture_path)])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["functional_gap"] == 0.0
        assert report["epsilon_hat"] == 0.0
        assert [entry["kernel"] for entry in report["kernels"]] == ["c0-w1"]

    def test_translated_pair_passes_default_threshold(self, tmp_path, picture_path, capsys):
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        assert main([
            "gen-pair", "--input", str(picture_path), "--output", str(a), "--output-b", str(b),
            "--params", "1", "0", "0", "0", "0", "0",
        ]) == EXIT_OK
        capsys.readouterr()
        code = main(["invariance", *SMALL, "--set", "search.tx.count=9", "--kernel", "c0-w1",
                     "--input", str(a), "--input-b", str(b)])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert report["relative_gap"] < 5e-2

    def test_unrelated_images_fail_strict_threshold(self, tmp_path, picture_path):
        other = tmp_path / "other.pgm"
        PGMCodec().write(blobs((16, 16), np.random.default_rng(12)), other)
        code = main(["invariance", *SMALL, "--kernel", "c0-w1", "--threshold", "0",
                     "--input", str(picture_path), "--input-b", str(other)])
        assert code == EXIT_CRITERION

    def test_shape_mismatch_is_usage_error(self, tmp_path, picture_path):
        small = tmp_path / "small.pgm"
        PGMCodec().write(Grid2.centered(np.zeros((8, 8))), small)
        code = main(["invariance", *SMALL, "--input", str(picture_path), "--input-b", str(small)])
        assert code == EXIT_USAGE


class TestConvergence:
    def test_delta_study(self, capsys):
        assert main(["convergence", "--study", "delta"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "resolution,error"
        assert len(lines) == 5

    def test_missing_study(self):
        assert main(["convergence"]) == EXIT_USAGE


class TestConfiguration:
    def test_unknown_key(self, picture_path, tmp_path):
        code = main(["lift", "--set", "bogus=1", "--input", str(picture_path), "--output", str(tmp_path / "f.lifted")])
        assert code == EXIT_USAGE

    def test_invalid_value(self, picture_path, tmp_path):
        code = main(["lift", "--set", "run_chart.rho_count=0", "--input", str(picture_path), "--output", str(tmp_path / "f.lifted")])
        assert code == EXIT_USAGE

    def test_config_file(self, tmp_path, picture_path):
        config = tmp_path / "run.conf"
        config.write_text("\n".join(arg for arg in SMALL if arg != "--set") + "\n")
        lifted = tmp_path / "f.lifted"
        assert main(["lift", "--config", str(config), "--input", str(picture_path), "--output", str(lifted)]) == EXIT_OK
        assert LiftedCodec().read(lifted).chart.size == 2

    def test_bad_set_syntax(self, picture_path, tmp_path):
        assert main(["lift", "--set", "seed", "--input", str(picture_path), "--output", str(tmp_path / "f.lifted")]) == EXIT_USAGE
