import json

import pytest
from click.testing import CliRunner

from skelhar import (
    BaggedTreesSpec,
    CubicSvmSpec,
    JointId,
    JointSubset,
    MlpSpec,
    Modality,
    PcaConfig,
    PipelineConfig,
    SplitPlan,
    StratifyBy,
)
from skelhar.cli import build_config, config_to_flat, main


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def dataset_file(tmp_path_factory, runner):
    path = tmp_path_factory.mktemp("data") / "synth.csv"
    result = runner.invoke(main, ["synth", "--participants", "2", "--frames", "51",
                                  "--seed", "7", "-o", str(path)])
    assert result.exit_code == 0, result.output
    return path


class TestSynth:
    def test_writes_expected_sequences(self, runner, tmp_path):
        out = tmp_path / "d.csv"
        result = runner.invoke(main, ["synth", "--participants", "2", "--frames",
                                      "52", "--seed", "1", "-o", str(out)])
        assert result.exit_code == 0
        assert "18 sequences" in result.output
        assert len(out.read_text().splitlines()) == 1 + 18 * 52

    def test_byte_identical_reruns(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["synth", "--participants", "1", "--frames", "51", "--noise", "0",
                "--seed", "3"]
        assert runner.invoke(main, args + ["-o", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["-o", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_missing_output_is_usage_error(self, runner):
        result = runner.invoke(main, ["synth", "--participants", "1"])
        assert result.exit_code == 2

    def test_bad_frame_count_is_runtime_error(self, runner, tmp_path):
        result = runner.invoke(main, ["synth", "--frames", "10", "-o",
                                      str(tmp_path / "x.csv")])
        assert result.exit_code == 1


class TestExtract:
    def test_feature_file_shape(self, runner, dataset_file, tmp_path):
        out = tmp_path / "features.csv"
        result = runner.invoke(main, ["extract", str(dataset_file), "--modality",
                                      "velocity", "--joints", "c9", "-o", str(out)])
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 18 * 50
        assert lines[0].split(",") == [f"f{i}" for i in range(24)] + ["label"]

    def test_unknown_subset_is_usage_error(self, runner, dataset_file, tmp_path):
        result = runner.invoke(main, ["extract", str(dataset_file), "--joints",
                                      "c12", "-o", str(tmp_path / "x.csv")])
        assert result.exit_code == 2
        assert "c9" in result.output and "c18" in result.output and "c28" in result.output

    def test_unknown_flag_is_usage_error(self, runner, dataset_file, tmp_path):
        result = runner.invoke(main, ["extract", str(dataset_file), "--bogus", "1",
                                      "-o", str(tmp_path / "x.csv")])
        assert result.exit_code == 2

    def test_missing_dataset_is_runtime_error(self, runner, tmp_path):
        result = runner.invoke(main, ["extract", str(tmp_path / "nope.csv"), "-o",
                                      str(tmp_path / "x.csv")])
        assert result.exit_code == 1

    def test_explicit_frame_list(self, runner, dataset_file, tmp_path):
        frames = ",".join(str(i) for i in range(51))
        out = tmp_path / "explicit.csv"
        result = runner.invoke(main, ["extract", str(dataset_file), "--joints", "c9",
                                      "--frame-list", frames, "-o", str(out)])
        assert result.exit_code == 0, result.output
        assert len(out.read_text().splitlines()) == 1 + 18 * 51

        result = runner.invoke(main, ["extract", str(dataset_file), "--frame-list",
                                      "1,2,3", "-o", str(tmp_path / "y.csv")])
        assert result.exit_code == 1  # wrong budget is a data error at extraction


class TestEvaluate:
    def test_bundle_and_determinism(self, runner, dataset_file, tmp_path):
        args = ["evaluate", str(dataset_file), "--classifier", "knn",
                "--joints", "c9", "--seed", "5"]
        a, b = tmp_path / "ra", tmp_path / "rb"
        assert runner.invoke(main, args + ["-o", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["-o", str(b)]).exit_code == 0
        for name in ("report.json", "confusion.csv", "scores.csv", "config.json",
                     "model.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()
        # knn on the separable synthetic data lands well above 0.90
        report = json.loads((a / "report.json").read_text())
        assert report["overall_accuracy"] >= 0.90

    def test_config_echoes_mlp_width(self, runner, dataset_file, tmp_path):
        out = tmp_path / "mlp"
        result = runner.invoke(main, ["evaluate", str(dataset_file), "--classifier",
                                      "mlp", "--hidden", "175", "--epochs", "2",
                                      "--joints", "c9", "-o", str(out)])
        assert result.exit_code == 0, result.output
        config = json.loads((out / "config.json").read_text())
        assert config["classifier"]["name"] == "mlp"
        assert config["classifier"]["hidden_width"] == 175

    def test_show_report(self, runner, dataset_file, tmp_path):
        out = tmp_path / "rep"
        assert runner.invoke(main, ["evaluate", str(dataset_file), "--joints", "c9",
                                    "-o", str(out)]).exit_code == 0
        result = runner.invoke(main, ["show-report", str(out)])
        assert result.exit_code == 0
        assert "overall accuracy" in result.output


class TestGrid:
    def test_modality_by_classifier_grid(self, runner, dataset_file, tmp_path):
        out = tmp_path / "grid.csv"
        result = runner.invoke(main, [
            "grid", str(dataset_file), "--modality",
            "coordinates,velocity,acceleration", "--classifier", "knn,tree",
            "--joints", "c9", "-o", str(out),
        ])
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 6
        assert lines[1].startswith("coordinates,c9,3,off,knn")
        assert lines[2].startswith("coordinates,c9,3,off,tree")
        assert lines[3].startswith("velocity,c9,3,off,knn")

    def test_table_v_shaped_grid(self, runner, dataset_file, tmp_path):
        out = tmp_path / "grid2.csv"
        result = runner.invoke(main, [
            "grid", str(dataset_file), "--joints", "c9,c18,c28", "--dims", "2,3",
            "--pca", "on,off", "--classifier", "knn", "-o", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert len(out.read_text().splitlines()) == 1 + 12

    def test_parallel_jobs_keep_row_order(self, runner, dataset_file, tmp_path):
        args = ["grid", str(dataset_file), "--modality", "coordinates,velocity",
                "--classifier", "knn", "--joints", "c9"]
        a, b = tmp_path / "j1.csv", tmp_path / "j2.csv"
        assert runner.invoke(main, args + ["--jobs", "1", "-o", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["--jobs", "2", "-o", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_empty_axis_is_usage_error(self, runner, dataset_file, tmp_path):
        result = runner.invoke(main, ["grid", str(dataset_file), "--modality", ",",
                                      "-o", str(tmp_path / "x.csv")])
        assert result.exit_code == 2

    def test_single_joint_custom_subset_as_grid_axis(self, runner, dataset_file,
                                                     tmp_path):
        # a comma-free custom list is a valid axis value alongside the named
        # subsets; multi-joint lists are split by the axis parser and fail
        # loudly as unknown subsets
        out = tmp_path / "custom.csv"
        result = runner.invoke(main, ["grid", str(dataset_file), "--joints",
                                      "c9,list:Neck", "--dims", "2,3",
                                      "-o", str(out)])
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 4
        assert any(line.startswith("coordinates,list:Neck,2") for line in lines)

        result = runner.invoke(main, ["grid", str(dataset_file), "--joints",
                                      "list:Neck,RHand", "-o", str(tmp_path / "x.csv")])
        assert result.exit_code == 2  # "RHand" is not a subset name


class TestConfigFile:
    def test_file_values_apply_and_flags_override(self, runner, dataset_file, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("modality=velocity\njoints=c9\n# comment\nseed=5\n")
        out_file = tmp_path / "f1.csv"
        result = runner.invoke(main, ["extract", str(dataset_file), "--config",
                                      str(config), "-o", str(out_file)])
        assert result.exit_code == 0, result.output
        assert len(out_file.read_text().splitlines()) == 1 + 18 * 50  # velocity

        out_file2 = tmp_path / "f2.csv"
        result = runner.invoke(main, ["extract", str(dataset_file), "--config",
                                      str(config), "--modality", "coordinates",
                                      "-o", str(out_file2)])
        assert result.exit_code == 0
        assert len(out_file2.read_text().splitlines()) == 1 + 18 * 51  # overridden

    def test_unknown_key_is_usage_error(self, runner, dataset_file, tmp_path):
        config = tmp_path / "bad.cfg"
        config.write_text("modalities=velocity\n")
        result = runner.invoke(main, ["extract", str(dataset_file), "--config",
                                      str(config), "-o", str(tmp_path / "x.csv")])
        assert result.exit_code == 2

    def test_round_trip_is_lossless(self):
        configs = [
            PipelineConfig(
                modality=Modality.VELOCITY,
                subset=JointSubset.custom([JointId.Neck, JointId.RHand]),
                dims=2,
                pca=PcaConfig(True, 0.9),
                classifier=MlpSpec(hidden_width=175, epochs=17,
                                   learning_rate=0.015, seed=3),
                split=SplitPlan(0.55, 0.25, 0.20, StratifyBy.PARTICIPANT, seed=3),
                folds=4,
                seed=3,
            ),
            PipelineConfig(
                classifier=CubicSvmSpec(c=2.5, tolerance=1e-4, seed=8),
                split=SplitPlan(seed=8),
                seed=8,
            ),
            PipelineConfig(
                classifier=BaggedTreesSpec(n_trees=12, max_splits=50, seed=1),
                split=SplitPlan(seed=1),
                seed=1,
            ),
        ]
        for config in configs:
            assert build_config(config_to_flat(config)) == config

    def test_help_lists_flags(self, runner):
        result = runner.invoke(main, ["evaluate", "--help"])
        assert result.exit_code == 0
        for flag in ("--modality", "--joints", "--dims", "--pca", "--pca-var",
                     "--classifier", "--split", "--folds", "--stratify", "--seed"):
            assert flag in result.output
