import json
import math

import pytest
from click.testing import CliRunner

from qsector.cli import main

S = 1 / math.sqrt(2)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workspace(tmp_path):
    (tmp_path / "all_up.json").write_text(
        json.dumps(
            {"local_dim": 2, "tail": {"kind": "constant", "data": [[1, 0], [0, 0]]}, "deviations": {}}
        )
    )
    (tmp_path / "odd_plus.json").write_text(
        json.dumps(
            {
                "local_dim": 2,
                "tail": {"kind": "periodic", "data": [[[S, 0], [S, 0]], [[1, 0], [0, 0]]]},
                "deviations": {},
            }
        )
    )
    (tmp_path / "identity.json").write_text(json.dumps({"op": "product", "factors": []}))
    (tmp_path / "config.json").write_text(
        json.dumps({"amplitudes": [[S, 0], [S, 0]], "pointer_overlap": S})
    )
    return tmp_path


def out_dir(workspace, name="out"):
    return str(workspace / name)


def test_ks_check_builtin_cabello(runner, workspace):
    result = runner.invoke(main, ["--out-dir", out_dir(workspace), "ks-check", "cabello18"])
    assert result.exit_code == 0
    report = json.loads((workspace / "out" / "ks_check.json").read_text())
    assert report["colorable"] is False
    assert report["contexts_checked"] == 9


def test_ks_check_builtin_control(runner, workspace):
    result = runner.invoke(main, ["--out-dir", out_dir(workspace), "ks-check", "control"])
    assert result.exit_code == 0
    report = json.loads((workspace / "out" / "ks_check.json").read_text())
    assert report["colorable"] is True and report["assignment"] is not None


def test_ks_check_missing_file_exits_2(runner, workspace):
    result = runner.invoke(main, ["--out-dir", out_dir(workspace), "ks-check", "nope.json"])
    assert result.exit_code == 2
    assert "nope.json" in result.output


def test_gleason_test(runner, workspace):
    result = runner.invoke(
        main,
        ["--out-dir", out_dir(workspace), "gleason-test", "--dim", "4", "--contexts", "25", "--seed", "1"],
    )
    assert result.exit_code == 0
    report = json.loads((workspace / "out" / "gleason_test.json").read_text())
    assert report["passed"] is True


def test_gleason_corrupted_assignment_fails_but_computes(runner, workspace):
    result = runner.invoke(
        main,
        ["--out-dir", out_dir(workspace), "gleason-test", "--dim", "3", "--contexts", "5", "--assignment", "ones"],
    )
    assert result.exit_code == 0  # scientific negative, not an input error
    report = json.loads((workspace / "out" / "gleason_test.json").read_text())
    assert report["passed"] is False
    assert all(not c["passed"] for c in report["checks"])


def test_sector_fig_pair(runner, workspace):
    result = runner.invoke(
        main,
        [
            "--out-dir",
            out_dir(workspace),
            "sector",
            str(workspace / "all_up.json"),
            str(workspace / "odd_plus.json"),
            "--n-list",
            "4,8,16",
        ],
    )
    assert result.exit_code == 0
    verdict = json.loads((workspace / "out" / "sector.json").read_text())
    assert verdict["same_sector"] is False
    csv = (workspace / "out" / "sector_curve.csv").read_text().splitlines()
    assert csv[0] == "n,|overlap|,log2|overlap|"
    n, mag, log2 = csv[1].split(",")
    assert float(log2) == pytest.approx(-int(n) / 4)


def test_overlap_command(runner, workspace):
    result = runner.invoke(
        main,
        [
            "--out-dir",
            out_dir(workspace),
            "overlap",
            str(workspace / "all_up.json"),
            str(workspace / "odd_plus.json"),
            "--n-list",
            "4,8",
        ],
    )
    assert result.exit_code == 0
    assert (workspace / "out" / "overlap_curve.csv").exists()


def test_operator_block(runner, workspace):
    result = runner.invoke(
        main,
        [
            "--out-dir",
            out_dir(workspace),
            "operator-block",
            "--expr",
            str(workspace / "identity.json"),
            str(workspace / "all_up.json"),
            str(workspace / "odd_plus.json"),
            "--n",
            "128",
        ],
    )
    assert result.exit_code == 0
    report = json.loads((workspace / "out" / "operator_block.json").read_text())
    assert report["sector_labels"] == [0, 1]
    assert report["cross_sector_max"] < 1e-4


def test_cascade(runner, workspace):
    result = runner.invoke(
        main,
        [
            "--out-dir",
            out_dir(workspace),
            "cascade",
            str(workspace / "config.json"),
            "--depths",
            "0,1,2,3",
            "--samples",
            "2000",
            "--seed",
            "5",
        ],
    )
    assert result.exit_code == 0
    hist = json.loads((workspace / "out" / "cascade_histogram.json").read_text())
    assert hist["seed"] == 5
    csv = (workspace / "out" / "cascade_coherence.csv").read_text().splitlines()
    assert csv[0] == "depth,L,j,k,|rho_jk|,log2|rho_jk|"


def test_cascade_rejects_unnormalized(runner, workspace):
    (workspace / "bad.json").write_text(
        json.dumps({"amplitudes": [[1, 0], [1, 0]], "pointer_overlap": 0.5})
    )
    result = runner.invoke(
        main, ["--out-dir", out_dir(workspace), "cascade", str(workspace / "bad.json")]
    )
    assert result.exit_code == 2


def test_reruns_are_byte_identical(runner, workspace):
    args = [
        "sector",
        str(workspace / "all_up.json"),
        str(workspace / "odd_plus.json"),
        "--n-list",
        "4,8,16,32",
    ]
    assert runner.invoke(main, ["--out-dir", out_dir(workspace, "r1")] + args).exit_code == 0
    assert runner.invoke(main, ["--out-dir", out_dir(workspace, "r2")] + args).exit_code == 0
    for name in ("sector.json", "sector_curve.csv", "sector_manifest.json"):
        a = (workspace / "r1" / name).read_bytes()
        b = (workspace / "r2" / name).read_bytes()
        assert a == b


def test_manifest_lists_outputs(runner, workspace):
    runner.invoke(main, ["--out-dir", out_dir(workspace), "ks-check", "control"])
    manifest = json.loads((workspace / "out" / "ks-check_manifest.json").read_text())
    assert manifest["subcommand"] == "ks-check"
    assert manifest["outputs"] == ["ks_check.json"]
    assert "version" in manifest
