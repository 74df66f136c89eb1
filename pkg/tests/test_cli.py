"""simcli command surface: subcommands, output, and exit codes."""

import json

import pytest

from chargesim.cli import EXIT_COMPUTE, EXIT_INVALID, EXIT_OK, main


@pytest.fixture
def good_config(tmp_path):
    path = tmp_path / "rabi.json"
    path.write_text(
        json.dumps(
            {
                "experiment": "rabi",
                "circuit": {"n_qubits": 1},
                "noise": {"enabled": False},
                "run": {"t_end_ns": 0.5, "n_traj": 1, "record_stride": 25},
                "output": {"directory": (tmp_path / "out").as_posix()},
            }
        )
    )
    return path


def test_validate_reports_ok_and_hash(good_config, capsys):
    assert main(["validate", str(good_config)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "ok (rabi" in out
    assert "hash" in out


def test_validate_lists_every_problem(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "rabi", "circuit": {"n_qubits": 0, "oops": 1}}))
    assert main(["validate", str(bad)]) == EXIT_INVALID
    err = capsys.readouterr().err
    assert "circuit.n_qubits" in err
    assert "circuit.oops" in err


def test_run_with_no_configs_is_a_noop(capsys):
    assert main(["run"]) == EXIT_OK
    assert "nothing to do" in capsys.readouterr().out


def test_run_then_plot_roundtrip(good_config, tmp_path, capsys):
    assert main(["run", str(good_config), "--no-plots"]) == EXIT_OK
    out_dir = tmp_path / "out"
    assert (out_dir / "summary.json").exists()
    assert not list(out_dir.glob("*.svg"))
    assert main(["plot", str(out_dir)]) == EXIT_OK
    assert (out_dir / "trajectory_mean.svg").exists()
    stdout = capsys.readouterr().out
    assert "trajectory_mean.svg" in stdout


def test_run_rejects_invalid_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "warp-drive"}))
    assert main(["run", str(bad)]) == EXIT_INVALID
    assert "experiment" in capsys.readouterr().err


def test_run_reports_compute_failures(good_config, tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")
    code = main(["run", str(good_config), "--out-dir", str(blocker / "sub")])
    assert code == EXIT_COMPUTE
    assert "compute failed" in capsys.readouterr().err


def test_out_dir_applies_to_single_config_only(good_config, tmp_path, capsys):
    code = main(
        ["run", str(good_config), str(good_config), "--out-dir", str(tmp_path / "x")]
    )
    assert code == EXIT_INVALID
    assert "single config" in capsys.readouterr().err


def test_plot_missing_bundle_is_a_compute_failure(tmp_path, capsys):
    assert main(["plot", str(tmp_path / "absent")]) == EXIT_COMPUTE
    assert "plotting failed" in capsys.readouterr().err
