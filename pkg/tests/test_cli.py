"""Command line behavior: exit codes, outputs on disk, determinism."""

import json

import pytest

from qpec.cli import EXIT_ABORT, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main


def test_run_writes_outputs(tmp_path, capsys):
    code = main([
        "run", "--n", "3", "--m", "2", "--seed", "7",
        "--fortunes", "11,11,01", "--secret", "10",
        "--trials", "500", "--out", str(tmp_path),
    ])
    assert code == EXIT_OK
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "histogram.csv").exists()
    assert (tmp_path / "histogram.png").exists()
    text = capsys.readouterr().out
    assert "0 = 1   YES" in text
    assert "1 ≠ 2   NO" in text
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["efficiency"]["eta_tq"] == 24
    hist = (tmp_path / "histogram.csv").read_text().strip().split("\n")
    assert hist[0] == "label,count,frequency"
    assert sum(int(line.split(",")[1]) for line in hist[1:]) == 3 + 3 * 500


def test_run_is_deterministic_per_seed(tmp_path):
    args = ["run", "--n", "2", "--m", "6", "--seed", "42", "--fortunes", "101101,101101"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b)]) == EXIT_OK
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "histogram.csv").read_bytes() == (b / "histogram.csv").read_bytes()


def test_run_under_attack_exits_abort(tmp_path, capsys):
    code = main([
        "run", "--n", "2", "--m", "4", "--seed", "0",
        "--fortunes", "0000,0000", "--attack", "measure-resend",
        "--out", str(tmp_path),
    ])
    assert code == EXIT_ABORT
    assert "aborted: yes (decoy_check)" in capsys.readouterr().out
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["aborted"] is True
    assert not (tmp_path / "histogram.csv").exists()


def test_run_usage_errors(tmp_path, capsys):
    assert main(["run", "--n", "2", "--out", str(tmp_path)]) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err
    assert main([
        "run", "--n", "2", "--m", "2", "--fortunes", "10",
        "--out", str(tmp_path),
    ]) == EXIT_USAGE


def test_run_from_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "n": 2, "m": 3, "seed": 11,
        "fortunes": ["101", "101"], "sophia_secret": "010",
    }))
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert code == EXIT_OK
    assert "0 = 1   YES" in capsys.readouterr().out


def test_run_config_flag_conflict(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2, "m": 3, "seed": 11}))
    assert main([
        "run", "--config", str(cfg), "--n", "4", "--out", str(tmp_path / "out"),
    ]) == EXIT_USAGE


def test_two_party_match_and_differ(tmp_path, capsys):
    assert main([
        "two-party", "--fa", "1011", "--fb", "1011",
        "--seed", "3", "--out", str(tmp_path / "eq"),
    ]) == EXIT_OK
    assert "fortunes match" in capsys.readouterr().out
    assert main([
        "two-party", "--fa", "1011", "--fb", "0011",
        "--seed", "3", "--out", str(tmp_path / "ne"),
    ]) == EXIT_OK
    assert "fortunes differ" in capsys.readouterr().out


def test_two_party_random_mode(tmp_path, capsys):
    assert main([
        "two-party", "--random", "--m", "5", "--seed", "9",
        "--out", str(tmp_path),
    ]) == EXIT_OK
    out = capsys.readouterr().out
    assert "fortunes match" in out or "fortunes differ" in out


def test_two_party_argument_validation(tmp_path):
    assert main(["two-party", "--out", str(tmp_path)]) == EXIT_USAGE
    assert main(["two-party", "--random", "--out", str(tmp_path)]) == EXIT_USAGE
    assert main([
        "two-party", "--fa", "10", "--fb", "10", "--random",
        "--out", str(tmp_path),
    ]) == EXIT_USAGE


def test_verify_clean_and_faulted(capsys):
    assert main(["verify", "--max-m", "2"]) == EXIT_OK
    assert "agree" in capsys.readouterr().out
    assert main(["verify", "--max-m", "1", "--inject-fault"]) == EXIT_VERIFY
    err = capsys.readouterr().err
    assert "FAIL" in err


def test_efficiency_outputs(tmp_path, capsys):
    assert main(["efficiency", "--m-max", "8", "--out", str(tmp_path)]) == EXIT_OK
    csv = (tmp_path / "efficiency.csv").read_text().strip().split("\n")
    assert csv[0] == "m,eta_cb,eta_tq,eta"
    assert len(csv) == 9
    assert csv[2].startswith("2,6,24,")
    assert (tmp_path / "efficiency.png").exists()


def test_attack_single_kind_outputs(tmp_path, capsys):
    code = main([
        "attack", "--kind", "pns", "--decoys", "500", "--trials", "100",
        "--m", "2", "--out", str(tmp_path),
    ])
    assert code == EXIT_OK
    data = json.loads((tmp_path / "attack.json").read_text())
    assert data["pns"]["detection"]["mismatches"] == 0
    assert (tmp_path / "detection_rates.png").exists()
    assert (tmp_path / "residuals_pns.png").exists()
