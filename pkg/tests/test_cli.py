import json

import pytest

from cuspgame.cli import main


def test_verify_suite_exit_and_report(capsys):
    assert main(["verify", "--suite", "svp", "--trials", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["suite"] == "svp"
    assert report["passes"] == report["trials"] == 5
    assert report["failures"] == []


def test_verify_suite_without_knobs(capsys):
    # linequ takes no trials/seed arguments; the flag is ignored gracefully
    assert main(["verify", "--suite", "linequ", "--trials", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["failures"] == []


def _play_config(tmp_path, name, rounds=6):
    cfg = {
        "mode": "demo", "rounds": rounds,
        "bob": {"kind": "greedy_cusp", "seed": 42, "target": [0, 0, 1]},
        "output": {"transcript": str(tmp_path / f"{name}.jsonl"),
                   "audit": str(tmp_path / f"{name}.audit.json")},
    }
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(cfg))
    return path


def test_play_writes_outputs_and_replays_identically(tmp_path, capsys):
    c1 = _play_config(tmp_path, "a")
    c2 = _play_config(tmp_path, "b")
    assert main(["play", "--config", str(c1)]) == 0
    assert main(["play", "--config", str(c2)]) == 0
    t1 = (tmp_path / "a.jsonl").read_bytes()
    t2 = (tmp_path / "b.jsonl").read_bytes()
    assert t1 == t2
    audit = json.loads((tmp_path / "a.audit.json").read_text())
    assert len(audit) == 6
    assert audit[4]["n"] == 1 and audit[4]["first_entry"]


def test_play_rejects_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"mode": "demo", "roundz": 5}))
    assert main(["play", "--config", str(path)]) == 2


def test_output_dir_env_resolves_relative_paths(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CUSPGAME_OUTPUT_DIR", str(tmp_path))
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"mode": "demo", "rounds": 2}))
    assert main(["play", "--config", str(cfg)]) == 0
    assert (tmp_path / "transcript.jsonl").exists()
    assert (tmp_path / "audit.json").exists()


def test_systole_csv(tmp_path):
    out = tmp_path / "sys.csv"
    rc = main(["systole", "--lambda", "3/4", "--point", "1/3,2/3,1/5",
               "--t-max", "2", "--steps", "2", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t,length_lo,length_hi,c1,c2,c3"
    assert len(lines) == 4
    assert lines[1].startswith("0,")


def test_systole_rejects_bad_point(capsys):
    assert main(["systole", "--lambda", "3/4", "--point", "1,2",
                 "--t-max", "1"]) == 2


def test_scan_grid(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main(["scan", "--lambda", "3/4", "--epsilon", "1/8",
               "--nx", "3", "--ny", "3", "--q-max", "4", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "x,y,covered,p,r,q"
    assert len(lines) == 10
    assert lines[1] == "0,0,1,0,0,1"  # origin sits in the q = 1 tube


def test_scan_cell_budget(capsys):
    assert main(["scan", "--lambda", "3/4", "--epsilon", "1/8",
                 "--nx", "200", "--ny", "200", "--cell-budget", "100"]) == 2
