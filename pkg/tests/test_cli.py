import json
import os
import subprocess
import sys

import pytest

from peiffer.cli import run

S3_DOC = {
    "objects": [
        {"name": "S", "kind": "group", "perms": [[1, 0, 2], [1, 2, 0]]},
        {"name": "C2", "kind": "group", "table": [[0, 1], [1, 0]]},
        {"name": "B0", "kind": "group", "table": [[0]]},
    ],
    "actions": [
        {"name": "tS", "actor": "B0", "acted": "S", "trivial": True},
        {"name": "tC", "actor": "B0", "acted": "C2", "trivial": True},
        {"name": "conjS", "actor": "S", "acted": "S", "conjugation": True},
    ],
    "pxmods": [
        {"name": "PS", "X": "S", "B": "B0", "boundary": {"zero": True}, "action": "tS"},
        {"name": "PC", "X": "C2", "B": "B0", "boundary": {"zero": True}, "action": "tC"},
        {"name": "Pid", "X": "S", "B": "S", "boundary": {"identity": True}, "action": "conjS"},
    ],
    "morphisms": [
        {"name": "sign", "source": "PS", "target": "PC", "map": [0, 1, 0, 1, 1, 0]},
    ],
}


def write_doc(tmp_path, task, name="doc.json"):
    doc = dict(S3_DOC)
    doc["task"] = task
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_central_fails_with_exit_1_and_witness(tmp_path, capsys):
    path = write_doc(tmp_path, {"op": "central", "extension": "sign"})
    code = run(["central", "--input", path, "--witness", "--format", "json", "--no-timing"])
    assert code == 1
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] is False
    assert out["witness"]["peiffer_generator"]
    assert out["obstruction"]["order"] == 3


def test_crossed_on_identity_conjugation(tmp_path, capsys):
    path = write_doc(tmp_path, {"op": "crossed", "pxmod": "Pid"})
    code = run(["crossed", "--input", path])
    assert code == 0
    assert "verdict: true" in capsys.readouterr().out


def test_crossed_failure_has_witness(tmp_path, capsys):
    path = write_doc(tmp_path, {"op": "crossed", "pxmod": "PS"})
    code = run(["crossed", "--input", path, "--witness"])
    assert code == 1
    assert "witness" in capsys.readouterr().out


def test_invalid_input_exits_2(tmp_path, capsys):
    doc = {"objects": [{"name": "bad", "kind": "group", "table": [[0, 0], [0, 0]]}], "task": {"op": "validate"}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code = run(["validate", "--input", str(path)])
    assert code == 2
    err = capsys.readouterr().err
    assert "AxiomViolation" in err


def test_task_mismatch_exits_2(tmp_path, capsys):
    path = write_doc(tmp_path, {"op": "central", "extension": "sign"})
    assert run(["crossed", "--input", path]) == 2


def test_missing_input_exits_2(capsys):
    assert run(["crossed"]) == 2


def test_peiffer_task_reports_subobject(tmp_path, capsys):
    path = write_doc(tmp_path, {"op": "peiffer", "pxmod": "PS", "M": "whole", "N": "whole"})
    code = run(["peiffer", "--input", path, "--format", "json", "--no-timing"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["commutator"]["order"] == 3
    assert out["commutator"]["fingerprint"] == "Z/3"


def test_reflect_task(tmp_path, capsys):
    path = write_doc(tmp_path, {"op": "reflect", "pxmod": "PS"})
    code = run(["reflect", "--input", path, "--format", "json", "--no-timing"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["reflection"]["X"]["order"] == 2


def test_five_term_task(tmp_path, capsys):
    doc = dict(S3_DOC)
    doc["objects"] = doc["objects"] + [{"name": "C3", "kind": "group", "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}]
    doc["actions"] = doc["actions"] + [{"name": "tK", "actor": "B0", "acted": "C3", "trivial": True}]
    doc["pxmods"] = doc["pxmods"] + [{"name": "PK", "X": "C3", "B": "B0", "boundary": {"zero": True}, "action": "tK"}]
    doc["morphisms"] = doc["morphisms"] + [
        {"name": "incl", "source": "PK", "target": "PS", "map": [0, 2, 5]},
    ]
    doc["task"] = {"op": "five-term", "f": "incl", "g": "sign"}
    path = tmp_path / "ft.json"
    path.write_text(json.dumps(doc))
    code = run(["five-term", "--input", str(path), "--format", "json", "--no-timing"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0, out
    assert [n["order"] for n in out["nodes"]] == [1, 1, 1, 2, 2]
    assert out["verdict"] is True
    assert "projectivity-not-verified" in out["caveats"]


def test_enumerate_subcommand(capsys):
    code = run(["enumerate", "--theory", "lie", "--prime", "3", "--no-timing", "--format", "json"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["stream"]["pxmods"] == 222


def test_verify_reports_are_byte_identical(capsys):
    args = ["verify", "--property", "peiffer-image-preservation", "--theory", "lie",
            "--prime", "3", "--seed", "7", "--format", "json", "--no-timing"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["verdict"] is True


def test_verify_unknown_property_exits_2(capsys):
    assert run(["verify", "--property", "nope"]) == 2


def test_env_var_cap(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PEIFFER_MAX_ORDER", "4")
    path = write_doc(tmp_path, {"op": "validate"})
    code = run(["validate", "--input", path])
    assert code == 2  # S3 exceeds the configured cap
    monkeypatch.setenv("PEIFFER_MAX_ORDER", "not-a-number")
    assert run(["validate", "--input", path]) == 2


def test_out_file(tmp_path):
    path = write_doc(tmp_path, {"op": "crossed", "pxmod": "Pid"})
    target = tmp_path / "report.json"
    code = run(["crossed", "--input", path, "--format", "json", "--no-timing", "--out", str(target)])
    assert code == 0
    assert json.loads(target.read_text())["verdict"] is True


def test_console_script_entrypoint(tmp_path):
    path = write_doc(tmp_path, {"op": "crossed", "pxmod": "Pid"})
    proc = subprocess.run(
        [sys.executable, "-m", "peiffer.cli", "crossed", "--input", path],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "verdict: true" in proc.stdout
