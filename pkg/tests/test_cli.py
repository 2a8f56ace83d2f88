import json
import os
import subprocess
import sys

import pytest

from crdiam.cli import (
    EXIT_OK,
    EXIT_PARSE,
    EXIT_RING,
    EXIT_WINDOW,
    deserialize,
    load_jobspec,
    main,
    run,
    serialize,
)
from crdiam.errors import ParseError

HERE = os.path.dirname(__file__)
SPECS = os.path.join(HERE, "..", "specs")


def spec_path(name):
    return os.path.join(SPECS, name)


def read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def test_load_jobspec_validation():
    good = read(spec_path("residue_field_codim2.json"))
    spec = load_jobspec(good)
    assert spec.p == 2 and spec.window == (-8, 8)
    with pytest.raises(ParseError):
        load_jobspec("not json")
    with pytest.raises(ParseError):
        load_jobspec(json.dumps({"ring": {"vars": ["x"], "f": ["x^2"]}}))
    with pytest.raises(ParseError):
        load_jobspec(
            json.dumps(
                {
                    "ring": {"vars": ["x"], "f": ["x^2"]},
                    "window": {"lo": 0, "hi": 4},
                    "tasks": ["fly"],
                }
            )
        )


def test_serialize_roundtrip():
    spec = load_jobspec(read(spec_path("hypersurface_f2.json")))
    report = run(spec)
    text = serialize(report)
    assert serialize(deserialize(text)) == text


def test_empty_report_roundtrip():
    doc = {"provenance": {}, "results": {}}
    assert deserialize(serialize(doc)) == doc


def test_determinism_same_spec_same_bytes():
    spec1 = load_jobspec(read(spec_path("periodic_mod_x_codim2.json")))
    spec2 = load_jobspec(read(spec_path("periodic_mod_x_codim2.json")))
    assert serialize(run(spec1)) == serialize(run(spec2))


def test_golden_residue_field_report():
    golden = read(os.path.join(HERE, "golden", "residue_field_codim2.json"))
    spec = load_jobspec(read(spec_path("residue_field_codim2.json")))
    assert serialize(run(spec)) == golden


def test_cli_exit_codes(tmp_path, capsys):
    ok = main(["diameter", spec_path("residue_field_codim2.json")])
    capsys.readouterr()
    assert ok == EXIT_OK

    bad = tmp_path / "bad.json"
    bad.write_text("nonsense", encoding="utf-8")
    assert main(["crdeg", str(bad)]) == EXIT_PARSE

    notreg = tmp_path / "notreg.json"
    notreg.write_text(
        json.dumps(
            {
                "ring": {"vars": ["x", "y"], "f": ["x^2", "x^2"]},
                "module": {"presentation": [["x"]]},
                "window": {"lo": -6, "hi": 6},
                "tasks": ["crdeg"],
            }
        ),
        encoding="utf-8",
    )
    assert main(["crdeg", str(notreg)]) == EXIT_RING

    narrow = tmp_path / "narrow.json"
    narrow.write_text(
        json.dumps(
            {
                "ring": {"vars": ["x", "y"], "f": ["x^2", "y^2"]},
                "module": {"presentation": [["x"]]},
                "window": {"lo": -1, "hi": 1},
                "tasks": ["crdeg"],
            }
        ),
        encoding="utf-8",
    )
    assert main(["crdeg", str(narrow)]) == EXIT_WINDOW
    capsys.readouterr()


def test_cli_window_override(capsys):
    code = main(
        ["crdeg", spec_path("residue_field_codim2.json"), "--window", "-6", "6"]
    )
    out = capsys.readouterr().out
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["provenance"]["window"] == [-6, 6]
    assert doc["results"]["crdeg"]["verdict"]["value"] == -1


def test_cli_show_and_stdin(capsys):
    code = main(["show", spec_path("residue_field_codim2.json")])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "rank:" in out and "d[0]" in out

    spec_text = read(spec_path("hypersurface_f2.json"))
    old_stdin = sys.stdin
    try:
        import io

        sys.stdin = io.StringIO(spec_text)
        code = main(["diameter", "-"])
    finally:
        sys.stdin = old_stdin
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert json.loads(out)["results"]["diameter"]["verdict"]["value"] == "-inf"


def test_cli_audit_dump(capsys):
    code = main(["cioperators", spec_path("hypersurface_f2.json"), "--audit"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    doc = json.loads(out)
    audit = doc["results"]["cioperators"]["audit"]
    assert audit[0]["cofactor_0"] == [["1"]]


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "crdiam.cli", "verify", spec_path("residue_field_codim2.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "all passed" in proc.stdout
