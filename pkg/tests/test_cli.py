import json
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "jet-engine"))

from jetcalc import cli, events  # noqa: E402


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture()
def ledger_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(events, "EVENT_DIR", tmp_path / "events")
    monkeypatch.delenv("JETCALC_LEDGER", raising=False)
    return events.EVENT_DIR


def test_check_series_suite_exits_zero(capsys):
    code, out = run(capsys, "check", "--suite", "series", "--samples", "1", "--order", "2", "--no-ledger")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["command"] == "check"
    assert payload["ok"] is True
    assert [suite["suite"] for suite in payload["suites"]] == ["series"]


def test_factorize_trace_square_reports_zero_residual(capsys):
    code, out = run(capsys, "factorize", "--op", "trR2", "--k", "2", "--seed", "11", "--no-ledger")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["verdict"] == "residual = 0"
    assert payload["natural"] is True
    assert payload["passed"] is True


def test_factorize_probe_passes_with_nonzero_residual(capsys):
    code, out = run(capsys, "factorize", "--op", "raw_K_top", "--k", "1", "--seed", "11", "--no-ledger")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["verdict"].startswith("residual != 0")
    assert payload["equal"] is False


def test_reduce_reconstruct_reduce_is_byte_identical(tmp_path, capsys):
    common = ["--m", "2", "--n", "1", "--order", "2", "--seed", "5", "--no-ledger"]
    lam, K = tmp_path / "lam.json", tmp_path / "K.json"
    assert cli.main(["gen", "--kind", "classical", *common, "--out", str(lam)]) == 0
    assert cli.main(["gen", "--kind", "linear", *common, "--out", str(K)]) == 0

    reduced = tmp_path / "reduced.json"
    assert cli.main(["reduce", "--in", str(lam), "--in", str(K), "--k", "2", "--no-ledger", "--out", str(reduced)]) == 0

    lam2, K2 = tmp_path / "lam2.json", tmp_path / "K2.json"
    capsys.readouterr()
    code, out = run(capsys, "reconstruct", "--in", str(reduced), "--trace", "--no-ledger",
                    "--out", str(lam2), "--out", str(K2))
    assert code == 0
    trace = json.loads(out)["payload"]
    assert trace["unique"] is True
    assert trace["trace"]

    again = tmp_path / "again.json"
    assert cli.main(["reduce", "--in", str(lam2), "--in", str(K2), "--k", "2", "--no-ledger", "--out", str(again)]) == 0
    assert again.read_bytes() == reduced.read_bytes()


def test_orbit_finds_kernel_element(capsys):
    code, out = run(capsys, "orbit", "--m", "2", "--n", "1", "--order", "2", "--k", "2", "--seed", "3", "--no-ledger")
    assert code == 0
    assert json.loads(out)["kind"] == "group"


def test_unknown_schema_version_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "jetcalc/0", "kind": "classical"}))
    code, out = run(capsys, "reduce", "--in", str(bad), "--no-ledger")
    assert code == 2
    payload = json.loads(out)["payload"]
    assert payload["error"] == "SchemaError"
    assert payload["path"] == f"{bad}:$.schema"


def test_missing_input_file_exits_two(tmp_path, capsys):
    code, out = run(capsys, "reduce", "--in", str(tmp_path / "absent.json"), "--no-ledger")
    assert code == 2
    assert json.loads(out)["payload"]["error"] == "SchemaError"


def test_unknown_operator_and_bad_valence_exit_two(capsys):
    code, out = run(capsys, "factorize", "--op", "nabla_torsion", "--no-ledger")
    assert code == 2
    assert json.loads(out)["payload"]["error"] == "ValenceError"

    code, out = run(capsys, "gen", "--kind", "tensor", "--valence", "1,0", "--no-ledger")
    assert code == 2
    assert json.loads(out)["payload"]["error"] == "ValenceError"


def test_factorize_appends_to_ledger(ledger_dir, capsys):
    run(capsys, "factorize", "--op", "trR2", "--k", "2", "--seed", "11")
    recorded = events.list_events(kind="factorize_finished")
    assert len(recorded) == 1
    assert recorded[0]["payload"]["operator"] == "trR2"
    assert recorded[0]["payload"]["equal"] is True


def test_ledger_can_be_disabled(ledger_dir, monkeypatch, capsys):
    run(capsys, "factorize", "--op", "trR2", "--k", "2", "--seed", "11", "--no-ledger")
    assert events.list_events() == []

    monkeypatch.setenv("JETCALC_LEDGER", "0")
    run(capsys, "factorize", "--op", "trR2", "--k", "2", "--seed", "11")
    assert events.list_events() == []
    assert not ledger_dir.exists()


def test_zero_denominator_in_input_exits_two(tmp_path, capsys):
    lam = tmp_path / "lam.json"
    assert cli.main(["gen", "--kind", "classical", "--m", "2", "--n", "1", "--order", "1", "--seed", "4",
                     "--no-ledger", "--out", str(lam)]) == 0
    doc = json.loads(lam.read_text())
    key = next(iter(doc["components"]))
    doc["components"][key] = "1/0"
    lam.write_text(json.dumps(doc))
    capsys.readouterr()

    code, out = run(capsys, "curvature", "--in", str(lam), "--no-ledger")
    assert code == 2
    payload = json.loads(out)["payload"]
    assert payload["error"] == "SchemaError"
    assert payload["path"] == f'{lam}:$.components["{key}"]'
