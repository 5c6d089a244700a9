import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "jet-engine"))

from jetcalc import events  # noqa: E402


@pytest.fixture()
def temp_event_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(events, "EVENT_DIR", tmp_path)
    monkeypatch.delenv("JETCALC_LEDGER", raising=False)
    events.EVENT_DIR.mkdir(parents=True, exist_ok=True)
    return tmp_path


def test_record_event_writes_daily_file(temp_event_dir, monkeypatch):
    class FrozenDatetime(datetime):
        @classmethod
        def now(cls, tz=None):
            return cls(2026, 3, 2, 8, 15, tzinfo=timezone.utc)

    monkeypatch.setattr(events, "datetime", FrozenDatetime)

    path = events.record_event("reduce_finished", {"k": 2, "kind": "reduced-first"})
    assert path == temp_event_dir / "2026-03-02.jsonl"
    data = path.read_text().strip().splitlines()
    assert len(data) == 1
    doc = json.loads(data[0])
    assert doc["kind"] == "reduce_finished"
    assert doc["payload"] == {"k": 2, "kind": "reduced-first"}
    assert doc["ts"].startswith("2026-03-02T08:15:00")


def test_non_json_payload_values_are_stringified(temp_event_dir):
    path = events.record_event("check_finished", {"report": Path("reports/latest.md")})
    doc = json.loads(path.read_text().strip())
    assert doc["payload"]["report"] == "reports/latest.md"


def test_disabled_ledger_writes_nothing(temp_event_dir, monkeypatch):
    monkeypatch.setenv("JETCALC_LEDGER", "off")
    assert not events.ledger_enabled()
    assert events.record_event("selftest_finished", {"ok": True}) is None
    assert list(temp_event_dir.iterdir()) == []


def test_list_events_returns_newest_first(temp_event_dir):
    older = temp_event_dir / "2026-03-01.jsonl"
    older.write_text('{"ts":"2026-03-01T10:00:00Z","kind":"old","payload":{"seq":1}}\n')
    newer = temp_event_dir / "2026-03-02.jsonl"
    newer.write_text(
        '{"ts":"2026-03-02T09:00:00Z","kind":"mid","payload":{"seq":2}}\n'
        "not json\n"
        '{"ts":"2026-03-02T12:00:00Z","kind":"new","payload":{"seq":3}}\n'
    )

    items = events.list_events(limit=2)
    assert [e["kind"] for e in items] == ["new", "mid"]
    assert items[0]["payload"]["seq"] == 3
    assert [e["kind"] for e in events.list_events(kind="old")] == ["old"]
    assert events.list_events(limit=0) == []
