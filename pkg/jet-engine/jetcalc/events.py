"""JSONL run ledger for command-line invocations."""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

EVENT_DIR = Path(os.getenv("JETCALC_EVENTS_DIR", "data/events"))


def _event_path(ts: datetime) -> Path:
    """Return the JSONL file for the supplied timestamp (UTC date)."""
    return EVENT_DIR / f"{ts.strftime('%Y-%m-%d')}.jsonl"


def ledger_enabled() -> bool:
    return os.getenv("JETCALC_LEDGER", "1").strip().lower() not in ("0", "false", "no", "off")


def record_event(kind: str, payload: Optional[Dict[str, Any]] = None) -> Optional[Path]:
    """
    Append a structured event to the daily JSONL ledger.

    Args:
        kind: Short event name, e.g. ``reduce_finished``.
        payload: Optional dictionary with event-specific data; values that are
            not JSON types are written via ``str``.

    Returns the file written, or ``None`` when nothing was recorded.
    """
    if not kind or not ledger_enabled():
        return None

    ts = datetime.now(timezone.utc)
    doc = {
        "ts": ts.isoformat(),
        "kind": kind,
        "payload": payload or {},
    }
    path = _event_path(ts)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, default=str)
        fh.write("\n")
    return path


def _iter_event_files() -> Iterable[Path]:
    if not EVENT_DIR.exists():
        return []
    return sorted(EVENT_DIR.glob("*.jsonl"), reverse=True)


def list_events(limit: int = 50, kind: Optional[str] = None) -> List[Dict[str, Any]]:
    """
    Return up to ``limit`` most recent events, newest first.

    Daily files are walked in reverse order and each file is read backwards;
    unreadable files and corrupt lines are skipped.
    """
    if limit <= 0:
        return []

    collected: List[Dict[str, Any]] = []
    for path in _iter_event_files():
        try:
            with path.open("r", encoding="utf-8") as fh:
                lines = fh.readlines()
        except OSError:
            continue
        for line in reversed(lines):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError:
                continue
            if kind is not None and doc.get("kind") != kind:
                continue
            collected.append(doc)
            if len(collected) >= limit:
                return collected
    return collected


__all__ = ["EVENT_DIR", "ledger_enabled", "record_event", "list_events"]
