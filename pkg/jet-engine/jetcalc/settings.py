"""Environment driven configuration for the engine and its command line."""

from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel

_REPO_ROOT = Path(__file__).resolve().parents[2]


def _int_env(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, str(default)))
    except (TypeError, ValueError):
        return default


class EngineSettings(BaseModel):
    seed: int = 7
    bound: int = 3
    samples: int = 20
    log_level: str = "WARNING"
    pinned_seeds_path: Path = _REPO_ROOT / "data" / "pinned_seeds.json"
    report_dir: Path = _REPO_ROOT / "tools" / "acceptance" / "reports"


def load_settings() -> EngineSettings:
    """Read ``JETCALC_*`` variables (after loading a local ``.env``)."""
    load_dotenv()
    return EngineSettings(
        seed=_int_env("JETCALC_SEED", 7),
        bound=_int_env("JETCALC_BOUND", 3),
        samples=_int_env("JETCALC_SAMPLES", 20),
        log_level=os.getenv("JETCALC_LOG_LEVEL", "WARNING").upper(),
        pinned_seeds_path=Path(
            os.getenv("JETCALC_PINNED_SEEDS", str(_REPO_ROOT / "data" / "pinned_seeds.json"))
        ),
        report_dir=Path(
            os.getenv("JETCALC_REPORT_DIR", str(_REPO_ROOT / "tools" / "acceptance" / "reports"))
        ),
    )


__all__ = ["EngineSettings", "load_settings"]
