import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.settings import load_settings  # noqa: E402


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("JETCALC_SEED", "19")
    monkeypatch.setenv("JETCALC_SAMPLES", "2")
    monkeypatch.setenv("JETCALC_LOG_LEVEL", "info")
    monkeypatch.setenv("JETCALC_PINNED_SEEDS", str(tmp_path / "pinned.json"))
    settings = load_settings()
    assert settings.seed == 19
    assert settings.samples == 2
    assert settings.log_level == "INFO"
    assert settings.pinned_seeds_path == tmp_path / "pinned.json"


def test_invalid_integers_fall_back_to_defaults(monkeypatch):
    monkeypatch.setenv("JETCALC_BOUND", "three")
    monkeypatch.delenv("JETCALC_SEED", raising=False)
    settings = load_settings()
    assert settings.bound == 3
    assert settings.seed == 7
    assert settings.pinned_seeds_path.name == "pinned_seeds.json"
