import json
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core import pinned  # noqa: E402
from jetcalc.core.operators import SAMPLE_OPERATORS  # noqa: E402
from jetcalc.errors import SchemaError  # noqa: E402


def test_bundled_manifest_names_known_operators():
    manifest = pinned.load_pinned()
    assert manifest.bianchi_random_tensor.m == 3
    assert manifest.factorization_probes
    for control in manifest.factorization_probes + manifest.equivariance_probes:
        assert control.operator in SAMPLE_OPERATORS
        assert not SAMPLE_OPERATORS[control.operator].natural
        assert control.seeds


def test_missing_manifest_is_empty(tmp_path):
    manifest = pinned.load_pinned(str(tmp_path / "absent.json"))
    assert manifest.factorization_probes == []
    assert manifest.bianchi_random_tensor.seeds == []


def test_manifest_errors_carry_json_path(tmp_path):
    path = tmp_path / "pinned.json"
    path.write_text(json.dumps({"factorization_probes": [{"operator": "raw_K_top", "m": "two"}]}))
    with pytest.raises(SchemaError) as excinfo:
        pinned.load_pinned(str(path))
    assert excinfo.value.path.startswith("$.factorization_probes[0]")


def test_field_counts_pad_to_four():
    control = pinned.ProbeControl(operator="raw_Phi_top", m=2, n=1, orders=[2, 2, 2], field_valence=[1])
    assert control.field_counts == (1, 0, 0, 0)
