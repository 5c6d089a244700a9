import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.api import schemas  # noqa: E402
from jetcalc.core.fields import Valence, random_jet  # noqa: E402
from jetcalc.core.groups import random_group_element  # noqa: E402
from jetcalc.core.reduction import reduce_first, reduce_second  # noqa: E402
from jetcalc.core.series import TruncatedSeries  # noqa: E402
from jetcalc.errors import SchemaError  # noqa: E402


def test_rationals_are_written_as_p_over_q():
    assert schemas.format_rational(Fraction(-3, 6)) == "-1/2"
    assert schemas.format_rational(2) == "2/1"
    assert schemas.parse_rational("4/6", "$") == Fraction(2, 3)
    with pytest.raises(SchemaError) as excinfo:
        schemas.parse_rational("0.5", "$.x")
    assert excinfo.value.path == "$.x"
    with pytest.raises(SchemaError) as excinfo:
        schemas.parse_rational("1/0", "$.y")
    assert excinfo.value.path == "$.y"


def test_zero_denominator_component_reports_its_key():
    doc = {"schema": schemas.SCHEMA_VERSION, "kind": "series", "m": 1, "order": 1, "components": {"f[|1]": "3/0"}}
    with pytest.raises(SchemaError) as excinfo:
        schemas.decode(doc)
    assert excinfo.value.path == '$.components["f[|1]"]'


def test_component_keys_hold_jet_coordinates():
    s = TruncatedSeries.from_monomials(2, 2, {(1, 1): 1, (2,): Fraction(1, 3)})
    doc = schemas.encode(s)
    assert doc["schema"] == schemas.SCHEMA_VERSION
    assert doc["kind"] == "series"
    assert doc["components"] == {"f[|2]": "1/3", "f[|1,1]": "2/1"}


def test_linear_jet_keys_and_decode():
    K = random_jet("linear", 2, 2, 1, seed=3)
    doc = schemas.encode(K)
    assert all(key.startswith("K[") for key in doc["components"])
    assert schemas.decode(doc, "linear") == K


def test_encoding_is_deterministic():
    lam = random_jet("classical", 2, 0, 2, seed=8)
    K = random_jet("linear", 2, 1, 2, seed=8)
    d = reduce_first(lam, K, 2)
    assert schemas.dumps(d) == schemas.dumps(d)
    assert schemas.dumps(d).endswith("}\n")
    assert schemas.loads(schemas.dumps(d), "reduced-first") == d


def test_reduced_second_and_group_documents_decode():
    lam = random_jet("classical", 2, 1, 2, seed=9)
    K = random_jet("linear", 2, 1, 2, seed=9)
    phi = random_jet("tensor", 2, 1, 2, seed=9, valence=Valence.standard(p1=1))
    d = reduce_second(lam, K, phi, 2)
    assert schemas.decode(schemas.encode(d)) == d
    g = random_group_element(2, 1, 3, 2, seed=9)
    assert schemas.decode(schemas.encode(g), "group") == g


def test_broken_symmetry_reports_components_path():
    doc = {
        "schema": schemas.SCHEMA_VERSION,
        "kind": "classical",
        "m": 2,
        "order": 0,
        "components": {"L[1,1,2|]": "1/1"},
    }
    with pytest.raises(SchemaError) as excinfo:
        schemas.decode(doc)
    assert excinfo.value.path == "$.components"


def test_bad_key_path_names_the_key():
    doc = {"schema": schemas.SCHEMA_VERSION, "kind": "series", "m": 1, "order": 1, "components": {"f[|2]": "1/1"}}
    with pytest.raises(SchemaError) as excinfo:
        schemas.decode(doc)
    assert excinfo.value.path == '$.components["f[|2]"]'


def test_unknown_version_and_kind():
    with pytest.raises(SchemaError) as excinfo:
        schemas.decode({"schema": "jetcalc/0", "kind": "series"})
    assert excinfo.value.path == "$.schema"
    with pytest.raises(SchemaError) as excinfo:
        schemas.decode({"schema": schemas.SCHEMA_VERSION, "kind": "spinor"})
    assert excinfo.value.path == "$.kind"
    with pytest.raises(SchemaError):
        schemas.decode(schemas.encode(TruncatedSeries.zero(1, 1)), "group")


def test_invalid_json_and_extra_fields():
    with pytest.raises(SchemaError):
        schemas.loads("{not json")
    doc = schemas.encode(TruncatedSeries.zero(1, 1))
    doc["colour"] = "red"
    with pytest.raises(SchemaError) as excinfo:
        schemas.decode(doc)
    assert excinfo.value.path == "$.colour"


def test_write_and_read_document(tmp_path):
    lam = random_jet("classical", 2, 0, 1, seed=2)
    path = schemas.write_document(tmp_path / "out" / "lam.json", lam)
    assert json.loads(path.read_text())["kind"] == "classical"
    assert schemas.read_document(path, "classical") == lam


def test_report_document_wraps_payload():
    doc = schemas.encode(schemas.report_document({"command": "check", "ok": True}))
    assert doc["kind"] == "report"
    assert doc["payload"]["ok"] is True
