"""Versioned JSON documents for every engine value.

Rationals travel as ``"p/q"`` strings.  Jet components are keyed by index
strings such as ``"K[1,2,1|1,2]"`` (component indices, then the sorted
derivative multi-index) and hold the jet coordinate, i.e. the partial
derivative at the origin.  Zero components are omitted and keys are written
in generation order, so encoding is deterministic.
"""

from __future__ import annotations

import json
import re
from contextlib import contextmanager
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.covariant import CurvatureDifferentialData
from ..core.fields import (
    ClassicalConnectionJet,
    LinearConnectionJet,
    SlotKind,
    SymmetricJetPart,
    SymmetryGroup,
    TensorFieldJet,
    Valence,
    audit_symmetries,
)
from ..core.groups import DiffeoJet, GaugeJet, WGroupElement
from ..core.reduction import ReducedDataFirst, ReducedDataSecond
from ..core.series import ZERO, TruncatedSeries, monomial_basis, multiplicity_factorial
from ..errors import JetError, SchemaError

SCHEMA_VERSION = "jetcalc/1"

_KEY = re.compile(r"^(?P<name>[A-Za-z_]+)\[(?P<idx>[0-9,]*)\|(?P<der>[0-9,]*)\]$")
_RATIONAL = re.compile(r"^-?[0-9]+(/[1-9][0-9]*)?$")


class SymmetrySchema(BaseModel):
    slots: List[int]
    sign: int = 1


class DocumentSchema(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_: str = Field(alias="schema")
    kind: str


class SeriesSchema(DocumentSchema):
    m: int
    order: int
    components: Dict[str, str] = Field(default_factory=dict)


class JetSchema(DocumentSchema):
    m: int
    n: int = 0
    order: int
    valence: List[str] = Field(default_factory=list)
    symmetries: List[SymmetrySchema] = Field(default_factory=list)
    components: Dict[str, str] = Field(default_factory=dict)


class SymmetricPartSchema(DocumentSchema):
    part_kind: str
    m: int
    n: int = 0
    degree: int
    components: Dict[str, str] = Field(default_factory=dict)


class GroupSchema(DocumentSchema):
    m: int
    n: int
    base_order: int
    gauge_order: int
    base: Dict[str, str] = Field(default_factory=dict)
    gauge: Dict[str, str] = Field(default_factory=dict)


class CurvatureSchema(DocumentSchema):
    curvature_kind: str
    i: int
    tensor: JetSchema


class ReducedFirstSchema(DocumentSchema):
    m: int
    n: int
    s: int
    r: int
    k: int
    lam_low: Optional[JetSchema] = None
    K_low: JetSchema
    R_C: List[CurvatureSchema] = Field(default_factory=list)
    R_L: List[CurvatureSchema] = Field(default_factory=list)


class ReducedSecondSchema(DocumentSchema):
    m: int
    n: int
    s1: int
    s2: int
    r: int
    k: int
    lam_low: Optional[JetSchema] = None
    K_low: Optional[JetSchema] = None
    K_sym_top: Optional[SymmetricPartSchema] = None
    phi_low: JetSchema
    R_C: List[CurvatureSchema] = Field(default_factory=list)
    R_L: List[CurvatureSchema] = Field(default_factory=list)
    V: List[JetSchema] = Field(default_factory=list)


class ReportSchema(DocumentSchema):
    payload: Dict[str, Any] = Field(default_factory=dict)


Encodable = Union[
    TruncatedSeries,
    TensorFieldJet,
    ClassicalConnectionJet,
    LinearConnectionJet,
    SymmetricJetPart,
    WGroupElement,
    CurvatureDifferentialData,
    ReducedDataFirst,
    ReducedDataSecond,
]

_SCHEMAS = {
    "series": SeriesSchema,
    "tensor": JetSchema,
    "classical": JetSchema,
    "linear": JetSchema,
    "symmetric-part": SymmetricPartSchema,
    "group": GroupSchema,
    "curvature": CurvatureSchema,
    "reduced-first": ReducedFirstSchema,
    "reduced-second": ReducedSecondSchema,
    "report": ReportSchema,
}


# ---------- rationals and index keys ----------


def format_rational(value) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str, path: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.match(text.strip()):
        raise SchemaError(f"expected a rational 'p/q', got {text!r}", path=path)
    value = Fraction(text.strip())
    return value


def component_key(name: str, indices, derivative) -> str:
    return f"{name}[{','.join(str(i) for i in indices)}|{','.join(str(d) for d in derivative)}]"


def _encode_array(name: str, data: np.ndarray, m: int, order: int) -> Dict[str, str]:
    basis = monomial_basis(m, order)
    lead = data.shape[:-1]
    out: Dict[str, str] = {}
    for idx in np.ndindex(*lead):
        for pos, mi in enumerate(basis.multi_indices):
            value = data[idx + (pos,)] * multiplicity_factorial(mi)
            if value != 0:
                out[component_key(name, (i + 1 for i in idx), mi)] = format_rational(value)
    return out


def _decode_array(
    name: str, components: Dict[str, str], lead: Tuple[int, ...], m: int, order: int, path: str
) -> np.ndarray:
    if order < 0:
        raise SchemaError(f"negative order {order}", path=path)
    basis = monomial_basis(m, order)
    data = np.full(tuple(lead) + (basis.size,), ZERO, dtype=object)
    for key, text in components.items():
        where = f'{path}["{key}"]'
        match = _KEY.match(key)
        if match is None or match.group("name") != name:
            raise SchemaError(f"malformed component key, expected {name}[i,...|d,...]", path=where)
        idx = tuple(int(v) for v in match.group("idx").split(",") if v)
        der = tuple(int(v) for v in match.group("der").split(",") if v)
        if len(idx) != len(lead) or any(not 1 <= v <= dim for v, dim in zip(idx, lead)):
            raise SchemaError(f"component indices {idx} outside {lead}", path=where)
        if len(der) > order:
            raise SchemaError(f"derivative order {len(der)} exceeds trust order {order}", path=where)
        if any(not 1 <= v <= m for v in der) or list(der) != sorted(der):
            raise SchemaError(f"derivative multi-index {der} must be sorted labels in 1..{m}", path=where)
        value = parse_rational(text, where)
        data[tuple(v - 1 for v in idx) + (basis.position[der],)] = value / multiplicity_factorial(der)
    return data


# ---------- encoding ----------


def _header(kind: str) -> Dict[str, str]:
    return {"schema": SCHEMA_VERSION, "kind": kind}


def _jet_schema(value, name: str) -> JetSchema:
    if isinstance(value, ClassicalConnectionJet):
        kind, t = "classical", value.field
    elif isinstance(value, LinearConnectionJet):
        kind, t = "linear", value.field
    else:
        kind, t = "tensor", value
    return JetSchema(
        **_header(kind),
        m=t.m,
        n=t.n,
        order=t.order,
        valence=[s.value for s in t.valence.slots] if kind == "tensor" else [],
        symmetries=[SymmetrySchema(slots=list(g.slots), sign=g.sign) for g in t.valence.symmetries]
        if kind == "tensor" else [],
        components=_encode_array(name, t.data, t.m, t.order),
    )


def _curvature_schema(c: CurvatureDifferentialData) -> CurvatureSchema:
    name = "w" if c.kind == "classical" else "u"
    return CurvatureSchema(**_header("curvature"), curvature_kind=c.kind, i=c.order, tensor=_jet_schema(c.tensor, name))


def _symmetric_part_schema(p: SymmetricJetPart) -> SymmetricPartSchema:
    components: Dict[str, str] = {}
    lead_rank = 1 if p.kind == "classical" else 2
    for idx in np.ndindex(*p.values.shape[:lead_rank]):
        for mi in monomial_basis(p.m, p.degree).multi_indices[monomial_basis(p.m, p.degree).degree_slice(p.degree)]:
            value = p.values[idx + tuple(label - 1 for label in mi)]
            if value != 0:
                components[component_key("s", (i + 1 for i in idx), mi)] = format_rational(value)
    return SymmetricPartSchema(
        **_header("symmetric-part"), part_kind=p.kind, m=p.m, n=p.n, degree=p.degree, components=components
    )


def to_schema(value: Encodable) -> DocumentSchema:
    if isinstance(value, TruncatedSeries):
        return SeriesSchema(**_header("series"), m=value.m, order=value.order,
                            components=_encode_array("f", value.coeffs, value.m, value.order))
    if isinstance(value, ClassicalConnectionJet):
        return _jet_schema(value, "L")
    if isinstance(value, LinearConnectionJet):
        return _jet_schema(value, "K")
    if isinstance(value, TensorFieldJet):
        return _jet_schema(value, "T")
    if isinstance(value, SymmetricJetPart):
        return _symmetric_part_schema(value)
    if isinstance(value, CurvatureDifferentialData):
        return _curvature_schema(value)
    if isinstance(value, WGroupElement):
        return GroupSchema(
            **_header("group"),
            m=value.m,
            n=value.n,
            base_order=value.base.order,
            gauge_order=value.gauge.order,
            base=_encode_array("phi", value.base.data, value.m, value.base.order),
            gauge=_encode_array("g", value.gauge.data, value.m, value.gauge.order),
        )
    if isinstance(value, ReducedDataFirst):
        return ReducedFirstSchema(
            **_header("reduced-first"),
            m=value.m, n=value.n, s=value.s, r=value.r, k=value.k,
            lam_low=_jet_schema(value.lam_low, "L") if value.lam_low is not None else None,
            K_low=_jet_schema(value.K_low, "K"),
            R_C=[_curvature_schema(c) for c in value.R_C],
            R_L=[_curvature_schema(c) for c in value.R_L],
        )
    if isinstance(value, ReducedDataSecond):
        return ReducedSecondSchema(
            **_header("reduced-second"),
            m=value.m, n=value.n, s1=value.s1, s2=value.s2, r=value.r, k=value.k,
            lam_low=_jet_schema(value.lam_low, "L") if value.lam_low is not None else None,
            K_low=_jet_schema(value.K_low, "K") if value.K_low is not None else None,
            K_sym_top=_symmetric_part_schema(value.K_sym_top) if value.K_sym_top is not None else None,
            phi_low=_jet_schema(value.phi_low, "T"),
            R_C=[_curvature_schema(c) for c in value.R_C],
            R_L=[_curvature_schema(c) for c in value.R_L],
            V=[_jet_schema(v, "T") for v in value.V],
        )
    raise SchemaError(f"cannot encode {type(value).__name__}")


def report_document(payload: Dict[str, Any]) -> ReportSchema:
    return ReportSchema(**_header("report"), payload=payload)


def encode(value: Union[Encodable, DocumentSchema]) -> Dict[str, Any]:
    schema = value if isinstance(value, DocumentSchema) else to_schema(value)
    return schema.model_dump(by_alias=True, exclude_none=True)


def dumps(value: Union[Encodable, DocumentSchema]) -> str:
    return json.dumps(encode(value), indent=2, ensure_ascii=False) + "\n"


def write_document(path: Path, value: Union[Encodable, DocumentSchema]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(value), encoding="utf-8")
    return path


# ---------- decoding ----------


def _check_header(doc: Any, path: str, expected: Optional[str] = None) -> str:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object", path=path)
    version = doc.get("schema")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {version!r}, expected {SCHEMA_VERSION!r}",
                          path=f"{path}.schema")
    kind = doc.get("kind")
    if kind not in _SCHEMAS:
        raise SchemaError(f"unknown document kind {kind!r}", path=f"{path}.kind")
    if expected is not None and kind not in expected.split("|"):
        raise SchemaError(f"expected a {expected} document, got {kind!r}", path=f"{path}.kind")
    return kind


def _validated(doc: Dict[str, Any], kind: str, path: str) -> DocumentSchema:
    try:
        return _SCHEMAS[kind].model_validate(doc)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in first["loc"])
        raise SchemaError(first["msg"], path=f"{path}{loc}") from exc


@contextmanager
def _as_schema_error(path: str) -> Iterator[None]:
    """Re-raise engine validation failures as ``SchemaError`` at ``path``."""
    try:
        yield
    except SchemaError:
        raise
    except JetError as exc:
        raise SchemaError(exc.reasons, path=path) from exc


def _decode_jet(doc: Dict[str, Any], path: str, expected: str, name: str = "T"):
    kind = _check_header(doc, path, expected)
    schema: JetSchema = _validated(doc, kind, path)
    comp_path = f"{path}.components"
    m, n = schema.m, schema.n
    with _as_schema_error(comp_path):
        if kind == "classical":
            data = _decode_array("L", schema.components, (m,) * 3, m, schema.order, comp_path)
            return ClassicalConnectionJet.from_data(m, schema.order, data)
        if kind == "linear":
            data = _decode_array("K", schema.components, (n, n, m), m, schema.order, comp_path)
            return LinearConnectionJet.from_data(m, n, schema.order, data)
    with _as_schema_error(f"{path}.valence"):
        try:
            slots = tuple(SlotKind(s) for s in schema.valence)
        except ValueError as exc:
            raise SchemaError(f"unknown slot kind in {schema.valence}", path=f"{path}.valence") from exc
        groups = tuple(SymmetryGroup(tuple(g.slots), g.sign) for g in schema.symmetries)
        valence = Valence(slots, groups)
    with _as_schema_error(comp_path):
        data = _decode_array(name, schema.components, valence.dims(m, n), m, schema.order, comp_path)
        tensor = TensorFieldJet(m, n, valence, schema.order, data)
    problems = audit_symmetries(tensor)
    if problems:
        raise SchemaError(problems, path=comp_path)
    return tensor


def _decode_curvature(doc: Dict[str, Any], path: str) -> CurvatureDifferentialData:
    kind = _check_header(doc, path, "curvature")
    schema: CurvatureSchema = _validated(doc, kind, path)
    name = "w" if schema.curvature_kind == "classical" else "u"
    tensor = _decode_jet(doc["tensor"], f"{path}.tensor", "tensor", name)
    with _as_schema_error(path):
        return CurvatureDifferentialData(schema.curvature_kind, schema.i, tensor)


def _decode_symmetric_part(doc: Dict[str, Any], path: str) -> SymmetricJetPart:
    kind = _check_header(doc, path, "symmetric-part")
    schema: SymmetricPartSchema = _validated(doc, kind, path)
    lead = (schema.m,) if schema.part_kind == "classical" else (schema.n, schema.n)
    values = np.full(lead + (schema.m,) * max(schema.degree, 0), ZERO, dtype=object)
    for key, text in schema.components.items():
        where = f'{path}.components["{key}"]'
        match = _KEY.match(key)
        if match is None or match.group("name") != "s":
            raise SchemaError("malformed component key, expected s[i,...|d,...]", path=where)
        idx = tuple(int(v) for v in match.group("idx").split(",") if v)
        der = tuple(int(v) for v in match.group("der").split(",") if v)
        if (
            len(idx) != len(lead)
            or any(not 1 <= v <= dim for v, dim in zip(idx, lead))
            or len(der) != schema.degree
            or any(not 1 <= v <= schema.m for v in der)
        ):
            raise SchemaError("symmetric part key out of range", path=where)
        value = parse_rational(text, where)
        for perm in set(permutations(der)):
            values[tuple(v - 1 for v in idx) + tuple(v - 1 for v in perm)] = value
    with _as_schema_error(path):
        return SymmetricJetPart(schema.part_kind, schema.m, schema.n, schema.degree, values)


def _decode_group(doc: Dict[str, Any], path: str) -> WGroupElement:
    kind = _check_header(doc, path, "group")
    schema: GroupSchema = _validated(doc, kind, path)
    m, n = schema.m, schema.n
    with _as_schema_error(path):
        base = _decode_array("phi", schema.base, (m,), m, schema.base_order, f"{path}.base")
        gauge = _decode_array("g", schema.gauge, (n, n), m, schema.gauge_order, f"{path}.gauge")
        return WGroupElement(DiffeoJet(m, schema.base_order, base), GaugeJet(m, n, schema.gauge_order, gauge))


def _decode_series(doc: Dict[str, Any], path: str) -> TruncatedSeries:
    kind = _check_header(doc, path, "series")
    schema: SeriesSchema = _validated(doc, kind, path)
    with _as_schema_error(f"{path}.components"):
        data = _decode_array("f", schema.components, (), schema.m, schema.order, f"{path}.components")
        return TruncatedSeries(schema.m, schema.order, data)


def _optional(doc: Dict[str, Any], key: str, path: str, decoder):
    value = doc.get(key)
    return None if value is None else decoder(value, f"{path}.{key}")


def _decode_reduced_first(doc: Dict[str, Any], path: str) -> ReducedDataFirst:
    kind = _check_header(doc, path, "reduced-first")
    schema: ReducedFirstSchema = _validated(doc, kind, path)
    with _as_schema_error(path):
        return ReducedDataFirst(
            m=schema.m, n=schema.n, s=schema.s, r=schema.r, k=schema.k,
            lam_low=_optional(doc, "lam_low", path, lambda d, p: _decode_jet(d, p, "classical")),
            K_low=_decode_jet(doc["K_low"], f"{path}.K_low", "linear"),
            R_C=[_decode_curvature(c, f"{path}.R_C[{i}]") for i, c in enumerate(doc.get("R_C", []))],
            R_L=[_decode_curvature(c, f"{path}.R_L[{i}]") for i, c in enumerate(doc.get("R_L", []))],
        )


def _decode_reduced_second(doc: Dict[str, Any], path: str) -> ReducedDataSecond:
    kind = _check_header(doc, path, "reduced-second")
    schema: ReducedSecondSchema = _validated(doc, kind, path)
    with _as_schema_error(path):
        return ReducedDataSecond(
            m=schema.m, n=schema.n, s1=schema.s1, s2=schema.s2, r=schema.r, k=schema.k,
            lam_low=_optional(doc, "lam_low", path, lambda d, p: _decode_jet(d, p, "classical")),
            K_low=_optional(doc, "K_low", path, lambda d, p: _decode_jet(d, p, "linear")),
            K_sym_top=_optional(doc, "K_sym_top", path, _decode_symmetric_part),
            phi_low=_decode_jet(doc["phi_low"], f"{path}.phi_low", "tensor"),
            R_C=[_decode_curvature(c, f"{path}.R_C[{i}]") for i, c in enumerate(doc.get("R_C", []))],
            R_L=[_decode_curvature(c, f"{path}.R_L[{i}]") for i, c in enumerate(doc.get("R_L", []))],
            V=[_decode_jet(v, f"{path}.V[{i}]", "tensor") for i, v in enumerate(doc.get("V", []))],
        )


def decode(doc: Any, expected: Optional[str] = None):
    """Inverse of ``encode``; ``expected`` restricts the accepted kinds (``"a|b"``)."""
    kind = _check_header(doc, "$", expected)
    if kind in ("tensor", "classical", "linear"):
        return _decode_jet(doc, "$", kind)
    if kind == "series":
        return _decode_series(doc, "$")
    if kind == "symmetric-part":
        return _decode_symmetric_part(doc, "$")
    if kind == "curvature":
        return _decode_curvature(doc, "$")
    if kind == "group":
        return _decode_group(doc, "$")
    if kind == "reduced-first":
        return _decode_reduced_first(doc, "$")
    if kind == "reduced-second":
        return _decode_reduced_second(doc, "$")
    return _validated(doc, kind, "$")


def loads(text: str, expected: Optional[str] = None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", path="$") from exc
    return decode(doc, expected)


def read_document(path: Path, expected: Optional[str] = None):
    return loads(Path(path).read_text(encoding="utf-8"), expected)


__all__ = [
    "SCHEMA_VERSION",
    "JetSchema",
    "SeriesSchema",
    "SymmetricPartSchema",
    "GroupSchema",
    "CurvatureSchema",
    "ReducedFirstSchema",
    "ReducedSecondSchema",
    "ReportSchema",
    "format_rational",
    "parse_rational",
    "component_key",
    "to_schema",
    "report_document",
    "encode",
    "dumps",
    "write_document",
    "decode",
    "loads",
    "read_document",
]
