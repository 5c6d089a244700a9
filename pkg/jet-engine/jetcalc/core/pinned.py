from __future__ import annotations

import json
import os
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from ..errors import SchemaError

_REPO_ROOT = Path(__file__).resolve().parents[3]
_DATA_PATH = Path(os.getenv("JETCALC_PINNED_SEEDS", _REPO_ROOT / "data" / "pinned_seeds.json"))


class BianchiControl(BaseModel):
    """Random curvature-shaped tensors whose Bianchi residuals must not vanish."""

    m: int = 3
    order: int = 1
    bound: int = 3
    seeds: List[int] = Field(default_factory=list)
    expected: str = "nonzero"


class ProbeControl(BaseModel):
    operator: str
    m: int
    n: int
    orders: List[int]
    k: int = 1
    field_valence: Optional[List[int]] = None
    seeds: List[int] = Field(default_factory=list)
    expected: str = "unequal"

    @property
    def field_counts(self) -> Tuple[int, int, int, int]:
        counts = list(self.field_valence or [0, 0, 0, 0])
        return tuple(counts + [0] * (4 - len(counts)))[:4]  # type: ignore[return-value]


class PinnedManifest(BaseModel):
    version: int = 1
    bianchi_random_tensor: BianchiControl = Field(default_factory=BianchiControl)
    factorization_probes: List[ProbeControl] = Field(default_factory=list)
    equivariance_probes: List[ProbeControl] = Field(default_factory=list)


def parse_manifest(raw: dict, source: str = "$") -> PinnedManifest:
    try:
        return PinnedManifest.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in first["loc"])
        raise SchemaError(first["msg"], path=f"{source}{loc}") from exc


@lru_cache(maxsize=4)
def load_pinned(path: Optional[str] = None) -> PinnedManifest:
    """Pinned negative controls; an absent file yields an empty manifest."""
    target = Path(path) if path else _DATA_PATH
    if not target.exists():
        return PinnedManifest()
    return parse_manifest(json.loads(target.read_text(encoding="utf-8")))


__all__ = ["BianchiControl", "ProbeControl", "PinnedManifest", "parse_manifest", "load_pinned"]
