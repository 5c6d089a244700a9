from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class SolveStep(BaseModel):
    stage: str
    order: int
    unknowns: int
    equations: int
    rank: int
    consistent: bool = True

    @property
    def unique(self) -> bool:
        return self.consistent and self.rank == self.unknowns


class SolveTrace(BaseModel):
    steps: List[SolveStep] = Field(default_factory=list)

    def add(self, step: SolveStep) -> None:
        self.steps.append(step)

    @property
    def all_unique(self) -> bool:
        return all(step.unique for step in self.steps)

    def stages(self) -> List[str]:
        return sorted({step.stage for step in self.steps})


class FactorizationReport(BaseModel):
    operator: str
    natural: bool
    k: int
    seed: Optional[int] = None
    equal: bool
    residual_nonzero: int = 0
    residual: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Natural operators must factor; probes are expected not to."""
        return self.equal if self.natural else not self.equal


class EquivarianceReport(BaseModel):
    operator: str
    natural: bool
    seed: Optional[int] = None
    equal: bool
    residual_nonzero: int = 0
    residual: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.equal if self.natural else True


class CheckResult(BaseModel):
    name: str
    ok: bool
    detail: Optional[str] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)


class CheckReport(BaseModel):
    suite: str
    config: Dict[str, Any] = Field(default_factory=dict)
    results: List[CheckResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(result.ok for result in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if not result.ok]

    def record(self, name: str, ok: bool, detail: Optional[str] = None, **metadata: Any) -> CheckResult:
        result = CheckResult(name=name, ok=bool(ok), detail=detail, metadata=metadata)
        self.results.append(result)
        return result


__all__ = [
    "SolveStep",
    "SolveTrace",
    "FactorizationReport",
    "EquivarianceReport",
    "CheckResult",
    "CheckReport",
]
