from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from jetcalc.core.models import CheckReport, CheckResult

# (number, title, suites feeding it)
BATTERIES: List[Tuple[int, str, Tuple[str, ...]]] = [
    (1, "Series kernel", ("series",)),
    (2, "Group and action laws", ("groups",)),
    (3, "Convention gate", ("gate",)),
    (4, "Bianchi and Ricci identities", ("bianchi", "ricci")),
    (5, "Equivariance", ("equivariance",)),
    (6, "First reduction", ("first",)),
    (7, "Second reduction", ("second",)),
    (8, "Affine solvability trace", ("trace",)),
]


@dataclass
class ConfigurationRun:
    m: int
    n: int
    reports: List[CheckReport]
    seconds: float


@dataclass
class BatteryResult:
    number: int
    title: str
    suites: Tuple[str, ...]
    checks: int = 0
    seconds: float = 0.0
    failures: List[Tuple[str, CheckResult]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checks > 0 and not self.failures


@dataclass
class AcceptanceResult:
    batteries: List[BatteryResult]
    runs: List[ConfigurationRun]
    order: int
    samples: int
    seed: int

    @property
    def ok(self) -> bool:
        return all(battery.ok for battery in self.batteries)

    @property
    def seconds(self) -> float:
        return sum(run.seconds for run in self.runs)


def evaluate_runs(runs: Sequence[ConfigurationRun], order: int, samples: int, seed: int) -> AcceptanceResult:
    """Fold per-configuration suite reports into the eight acceptance batteries."""
    batteries: Dict[str, BatteryResult] = {}
    ordered: List[BatteryResult] = []
    for number, title, suites in BATTERIES:
        battery = BatteryResult(number=number, title=title, suites=suites)
        ordered.append(battery)
        for suite in suites:
            batteries[suite] = battery

    for run in runs:
        share = run.seconds / max(len(run.reports), 1)
        for report in run.reports:
            battery = batteries.get(report.suite)
            if battery is None:
                continue
            battery.checks += len(report.results)
            battery.seconds += share
            label = f"m={run.m}, n={run.n}"
            battery.failures.extend((label, failure) for failure in report.failures)
    return AcceptanceResult(batteries=ordered, runs=list(runs), order=order, samples=samples, seed=seed)
