import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core import suites  # noqa: E402
from jetcalc.core.models import CheckReport  # noqa: E402
from jetcalc.core.pinned import PinnedManifest  # noqa: E402

SMALL = suites.SuiteConfig(m=2, n=1, order=2, samples=1, seed=3)
EMPTY = PinnedManifest()


@pytest.mark.parametrize("name", ["series", "groups", "gate", "bianchi"])
def test_small_suites_pass(name):
    report = suites.run_suite(name, SMALL, EMPTY)
    assert report.results
    assert report.ok, [f.model_dump() for f in report.failures]


def test_ricci_suite_at_order_two_skips_oracle():
    report = suites.run_suite("ricci", SMALL, EMPTY)
    assert report.ok, [f.model_dump() for f in report.failures]
    assert {r.name for r in report.results} == {"ricci_identity"}


@pytest.mark.slow
def test_first_reduction_suite_passes():
    config = suites.SuiteConfig(m=2, n=1, order=2, samples=1, seed=5, k=2)
    report = suites.run_suite("first", config, EMPTY)
    assert report.ok, [f.model_dump() for f in report.failures]
    assert {"kernel_invariance", "round_trip", "orbit_solve", "factorization"} <= {r.name for r in report.results}


def test_unknown_suite_raises():
    with pytest.raises(KeyError):
        suites.run_suite("torsion", SMALL, EMPTY)


def test_engine_errors_become_failed_checks():
    report = CheckReport(suite="demo")

    def broken():
        from jetcalc.errors import OrderError

        raise OrderError("too shallow")

    suites._guarded(report, "demo_check", broken, seed=1)
    assert not report.ok
    assert report.failures[0].detail == "OrderError: too shallow"
    assert report.failures[0].metadata == {"seed": 1}


def test_gated_suites_are_blocked_when_gate_fails(monkeypatch):
    def failing_gate(config, pinned):
        report = CheckReport(suite="gate")
        report.record("classical_top_shift", False, "forced")
        return report

    monkeypatch.setitem(suites.SUITES, "gate", failing_gate)
    reports = suites.run_all(SMALL, names=["gate", "trace"], pinned=EMPTY)
    by_name = {report.suite: report for report in reports}
    assert not by_name["gate"].ok
    trace = by_name["trace"]
    assert not trace.ok
    assert trace.results[0].name == "blocked_by_gate"


def test_acceptance_dimensions_cover_small_shapes():
    assert (2, 1) in suites.ACCEPTANCE_DIMENSIONS
    assert all(m >= 2 for m, _ in suites.ACCEPTANCE_DIMENSIONS)
