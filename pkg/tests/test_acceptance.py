import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
for path in (ROOT, ROOT / "jet-engine"):
    if str(path) not in sys.path:
        sys.path.insert(0, str(path))

from jetcalc.core.models import CheckReport  # noqa: E402
from tools.acceptance.evaluate import BATTERIES, ConfigurationRun, evaluate_runs  # noqa: E402
from tools.acceptance.report import build_report_content, write_report  # noqa: E402


def _report(suite, ok=True, **metadata):
    report = CheckReport(suite=suite)
    report.record(f"{suite}_check", ok, None if ok else "mismatch", **metadata)
    return report


def _all_suites(**failing):
    names = [suite for _, _, suites in BATTERIES for suite in suites]
    return [_report(name, ok=name not in failing, **failing.get(name, {})) for name in names]


def test_all_passing_runs_pass_every_battery():
    runs = [ConfigurationRun(m=2, n=1, reports=_all_suites(), seconds=4.0)]
    result = evaluate_runs(runs, order=3, samples=1, seed=7)
    assert result.ok
    assert [battery.number for battery in result.batteries] == list(range(1, 9))
    bianchi = result.batteries[3]
    assert bianchi.suites == ("bianchi", "ricci")
    assert bianchi.checks == 2
    assert result.seconds == 4.0


def test_failures_are_labelled_by_configuration():
    runs = [
        ConfigurationRun(m=2, n=1, reports=_all_suites(), seconds=1.0),
        ConfigurationRun(m=3, n=2, reports=_all_suites(first={"seed": 9}), seconds=2.0),
    ]
    result = evaluate_runs(runs, order=3, samples=1, seed=7)
    assert not result.ok
    first = next(b for b in result.batteries if b.suites == ("first",))
    assert not first.ok
    label, failure = first.failures[0]
    assert label == "m=3, n=2"
    assert failure.metadata == {"seed": 9}


def test_battery_without_checks_fails():
    result = evaluate_runs([ConfigurationRun(m=2, n=1, reports=[_report("series")], seconds=0.5)], 3, 1, 7)
    assert result.batteries[0].ok
    assert not result.batteries[1].ok
    assert not result.ok


def test_report_renders_table_and_failures(tmp_path):
    runs = [ConfigurationRun(m=2, n=1, reports=_all_suites(gate={"seed": 3}), seconds=1.0)]
    content = build_report_content(evaluate_runs(runs, 3, 1, 7))
    assert "- Verdict: FAIL" in content
    assert "| 3 | Convention gate | gate | 1 | 1 |" in content
    assert "## Failures" in content
    assert "seed=3" in content

    latest = write_report(tmp_path / "reports", content)
    assert latest.name == "acceptance_latest.md"
    assert latest.read_text() == content
    assert len(list((tmp_path / "reports").glob("acceptance_*.md"))) == 2
