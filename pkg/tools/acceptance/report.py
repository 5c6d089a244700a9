from datetime import datetime, timezone
from pathlib import Path
from typing import List

from .evaluate import AcceptanceResult, BatteryResult

FAILURE_SAMPLE = 10


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _render_battery_table(result: AcceptanceResult) -> List[str]:
    lines = ["| # | Battery | Suites | Checks | Failures | Time | Verdict |", "|---|---|---|---|---|---|---|"]
    for battery in result.batteries:
        lines.append(
            f"| {battery.number} | {battery.title} | {', '.join(battery.suites)} | {battery.checks} | "
            f"{len(battery.failures)} | {battery.seconds:.1f}s | {_verdict(battery.ok)} |"
        )
    return lines


def _render_failures(battery: BatteryResult) -> List[str]:
    lines = [f"### {battery.number}. {battery.title}", ""]
    if not battery.failures:
        lines.append("No checks ran." if battery.checks == 0 else "No failures.")
        return lines + [""]
    lines.extend(["| Configuration | Check | Detail | Metadata |", "|---|---|---|---|"])
    for label, failure in battery.failures[:FAILURE_SAMPLE]:
        meta = ", ".join(f"{key}={value}" for key, value in sorted(failure.metadata.items()))
        lines.append(f"| {label} | {failure.name} | {failure.detail or ''} | {meta} |")
    hidden = len(battery.failures) - FAILURE_SAMPLE
    if hidden > 0:
        lines.append(f"\n{hidden} more failures not shown.")
    return lines + [""]


def build_report_content(result: AcceptanceResult) -> str:
    now = datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines: List[str] = [
        "# Jet Engine Acceptance Report",
        f"Generated at: {now}",
        "",
        "## Summary",
        f"- Verdict: {_verdict(result.ok)}",
        f"- Configurations: {', '.join(f'(m={run.m}, n={run.n})' for run in result.runs)}",
        f"- Order: {result.order}, samples per suite: {result.samples}, first seed: {result.seed}",
        f"- Total time: {result.seconds:.1f}s",
        "",
    ]
    lines.extend(_render_battery_table(result))
    lines.append("")

    failing = [battery for battery in result.batteries if not battery.ok]
    if failing:
        lines.append("## Failures")
        lines.append("")
        for battery in failing:
            lines.extend(_render_failures(battery))
    return "\n".join(lines)


def write_report(report_dir: Path, content: str) -> Path:
    """Write the latest report and a timestamped copy."""
    report_dir.mkdir(parents=True, exist_ok=True)
    latest_path = report_dir / "acceptance_latest.md"
    with latest_path.open("w", encoding="utf-8") as handle:
        handle.write(content)

    timestamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    dated_path = report_dir / f"acceptance_{timestamp}.md"
    with dated_path.open("w", encoding="utf-8") as handle:
        handle.write(content)

    return latest_path
