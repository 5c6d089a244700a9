import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

CURRENT_FILE = Path(__file__).resolve()
REPO_ROOT = CURRENT_FILE.parents[2]
for path in (REPO_ROOT, REPO_ROOT / "jet-engine"):
    if str(path) not in sys.path:
        sys.path.append(str(path))

import structlog

from jetcalc.cli import configure_logging
from jetcalc.core.pinned import load_pinned
from jetcalc.core.suites import ACCEPTANCE_DIMENSIONS, SuiteConfig, run_all
from jetcalc.events import record_event
from jetcalc.settings import load_settings
from tools.acceptance.evaluate import AcceptanceResult, ConfigurationRun, evaluate_runs
from tools.acceptance.report import build_report_content, write_report

logger = structlog.get_logger(__name__)


def run_acceptance(
    order: int,
    samples: int,
    seed: int,
    bound: int,
    dimensions: Sequence[Tuple[int, int]] = ACCEPTANCE_DIMENSIONS,
    pinned_path: Optional[Path] = None,
) -> AcceptanceResult:
    pinned = load_pinned(str(pinned_path) if pinned_path else None)
    runs: List[ConfigurationRun] = []
    for m, n in dimensions:
        config = SuiteConfig(m=m, n=n, order=order, seed=seed, samples=samples, bound=bound)
        started = time.perf_counter()
        reports = run_all(config, None, pinned)
        elapsed = time.perf_counter() - started
        logger.info("configuration_finished", m=m, n=n, seconds=round(elapsed, 2),
                    ok=all(report.ok for report in reports))
        runs.append(ConfigurationRun(m=m, n=n, reports=reports, seconds=elapsed))
    return evaluate_runs(runs, order, samples, seed)


def _dimension(text: str) -> Tuple[int, int]:
    try:
        m, n = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected m,n, got {text!r}")
    return m, n


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = load_settings()
    parser = argparse.ArgumentParser(description="Run the jet engine acceptance batteries.")
    parser.add_argument("--order", type=int, default=3, help="Jet order of the suites (default: 3).")
    parser.add_argument("--samples", type=int, default=settings.samples, help="Seeds per suite.")
    parser.add_argument("--seed", type=int, default=settings.seed, help="First seed.")
    parser.add_argument("--bound", type=int, default=settings.bound, help="Bound on random numerators.")
    parser.add_argument(
        "--dims",
        type=_dimension,
        action="append",
        help="Configuration m,n (repeatable; default: the three acceptance configurations).",
    )
    parser.add_argument(
        "--report-dir",
        type=Path,
        default=settings.report_dir,
        help="Directory to write acceptance reports.",
    )
    args = parser.parse_args(list(argv) if argv is not None else None)
    configure_logging(settings.log_level)

    result = run_acceptance(
        args.order,
        args.samples,
        args.seed,
        args.bound,
        args.dims or ACCEPTANCE_DIMENSIONS,
        settings.pinned_seeds_path,
    )
    report_path = write_report(args.report_dir, build_report_content(result))
    record_event("acceptance_finished", {
        "ok": result.ok,
        "order": args.order,
        "samples": args.samples,
        "failed_batteries": [battery.number for battery in result.batteries if not battery.ok],
        "report": str(report_path),
    })
    print(f"Report written to {report_path}")
    return 0 if result.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
