"""Command line: ``python -m jetcalc <command> [flags]``.

Every command writes versioned JSON documents, to the ``--out`` paths in
order and then to stdout, and is a pure function of its flags, seed and
input files.  Exit status is 0 when every asserted residual is exactly zero,
1 when one is not and 2 when the engine rejects the input (a ``report``
document describing the error is printed).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import structlog

from . import events
from .api import schemas
from .core.covariant import (
    curvature_classical,
    curvature_linear,
    formal_curvature_map_classical,
    formal_curvature_map_linear,
    iterated_covariant_differential,
)
from .core.fields import ClassicalConnectionJet, LinearConnectionJet, TensorFieldJet, Valence, random_jet
from .core.groups import (
    WGroupElement,
    act_on_classical,
    act_on_linear,
    act_on_tensor,
    group_orders_second,
    make_kernel_element,
    random_group_element,
)
from .core.models import CheckReport
from .core.operators import OperatorInputs, factorization_check, get_operator, random_inputs
from .core.pinned import load_pinned
from .core.reduction import (
    ReducedDataFirst,
    ReducedDataSecond,
    kernel_profile_first,
    kernel_profile_second,
    orbit_solve,
    orbit_solve_second,
    reconstruct_first,
    reconstruct_second,
    reduce_first,
    reduce_second,
)
from .core.suites import ACCEPTANCE_DIMENSIONS, GATED, SUITES, SuiteConfig, run_all
from .errors import JetError, SchemaError, ValenceError
from .settings import EngineSettings, load_settings

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_RESIDUAL = 1
EXIT_ERROR = 2

DEFAULT_ORDER = 2
SUITE_ORDER = 3
GEN_KINDS = ("classical", "linear", "tensor", "group", "kernel")


# ---------- Logging ----------


def configure_logging(level: str = "WARNING") -> None:
    """House structlog setup, rendered as JSON on stderr so stdout stays the command output."""
    numeric = getattr(logging, level.upper(), logging.WARNING)
    logging.basicConfig(
        level=numeric,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    structlog.configure(
        processors=[
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
    )


def _log_level(args: argparse.Namespace, settings: EngineSettings) -> str:
    if args.verbose >= 2:
        return "DEBUG"
    if args.verbose == 1:
        return "INFO"
    return settings.log_level


# ---------- flag helpers ----------


def _orders(args: argparse.Namespace, default: int = DEFAULT_ORDER) -> Tuple[int, int, int]:
    """``(classical, linear, field)`` orders; ``--order`` fills whichever is not given."""
    base = args.order if args.order is not None else default
    picked = [base if value is None else value for value in (args.order_classical, args.order_linear, args.order_field)]
    return picked[0], picked[1], picked[2]


def _seed(args: argparse.Namespace, settings: EngineSettings) -> int:
    return args.seed if args.seed is not None else settings.seed


def _bound(args: argparse.Namespace, settings: EngineSettings) -> int:
    return args.bound if args.bound is not None else settings.bound


def _k(args: argparse.Namespace) -> int:
    return args.k if args.k is not None else 1


def _valence(args: argparse.Namespace) -> Valence:
    try:
        counts = [int(part) for part in args.valence.split(",")]
    except ValueError:
        raise ValenceError(f"--valence expects comma separated slot counts p1,q1,p2,q2, got {args.valence!r}")
    if len(counts) != 4:
        raise ValenceError(f"--valence expects four slot counts p1,q1,p2,q2, got {len(counts)}")
    return Valence.standard(*counts)


def _read_inputs(args: argparse.Namespace) -> List[Any]:
    values = []
    for path in args.inputs:
        try:
            values.append(schemas.read_document(path))
        except SchemaError as exc:
            raise SchemaError(exc.reasons, path=f"{path}:{exc.path}") from exc
        except OSError as exc:
            raise SchemaError(f"cannot read input: {exc.strerror or exc}", path=str(path)) from exc
    return values


def _of_type(values: Sequence[Any], cls) -> List[Any]:
    return [value for value in values if isinstance(value, cls)]


def _one(values: Sequence[Any], cls, what: str, required: bool = True):
    found = _of_type(values, cls)
    if len(found) > 1:
        raise SchemaError(f"expected one {what} input, got {len(found)}", path="--in")
    if not found:
        if required:
            raise SchemaError(f"missing {what} input", path="--in")
        return None
    return found[0]


def _emit(args: argparse.Namespace, documents: Sequence[Any]) -> None:
    for position, document in enumerate(documents):
        if position < len(args.outputs):
            schemas.write_document(args.outputs[position], document)
        else:
            sys.stdout.write(schemas.dumps(document))


def _record(args: argparse.Namespace, kind: str, payload: Dict[str, Any]) -> None:
    if not args.no_ledger:
        events.record_event(kind, payload)


# ---------- commands ----------


def cmd_gen(args: argparse.Namespace, settings: EngineSettings) -> int:
    s, r, f = _orders(args)
    seed, bound = _seed(args, settings), _bound(args, settings)
    if args.kind == "classical":
        value = random_jet("classical", args.m, args.n, s, seed, bound)
    elif args.kind == "linear":
        value = random_jet("linear", args.m, args.n, r, seed, bound)
    elif args.kind == "tensor":
        value = random_jet("tensor", args.m, args.n, f, seed, bound, _valence(args))
    else:
        t1, t2 = group_orders_second(s, r, f)
        if args.kind == "group":
            value = random_group_element(args.m, args.n, t1, t2, seed, bound)
        else:
            value = make_kernel_element(args.m, args.n, (t1, t2, _k(args)), seed, bound)
    _emit(args, [value])
    return EXIT_OK


def _act(g: WGroupElement, value: Any) -> Any:
    if isinstance(value, ClassicalConnectionJet):
        return act_on_classical(g, value)
    if isinstance(value, LinearConnectionJet):
        return act_on_linear(g, value)
    if isinstance(value, TensorFieldJet):
        return act_on_tensor(g, value)
    raise SchemaError(f"cannot act on a {type(value).__name__}", path="--in")


def cmd_act(args: argparse.Namespace, settings: EngineSettings) -> int:
    values = _read_inputs(args)
    g = _one(values, WGroupElement, "group element")
    targets = [value for value in values if value is not g]
    if not targets:
        raise SchemaError("act needs a jet input besides the group element", path="--in")
    _emit(args, [_act(g, value) for value in targets])
    return EXIT_OK


def cmd_curvature(args: argparse.Namespace, settings: EngineSettings) -> int:
    values = _read_inputs(args)
    lam = _one(values, ClassicalConnectionJet, "classical connection", required=False)
    K = _one(values, LinearConnectionJet, "linear connection", required=False)
    if lam is None and K is None:
        raise SchemaError("curvature needs a classical or a linear connection input", path="--in")
    out = []
    if args.i is None:
        if lam is not None:
            out.append(curvature_classical(lam))
        if K is not None:
            out.append(curvature_linear(K))
    else:
        if lam is not None:
            out.append(formal_curvature_map_classical(lam, args.i))
        if K is not None:
            out.append(formal_curvature_map_linear(lam, K, args.i))
    _emit(args, out)
    return EXIT_OK


def cmd_covdiff(args: argparse.Namespace, settings: EngineSettings) -> int:
    values = _read_inputs(args)
    t = _one(values, TensorFieldJet, "tensor")
    lam = _one(values, ClassicalConnectionJet, "classical connection", required=False)
    K = _one(values, LinearConnectionJet, "linear connection", required=False)
    _emit(args, [iterated_covariant_differential(t, K, lam, args.times)])
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace, settings: EngineSettings) -> int:
    values = _read_inputs(args)
    lam = _one(values, ClassicalConnectionJet, "classical connection")
    K = _one(values, LinearConnectionJet, "linear connection")
    phi = _one(values, TensorFieldJet, "field", required=False)
    k = _k(args)
    reduced = reduce_first(lam, K, k) if phi is None else reduce_second(lam, K, phi, k)
    _emit(args, [reduced])
    return EXIT_OK


def cmd_reconstruct(args: argparse.Namespace, settings: EngineSettings) -> int:
    values = _read_inputs(args)
    d = _one(values, (ReducedDataFirst, ReducedDataSecond), "reduced data")
    if isinstance(d, ReducedDataFirst):
        jets, trace = reconstruct_first(d)
    else:
        jets, trace = reconstruct_second(d)
    logger.info("reconstructed", steps=len(trace.steps), unique=trace.all_unique, stages=trace.stages())
    out: List[Any] = list(jets)
    if args.trace:
        out.append(schemas.report_document({
            "command": "reconstruct",
            "unique": trace.all_unique,
            "trace": trace.model_dump(mode="json")["steps"],
        }))
    _emit(args, out)
    return EXIT_OK if trace.all_unique else EXIT_RESIDUAL


def _orbit_operands(args: argparse.Namespace, settings: EngineSettings) -> Tuple[tuple, tuple, int]:
    k = _k(args)
    values = _read_inputs(args)
    if values:
        lams = _of_type(values, ClassicalConnectionJet)
        Ks = _of_type(values, LinearConnectionJet)
        phis = _of_type(values, TensorFieldJet)
        if len(lams) != 2 or len(Ks) != 2 or len(phis) not in (0, 2):
            raise SchemaError("orbit needs two classical, two linear and optionally two field inputs", path="--in")
        return (lams[0], Ks[0], *phis[:1]), (lams[1], Ks[1], *phis[1:]), k

    s, r, f = _orders(args)
    seed, bound = _seed(args, settings), _bound(args, settings)
    if args.family == "first":
        inputs = random_inputs(args.m, args.n, (s, r), seed, bound)
        profile = kernel_profile_first(s, r, k)
    else:
        inputs = random_inputs(args.m, args.n, (s, r, f), seed, bound, _valence(args))
        profile = kernel_profile_second(s, r, f, k)
    moved = inputs.acted(make_kernel_element(args.m, args.n, profile, seed + 1, bound))
    if inputs.phi is None:
        return (inputs.lam, inputs.K), (moved.lam, moved.K), k
    return (inputs.lam, inputs.K, inputs.phi), (moved.lam, moved.K, moved.phi), k


def cmd_orbit(args: argparse.Namespace, settings: EngineSettings) -> int:
    first, second, k = _orbit_operands(args, settings)
    h = orbit_solve(first, second, k) if len(first) == 2 else orbit_solve_second(first, second, k)
    if h is None:
        _emit(args, [schemas.report_document({
            "command": "orbit",
            "k": k,
            "same_orbit": False,
            "reason": "reduced data differ",
        })])
        return EXIT_RESIDUAL
    _emit(args, [h])
    return EXIT_OK


def cmd_factorize(args: argparse.Namespace, settings: EngineSettings) -> int:
    op = get_operator(args.op)
    k = _k(args)
    values = _read_inputs(args)
    seed: Optional[int] = None
    if values:
        inputs = OperatorInputs(
            _one(values, ClassicalConnectionJet, "classical connection"),
            _one(values, LinearConnectionJet, "linear connection"),
            _one(values, TensorFieldJet, "field", required=op.family == "second"),
        )
    else:
        s, r, f = _orders(args)
        seed = _seed(args, settings)
        orders = (s, r) if op.family == "first" else (s, r, f)
        inputs = random_inputs(args.m, args.n, orders, seed, _bound(args, settings), _valence(args))
    report = factorization_check(op, inputs, k, seed)
    verdict = "residual = 0" if report.equal else f"residual != 0 ({report.residual_nonzero} coefficients)"
    payload = {"command": "factorize", **report.model_dump(mode="json"), "passed": report.passed, "verdict": verdict}
    _emit(args, [schemas.report_document(payload)])
    _record(args, "factorize_finished", {
        "operator": op.name, "k": k, "seed": seed, "equal": report.equal, "passed": report.passed,
    })
    return EXIT_OK if report.passed else EXIT_RESIDUAL


def _suite_summary(report: CheckReport) -> Dict[str, Any]:
    return {
        "suite": report.suite,
        "ok": report.ok,
        "checks": len(report.results),
        "failures": [failure.model_dump(mode="json") for failure in report.failures],
    }


def _suite_config(args: argparse.Namespace, settings: EngineSettings, m: int, n: int) -> SuiteConfig:
    return SuiteConfig(
        m=m,
        n=n,
        order=args.order if args.order is not None else SUITE_ORDER,
        seed=_seed(args, settings),
        samples=args.samples if args.samples is not None else settings.samples,
        bound=_bound(args, settings),
        k=args.k,
    )


def cmd_check(args: argparse.Namespace, settings: EngineSettings) -> int:
    config = _suite_config(args, settings, args.m, args.n)
    if args.suite == "all":
        names = list(SUITES)
    elif args.suite in GATED:
        names = ["gate", args.suite]
    else:
        names = [args.suite]
    reports = run_all(config, names, load_pinned(str(settings.pinned_seeds_path)))
    ok = all(report.ok for report in reports)
    _emit(args, [schemas.report_document({
        "command": "check",
        "config": config.model_dump(),
        "ok": ok,
        "suites": [_suite_summary(report) for report in reports],
    })])
    _record(args, "check_finished", {
        "suite": args.suite,
        "config": config.model_dump(),
        "ok": ok,
        "failures": sum(len(report.failures) for report in reports),
    })
    return EXIT_OK if ok else EXIT_RESIDUAL


def cmd_selftest(args: argparse.Namespace, settings: EngineSettings) -> int:
    pinned = load_pinned(str(settings.pinned_seeds_path))
    configurations = []
    for m, n in ACCEPTANCE_DIMENSIONS:
        config = _suite_config(args, settings, m, n)
        reports = run_all(config, None, pinned)
        configurations.append({
            "m": m,
            "n": n,
            "ok": all(report.ok for report in reports),
            "suites": [_suite_summary(report) for report in reports],
        })
    ok = all(entry["ok"] for entry in configurations)
    _emit(args, [schemas.report_document({"command": "selftest", "ok": ok, "configurations": configurations})])
    _record(args, "selftest_finished", {
        "ok": ok,
        "failed": [f"{entry['m']},{entry['n']}" for entry in configurations if not entry["ok"]],
    })
    return EXIT_OK if ok else EXIT_RESIDUAL


# ---------- parser ----------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=2, help="Base dimension (default: 2).")
    common.add_argument("--n", type=int, default=2, help="Fiber dimension (default: 2).")
    common.add_argument("--order", type=int, help="Default for every order flag below.")
    common.add_argument("--order-classical", type=int, help="Order of the classical connection jet.")
    common.add_argument("--order-linear", type=int, help="Order of the linear connection jet.")
    common.add_argument("--order-field", type=int, help="Order of the field jet.")
    common.add_argument("--k", type=int, help="Reduction order (default: 1; check runs every admissible k).")
    common.add_argument("--seed", type=int, help="Seed (default: JETCALC_SEED or 7).")
    common.add_argument("--bound", type=int, help="Bound on random numerators (default: JETCALC_BOUND or 3).")
    common.add_argument("--valence", default="1,0,0,0", help="Field slot counts p1,q1,p2,q2.")
    common.add_argument("--in", dest="inputs", type=Path, action="append", default=[],
                        help="Input document (repeatable).")
    common.add_argument("--out", dest="outputs", type=Path, action="append", default=[],
                        help="Output path for the next document (repeatable); the rest go to stdout.")
    common.add_argument("--verbose", "-v", action="count", default=0, help="Log INFO (-v) or DEBUG (-vv) to stderr.")
    common.add_argument("--no-ledger", action="store_true", help="Do not append to the run ledger.")

    parser = argparse.ArgumentParser(prog="jetcalc", description="Exact formal jet calculus engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="Seeded random jets and group elements.")
    gen.add_argument("--kind", choices=GEN_KINDS, default="classical")
    gen.set_defaults(handler=cmd_gen)

    act = sub.add_parser("act", parents=[common], help="Apply a group element to jets.")
    act.set_defaults(handler=cmd_act)

    curvature = sub.add_parser("curvature", parents=[common], help="Curvature jets or their differentials at 0.")
    curvature.add_argument("--i", type=int, help="Write nabla^i R(0) instead of the curvature jet.")
    curvature.set_defaults(handler=cmd_curvature)

    covdiff = sub.add_parser("covdiff", parents=[common], help="Iterated covariant differential of a tensor jet.")
    covdiff.add_argument("--times", type=int, default=1)
    covdiff.set_defaults(handler=cmd_covdiff)

    reduce = sub.add_parser("reduce", parents=[common], help="Reduced data of (Lambda, K) or (Lambda, K, Phi).")
    reduce.set_defaults(handler=cmd_reduce)

    reconstruct = sub.add_parser("reconstruct", parents=[common], help="Canonical jets from reduced data.")
    reconstruct.add_argument("--trace", action="store_true", help="Append the per-order solve trace.")
    reconstruct.set_defaults(handler=cmd_reconstruct)

    orbit = sub.add_parser("orbit", parents=[common], help="Kernel element relating two same-orbit inputs.")
    orbit.add_argument("--family", choices=("first", "second"), default="first",
                       help="Kind of generated operands when no --in is given.")
    orbit.set_defaults(handler=cmd_orbit)

    factorize = sub.add_parser("factorize", parents=[common], help="Factorization check of a sample operator.")
    factorize.add_argument("--op", required=True)
    factorize.set_defaults(handler=cmd_factorize)

    check = sub.add_parser("check", parents=[common], help="Run named identity suites.")
    check.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    check.add_argument("--samples", type=int, help="Seeds per suite (default: JETCALC_SAMPLES or 20).")
    check.set_defaults(handler=cmd_check)

    selftest = sub.add_parser("selftest", parents=[common], help="Every suite over the acceptance dimensions.")
    selftest.add_argument("--samples", type=int, help="Seeds per suite (default: JETCALC_SAMPLES or 20).")
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def _error_payload(command: str, exc: JetError) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "command": command,
        "error": type(exc).__name__,
        "message": str(exc),
        "reasons": list(exc.reasons),
    }
    for attr in ("path", "stage", "order"):
        if getattr(exc, attr, None) is not None:
            payload[attr] = getattr(exc, attr)
    return payload


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    settings = load_settings()
    configure_logging(_log_level(args, settings))
    try:
        code = args.handler(args, settings)
    except JetError as exc:
        logger.warning("command_failed", command=args.command, error=type(exc).__name__, message=str(exc))
        sys.stdout.write(schemas.dumps(schemas.report_document(_error_payload(args.command, exc))))
        return EXIT_ERROR
    logger.info("command_finished", command=args.command, exit_code=code)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
