"""Named check suites behind ``jetcalc check`` and ``jetcalc selftest``.

Every check is exact: a result is ``ok`` only when the residual it inspects
is identically zero (or, for the pinned negative controls, when the recorded
outcome is reproduced).
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
import structlog
from pydantic import BaseModel

from ..errors import JetError, NonMembership
from .covariant import (
    CLASSICAL_CURVATURE_VALENCE,
    alt_nabla2_curvature_oracle,
    covariant_differential,
    curvature_classical,
    curvature_linear,
    differential_chain,
    formal_curvature_map_classical,
    formal_curvature_map_linear,
)
from .fields import (
    ClassicalConnectionJet,
    LinearConnectionJet,
    TensorFieldJet,
    Valence,
    alternate_last_pair,
    audit_symmetries,
    project_jet,
    random_fractions,
    random_jet,
    remove_labels,
    symmetric_part_classical,
    symmetric_part_linear,
)
from .groups import (
    act_on_classical,
    act_on_linear,
    act_on_tensor,
    group_identity,
    group_inv,
    group_mul,
    group_orders_first,
    group_orders_second,
    is_kernel_element,
    make_kernel_element,
    random_group_element,
)
from .identities import (
    bianchi_first_classical_residual,
    bianchi_generalized_linear_residual,
    bianchi_second_classical_residual,
    ricci_equation_residuals,
    ricci_identity_residual,
)
from .models import CheckReport, SolveTrace
from .operators import (
    OperatorInputs,
    equivariance_check,
    factorization_check,
    get_operator,
    operators_for,
    random_inputs,
)
from .pinned import PinnedManifest, load_pinned
from .reduction import (
    act_on_pair,
    act_on_triple,
    check_first_orders,
    check_second_orders,
    kernel_profile_first,
    kernel_profile_second,
    orbit_solve,
    orbit_solve_second,
    reconstruct_first,
    reconstruct_second,
    reduce_first,
    reduce_second,
)
from .series import (
    TruncatedSeries,
    coeff_einsum,
    coeff_invert_matrix,
    coeffs_equal,
    diffeo_invert,
    monomial_basis,
    multiplicity_factorial,
    series_compose,
    series_partial,
)

logger = structlog.get_logger(__name__)

FIELD_VALENCES: Tuple[Tuple[int, int, int, int], ...] = ((1, 0, 0, 0), (0, 1, 0, 1), (1, 1, 0, 0))
RICCI_VALENCES: Tuple[Tuple[int, int, int, int], ...] = (
    (1, 0, 0, 0),
    (0, 1, 0, 1),
    (1, 1, 0, 0),
    (0, 0, 1, 1),
    (1, 0, 1, 1),
)


class SuiteConfig(BaseModel):
    m: int = 2
    n: int = 2
    order: int = 3
    seed: int = 7
    samples: int = 2
    bound: int = 3
    k: Optional[int] = None

    def seeds(self) -> List[int]:
        return [self.seed + offset for offset in range(self.samples)]


Suite = Callable[[SuiteConfig, PinnedManifest], CheckReport]


def _new_report(name: str, config: SuiteConfig) -> CheckReport:
    return CheckReport(suite=name, config=config.model_dump())


def _guarded(report: CheckReport, name: str, check: Callable[[], Tuple[bool, Optional[str]]], **meta) -> None:
    """Record ``check()``; an engine error counts as a failure with its message."""
    try:
        ok, detail = check()
    except JetError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    report.record(name, ok, detail, **meta)


def _zero(t: TensorFieldJet) -> Tuple[bool, Optional[str]]:
    if t.is_zero():
        return True, None
    count = int(np.count_nonzero(t.data != 0))
    return False, f"{count} nonzero residual coefficients"


def _equal(a, b) -> Tuple[bool, Optional[str]]:
    return (True, None) if a == b else (False, "values differ")


# ---------- series ----------


def _random_series(rng: np.random.Generator, m: int, order: int, bound: int) -> TruncatedSeries:
    size = monomial_basis(m, order).size
    return TruncatedSeries(m, order, random_fractions(rng, (size,), bound))


def _chain_rule(a: TruncatedSeries, F: List[TruncatedSeries], axis: int) -> Tuple[bool, Optional[str]]:
    """``d(a o F)/dx^axis`` against ``sum_lam (d_lam a o F) dF^lam/dx^axis``."""
    lhs = series_partial(series_compose(a, F), axis)
    terms = [
        series_compose(series_partial(a, lam), F) * series_partial(F[lam - 1], axis)
        for lam in range(1, a.m + 1)
    ]
    rhs = terms[0]
    for term in terms[1:]:
        rhs = rhs + term
    return _equal(lhs, rhs)


def series_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    report = _new_report("series", config)
    m, order = config.m, config.order
    for seed in config.seeds():
        rng = np.random.default_rng([seed, 3])
        a, b, c = (_random_series(rng, m, order, config.bound) for _ in range(3))
        _guarded(report, "associativity", lambda: _equal((a * b) * c, a * (b * c)), seed=seed)
        _guarded(report, "distributivity", lambda: _equal(a * (b + c), a * b + a * c), seed=seed)
        for axis in range(1, m + 1):
            _guarded(
                report,
                "leibniz",
                lambda: _equal(series_partial(a * b, axis), series_partial(a, axis) * b + a * series_partial(b, axis)),
                seed=seed,
                axis=axis,
            )
        F = random_group_element(m, 1, order, 0, seed, config.bound).base.components()
        for axis in range(1, m + 1):
            _guarded(report, "chain_rule", lambda: _chain_rule(a, F, axis), seed=seed, axis=axis)

        def inversion() -> Tuple[bool, Optional[str]]:
            G = diffeo_invert(F)
            ident = [TruncatedSeries.variable(m, order, lam) for lam in range(1, m + 1)]
            both = [series_compose(F[lam], G) for lam in range(m)] + [series_compose(G[lam], F) for lam in range(m)]
            return _equal(both, ident + ident)

        _guarded(report, "diffeo_inversion", inversion, seed=seed)

        def matrix_inversion() -> Tuple[bool, Optional[str]]:
            M = random_group_element(m, config.n, order, order, seed + 1000, config.bound).gauge.data
            inv = coeff_invert_matrix(M, m, order)
            eye = group_identity(m, config.n, order, order).gauge.data
            return (coeffs_equal(coeff_einsum("ij,jk->ik", M, inv, m, order), eye), None)

        _guarded(report, "matrix_inversion", matrix_inversion, seed=seed)
    return report


# ---------- groups ----------


def groups_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    report = _new_report("groups", config)
    m, n, s = config.m, config.n, config.order
    t1, t2 = group_orders_second(s, s, s)
    valence = Valence.standard(p1=1, q1=1, q2=1)
    for seed in config.seeds():
        g1, g2, g3 = (random_group_element(m, n, t1, t2, seed + 100 * i, config.bound) for i in range(3))
        ident = group_identity(m, n, t1, t2)
        _guarded(report, "associativity",
                 lambda: _equal(group_mul(group_mul(g1, g2), g3), group_mul(g1, group_mul(g2, g3))), seed=seed)
        _guarded(report, "identity", lambda: _equal(group_mul(g1, ident), g1), seed=seed)
        _guarded(report, "inverse", lambda: _equal(group_mul(g1, group_inv(g1)), ident), seed=seed)
        _guarded(report, "double_inverse", lambda: _equal(group_inv(group_inv(g1)), g1), seed=seed)
        lam = random_jet("classical", m, n, s, seed, config.bound)
        K = random_jet("linear", m, n, s, seed, config.bound)
        t = random_jet("tensor", m, n, s, seed, config.bound, valence)
        g12 = group_mul(g1, g2)
        _guarded(report, "left_action_classical",
                 lambda: _equal(act_on_classical(g12, lam), act_on_classical(g1, act_on_classical(g2, lam))),
                 seed=seed)
        _guarded(report, "left_action_linear",
                 lambda: _equal(act_on_linear(g12, K), act_on_linear(g1, act_on_linear(g2, K))), seed=seed)
        _guarded(report, "left_action_tensor",
                 lambda: _equal(act_on_tensor(g12, t), act_on_tensor(g1, act_on_tensor(g2, t))), seed=seed)
        _guarded(report, "classical_symmetry_preserved",
                 lambda: (not audit_symmetries(act_on_classical(g1, lam)), None), seed=seed)
        h1 = make_kernel_element(m, n, (t1, t2, 1), seed, config.bound)
        h2 = make_kernel_element(m, n, (t1, t2, 1), seed + 1, config.bound)
        _guarded(report, "kernel_closure", lambda: (is_kernel_element(group_mul(h1, h2), 1), None), seed=seed)
    return report


# ---------- convention gate ----------


def _top_multi_index(rng: np.random.Generator, m: int, degree: int) -> Tuple[int, ...]:
    return tuple(sorted(int(v) for v in rng.integers(1, m + 1, size=degree)))


def _nonzero_fraction(rng: np.random.Generator, bound: int) -> Fraction:
    bound = max(bound, 1)
    num = int(rng.integers(1, bound + 1)) * (1 if rng.integers(0, 2) else -1)
    return Fraction(num, int(rng.integers(1, bound + 1)))


def classical_gate_case(lam: ClassicalConnectionJet, rho: int, M: Tuple[int, ...], value: Fraction):
    """Act by ``id + P`` with one top coefficient and predict the shifted jet.

    ``P^rho`` has the single jet coordinate ``value`` at ``M`` (``|M| = s + 2``);
    exactly the top coordinates ``Lambda_mu^rho_nu,N`` with ``{mu, nu} + N = M``
    move, each by ``value``.
    """
    m, s = lam.m, lam.order
    t1 = s + 2
    ident = group_identity(m, 1, t1, 0)
    base = ident.base.data.copy()
    base[rho - 1, monomial_basis(m, t1).position[M]] += value / multiplicity_factorial(M)
    g = replace(ident, base=replace(ident.base, data=base))
    expected = lam.data.copy()
    position = monomial_basis(m, s).position
    for mu in set(M):
        for nu in set(remove_labels(M, mu)):
            N = remove_labels(M, mu, nu)
            expected[mu - 1, rho - 1, nu - 1, position[N]] += value / multiplicity_factorial(N)
    return act_on_classical(g, lam), ClassicalConnectionJet.from_data(m, s, expected)


def linear_gate_case(K: LinearConnectionJet, i: int, j: int, M: Tuple[int, ...], value: Fraction):
    """Act by ``I + Q`` with one top gauge coefficient ``Q^i_j`` at ``M`` (``|M| = r + 1``)."""
    m, n, r = K.m, K.n, K.order
    ident = group_identity(m, n, r + 1, r + 1)
    gauge = ident.gauge.data.copy()
    gauge[i - 1, j - 1, monomial_basis(m, r + 1).position[M]] += value / multiplicity_factorial(M)
    g = replace(ident, gauge=replace(ident.gauge, data=gauge))
    expected = K.data.copy()
    position = monomial_basis(m, r).position
    for lam in set(M):
        N = remove_labels(M, lam)
        expected[j - 1, i - 1, lam - 1, position[N]] += value / multiplicity_factorial(N)
    return act_on_linear(g, K), LinearConnectionJet.from_data(m, n, r, expected)


def gate_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    report = _new_report("gate", config)
    m, n = config.m, config.n
    for seed in config.seeds():
        rng = np.random.default_rng([seed, 5])
        for order in range(0, config.order + 1):
            lam = random_jet("classical", m, n, order, seed, config.bound)
            rho = int(rng.integers(1, m + 1))
            M = _top_multi_index(rng, m, order + 2)
            value = _nonzero_fraction(rng, config.bound)
            acted, expected = classical_gate_case(lam, rho, M, value)
            _guarded(report, "classical_top_shift", lambda: _equal(acted, expected), seed=seed, order=order)

            def classical_symmetric_shift() -> Tuple[bool, Optional[str]]:
                diff = symmetric_part_classical(acted, order + 2) - symmetric_part_classical(lam, order + 2)
                return diff.value((rho,), M) == value, None

            _guarded(report, "classical_symmetric_shift", classical_symmetric_shift, seed=seed, order=order)

            K = random_jet("linear", m, n, order, seed, config.bound)
            i, j = (int(v) for v in rng.integers(1, n + 1, size=2))
            M = _top_multi_index(rng, m, order + 1)
            value = _nonzero_fraction(rng, config.bound)
            acted_K, expected_K = linear_gate_case(K, i, j, M, value)
            _guarded(report, "linear_top_shift", lambda: _equal(acted_K, expected_K), seed=seed, order=order)

            def linear_symmetric_shift() -> Tuple[bool, Optional[str]]:
                diff = symmetric_part_linear(acted_K, order + 1) - symmetric_part_linear(K, order + 1)
                return diff.value((j, i), M) == value, None

            _guarded(report, "linear_symmetric_shift", linear_symmetric_shift, seed=seed, order=order)
    return report


# ---------- identities ----------


def bianchi_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    report = _new_report("bianchi", config)
    m, n, s = config.m, config.n, config.order
    for seed in config.seeds():
        lam = random_jet("classical", m, n, s, seed, config.bound)
        K = random_jet("linear", m, n, s, seed, config.bound)
        w = curvature_classical(lam)
        u = curvature_linear(K)
        _guarded(report, "bianchi_first", lambda: _zero(bianchi_first_classical_residual(w)), seed=seed)
        if s >= 2:
            _guarded(report, "bianchi_second",
                     lambda: _zero(bianchi_second_classical_residual(covariant_differential(w, None, lam))),
                     seed=seed)
            _guarded(report, "bianchi_generalized",
                     lambda: _zero(bianchi_generalized_linear_residual(covariant_differential(u, K, lam))),
                     seed=seed)
    control = pinned.bianchi_random_tensor
    for seed in control.seeds:
        noise = random_jet("tensor", control.m, 1, control.order, seed, control.bound, CLASSICAL_CURVATURE_VALENCE)
        _guarded(report, "bianchi_first_negative_control",
                 lambda: (not bianchi_first_classical_residual(noise).is_zero(), None), seed=seed)
    return report


def ricci_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    report = _new_report("ricci", config)
    m, n, order = config.m, config.n, max(config.order, 2)
    for seed in config.seeds():
        lam = random_jet("classical", m, n, order, seed, config.bound)
        K = random_jet("linear", m, n, order, seed, config.bound)
        for counts in RICCI_VALENCES:
            t = random_jet("tensor", m, n, order, seed, config.bound, Valence.standard(*counts))
            _guarded(report, "ricci_identity", lambda: _zero(ricci_identity_residual(t, K, lam)),
                     seed=seed, valence=t.valence.label())
        if order >= 3:
            def oracle() -> Tuple[bool, Optional[str]]:
                u = curvature_linear(K)
                second = covariant_differential(covariant_differential(u, K, lam), K, lam)
                engine = project_jet(alternate_last_pair(second), 0)
                closed = project_jet(alt_nabla2_curvature_oracle(u, curvature_classical(lam)), 0)
                return coeffs_equal(engine.data, closed.data), None

            _guarded(report, "alt_nabla2_curvature_oracle", oracle, seed=seed)
    return report


# ---------- equivariance ----------


def equivariance_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    report = _new_report("equivariance", config)
    m, n, s = config.m, config.n, config.order
    t1, t2 = group_orders_second(s, s, s)
    valence = Valence.standard(p1=1, q2=1)
    for seed in config.seeds():
        g = random_group_element(m, n, t1, t2, seed, config.bound)
        lam = random_jet("classical", m, n, s, seed, config.bound)
        K = random_jet("linear", m, n, s, seed, config.bound)
        t = random_jet("tensor", m, n, s, seed, config.bound, valence)
        glam, gK, gt = act_on_classical(g, lam), act_on_linear(g, K), act_on_tensor(g, t)
        for i in range(0, min(3, s - 1) + 1):
            _guarded(report, "classical_curvature_map",
                     lambda: _equal(formal_curvature_map_classical(glam, i).tensor,
                                    act_on_tensor(g, formal_curvature_map_classical(lam, i).tensor)),
                     seed=seed, i=i)
            _guarded(report, "linear_curvature_map",
                     lambda: _equal(formal_curvature_map_linear(glam, gK, i).tensor,
                                    act_on_tensor(g, formal_curvature_map_linear(lam, K, i).tensor)),
                     seed=seed, i=i)
        for i in range(0, min(3, s) + 1):
            _guarded(report, "covariant_differential",
                     lambda: _equal(differential_chain(gt, gK, glam, i, i)[0],
                                    act_on_tensor(g, differential_chain(t, K, lam, i, i)[0])),
                     seed=seed, i=i)
        inputs = OperatorInputs(lam, K)
        for op in operators_for("first", natural=True):
            if op.missing(inputs, 1):
                continue
            _guarded(report, "operator_equivariance",
                     lambda: (equivariance_check(op, inputs, g, 1, seed).passed, None),
                     seed=seed, operator=op.name)
    for control in pinned.equivariance_probes:
        op = get_operator(control.operator)
        t1p, t2p = group_orders_first(*control.orders[:2])
        for seed in control.seeds:
            inputs = random_inputs(control.m, control.n, control.orders, seed, config.bound)
            g = random_group_element(control.m, control.n, t1p, t2p, seed, config.bound)
            _guarded(report, "probe_not_equivariant",
                     lambda: (not equivariance_check(op, inputs, g, control.k, seed).equal, None),
                     seed=seed, operator=op.name)
    return report


# ---------- reductions ----------


def _first_configs(config: SuiteConfig) -> Iterable[Tuple[int, int, int]]:
    s = r = config.order
    ks = [config.k] if config.k is not None else [1, 2, 3]
    for k in ks:
        try:
            check_first_orders(s, r, k)
        except JetError:
            continue
        yield s, r, k


def _second_configs(config: SuiteConfig) -> Iterable[Tuple[int, int, int, int]]:
    r = min(config.order, 3)
    shapes = [(r, r, r), (r + 1, r, r), (r, r + 1, r)]
    ks = [config.k] if config.k is not None else [1, 2]
    for s1, s2, rr in shapes:
        for k in ks:
            try:
                check_second_orders(s1, s2, rr, k)
            except JetError:
                continue
            yield s1, s2, rr, k


def _factorization_checks(report: CheckReport, family: str, inputs: OperatorInputs, k: int, seed: int) -> None:
    for op in operators_for(family, natural=True):
        problems = op.missing(inputs, k)
        if op.name == "nabla_Phi_k" and inputs.phi is not None and inputs.phi.order < k:
            problems.append("field order below k")
        if problems:
            continue
        _guarded(report, "factorization",
                 lambda: (factorization_check(op, inputs, k, seed).passed, None),
                 seed=seed, operator=op.name, k=k)


def _probe_checks(report: CheckReport, family: str, pinned: PinnedManifest, bound: int) -> None:
    for control in pinned.factorization_probes:
        op = get_operator(control.operator)
        if op.family != family:
            continue
        valence = Valence.standard(*control.field_counts) if control.field_valence else None
        for seed in control.seeds:
            inputs = random_inputs(control.m, control.n, control.orders, seed, bound, valence)
            _guarded(report, "probe_does_not_factor",
                     lambda: (factorization_check(op, inputs, control.k, seed).passed, None),
                     seed=seed, operator=op.name, k=control.k)


def first_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    report = _new_report("first", config)
    m, n = config.m, config.n
    for s, r, k in _first_configs(config):
        profile = kernel_profile_first(s, r, k)
        for seed in config.seeds():
            inputs = random_inputs(m, n, (s, r), seed, config.bound)
            lam, K = inputs.lam, inputs.K
            d = reduce_first(lam, K, k)
            h = make_kernel_element(m, n, profile, seed, config.bound)
            moved = act_on_pair(h, lam, K)
            _guarded(report, "kernel_invariance", lambda: _equal(reduce_first(*moved, k), d), seed=seed, k=k)

            def round_trip() -> Tuple[bool, Optional[str]]:
                (lam2, K2), trace = reconstruct_first(d)
                return reduce_first(lam2, K2, k) == d and trace.all_unique, None

            _guarded(report, "round_trip", round_trip, seed=seed, k=k)

            def orbit() -> Tuple[bool, Optional[str]]:
                found = orbit_solve((lam, K), moved, k)
                if found is None or not is_kernel_element(found, k):
                    return False, "no kernel element recovered"
                return _equal(act_on_pair(found, *moved), (lam, K))

            _guarded(report, "orbit_solve", orbit, seed=seed, k=k)
            _factorization_checks(report, "first", inputs, k, seed)
    _probe_checks(report, "first", pinned, config.bound)
    return report


def _perturbed(d, base_rank: int):
    """``d`` with one off-symmetric entry of its lowest field differential raised by one."""
    V = list(d.V)
    data = V[0].data.copy()
    index = (0,) * base_rank + (0, 1) + (0,) * (d.k - 2) + (0,)
    data[index] += 1
    V[0] = V[0].with_data(data)
    return replace(d, V=tuple(V))


def second_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    report = _new_report("second", config)
    m, n = config.m, config.n
    for s1, s2, r, k in _second_configs(config):
        profile = kernel_profile_second(s1, s2, r, k)
        for counts in FIELD_VALENCES:
            valence = Valence.standard(*counts)
            meta = {"orders": [s1, s2, r], "k": k, "valence": valence.label()}
            for seed in config.seeds():
                inputs = random_inputs(m, n, (s1, s2, r), seed, config.bound, valence)
                lam, K, phi = inputs.lam, inputs.K, inputs.phi
                d = reduce_second(lam, K, phi, k)
                h = make_kernel_element(m, n, profile, seed, config.bound)
                moved = act_on_triple(h, lam, K, phi)
                _guarded(report, "kernel_invariance", lambda: _equal(reduce_second(*moved, k), d), seed=seed, **meta)

                def round_trip() -> Tuple[bool, Optional[str]]:
                    (lam2, K2, phi2), trace = reconstruct_second(d)
                    return reduce_second(lam2, K2, phi2, k) == d and trace.all_unique, None

                _guarded(report, "round_trip", round_trip, seed=seed, **meta)

                def orbit() -> Tuple[bool, Optional[str]]:
                    found = orbit_solve_second((lam, K, phi), moved, k)
                    if found is None:
                        return False, "no kernel element recovered"
                    return _equal(act_on_triple(found, *moved), (lam, K, phi))

                _guarded(report, "orbit_solve", orbit, seed=seed, **meta)
                for kk in range(2, r + 1):
                    _guarded(report, "ricci_equations",
                             lambda: (all(res.is_zero() for res in ricci_equation_residuals(d, kk)), None),
                             seed=seed, ricci_order=kk, **meta)
                if k >= 2 and r >= k and m >= 2:
                    bad = _perturbed(d, phi.rank)

                    def detects() -> Tuple[bool, Optional[str]]:
                        residuals = ricci_equation_residuals(bad, k)
                        if all(res.is_zero() for res in residuals):
                            return False, "perturbation not detected"
                        try:
                            reconstruct_second(bad)
                        except NonMembership as exc:
                            return exc.stage == "ricci" and exc.order == k, None
                        return False, "perturbed data reconstructed"

                    _guarded(report, "ricci_perturbation_detected", detects, seed=seed, **meta)
                _factorization_checks(report, "second", inputs, k, seed)
    _probe_checks(report, "second", pinned, config.bound)
    return report


def trace_suite(config: SuiteConfig, pinned: PinnedManifest) -> CheckReport:
    """Every reconstruction system is consistent with a unique solution, order by order."""
    report = _new_report("trace", config)
    m, n = config.m, config.n
    traces: List[Tuple[Dict[str, object], Callable[[], SolveTrace]]] = []
    for seed in config.seeds():
        for s, r, k in _first_configs(config):
            inputs = random_inputs(m, n, (s, r), seed, config.bound)
            d = reduce_first(inputs.lam, inputs.K, k)
            traces.append(({"seed": seed, "kind": "first", "k": k}, lambda d=d: reconstruct_first(d)[1]))
        for s1, s2, r, k in _second_configs(config):
            inputs = random_inputs(m, n, (s1, s2, r), seed, config.bound)
            d2 = reduce_second(inputs.lam, inputs.K, inputs.phi, k)
            traces.append(({"seed": seed, "kind": "second", "k": k, "orders": [s1, s2, r]},
                           lambda d2=d2: reconstruct_second(d2)[1]))
    for meta, build in traces:
        def check(build=build) -> Tuple[bool, Optional[str]]:
            trace = build()
            bad = [f"{step.stage}@{step.order}" for step in trace.steps if not step.unique]
            return (not bad and bool(trace.steps)), ", ".join(bad) or None

        _guarded(report, "solve_trace_unique", check, **meta)
    return report


SUITES: Dict[str, Suite] = {
    "series": series_suite,
    "groups": groups_suite,
    "gate": gate_suite,
    "bianchi": bianchi_suite,
    "ricci": ricci_suite,
    "equivariance": equivariance_suite,
    "first": first_suite,
    "second": second_suite,
    "trace": trace_suite,
}

# suites after the gate are meaningless under a wrong action convention
GATED = ("equivariance", "first", "second", "trace")
ACCEPTANCE_DIMENSIONS: Tuple[Tuple[int, int], ...] = ((2, 1), (2, 2), (3, 2))


def run_suite(name: str, config: SuiteConfig, pinned: Optional[PinnedManifest] = None) -> CheckReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    report = SUITES[name](config, pinned if pinned is not None else load_pinned())
    logger.info("suite_finished", suite=name, ok=report.ok, checks=len(report.results),
                failures=len(report.failures))
    return report


def run_all(config: SuiteConfig, names: Optional[Iterable[str]] = None,
            pinned: Optional[PinnedManifest] = None) -> List[CheckReport]:
    """Run suites in order; a failing gate turns every gated suite into a recorded skip."""
    pinned = pinned if pinned is not None else load_pinned()
    reports: List[CheckReport] = []
    gate_ok = True
    for name in names or SUITES:
        if name in GATED and not gate_ok:
            skipped = _new_report(name, config)
            skipped.record("blocked_by_gate", False, "convention gate failed")
            reports.append(skipped)
            continue
        report = run_suite(name, config, pinned)
        if name == "gate":
            gate_ok = report.ok
        reports.append(report)
    return reports


__all__ = [
    "SuiteConfig",
    "SUITES",
    "GATED",
    "ACCEPTANCE_DIMENSIONS",
    "classical_gate_case",
    "linear_gate_case",
    "run_suite",
    "run_all",
]
