"""Sample operators on connection (and field) jets and the checks run against them.

Natural operators are assembled from equivariant primitives only; the
``raw_*`` probes expose raw top-order coordinates and act as negative controls.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..errors import OrderError, ValenceError
from .covariant import (
    differential_chain,
    formal_curvature_map_classical,
    formal_curvature_map_linear,
    tensor_product_curvature_action,
)
from .fields import (
    AnyJet,
    ClassicalConnectionJet,
    LinearConnectionJet,
    SlotKind,
    TensorFieldJet,
    Valence,
    alternate_slots,
    contract,
    project_jet,
    random_jet,
    tensor_product,
)
from .groups import WGroupElement, act_on_classical, act_on_linear, act_on_tensor
from .models import EquivarianceReport, FactorizationReport
from .reduction import (
    act_on_pair,
    act_on_triple,
    reconstruct_first,
    reconstruct_second,
    reduce_first,
    reduce_second,
)
from .series import canonical_multi_index, monomial_basis, multiplicity_factorial

logger = structlog.get_logger(__name__)

RESIDUAL_SAMPLE = 20


@dataclass(frozen=True)
class OperatorInputs:
    lam: ClassicalConnectionJet
    K: LinearConnectionJet
    phi: Optional[TensorFieldJet] = None

    @property
    def orders(self) -> Tuple[int, ...]:
        base = (self.lam.order, self.K.order)
        return base if self.phi is None else base + (self.phi.order,)

    def acted(self, g: WGroupElement) -> "OperatorInputs":
        if self.phi is None:
            return OperatorInputs(*act_on_pair(g, self.lam, self.K))
        return OperatorInputs(*act_on_triple(g, self.lam, self.K, self.phi))


def random_inputs(
    m: int,
    n: int,
    orders: Sequence[int],
    seed: int,
    bound: int = 3,
    field_valence: Optional[Valence] = None,
) -> OperatorInputs:
    """Seeded ``(Lambda, K)`` of orders ``(s, r)``, or ``(Lambda, K, Phi)`` for ``(s1, s2, r)``."""
    lam = random_jet("classical", m, n, orders[0], seed, bound)
    K = random_jet("linear", m, n, orders[1], seed, bound)
    if len(orders) < 3:
        return OperatorInputs(lam, K)
    valence = field_valence if field_valence is not None else Valence.standard(p1=1)
    return OperatorInputs(lam, K, random_jet("tensor", m, n, orders[2], seed, bound, valence))


Recipe = Callable[[OperatorInputs, int], AnyJet]


@dataclass(frozen=True)
class SampleOperator:
    name: str
    family: str
    natural: bool
    output: str
    description: str
    recipe: Recipe
    min_lam: int = 0
    min_K: int = 0
    min_phi: int = 0
    min_k: int = 1

    def missing(self, inputs: OperatorInputs, k: int) -> List[str]:
        problems = []
        if inputs.lam.order < self.min_lam:
            problems.append(f"{self.name} needs a classical jet of order {self.min_lam}")
        if inputs.K.order < self.min_K:
            problems.append(f"{self.name} needs a linear jet of order {self.min_K}")
        if self.family == "second":
            if inputs.phi is None:
                problems.append(f"{self.name} needs a field jet")
            elif inputs.phi.order < self.min_phi:
                problems.append(f"{self.name} needs a field jet of order {self.min_phi}")
        if k < self.min_k:
            problems.append(f"{self.name} needs k >= {self.min_k}")
        return problems


def _u0(inputs: OperatorInputs) -> TensorFieldJet:
    return formal_curvature_map_linear(inputs.lam, inputs.K, 0).tensor


def _w0(inputs: OperatorInputs) -> TensorFieldJet:
    return formal_curvature_map_classical(inputs.lam, 0).tensor


def _trace_square(inputs: OperatorInputs, k: int) -> TensorFieldJet:
    u = _u0(inputs)
    once = contract(tensor_product(u, u), 1, 4)
    return contract(once, 3, 0)


def _ricci_classical(inputs: OperatorInputs, k: int) -> TensorFieldJet:
    return contract(_w0(inputs), 1, 2)


def _nabla_w_times_u(inputs: OperatorInputs, k: int) -> TensorFieldJet:
    dw = formal_curvature_map_classical(inputs.lam, 1).tensor
    return contract(tensor_product(dw, _u0(inputs)), 1, 7)


def _alt_nabla2_u(inputs: OperatorInputs, k: int) -> TensorFieldJet:
    return alternate_slots(formal_curvature_map_linear(inputs.lam, inputs.K, 2).tensor, (4, 5))


def _top_coordinates(t: TensorFieldJet) -> TensorFieldJet:
    """Raw top-order jet coordinates laid out as an order-0 carrier tensor."""
    q = t.order
    basis = monomial_basis(t.m, q)
    slots = t.valence.slots + (SlotKind.BASE_DOWN,) * q
    out = TensorFieldJet.zeros(t.m, t.n, Valence(slots), 0)
    for labels in product(range(t.m), repeat=q):
        mi = canonical_multi_index(label + 1 for label in labels)
        column = t.data[..., basis.position[mi]] * multiplicity_factorial(mi)
        out.data[(Ellipsis,) + labels + (0,)] = column
    return out


def _raw_K_top(inputs: OperatorInputs, k: int) -> TensorFieldJet:
    return _top_coordinates(inputs.K.field)


def _raw_lambda_top(inputs: OperatorInputs, k: int) -> TensorFieldJet:
    return _top_coordinates(inputs.lam.field)


def _nabla_phi(inputs: OperatorInputs, i: int) -> TensorFieldJet:
    return differential_chain(inputs.phi, inputs.K, inputs.lam, i, i)[0]


def _curvature_action_phi(inputs: OperatorInputs, k: int) -> TensorFieldJet:
    phi = inputs.phi.at_origin()
    u = _u0(inputs) if phi.valence.has_fiber_slots else None
    w = _w0(inputs) if phi.valence.has_base_slots else None
    return tensor_product_curvature_action(phi, u, w)


def _raw_phi_top(inputs: OperatorInputs, k: int) -> TensorFieldJet:
    return _top_coordinates(inputs.phi)


def _catalogue() -> Dict[str, SampleOperator]:
    ops = [
        SampleOperator("R_K", "first", True, "tensor", "linear curvature at the origin",
                       lambda x, k: _u0(x), min_K=1),
        SampleOperator("R_Lambda", "first", True, "tensor", "classical curvature at the origin",
                       lambda x, k: _w0(x), min_lam=1),
        SampleOperator("trR2", "first", True, "tensor", "u_j^i_lm u_i^j_ab",
                       _trace_square, min_K=1),
        SampleOperator("ricci_Lambda", "first", True, "tensor", "w_n^r_rm",
                       _ricci_classical, min_lam=1),
        SampleOperator("nabla_R_K", "first", True, "tensor", "first covariant differential of R[K]",
                       lambda x, k: formal_curvature_map_linear(x.lam, x.K, 1).tensor, min_K=2),
        SampleOperator("nabla_R_Lambda_R_K", "first", True, "tensor",
                       "nabla R[Lambda] (x) R[K] with the upper base index contracted",
                       _nabla_w_times_u, min_lam=2, min_K=1),
        SampleOperator("alt_nabla2_R_K", "first", True, "tensor",
                       "antisymmetrized second covariant differential of R[K]",
                       _alt_nabla2_u, min_lam=1, min_K=3),
        SampleOperator("low_jet_K", "first", True, "linear", "j^(k-1) K",
                       lambda x, k: project_jet(x.K, k - 1)),
        SampleOperator("raw_K_top", "first", False, "tensor", "raw top-order coordinates of K",
                       _raw_K_top),
        SampleOperator("raw_Lambda_top", "first", False, "tensor", "raw top-order coordinates of Lambda",
                       _raw_lambda_top),
        SampleOperator("nabla_Phi_k", "second", True, "tensor", "nabla^k Phi at the origin",
                       lambda x, k: _nabla_phi(x, k)),
        SampleOperator("Phi_low_jet", "second", True, "tensor", "j^(k-1) Phi",
                       lambda x, k: project_jet(x.phi, k - 1)),
        SampleOperator("curvature_action_Phi", "second", True, "tensor",
                       "curvature action on Phi at the origin",
                       _curvature_action_phi, min_lam=1, min_K=1),
        SampleOperator("R_K_Phi", "second", True, "tensor", "R[K] (x) Phi at the origin",
                       lambda x, k: tensor_product(_u0(x), x.phi.at_origin()), min_K=1),
        SampleOperator("nabla2_Phi", "second", True, "tensor", "nabla^2 Phi at the origin",
                       lambda x, k: _nabla_phi(x, 2), min_phi=2),
        SampleOperator("raw_Phi_top", "second", False, "tensor", "raw top-order coordinates of Phi",
                       _raw_phi_top),
    ]
    return {op.name: op for op in ops}


SAMPLE_OPERATORS: Dict[str, SampleOperator] = _catalogue()


def get_operator(name: str) -> SampleOperator:
    try:
        return SAMPLE_OPERATORS[name]
    except KeyError:
        raise ValenceError(f"unknown sample operator {name!r}; known: {', '.join(sorted(SAMPLE_OPERATORS))}")


def operators_for(family: str, natural: Optional[bool] = None) -> List[SampleOperator]:
    return [
        op for op in SAMPLE_OPERATORS.values()
        if op.family == family and (natural is None or op.natural == natural)
    ]


def evaluate_sample_operator(op: SampleOperator, inputs: OperatorInputs, k: int) -> AnyJet:
    problems = op.missing(inputs, k)
    if op.name == "nabla_Phi_k" and inputs.phi is not None and inputs.phi.order < k:
        problems.append(f"nabla_Phi_k needs a field jet of order {k}")
    if problems:
        raise OrderError(problems)
    return op.recipe(inputs, k)


def act_on_output(g: WGroupElement, op: SampleOperator, value: AnyJet) -> AnyJet:
    if op.output == "linear":
        return act_on_linear(g, value)
    if op.output == "classical":
        return act_on_classical(g, value)
    return act_on_tensor(g, value)


def _field(value: AnyJet) -> TensorFieldJet:
    return value if isinstance(value, TensorFieldJet) else value.field


def residual_entries(a: AnyJet, b: AnyJet, limit: int = RESIDUAL_SAMPLE) -> Tuple[int, Dict[str, str]]:
    """Count of differing coefficients and a readable sample of them."""
    fa, fb = _field(a), _field(b)
    if fa.data.shape != fb.data.shape:
        return -1, {"shape": f"{fa.data.shape} vs {fb.data.shape}"}
    diff = fa.data - fb.data
    nonzero = [idx for idx, value in np.ndenumerate(diff) if value != 0]
    sample = {",".join(str(i + 1) for i in idx): str(diff[idx]) for idx in nonzero[:limit]}
    return len(nonzero), sample


def reduce_and_reconstruct(op: SampleOperator, inputs: OperatorInputs, k: int) -> OperatorInputs:
    if op.family == "first":
        (lam, K), _ = reconstruct_first(reduce_first(inputs.lam, inputs.K, k))
        return OperatorInputs(lam, K)
    (lam, K, phi), _ = reconstruct_second(reduce_second(inputs.lam, inputs.K, inputs.phi, k))
    return OperatorInputs(lam, K, phi)


def factorization_check(
    op: SampleOperator, inputs: OperatorInputs, k: int, seed: Optional[int] = None
) -> FactorizationReport:
    """Compare the operator on the jets and on the canonical representative of their reduced data."""
    direct = evaluate_sample_operator(op, inputs, k)
    through = evaluate_sample_operator(op, reduce_and_reconstruct(op, inputs, k), k)
    count, sample = residual_entries(direct, through)
    report = FactorizationReport(
        operator=op.name,
        natural=op.natural,
        k=k,
        seed=seed,
        equal=count == 0,
        residual_nonzero=count,
        residual=sample,
    )
    logger.info("factorization_checked", operator=op.name, k=k, seed=seed, equal=report.equal)
    return report


def equivariance_check(
    op: SampleOperator, inputs: OperatorInputs, g: WGroupElement, k: int = 1, seed: Optional[int] = None
) -> EquivarianceReport:
    """``op(g . jets)`` against ``g . op(jets)``."""
    lhs = evaluate_sample_operator(op, inputs.acted(g), k)
    rhs = act_on_output(g, op, evaluate_sample_operator(op, inputs, k))
    count, sample = residual_entries(lhs, rhs)
    report = EquivarianceReport(
        operator=op.name,
        natural=op.natural,
        seed=seed,
        equal=count == 0,
        residual_nonzero=count,
        residual=sample,
    )
    logger.info("equivariance_checked", operator=op.name, seed=seed, equal=report.equal)
    return report


__all__ = [
    "OperatorInputs",
    "SampleOperator",
    "random_inputs",
    "SAMPLE_OPERATORS",
    "get_operator",
    "operators_for",
    "evaluate_sample_operator",
    "act_on_output",
    "residual_entries",
    "reduce_and_reconstruct",
    "factorization_check",
    "equivariance_check",
]
