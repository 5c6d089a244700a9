"""Residuals of the curvature identities and the membership tests built on them.

Each residual is a tensor that vanishes exactly when the identity holds; the
callers assert ``is_zero()`` rather than comparing floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from ..errors import JetError, NonMembership, OrderError, ValenceError
from .covariant import (
    CLASSICAL_CURVATURE_VALENCE,
    LINEAR_CURVATURE_VALENCE,
    CurvatureDifferentialData,
    covariant_differential,
    curvature_classical,
    curvature_linear,
    tensor_product_curvature_action,
)
from .fields import (
    AnyJet,
    ClassicalConnectionJet,
    LinearConnectionJet,
    TensorFieldJet,
    Valence,
    alternate_last_pair,
    alternate_slots,
)
from .models import SolveTrace
from .reduction import (
    reconstruct_classical_orders,
    reconstruct_connections_second,
    reconstruct_linear_orders,
    solve_field_orders,
)

logger = structlog.get_logger(__name__)

CurvatureInput = Union[TensorFieldJet, CurvatureDifferentialData]


def _tensor(value: CurvatureInput) -> TensorFieldJet:
    return value.tensor if isinstance(value, CurvatureDifferentialData) else value


def _expect(t: TensorFieldJet, prefix: Valence, rank: int, what: str) -> None:
    if t.valence.slots[:4] != prefix.slots or t.rank != rank:
        raise ValenceError(f"{what} expects a rank-{rank} tensor starting with ({prefix.label()})")


def reindex(data: np.ndarray, source: str, target: str) -> np.ndarray:
    """``out[target] = data[source]`` on the leading axes; the monomial axis stays last."""
    return np.einsum(f"{source}z->{target}z", data)


def _plain(t: TensorFieldJet, data: np.ndarray) -> TensorFieldJet:
    # a cyclic sum keeps no declared symmetry
    return t.with_data(data, valence=Valence(t.valence.slots))


def _cyclic_last_three(t: TensorFieldJet, fixed: str) -> TensorFieldJet:
    target = fixed + "lms"
    data = t.data + reindex(t.data, fixed + "msl", target) + reindex(t.data, fixed + "slm", target)
    return _plain(t, data)


def bianchi_first_classical_residual(w: CurvatureInput) -> TensorFieldJet:
    """``w[nu,rho,lam,mu] + w[lam,rho,mu,nu] + w[mu,rho,nu,lam]``."""
    t = _tensor(w)
    _expect(t, CLASSICAL_CURVATURE_VALENCE, 4, "first Bianchi residual")
    target = "nrlm"
    data = t.data + reindex(t.data, "lrmn", target) + reindex(t.data, "mrnl", target)
    return _plain(t, data)


def bianchi_second_classical_residual(dw: CurvatureInput) -> TensorFieldJet:
    """Cyclic sum of ``nabla w`` over its last three slots."""
    t = _tensor(dw)
    _expect(t, CLASSICAL_CURVATURE_VALENCE, 5, "second Bianchi residual")
    return _cyclic_last_three(t, "nr")


def bianchi_generalized_linear_residual(du: CurvatureInput) -> TensorFieldJet:
    """Cyclic sum of ``nabla u`` over its last three slots."""
    t = _tensor(du)
    _expect(t, LINEAR_CURVATURE_VALENCE, 5, "generalized Bianchi residual")
    return _cyclic_last_three(t, "ji")


def curvature_pair(
    t: TensorFieldJet,
    K: Optional[LinearConnectionJet],
    lam: Optional[ClassicalConnectionJet],
) -> Tuple[Optional[TensorFieldJet], Optional[TensorFieldJet]]:
    """Curvatures needed to act on ``t``; ``None`` when ``t`` has no slot of that range."""
    u = curvature_linear(K) if t.valence.has_fiber_slots else None
    w = curvature_classical(lam) if t.valence.has_base_slots else None
    return u, w


def ricci_identity_residual(
    t: TensorFieldJet,
    K: Optional[LinearConnectionJet],
    lam: ClassicalConnectionJet,
) -> TensorFieldJet:
    """``Alt nabla^2 t + 1/2 R o t`` on the last two slots."""
    if t.order < 2:
        raise OrderError("the Ricci identity needs a tensor jet of order >= 2")
    if lam is None:
        raise ValenceError("second covariant differentials need a classical connection")
    second = covariant_differential(covariant_differential(t, K, lam), K, lam)
    u, w = curvature_pair(t, K, lam)
    action = tensor_product_curvature_action(t, u, w)
    return alternate_last_pair(second) + action.scale(Fraction(1, 2))


def ricci_equation_residuals(candidate, k: int) -> List[TensorFieldJet]:
    """Residuals of the formal Ricci equations of orders ``2..k`` for second-kind reduced data.

    For every stored field differential ``V_i`` (``i <= k``) and every adjacent
    pair of its differentiation slots the residual is ``Alt(V_i - E_i)``, where
    ``E_i`` is what the lower-order jets rebuilt from the candidate contribute
    to ``nabla^i Phi``.  All residuals vanish iff the candidate lies in the
    Ricci subspace of order ``k``.
    """
    if not 2 <= k <= candidate.r:
        raise OrderError(f"Ricci equations are indexed by 2 <= k <= {candidate.r}, got {k}")
    lam, K, _ = reconstruct_connections_second(candidate)
    _, defects = solve_field_orders(candidate, lam, K, k)
    base_rank = candidate.phi_low.rank
    residuals: List[TensorFieldJet] = []
    for i, free in defects:
        for first in range(base_rank, base_rank + i - 1):
            residuals.append(alternate_slots(free, (first, first + 1)))
    return residuals


@dataclass(frozen=True)
class Membership:
    """Outcome of a reconstruction-based membership test."""

    member: bool
    witness: Optional[AnyJet] = None
    failing_order: Optional[int] = None
    reasons: Tuple[str, ...] = ()
    trace: Optional[SolveTrace] = None

    def __bool__(self) -> bool:
        return self.member


def _as_curvature(kind: str, value: CurvatureInput, i: int) -> CurvatureDifferentialData:
    if isinstance(value, CurvatureDifferentialData):
        if value.kind != kind or value.order != i:
            raise ValenceError(f"expected {kind} curvature differential of order {i}")
        return value
    return CurvatureDifferentialData(kind, i, value)


def c_space_membership(
    candidate: Sequence[CurvatureInput],
    kind: str,
    low: Optional[AnyJet] = None,
    lam: Optional[ClassicalConnectionJet] = None,
    m: Optional[int] = None,
    n: Optional[int] = None,
) -> Membership:
    """Decide whether a curvature-differential list is attained above the jet ``low``.

    ``candidate`` must list the differentials of orders ``p, p+1, ...`` where
    ``p`` is the order of ``low`` (``0`` when ``low`` is absent).  The linear
    kind also needs the classical jet ``lam`` that the differentials were
    taken with.  Membership is decided by attempting the reconstruction; the
    witness is the reconstructed connection jet.
    """
    if kind not in ("classical", "linear"):
        raise ValenceError(f"unknown curvature kind {kind!r}")
    first = 0 if low is None else low.order
    if not candidate:
        return Membership(True, witness=low)
    m = m if m is not None else _tensor(candidate[0]).m
    chain: Dict[int, CurvatureDifferentialData] = {}
    for offset, value in enumerate(candidate):
        i = first + offset
        try:
            chain[i] = _as_curvature(kind, value, i)
        except JetError as exc:
            return Membership(False, failing_order=i, reasons=tuple(exc.reasons))
    top = first + len(candidate)
    trace = SolveTrace()
    try:
        if kind == "classical":
            witness = reconstruct_classical_orders(m, low, chain, top, trace)
        else:
            n = n if n is not None else _tensor(candidate[0]).n
            witness = reconstruct_linear_orders(m, n, lam, low, chain, top, trace)
    except NonMembership as exc:
        logger.info("membership_rejected", kind=kind, stage=exc.stage, order=exc.order)
        failing = exc.order - 1 if exc.order is not None else None
        return Membership(False, failing_order=failing, reasons=tuple(exc.reasons), trace=trace)
    return Membership(True, witness=witness, trace=trace)


__all__ = [
    "reindex",
    "bianchi_first_classical_residual",
    "bianchi_second_classical_residual",
    "bianchi_generalized_linear_residual",
    "curvature_pair",
    "ricci_identity_residual",
    "ricci_equation_residuals",
    "Membership",
    "c_space_membership",
]
