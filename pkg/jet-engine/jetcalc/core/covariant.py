"""Curvature tensors, covariant differentials and the formal curvature maps.

Index conventions (0-based array axes):

* classical curvature ``w[nu, rho, lam, mu]``, antisymmetric in ``(lam, mu)``;
* linear curvature ``u[j, i, lam, mu]``, antisymmetric in ``(lam, mu)``;
* every covariant differential appends one ``D`` slot at the end, so
  ``nabla^i R`` lists its differentiation slots left to right in the order
  the derivatives were taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from ..errors import DimensionMismatch, OrderError, ValenceError
from .fields import (
    EINSUM_LETTERS,
    ClassicalConnectionJet,
    LinearConnectionJet,
    SlotKind,
    SymmetryGroup,
    TensorFieldJet,
    Valence,
    alternate_slots,
    project_jet,
)
from .series import coeff_einsum, coeff_gradient, coeff_truncate

CLASSICAL_CURVATURE_VALENCE = Valence(
    (SlotKind.BASE_DOWN, SlotKind.BASE_UP, SlotKind.BASE_DOWN, SlotKind.BASE_DOWN),
    (SymmetryGroup((2, 3), -1),),
)
LINEAR_CURVATURE_VALENCE = Valence(
    (SlotKind.FIBER_DOWN, SlotKind.FIBER_UP, SlotKind.BASE_DOWN, SlotKind.BASE_DOWN),
    (SymmetryGroup((2, 3), -1),),
)
CURVATURE_KINDS = ("classical", "linear")


def curvature_valence(kind: str, i: int) -> Valence:
    """Valence of ``nabla^i`` of the classical (``W_i``) or linear (``U_i``) curvature."""
    if kind == "classical":
        return CLASSICAL_CURVATURE_VALENCE.with_differentials(i)
    if kind == "linear":
        return LINEAR_CURVATURE_VALENCE.with_differentials(i)
    raise ValenceError(f"unknown curvature kind {kind!r}")


@dataclass(frozen=True, eq=False)
class CurvatureDifferentialData:
    """Value at the origin of ``nabla^i R[Lambda]`` (``W_i``) or ``nabla^i R[K]`` (``U_i``)."""

    kind: str
    order: int
    tensor: TensorFieldJet

    def __post_init__(self) -> None:
        expected = curvature_valence(self.kind, self.order)
        if self.tensor.valence.slots != expected.slots:
            raise ValenceError(
                f"{self.kind} curvature differential of order {self.order} needs valence "
                f"({expected.label()}), got ({self.tensor.valence.label()})"
            )
        if self.tensor.order != 0:
            raise OrderError("curvature differential data are values at the origin")
        swapped = np.swapaxes(self.tensor.data, 2, 3)
        if not np.all(self.tensor.data == -swapped):
            raise ValenceError("curvature data must be antisymmetric in the (lambda, mu) pair")

    @property
    def m(self) -> int:
        return self.tensor.m

    @property
    def n(self) -> int:
        return self.tensor.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurvatureDifferentialData):
            return NotImplemented
        return (self.kind, self.order) == (other.kind, other.order) and self.tensor == other.tensor

    __hash__ = None  # type: ignore[assignment]


def _curvature_data(C: np.ndarray, m: int, order: int) -> np.ndarray:
    # R[a, b, lam, mu] = d_mu C[a,b,lam] - d_lam C[a,b,mu] + C[a,p,mu] C[p,b,lam] - C[a,p,lam] C[p,b,mu]
    grad = coeff_gradient(C, m, order)
    out = order - 1
    quad = coeff_einsum("apm,pbl->ablm", C, C, m, out)
    return (grad - np.swapaxes(grad, 2, 3)) + (quad - np.swapaxes(quad, 2, 3))


def curvature_classical(lam: ClassicalConnectionJet) -> TensorFieldJet:
    if lam.order < 1:
        raise OrderError("curvature needs a classical connection jet of order >= 1")
    data = _curvature_data(lam.data, lam.m, lam.order)
    return TensorFieldJet(lam.m, 0, CLASSICAL_CURVATURE_VALENCE, lam.order - 1, data)


def curvature_linear(K: LinearConnectionJet) -> TensorFieldJet:
    if K.order < 1:
        raise OrderError("curvature needs a linear connection jet of order >= 1")
    data = _curvature_data(K.data, K.m, K.order)
    return TensorFieldJet(K.m, K.n, LINEAR_CURVATURE_VALENCE, K.order - 1, data)


def _check_connections(
    t: TensorFieldJet,
    K: Optional[LinearConnectionJet],
    lam: Optional[ClassicalConnectionJet],
    what: str,
) -> None:
    if t.valence.has_fiber_slots:
        if K is None:
            raise ValenceError(f"{what} of a fiber-valued tensor needs a linear connection")
        if (K.m, K.n) != (t.m, t.n):
            raise DimensionMismatch("linear connection and tensor over different (m, n)")
    if t.valence.has_base_slots:
        if lam is None:
            raise ValenceError(f"{what} of a tensor with base slots needs a classical connection")
        if lam.m != t.m:
            raise DimensionMismatch("classical connection and tensor over different m")


def _slot_correction(data: np.ndarray, slot: int, rank: int, conn: np.ndarray, upper: bool,
                     m: int, order: int) -> np.ndarray:
    letters = EINSUM_LETTERS[:rank]
    extra, summed = EINSUM_LETTERS[rank], EINSUM_LETTERS[rank + 1]
    field_spec = letters[:slot] + summed + letters[slot + 1:]
    own = letters[slot]
    conn_spec = f"{summed}{own}" if upper else f"{own}{summed}"
    return coeff_einsum(f"{conn_spec}{extra},{field_spec}->{letters}{extra}", conn, data, m, order)


def covariant_differential(
    t: TensorFieldJet,
    K: Optional[LinearConnectionJet] = None,
    lam: Optional[ClassicalConnectionJet] = None,
) -> TensorFieldJet:
    """``nabla_nu t`` with respect to the pair ``(K, Lambda)``; appends one ``D`` slot.

    Upper slots get ``-C * t`` and lower slots ``+C * t`` with ``C`` the
    connection of the slot's range.
    """
    if t.order < 1:
        raise OrderError("covariant differential needs a tensor jet of order >= 1")
    _check_connections(t, K, lam, "covariant differential")
    m = t.m
    order = t.order - 1
    for kind in t.valence.slots:
        conn = K if kind.is_fiber else lam
        order = min(order, conn.order)
    data = coeff_truncate(coeff_gradient(t.data, m, t.order), m, order)
    for slot, kind in enumerate(t.valence.slots):
        conn = K.data if kind.is_fiber else lam.data
        correction = _slot_correction(t.data, slot, t.rank, conn, kind.is_upper, m, order)
        data = data - correction if kind.is_upper else data + correction
    return t.with_data(data, order, t.valence.with_differentials(1))


def iterated_covariant_differential(
    t: TensorFieldJet,
    K: Optional[LinearConnectionJet],
    lam: Optional[ClassicalConnectionJet],
    i: int,
) -> TensorFieldJet:
    if i < 0:
        raise OrderError("differential count must be non-negative")
    if t.order < i:
        raise OrderError(f"tensor jet of order {t.order} cannot be differentiated {i} times")
    out = t
    for _ in range(i):
        out = covariant_differential(out, K, lam)
    return out


def differential_chain(
    t: TensorFieldJet,
    K: Optional[LinearConnectionJet],
    lam: Optional[ClassicalConnectionJet],
    first: int,
    last: int,
) -> List[TensorFieldJet]:
    """Values at the origin of ``nabla^i t`` for ``first <= i <= last`` (one pass)."""
    values: List[TensorFieldJet] = []
    current = t
    for i in range(last + 1):
        if i >= first:
            values.append(current.at_origin())
        if i < last:
            current = covariant_differential(current, K, lam)
    return values


def formal_curvature_map_classical(lam: ClassicalConnectionJet, i: int) -> CurvatureDifferentialData:
    if i < 0 or lam.order < i + 1:
        raise OrderError(f"order-{i} classical curvature map needs a jet of order {i + 1}")
    lam = project_jet(lam, i + 1)
    w = curvature_classical(lam)
    value = iterated_covariant_differential(w, None, lam, i).at_origin()
    return CurvatureDifferentialData("classical", i, value)


def formal_curvature_map_linear(
    lam: Optional[ClassicalConnectionJet], K: LinearConnectionJet, i: int
) -> CurvatureDifferentialData:
    """``nabla^i R[K]`` at the origin; the classical jet is consumed to order ``i - 1`` only."""
    if i < 0 or K.order < i + 1:
        raise OrderError(f"order-{i} linear curvature map needs a linear jet of order {i + 1}")
    if i > 0 and (lam is None or lam.order < i - 1):
        raise OrderError(f"order-{i} linear curvature map needs a classical jet of order {i - 1}")
    K = project_jet(K, i + 1)
    u = curvature_linear(K)
    if i > 0:
        lam = project_jet(lam, i - 1)
    value = iterated_covariant_differential(u, K, lam, i).at_origin()
    return CurvatureDifferentialData("linear", i, value)


def curvature_chain_classical(lam: ClassicalConnectionJet, first: int, last: int) -> List[CurvatureDifferentialData]:
    """``[nabla^i R[Lambda](0)]`` for ``first <= i <= last``; empty when the range is."""
    if last < first:
        return []
    if lam.order < last + 1:
        raise OrderError(f"classical jet of order {lam.order} gives curvature differentials up to {lam.order - 1}")
    values = differential_chain(curvature_classical(lam), None, lam, first, last)
    return [CurvatureDifferentialData("classical", first + n, v) for n, v in enumerate(values)]


def curvature_chain_linear(
    lam: Optional[ClassicalConnectionJet], K: LinearConnectionJet, first: int, last: int
) -> List[CurvatureDifferentialData]:
    if last < first:
        return []
    if K.order < last + 1:
        raise OrderError(f"linear jet of order {K.order} gives curvature differentials up to {K.order - 1}")
    if last > 0 and (lam is None or lam.order < last - 1):
        raise OrderError(f"linear curvature differentials up to {last} need a classical jet of order {last - 1}")
    values = differential_chain(curvature_linear(K), K, lam if last > 0 else None, first, last)
    return [CurvatureDifferentialData("linear", first + n, v) for n, v in enumerate(values)]


def tensor_product_curvature_action(
    t: TensorFieldJet,
    u: Optional[TensorFieldJet],
    w: Optional[TensorFieldJet],
) -> TensorFieldJet:
    """Slot-wise curvature action on ``t``; appends an antisymmetric pair ``(a, b)``.

    Upper slots receive ``+R * t`` and lower slots ``-R * t``, with ``u`` acting
    on fiber slots and ``w`` on base slots.
    """
    if u is not None and u.valence.slots[:4] != LINEAR_CURVATURE_VALENCE.slots:
        raise ValenceError("linear curvature input needs valence (E*, E, T*, T*)")
    if w is not None and w.valence.slots[:4] != CLASSICAL_CURVATURE_VALENCE.slots:
        raise ValenceError("classical curvature input needs valence (T*, T, T*, T*)")
    if t.valence.has_fiber_slots and (u is None or u.rank != 4):
        raise ValenceError("curvature action on fiber slots needs the linear curvature")
    if t.valence.has_base_slots and (w is None or w.rank != 4):
        raise ValenceError("curvature action on base slots needs the classical curvature")
    m, rank = t.m, t.rank
    order = t.order
    for kind in t.valence.slots:
        order = min(order, (u if kind.is_fiber else w).order)
    letters = EINSUM_LETTERS[:rank]
    a, b, summed = EINSUM_LETTERS[rank: rank + 3]
    valence = Valence(
        t.valence.slots + (SlotKind.DIFF, SlotKind.DIFF),
        t.valence.symmetries + (SymmetryGroup((rank, rank + 1), -1),),
    )
    out = TensorFieldJet.zeros(m, t.n, valence, order)
    data = out.data
    for slot, kind in enumerate(t.valence.slots):
        curv = u.data if kind.is_fiber else w.data
        own = letters[slot]
        field_spec = letters[:slot] + summed + letters[slot + 1:]
        curv_spec = f"{summed}{own}{a}{b}" if kind.is_upper else f"{own}{summed}{a}{b}"
        term = coeff_einsum(f"{curv_spec},{field_spec}->{letters}{a}{b}", curv, t.data, m, order)
        data = data + term if kind.is_upper else data - term
    return out.with_data(data)


def alt_nabla2_curvature_oracle(u: TensorFieldJet, w: TensorFieldJet) -> TensorFieldJet:
    """Closed form of ``Alt nabla^2 R[K]`` as a quadratic expression in ``u`` and ``w``.

    Written out term by term (no slot loop) so it can be compared against the
    engine's second covariant differential.
    """
    m = u.m
    order = min(u.order, w.order)
    t1 = coeff_einsum("piab,jplm->jilmab", u.data, u.data, m, order)
    t2 = coeff_einsum("jpab,pilm->jilmab", u.data, u.data, m, order)
    t3 = coeff_einsum("loab,jiom->jilmab", w.data, u.data, m, order)
    t4 = coeff_einsum("moab,jilo->jilmab", w.data, u.data, m, order)
    data = (t1 - t2 - t3 - t4) * Fraction(-1, 2)
    valence = Valence(
        LINEAR_CURVATURE_VALENCE.slots + (SlotKind.DIFF, SlotKind.DIFF),
        LINEAR_CURVATURE_VALENCE.symmetries + (SymmetryGroup((4, 5), -1),),
    )
    return TensorFieldJet(m, u.n, valence, order, data)


def alternate_differential_pair(t: TensorFieldJet, first: int) -> TensorFieldJet:
    """Antisymmetrize two adjacent differentiation slots (0-based position ``first``)."""
    return alternate_slots(t, (first, first + 1))


__all__ = [
    "CLASSICAL_CURVATURE_VALENCE",
    "LINEAR_CURVATURE_VALENCE",
    "CurvatureDifferentialData",
    "curvature_valence",
    "curvature_classical",
    "curvature_linear",
    "covariant_differential",
    "iterated_covariant_differential",
    "differential_chain",
    "formal_curvature_map_classical",
    "formal_curvature_map_linear",
    "curvature_chain_classical",
    "curvature_chain_linear",
    "tensor_product_curvature_action",
    "alt_nabla2_curvature_oracle",
    "alternate_differential_pair",
]
