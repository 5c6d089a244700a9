"""Reduction of connection (and field) jets to their invariant data, and back.

``reduce_first`` / ``reduce_second`` keep the low-order jets plus the
covariant differentials of curvature (and of the field).  The reconstruction
walks the jet orders upwards: at every order the top coordinates enter the
curvature differentials linearly, so they are the solution of an exact affine
system made of

* the symmetrized top coordinates, fixed to zero (or to prescribed data), and
* the prescribed curvature differential minus what the lower orders already
  contribute (computed by the engine itself with the top order zeroed).

The system splits into independent blocks keyed by the upper index and the
multiset of all lower indices; every block is solved with
``linalg.solve_exact``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..errors import DimensionMismatch, NonMembership, OrderError, PreconditionError, ValenceError
from .covariant import (
    CurvatureDifferentialData,
    curvature_chain_classical,
    curvature_chain_linear,
    differential_chain,
    iterated_covariant_differential,
)
from .fields import (
    ClassicalConnectionJet,
    LinearConnectionJet,
    SymmetricJetPart,
    TensorFieldJet,
    classical_symmetrization_weights,
    linear_symmetrization_weights,
    pad_jet,
    project_jet,
    remove_labels,
    symmetric_part_classical,
    symmetric_part_linear,
    symmetrize_slots,
)
from .groups import (
    DiffeoJet,
    GaugeJet,
    WGroupElement,
    act_on_classical,
    act_on_linear,
    act_on_tensor,
    group_identity,
    group_mul,
    group_orders_first,
    group_orders_second,
)
from .linalg import solve_exact
from .models import SolveStep, SolveTrace
from .series import ZERO, canonical_multi_index, monomial_basis, multiplicity_factorial

logger = structlog.get_logger(__name__)


# ---------- reduced data ----------


def _chain_orders(chain: Sequence[CurvatureDifferentialData]) -> List[int]:
    return [c.order for c in chain]


def check_first_orders(s: int, r: int, k: int) -> None:
    problems = []
    if min(s, r) < 0:
        problems.append(f"orders must be non-negative, got s={s}, r={r}")
    if s < r - 2:
        problems.append(f"s={s} must be at least r-2={r - 2}")
    if not 1 <= k <= s + 2:
        problems.append(f"k={k} must satisfy 1 <= k <= s+2={s + 2}")
    if k > r + 1:
        problems.append(f"k={k} must not exceed r+1={r + 1}")
    if problems:
        raise PreconditionError(problems)


def check_second_orders(s1: int, s2: int, r: int, k: int) -> None:
    problems = []
    if min(s1, s2, r) < 0:
        problems.append(f"orders must be non-negative, got s1={s1}, s2={s2}, r={r}")
    if s1 < s2 - 2:
        problems.append(f"s1={s1} must be at least s2-2={s2 - 2}")
    if min(s1, s2) < r - 1:
        problems.append(f"s1={s1} and s2={s2} must be at least r-1={r - 1}")
    if not 1 <= k <= r + 1:
        problems.append(f"k={k} must satisfy 1 <= k <= r+1={r + 1}")
    if problems:
        raise PreconditionError(problems)


@dataclass(frozen=True, eq=False)
class ReducedDataFirst:
    """``(j^(k-2) Lambda, j^(k-1) K, [nabla^i R[Lambda]], [nabla^i R[K]])``."""

    m: int
    n: int
    s: int
    r: int
    k: int
    lam_low: Optional[ClassicalConnectionJet]
    K_low: LinearConnectionJet
    R_C: Tuple[CurvatureDifferentialData, ...] = ()
    R_L: Tuple[CurvatureDifferentialData, ...] = ()

    def __post_init__(self) -> None:
        check_first_orders(self.s, self.r, self.k)
        object.__setattr__(self, "R_C", tuple(self.R_C))
        object.__setattr__(self, "R_L", tuple(self.R_L))
        problems = []
        if (self.lam_low is None) != (self.k == 1):
            problems.append("the classical low jet is present exactly when k >= 2")
        if self.lam_low is not None and self.lam_low.order != self.k - 2:
            problems.append(f"classical low jet must have order {self.k - 2}")
        if self.K_low.order != self.k - 1:
            problems.append(f"linear low jet must have order {self.k - 1}")
        if _chain_orders(self.R_C) != list(range(max(self.k - 2, 0), self.s)):
            problems.append(f"classical curvature differentials must cover {max(self.k - 2, 0)}..{self.s - 1}")
        if _chain_orders(self.R_L) != list(range(self.k - 1, self.r)):
            problems.append(f"linear curvature differentials must cover {self.k - 1}..{self.r - 1}")
        if any(c.kind != "classical" for c in self.R_C) or any(c.kind != "linear" for c in self.R_L):
            problems.append("curvature lists hold the wrong kind")
        if problems:
            raise ValenceError(problems)

    def curvature_classical(self) -> Dict[int, CurvatureDifferentialData]:
        return {c.order: c for c in self.R_C}

    def curvature_linear(self) -> Dict[int, CurvatureDifferentialData]:
        return {c.order: c for c in self.R_L}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReducedDataFirst):
            return NotImplemented
        return (
            (self.m, self.n, self.s, self.r, self.k) == (other.m, other.n, other.s, other.r, other.k)
            and self.lam_low == other.lam_low
            and self.K_low == other.K_low
            and self.R_C == other.R_C
            and self.R_L == other.R_L
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class ReducedDataSecond:
    """Reduced data of ``(Lambda, K, Phi)``; ``V`` holds ``nabla^i Phi(0)`` for ``k <= i <= r``.

    ``K_sym_top`` carries the symmetrized order-``(k-1)`` coordinates of ``K``;
    kernel elements leave them alone and nothing else in the data fixes them.
    """

    m: int
    n: int
    s1: int
    s2: int
    r: int
    k: int
    lam_low: Optional[ClassicalConnectionJet]
    K_low: Optional[LinearConnectionJet]
    K_sym_top: Optional[SymmetricJetPart]
    phi_low: TensorFieldJet
    R_C: Tuple[CurvatureDifferentialData, ...] = ()
    R_L: Tuple[CurvatureDifferentialData, ...] = ()
    V: Tuple[TensorFieldJet, ...] = ()

    def __post_init__(self) -> None:
        check_second_orders(self.s1, self.s2, self.r, self.k)
        for name in ("R_C", "R_L", "V"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        k = self.k
        first = max(k - 2, 0)
        problems = []
        for name, jet in (("classical", self.lam_low), ("linear", self.K_low)):
            if (jet is None) != (k == 1):
                problems.append(f"the {name} low jet is present exactly when k >= 2")
            elif jet is not None and jet.order != k - 2:
                problems.append(f"{name} low jet must have order {k - 2}")
        if (self.K_sym_top is None) != (self.s2 < k - 1):
            problems.append("the symmetrized linear top part is present exactly when s2 >= k-1")
        elif self.K_sym_top is not None and self.K_sym_top.degree != k:
            problems.append(f"the symmetrized linear top part must have degree {k}")
        if self.phi_low.order != k - 1:
            problems.append(f"field low jet must have order {k - 1}")
        if _chain_orders(self.R_C) != list(range(first, self.s1)):
            problems.append(f"classical curvature differentials must cover {first}..{self.s1 - 1}")
        if _chain_orders(self.R_L) != list(range(first, self.s2)):
            problems.append(f"linear curvature differentials must cover {first}..{self.s2 - 1}")
        if len(self.V) != max(self.r - k + 1, 0):
            problems.append(f"field differentials must cover {k}..{self.r}")
        for i, value in enumerate(self.V, start=k):
            expected = self.phi_low.valence.with_differentials(i).slots
            if value.valence.slots != expected or value.order != 0:
                problems.append(f"field differential of order {i} has the wrong valence or order")
        if problems:
            raise ValenceError(problems)

    def field_differential(self, i: int) -> TensorFieldJet:
        if not self.k <= i <= self.r:
            raise OrderError(f"field differential {i} outside {self.k}..{self.r}")
        return self.V[i - self.k]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReducedDataSecond):
            return NotImplemented
        return (
            (self.m, self.n, self.s1, self.s2, self.r, self.k)
            == (other.m, other.n, other.s1, other.s2, other.r, other.k)
            and self.lam_low == other.lam_low
            and self.K_low == other.K_low
            and self.K_sym_top == other.K_sym_top
            and self.phi_low == other.phi_low
            and self.R_C == other.R_C
            and self.R_L == other.R_L
            and self.V == other.V
        )

    __hash__ = None  # type: ignore[assignment]


def symmetrize_classical(lam: ClassicalConnectionJet) -> List[SymmetricJetPart]:
    """Symmetrized coordinates of every order, degrees ``2..s+2``."""
    return [symmetric_part_classical(lam, degree) for degree in range(2, lam.order + 3)]


def symmetrize_linear(K: LinearConnectionJet) -> List[SymmetricJetPart]:
    """Symmetrized coordinates of every order, degrees ``1..r+1``."""
    return [symmetric_part_linear(K, degree) for degree in range(1, K.order + 2)]


def reduce_first(lam: ClassicalConnectionJet, K: LinearConnectionJet, k: int) -> ReducedDataFirst:
    if lam.m != K.m:
        raise DimensionMismatch("classical and linear jets over different m")
    s, r = lam.order, K.order
    check_first_orders(s, r, k)
    return ReducedDataFirst(
        m=K.m,
        n=K.n,
        s=s,
        r=r,
        k=k,
        lam_low=project_jet(lam, k - 2) if k >= 2 else None,
        K_low=project_jet(K, k - 1),
        R_C=curvature_chain_classical(lam, max(k - 2, 0), s - 1),
        R_L=curvature_chain_linear(lam, K, k - 1, r - 1),
    )


def reduce_second(
    lam: ClassicalConnectionJet, K: LinearConnectionJet, phi: TensorFieldJet, k: int
) -> ReducedDataSecond:
    if lam.m != K.m or K.m != phi.m:
        raise DimensionMismatch("jets over different m")
    if phi.valence.has_fiber_slots and phi.n != K.n:
        raise DimensionMismatch("field and linear connection over different n")
    s1, s2, r = lam.order, K.order, phi.order
    check_second_orders(s1, s2, r, k)
    first = max(k - 2, 0)
    return ReducedDataSecond(
        m=K.m,
        n=K.n,
        s1=s1,
        s2=s2,
        r=r,
        k=k,
        lam_low=project_jet(lam, k - 2) if k >= 2 else None,
        K_low=project_jet(K, k - 2) if k >= 2 else None,
        K_sym_top=symmetric_part_linear(K, k) if s2 >= k - 1 else None,
        phi_low=project_jet(phi, k - 1),
        R_C=curvature_chain_classical(lam, first, s1 - 1),
        R_L=curvature_chain_linear(lam, K, first, s2 - 1),
        V=differential_chain(phi, K, lam, k, r) if r >= k else [],
    )


# ---------- order-by-order affine solver ----------


@dataclass
class _Block:
    unknowns: List[Hashable] = field(default_factory=list)
    index: Dict[Hashable, int] = field(default_factory=dict)
    rows: List[Dict[int, Fraction]] = field(default_factory=list)
    rhs: List[Fraction] = field(default_factory=list)

    def add(self, coefficients: Dict[Hashable, Fraction], value: Fraction) -> None:
        row: Dict[int, Fraction] = {}
        for key, coefficient in coefficients.items():
            if key not in self.index:
                self.index[key] = len(self.unknowns)
                self.unknowns.append(key)
            row[self.index[key]] = row.get(self.index[key], ZERO) + Fraction(coefficient)
        self.rows.append(row)
        self.rhs.append(Fraction(value))


def _solve_blocks(stage: str, order: int, blocks: Dict[Hashable, _Block], trace: SolveTrace) -> Dict[Hashable, Fraction]:
    solution: Dict[Hashable, Fraction] = {}
    unknowns = equations = rank = 0
    failed = []
    for key, block in blocks.items():
        size = len(block.unknowns)
        dense = [[row.get(c, ZERO) for c in range(size)] for row in block.rows]
        result = solve_exact(dense, block.rhs, size)
        unknowns += size
        equations += result.equations
        rank += result.rank
        if not result.consistent:
            failed.append(key)
            continue
        solution.update(zip(block.unknowns, result.solution))
    step = SolveStep(
        stage=stage, order=order, unknowns=unknowns, equations=equations, rank=rank, consistent=not failed
    )
    trace.add(step)
    logger.debug(
        "reconstruction_order_solved",
        stage=stage,
        order=order,
        unknowns=unknowns,
        equations=equations,
        rank=rank,
        consistent=not failed,
    )
    if failed:
        raise NonMembership(
            [f"{len(failed)} inconsistent block(s), first {failed[0]}"], stage=stage, order=order
        )
    return solution


def _origin_values(t: TensorFieldJet) -> np.ndarray:
    return t.data[..., 0]


def _coordinate_slot(mi: Sequence[int]) -> Tuple[int, Fraction]:
    key = canonical_multi_index(mi)
    return key, Fraction(1, multiplicity_factorial(key))


def _classical_key(a: int, rho: int, b: int, mi: Sequence[int]) -> Tuple:
    return (min(a, b), rho, max(a, b), canonical_multi_index(mi))


def _solve_classical_order(
    current: ClassicalConnectionJet,
    q: int,
    target: Optional[CurvatureDifferentialData],
    prescribed: Optional[SymmetricJetPart],
    trace: SolveTrace,
) -> ClassicalConnectionJet:
    m = current.m
    if current.order >= q:
        raise OrderError(f"classical jet already has order {current.order}")
    base = pad_jet(current, q)
    blocks: Dict[Hashable, _Block] = {}
    labels = range(1, m + 1)
    for rho in labels:
        for T in combinations_with_replacement(labels, q + 2):
            row = {
                _classical_key(a, rho, b, remove_labels(T, a, b)): w
                for a, b, w in classical_symmetrization_weights(T)
            }
            value = prescribed.value((rho,), T) if prescribed is not None else ZERO
            blocks.setdefault((rho, T), _Block()).add(row, value)
    if q >= 1:
        pol = _origin_values(curvature_chain_classical(base, q - 1, q - 1)[0].tensor)
        W = _origin_values(target.tensor)
        for idx in np.ndindex(W.shape):
            nu, rho, lam, mu, *sigma = (v + 1 for v in idx)
            if lam >= mu:
                continue
            row = {
                _classical_key(nu, rho, lam, (mu, *sigma)): 1,
                _classical_key(nu, rho, mu, (lam, *sigma)): -1,
            }
            key = (rho, canonical_multi_index((nu, lam, mu, *sigma)))
            blocks.setdefault(key, _Block()).add(row, W[idx] - pol[idx])
    solution = _solve_blocks("classical", q, blocks, trace)
    data = base.data.copy()
    position = monomial_basis(m, q).position
    for (a, rho, b, mi), value in solution.items():
        scaled = value * _coordinate_slot(mi)[1]
        pos = position[mi]
        data[a - 1, rho - 1, b - 1, pos] = scaled
        data[b - 1, rho - 1, a - 1, pos] = scaled
    return ClassicalConnectionJet.from_data(m, q, data)


def _solve_linear_order(
    current: LinearConnectionJet,
    lam: Optional[ClassicalConnectionJet],
    q: int,
    target: Optional[CurvatureDifferentialData],
    prescribed: Optional[SymmetricJetPart],
    trace: SolveTrace,
) -> LinearConnectionJet:
    m, n = current.m, current.n
    if current.order >= q:
        raise OrderError(f"linear jet already has order {current.order}")
    base = pad_jet(current, q)
    blocks: Dict[Hashable, _Block] = {}
    labels = range(1, m + 1)
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            for T in combinations_with_replacement(labels, q + 1):
                row = {
                    (j, i, a, canonical_multi_index(remove_labels(T, a))): w
                    for a, w in linear_symmetrization_weights(T)
                }
                value = prescribed.value((j, i), T) if prescribed is not None else ZERO
                blocks.setdefault((j, i, T), _Block()).add(row, value)
    if q >= 1:
        pol = _origin_values(curvature_chain_linear(lam, base, q - 1, q - 1)[0].tensor)
        U = _origin_values(target.tensor)
        for idx in np.ndindex(U.shape):
            j, i, lam_, mu, *sigma = (v + 1 for v in idx)
            if lam_ >= mu:
                continue
            row = {
                (j, i, lam_, canonical_multi_index((mu, *sigma))): 1,
                (j, i, mu, canonical_multi_index((lam_, *sigma))): -1,
            }
            key = (j, i, canonical_multi_index((lam_, mu, *sigma)))
            blocks.setdefault(key, _Block()).add(row, U[idx] - pol[idx])
    solution = _solve_blocks("linear", q, blocks, trace)
    data = base.data.copy()
    position = monomial_basis(m, q).position
    for (j, i, a, mi), value in solution.items():
        data[j - 1, i - 1, a - 1, position[mi]] = value * _coordinate_slot(mi)[1]
    return LinearConnectionJet.from_data(m, n, q, data)


def reconstruct_classical_orders(
    m: int,
    low: Optional[ClassicalConnectionJet],
    chain: Dict[int, CurvatureDifferentialData],
    top: int,
    trace: SolveTrace,
) -> ClassicalConnectionJet:
    """Extend ``low`` (or nothing) to order ``top`` in the zero-symmetrization gauge."""
    current = low
    start = 0 if low is None else low.order + 1
    for q in range(start, top + 1):
        if current is None:
            # order 0 carries no curvature; the symmetric gauge fixes it to zero
            _solve_blocks("classical", 0, _zero_gauge_blocks_classical(m), trace)
            current = ClassicalConnectionJet.zeros(m, 0)
            continue
        target = chain.get(q - 1)
        if target is None:
            raise NonMembership([f"missing classical curvature differential of order {q - 1}"],
                                stage="classical", order=q)
        current = _solve_classical_order(current, q, target, None, trace)
    if current is None:
        raise OrderError("nothing to reconstruct")
    return current


def _zero_gauge_blocks_classical(m: int) -> Dict[Hashable, _Block]:
    blocks: Dict[Hashable, _Block] = {}
    labels = range(1, m + 1)
    for rho in labels:
        for T in combinations_with_replacement(labels, 2):
            row = {_classical_key(a, rho, b, ()): w for a, b, w in classical_symmetrization_weights(T)}
            blocks.setdefault((rho, T), _Block()).add(row, ZERO)
    return blocks


def reconstruct_linear_orders(
    m: int,
    n: int,
    lam: Optional[ClassicalConnectionJet],
    low: Optional[LinearConnectionJet],
    chain: Dict[int, CurvatureDifferentialData],
    top: int,
    trace: SolveTrace,
    prescribed: Optional[SymmetricJetPart] = None,
) -> LinearConnectionJet:
    """Extend ``low`` to order ``top``; ``prescribed`` fixes the first new symmetrized degree."""
    start = 0 if low is None else low.order + 1
    current = low
    for q in range(start, top + 1):
        target = chain.get(q - 1) if q >= 1 else None
        if q >= 1 and target is None:
            raise NonMembership([f"missing linear curvature differential of order {q - 1}"],
                                stage="linear", order=q)
        sym = prescribed if q == start else None
        if current is None:
            current = _solve_linear_order_zero(m, n, sym, trace)
        else:
            current = _solve_linear_order(current, lam, q, target, sym, trace)
    if current is None:
        raise OrderError("nothing to reconstruct")
    return current


def _solve_linear_order_zero(
    m: int, n: int, prescribed: Optional[SymmetricJetPart], trace: SolveTrace
) -> LinearConnectionJet:
    blocks: Dict[Hashable, _Block] = {}
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            for a in range(1, m + 1):
                value = prescribed.value((j, i), (a,)) if prescribed is not None else ZERO
                blocks.setdefault((j, i, (a,)), _Block()).add({(j, i, a, ()): 1}, value)
    solution = _solve_blocks("linear", 0, blocks, trace)
    out = LinearConnectionJet.zeros(m, n, 0)
    data = out.data.copy()
    for (j, i, a, _), value in solution.items():
        data[j - 1, i - 1, a - 1, 0] = value
    return LinearConnectionJet.from_data(m, n, 0, data)


def _round_trip_failure(stage: str) -> NonMembership:
    return NonMembership(["reconstructed jets do not reduce back to the given data"], stage=stage)


def reconstruct_first(
    d: ReducedDataFirst, orders: Optional[Tuple[int, int]] = None
) -> Tuple[Tuple[ClassicalConnectionJet, LinearConnectionJet], SolveTrace]:
    """Canonical representative of ``d``; returns the jets and the per-order solve trace."""
    if orders is not None and tuple(orders) != (d.s, d.r):
        raise PreconditionError(f"target orders {tuple(orders)} differ from the reduced orders {(d.s, d.r)}")
    trace = SolveTrace()
    lam = reconstruct_classical_orders(d.m, d.lam_low, d.curvature_classical(), d.s, trace)
    K = reconstruct_linear_orders(d.m, d.n, lam, d.K_low, d.curvature_linear(), d.r, trace)
    if reduce_first(lam, K, d.k) != d:
        raise _round_trip_failure("round-trip")
    return (lam, K), trace


def reconstruct_connections_second(
    d: ReducedDataSecond, trace: Optional[SolveTrace] = None
) -> Tuple[ClassicalConnectionJet, LinearConnectionJet, SolveTrace]:
    trace = trace if trace is not None else SolveTrace()
    lam = reconstruct_classical_orders(d.m, d.lam_low, {c.order: c for c in d.R_C}, d.s1, trace)
    K = reconstruct_linear_orders(
        d.m, d.n, lam, d.K_low, {c.order: c for c in d.R_L}, d.s2, trace, prescribed=d.K_sym_top
    )
    return lam, K, trace


def field_polynomial_part(
    phi: TensorFieldJet,
    K: Optional[LinearConnectionJet],
    lam: Optional[ClassicalConnectionJet],
    i: int,
) -> TensorFieldJet:
    """``nabla^i Phi(0)`` with the order-``i`` coordinates of ``Phi`` set to zero."""
    return iterated_covariant_differential(pad_jet(phi, i), K, lam, i).at_origin()


def _with_top_field(phi: TensorFieldJet, free: TensorFieldJet, i: int) -> TensorFieldJet:
    base_rank = phi.rank
    sym = symmetrize_slots(free, range(base_rank, base_rank + i)) if i >= 2 else free
    padded = pad_jet(phi, i)
    data = padded.data.copy()
    basis = monomial_basis(phi.m, i)
    for pos in range(basis.offsets[i], basis.offsets[i + 1]):
        mi = basis.multi_indices[pos]
        value = sym.data[(Ellipsis,) + tuple(label - 1 for label in mi) + (0,)]
        data[..., pos] = value * _coordinate_slot(mi)[1]
    return padded.with_data(data)


def solve_field_orders(
    d: ReducedDataSecond,
    lam: ClassicalConnectionJet,
    K: LinearConnectionJet,
    last: int,
) -> Tuple[TensorFieldJet, List[Tuple[int, TensorFieldJet]]]:
    """Raise the field jet to order ``last``; also return ``V_i - E_i`` for every order solved."""
    phi = d.phi_low
    defects: List[Tuple[int, TensorFieldJet]] = []
    for i in range(d.k, last + 1):
        free = d.field_differential(i) - field_polynomial_part(phi, K, lam, i)
        defects.append((i, free))
        phi = _with_top_field(phi, free, i)
    return phi, defects


def symmetric_defect(free: TensorFieldJet, base_rank: int, i: int) -> List[str]:
    """Describe every adjacent pair of differentiation slots where ``free`` is not symmetric."""
    problems = []
    for first in range(base_rank, base_rank + i - 1):
        if not np.all(free.data == np.swapaxes(free.data, first, first + 1)):
            problems.append(f"slots ({first},{first + 1}) not symmetric")
    return problems


def _solve_field_order(phi: TensorFieldJet, free: TensorFieldJet, i: int, trace: SolveTrace) -> TensorFieldJet:
    """Solve the order-``i`` field coordinates from the symmetric free part of ``nabla^i Phi(0)``."""
    base_rank = phi.rank
    m = phi.m
    blocks: Dict[Hashable, _Block] = {}
    for comp in np.ndindex(*free.data.shape[:base_rank]):
        for slots in product(range(1, m + 1), repeat=i):
            mi = canonical_multi_index(slots)
            key = (comp, mi)
            blocks.setdefault(key, _Block()).add(
                {key: multiplicity_factorial(mi)},
                free.data[comp + tuple(label - 1 for label in slots) + (0,)],
            )
    solution = _solve_blocks("field", i, blocks, trace)
    padded = pad_jet(phi, i)
    data = padded.data.copy()
    basis = monomial_basis(m, i)
    for (comp, mi), value in solution.items():
        data[comp + (basis.position[mi],)] = value
    return padded.with_data(data)


def reconstruct_second(
    d: ReducedDataSecond, orders: Optional[Tuple[int, int, int]] = None
) -> Tuple[Tuple[ClassicalConnectionJet, LinearConnectionJet, TensorFieldJet], SolveTrace]:
    if orders is not None and tuple(orders) != (d.s1, d.s2, d.r):
        raise PreconditionError(
            f"target orders {tuple(orders)} differ from the reduced orders {(d.s1, d.s2, d.r)}"
        )
    lam, K, trace = reconstruct_connections_second(d)
    phi = d.phi_low
    base_rank = phi.rank
    for i in range(d.k, d.r + 1):
        free = d.field_differential(i) - field_polynomial_part(phi, K, lam, i)
        problems = symmetric_defect(free, base_rank, i)
        if problems:
            raise NonMembership(problems, stage="ricci", order=i)
        phi = _solve_field_order(phi, free, i, trace)
    if reduce_second(lam, K, phi, d.k) != d:
        raise _round_trip_failure("round-trip")
    return (lam, K, phi), trace


# ---------- kernel orbits ----------


def kernel_profile_first(s: int, r: int, k: int) -> Tuple[int, int, int]:
    t1, t2 = group_orders_first(s, r)
    return t1, t2, k


def kernel_profile_second(s1: int, s2: int, r: int, k: int) -> Tuple[int, int, int]:
    t1, t2 = group_orders_second(s1, s2, r)
    return t1, t2, k


def act_on_pair(
    g: WGroupElement, lam: ClassicalConnectionJet, K: LinearConnectionJet
) -> Tuple[ClassicalConnectionJet, LinearConnectionJet]:
    return act_on_classical(g, lam), act_on_linear(g, K)


def act_on_triple(
    g: WGroupElement, lam: ClassicalConnectionJet, K: LinearConnectionJet, phi: TensorFieldJet
) -> Tuple[ClassicalConnectionJet, LinearConnectionJet, TensorFieldJet]:
    return act_on_classical(g, lam), act_on_linear(g, K), act_on_tensor(g, phi)


def _homogeneous_coefficients(values: np.ndarray, m: int, degree: int, order: int) -> np.ndarray:
    """Coefficients of the degree-``degree`` polynomial whose jet coordinates are ``values[..., M]``."""
    basis = monomial_basis(m, order)
    lead = values.shape[: values.ndim - degree]
    out = np.full(lead + (basis.size,), ZERO, dtype=object)
    for pos in range(basis.offsets[degree], basis.offsets[degree + 1]):
        mi = basis.multi_indices[pos]
        out[..., pos] = values[(Ellipsis,) + tuple(label - 1 for label in mi)] * _coordinate_slot(mi)[1]
    return out


def _base_step(m: int, n: int, t1: int, t2: int, diff: SymmetricJetPart) -> WGroupElement:
    ident = group_identity(m, n, t1, t2)
    shift = _homogeneous_coefficients(diff.values, m, diff.degree, t1)
    return WGroupElement(DiffeoJet(m, t1, ident.base.data + shift), ident.gauge)


def _gauge_step(m: int, n: int, t1: int, t2: int, diff: SymmetricJetPart) -> WGroupElement:
    ident = group_identity(m, n, t1, t2)
    # Q[i, j] has the coordinates of the symmetrized K[j, i]
    shift = _homogeneous_coefficients(np.swapaxes(diff.values, 0, 1), m, diff.degree, t2)
    return WGroupElement(ident.base, GaugeJet(m, n, t2, ident.gauge.data + shift))


def _orbit_steps(
    target_lam: ClassicalConnectionJet,
    target_K: LinearConnectionJet,
    lam: ClassicalConnectionJet,
    K: LinearConnectionJet,
    t1: int,
    t2: int,
    k: int,
    apply,
) -> WGroupElement:
    m, n = K.m, K.n
    h = group_identity(m, n, t1, t2)
    state = (lam, K)
    for q in range(k + 1, max(t1, t2) + 1):
        if q <= target_lam.order + 2:
            diff = symmetric_part_classical(target_lam, q) - symmetric_part_classical(state[0], q)
            if not diff.is_zero():
                step = _base_step(m, n, t1, t2, diff)
                h = group_mul(step, h)
                state = apply(step, state)
                logger.debug("orbit_step", order=q, part="base")
        if q <= target_K.order + 1:
            diff = symmetric_part_linear(target_K, q) - symmetric_part_linear(state[1], q)
            if not diff.is_zero():
                step = _gauge_step(m, n, t1, t2, diff)
                h = group_mul(step, h)
                state = apply(step, state)
                logger.debug("orbit_step", order=q, part="gauge")
    return h


def orbit_solve(
    pair1: Tuple[ClassicalConnectionJet, LinearConnectionJet],
    pair2: Tuple[ClassicalConnectionJet, LinearConnectionJet],
    k: int,
) -> Optional[WGroupElement]:
    """Kernel element ``h`` with ``h . pair2 = pair1``, or ``None`` when the reduced data differ."""
    lam1, K1 = pair1
    lam2, K2 = pair2
    if (lam1.order, K1.order) != (lam2.order, K2.order) or (K1.m, K1.n) != (K2.m, K2.n):
        raise PreconditionError("orbit pairs must share dimensions and orders")
    if reduce_first(lam1, K1, k) != reduce_first(lam2, K2, k):
        return None
    t1, t2 = group_orders_first(lam1.order, K1.order)
    h = _orbit_steps(lam1, K1, lam2, K2, t1, t2, k, lambda g, st: act_on_pair(g, *st))
    lam, K = act_on_pair(h, lam2, K2)
    if lam != lam1 or K != K1:
        raise NonMembership(["constructed kernel element does not map the pairs onto each other"], stage="orbit")
    return h


def orbit_solve_second(
    triple1: Tuple[ClassicalConnectionJet, LinearConnectionJet, TensorFieldJet],
    triple2: Tuple[ClassicalConnectionJet, LinearConnectionJet, TensorFieldJet],
    k: int,
) -> Optional[WGroupElement]:
    lam1, K1, phi1 = triple1
    lam2, K2, phi2 = triple2
    if (lam1.order, K1.order, phi1.order) != (lam2.order, K2.order, phi2.order):
        raise PreconditionError("orbit triples must share orders")
    if phi1.valence.slots != phi2.valence.slots:
        raise PreconditionError("orbit triples must share the field valence")
    if reduce_second(lam1, K1, phi1, k) != reduce_second(lam2, K2, phi2, k):
        return None
    t1, t2 = group_orders_second(lam1.order, K1.order, phi1.order)
    h = _orbit_steps(lam1, K1, lam2, K2, t1, t2, k, lambda g, st: act_on_pair(g, *st))
    result = act_on_triple(h, lam2, K2, phi2)
    if result[0] != lam1 or result[1] != K1 or result[2] != phi1:
        raise NonMembership(["constructed kernel element does not map the triples onto each other"], stage="orbit")
    return h


__all__ = [
    "ReducedDataFirst",
    "ReducedDataSecond",
    "check_first_orders",
    "check_second_orders",
    "symmetrize_classical",
    "symmetrize_linear",
    "reduce_first",
    "reduce_second",
    "reconstruct_classical_orders",
    "reconstruct_linear_orders",
    "reconstruct_first",
    "reconstruct_connections_second",
    "reconstruct_second",
    "field_polynomial_part",
    "solve_field_orders",
    "symmetric_defect",
    "kernel_profile_first",
    "kernel_profile_second",
    "act_on_pair",
    "act_on_triple",
    "orbit_solve",
    "orbit_solve_second",
]
