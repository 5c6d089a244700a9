"""Tensor-field jets with declared valence and index symmetries.

A ``TensorFieldJet`` stores every component index tuple in full (no symmetry
compression) as a numpy object array of shape ``slot dims + (monomials,)``.
Public accessors take 1-based indices as written in coordinates; the arrays
themselves are 0-based.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DimensionMismatch, OrderError, SymmetryError, ValenceError
from .series import (
    ZERO,
    TruncatedSeries,
    basis_size,
    canonical_multi_index,
    coeff_einsum,
    coeff_pad,
    coeff_truncate,
    coeffs_equal,
    monomial_basis,
    multiplicity_factorial,
)

EINSUM_LETTERS = "abcdefghijklmnopqrstuvwxyABCDEFGHIJKLMNOPQRSTUVWXYZ"


class SlotKind(str, Enum):
    FIBER_UP = "E"
    FIBER_DOWN = "E*"
    BASE_UP = "T"
    BASE_DOWN = "T*"
    DIFF = "D"

    @property
    def is_fiber(self) -> bool:
        return self in (SlotKind.FIBER_UP, SlotKind.FIBER_DOWN)

    @property
    def is_upper(self) -> bool:
        return self in (SlotKind.FIBER_UP, SlotKind.BASE_UP)

    def dim(self, m: int, n: int) -> int:
        return n if self.is_fiber else m


@dataclass(frozen=True)
class SymmetryGroup:
    slots: Tuple[int, ...]
    sign: int = 1

    def __post_init__(self) -> None:
        if len(self.slots) < 2 or len(set(self.slots)) != len(self.slots):
            raise ValenceError(f"symmetry group needs two or more distinct slots, got {self.slots}")
        if self.sign not in (1, -1):
            raise ValenceError(f"symmetry sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class Valence:
    slots: Tuple[SlotKind, ...]
    symmetries: Tuple[SymmetryGroup, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "slots", tuple(SlotKind(s) for s in self.slots))
        for group in self.symmetries:
            if any(s < 0 or s >= len(self.slots) for s in group.slots):
                raise ValenceError(f"symmetry {group.slots} references a missing slot")
            _check_same_range(self.slots, group.slots)

    @classmethod
    def standard(cls, p1: int = 0, q1: int = 0, p2: int = 0, q2: int = 0, d: int = 0,
                 symmetries: Sequence[SymmetryGroup] = ()) -> "Valence":
        if min(p1, q1, p2, q2, d) < 0:
            raise ValenceError("slot counts must be non-negative")
        slots = (
            [SlotKind.FIBER_UP] * p1
            + [SlotKind.FIBER_DOWN] * q1
            + [SlotKind.BASE_UP] * p2
            + [SlotKind.BASE_DOWN] * q2
            + [SlotKind.DIFF] * d
        )
        return cls(tuple(slots), tuple(symmetries))

    def _count(self, kind: SlotKind) -> int:
        return sum(1 for s in self.slots if s is kind)

    @property
    def p1(self) -> int:
        return self._count(SlotKind.FIBER_UP)

    @property
    def q1(self) -> int:
        return self._count(SlotKind.FIBER_DOWN)

    @property
    def p2(self) -> int:
        return self._count(SlotKind.BASE_UP)

    @property
    def q2(self) -> int:
        return self._count(SlotKind.BASE_DOWN)

    @property
    def d(self) -> int:
        return self._count(SlotKind.DIFF)

    @property
    def rank(self) -> int:
        return len(self.slots)

    @property
    def has_fiber_slots(self) -> bool:
        return any(s.is_fiber for s in self.slots)

    @property
    def has_base_slots(self) -> bool:
        return any(not s.is_fiber for s in self.slots)

    def dims(self, m: int, n: int) -> Tuple[int, ...]:
        return tuple(s.dim(m, n) for s in self.slots)

    def with_differentials(self, count: int = 1) -> "Valence":
        return Valence(self.slots + (SlotKind.DIFF,) * count, self.symmetries)

    def with_symmetry(self, group: SymmetryGroup) -> "Valence":
        kept = []
        for g in self.symmetries:
            overlap = set(g.slots) & set(group.slots)
            if not overlap or set(g.slots) <= set(group.slots):
                kept.append(g)
        if group not in kept:
            kept.append(group)
        return Valence(self.slots, tuple(kept))

    def label(self) -> str:
        return ",".join(s.value for s in self.slots)


def same_dimensions(a: "TensorFieldJet", b: "TensorFieldJet") -> bool:
    """Equal base dimension, and equal fiber dimension whenever both carry fiber slots."""
    if a.m != b.m:
        return False
    if a.valence.has_fiber_slots and b.valence.has_fiber_slots:
        return a.n == b.n
    return True


def _check_same_range(slots: Sequence[SlotKind], positions: Iterable[int]) -> None:
    kinds = {slots[p].is_fiber for p in positions}
    if len(kinds) > 1:
        raise ValenceError(f"slots {tuple(positions)} mix fiber and base ranges")


@dataclass(frozen=True, eq=False)
class TensorFieldJet:
    m: int
    n: int
    valence: Valence
    order: int
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.order < 0:
            raise OrderError(f"negative trust order {self.order}")
        expected = self.valence.dims(self.m, self.n) + (basis_size(self.m, self.order),)
        if self.data.shape != expected:
            raise DimensionMismatch(f"tensor data shape {self.data.shape}, expected {expected}")

    @classmethod
    def zeros(cls, m: int, n: int, valence: Valence, order: int) -> "TensorFieldJet":
        shape = valence.dims(m, n) + (basis_size(m, order),)
        return cls(m, n, valence, order, np.full(shape, ZERO, dtype=object))

    @property
    def rank(self) -> int:
        return self.valence.rank

    def _index(self, indices: Sequence[int]) -> Tuple[int, ...]:
        dims = self.valence.dims(self.m, self.n)
        if len(indices) != len(dims):
            raise ValenceError(f"expected {len(dims)} component indices, got {len(indices)}")
        for value, dim in zip(indices, dims):
            if not 1 <= int(value) <= dim:
                raise ValenceError(f"component index {value} outside 1..{dim}")
        return tuple(int(v) - 1 for v in indices)

    def component(self, indices: Sequence[int]) -> TruncatedSeries:
        return TruncatedSeries(self.m, self.order, self.data[self._index(indices)])

    def value(self, indices: Sequence[int]) -> Fraction:
        return self.data[self._index(indices) + (0,)]

    def at_origin(self) -> "TensorFieldJet":
        return project_jet(self, 0)

    def with_data(self, data: np.ndarray, order: Optional[int] = None,
                  valence: Optional[Valence] = None) -> "TensorFieldJet":
        return TensorFieldJet(self.m, self.n, valence or self.valence,
                              self.order if order is None else order, data)

    def _aligned(self, other: "TensorFieldJet") -> int:
        if not same_dimensions(self, other):
            raise DimensionMismatch(f"dimensions differ: {(self.m, self.n)} vs {(other.m, other.n)}")
        if self.valence.slots != other.valence.slots:
            raise ValenceError(f"valences differ: {self.valence.label()} vs {other.valence.label()}")
        return min(self.order, other.order)

    def __add__(self, other: "TensorFieldJet") -> "TensorFieldJet":
        order = self._aligned(other)
        data = coeff_truncate(self.data, self.m, order) + coeff_truncate(other.data, self.m, order)
        return self.with_data(data, order)

    def __sub__(self, other: "TensorFieldJet") -> "TensorFieldJet":
        order = self._aligned(other)
        data = coeff_truncate(self.data, self.m, order) - coeff_truncate(other.data, self.m, order)
        return self.with_data(data, order)

    def __neg__(self) -> "TensorFieldJet":
        return self.with_data(-self.data)

    def scale(self, factor) -> "TensorFieldJet":
        return self.with_data(self.data * Fraction(factor))

    def is_zero(self) -> bool:
        return bool(np.all(self.data == 0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorFieldJet):
            return NotImplemented
        return (
            (self.m, self.order) == (other.m, other.order)
            and same_dimensions(self, other)
            and self.valence.slots == other.valence.slots
            and coeffs_equal(self.data, other.data)
        )

    __hash__ = None  # type: ignore[assignment]


# ---------- connection jets ----------

CLASSICAL_VALENCE = Valence(
    (SlotKind.BASE_DOWN, SlotKind.BASE_UP, SlotKind.BASE_DOWN), (SymmetryGroup((0, 2), 1),)
)
LINEAR_VALENCE = Valence((SlotKind.FIBER_DOWN, SlotKind.FIBER_UP, SlotKind.BASE_DOWN))


@dataclass(frozen=True, eq=False)
class ClassicalConnectionJet:
    """Symbols ``Lambda_mu^lambda_nu`` stored as ``field.data[mu, lambda, nu]``."""

    field: TensorFieldJet

    def __post_init__(self) -> None:
        if self.field.valence.slots != CLASSICAL_VALENCE.slots:
            raise ValenceError("classical connection needs valence (T*, T, T*)")
        if not coeffs_equal(self.field.data, np.swapaxes(self.field.data, 0, 2)):
            raise SymmetryError("classical connection symbols must be symmetric in the lower pair")

    @classmethod
    def from_data(cls, m: int, order: int, data: np.ndarray) -> "ClassicalConnectionJet":
        return cls(TensorFieldJet(m, 0, CLASSICAL_VALENCE, order, data))

    @classmethod
    def zeros(cls, m: int, order: int) -> "ClassicalConnectionJet":
        return cls(TensorFieldJet.zeros(m, 0, CLASSICAL_VALENCE, order))

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def order(self) -> int:
        return self.field.order

    @property
    def data(self) -> np.ndarray:
        return self.field.data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassicalConnectionJet):
            return NotImplemented
        return self.field == other.field

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class LinearConnectionJet:
    """Symbols ``K_j^i_lambda`` stored as ``field.data[j, i, lambda]``."""

    field: TensorFieldJet

    def __post_init__(self) -> None:
        if self.field.valence.slots != LINEAR_VALENCE.slots:
            raise ValenceError("linear connection needs valence (E*, E, T*)")

    @classmethod
    def from_data(cls, m: int, n: int, order: int, data: np.ndarray) -> "LinearConnectionJet":
        return cls(TensorFieldJet(m, n, LINEAR_VALENCE, order, data))

    @classmethod
    def zeros(cls, m: int, n: int, order: int) -> "LinearConnectionJet":
        return cls(TensorFieldJet.zeros(m, n, LINEAR_VALENCE, order))

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def order(self) -> int:
        return self.field.order

    @property
    def data(self) -> np.ndarray:
        return self.field.data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearConnectionJet):
            return NotImplemented
        return self.field == other.field

    __hash__ = None  # type: ignore[assignment]


AnyJet = Union[TensorFieldJet, ClassicalConnectionJet, LinearConnectionJet]


def _field_of(j: AnyJet) -> TensorFieldJet:
    return j if isinstance(j, TensorFieldJet) else j.field


def _rewrap(template: AnyJet, field_jet: TensorFieldJet) -> AnyJet:
    if isinstance(template, ClassicalConnectionJet):
        return ClassicalConnectionJet(field_jet)
    if isinstance(template, LinearConnectionJet):
        return LinearConnectionJet(field_jet)
    return field_jet


def project_jet(j: AnyJet, k: int) -> AnyJet:
    """Drop Taylor orders above ``k``."""
    f = _field_of(j)
    if k > f.order:
        raise OrderError(f"cannot project an order-{f.order} jet to order {k}")
    if k < 0:
        raise OrderError("projection order must be non-negative")
    return _rewrap(j, f.with_data(coeff_truncate(f.data, f.m, k), k))


def pad_jet(j: AnyJet, k: int) -> AnyJet:
    """Raise the trust order to ``k`` with zero coordinates above the current order."""
    f = _field_of(j)
    if k < f.order:
        return project_jet(j, k)
    return _rewrap(j, f.with_data(coeff_pad(f.data, f.m, k), k))


def jet_coordinate(j: AnyJet, indices: Sequence[int], derivative: Sequence[int]) -> Fraction:
    """Partial derivative at the origin of one component (1-based indices)."""
    f = _field_of(j)
    mi = canonical_multi_index(derivative)
    if len(mi) > f.order:
        raise OrderError(f"derivative order {len(mi)} exceeds trust order {f.order}")
    if any(not 1 <= label <= f.m for label in mi):
        raise ValenceError(f"derivative labels {mi} outside 1..{f.m}")
    pos = monomial_basis(f.m, f.order).position[mi]
    return f.data[f._index(indices) + (pos,)] * multiplicity_factorial(mi)


# ---------- slot (anti)symmetrization ----------


def _parity(perm: Sequence[int]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def _average(data: np.ndarray, slots: Sequence[int], sign: int) -> np.ndarray:
    total = None
    for perm in permutations(range(len(slots))):
        axes = list(range(data.ndim))
        for i, p in enumerate(perm):
            axes[slots[i]] = slots[p]
        term = np.transpose(data, axes)
        if sign < 0 and _parity(perm) < 0:
            term = -term
        total = term if total is None else total + term
    return total * Fraction(1, factorial(len(slots)))


def _slot_group(t: TensorFieldJet, slots: Sequence[int]) -> Tuple[int, ...]:
    slots = tuple(int(s) for s in slots)
    if len(slots) < 2:
        raise ValenceError("need at least two slots")
    if any(s < 0 or s >= t.rank for s in slots):
        raise ValenceError(f"slots {slots} outside tensor of rank {t.rank}")
    _check_same_range(t.valence.slots, slots)
    return slots


def symmetrize_slots(t: TensorFieldJet, slots: Sequence[int]) -> TensorFieldJet:
    """Average over all permutations of the named (0-based) slots."""
    slots = _slot_group(t, slots)
    data = _average(t.data, slots, 1)
    return t.with_data(data, valence=t.valence.with_symmetry(SymmetryGroup(slots, 1)))


def alternate_slots(t: TensorFieldJet, slots: Sequence[int]) -> TensorFieldJet:
    """Signed average over all permutations of the named (0-based) slots."""
    slots = _slot_group(t, slots)
    data = _average(t.data, slots, -1)
    return t.with_data(data, valence=t.valence.with_symmetry(SymmetryGroup(slots, -1)))


def alternate_last_pair(t: TensorFieldJet) -> TensorFieldJet:
    return alternate_slots(t, (t.rank - 2, t.rank - 1))


def audit_symmetries(t: AnyJet) -> List[str]:
    """Return a description of every declared symmetry that does not hold exactly."""
    f = _field_of(t)
    problems: List[str] = []
    for group in f.valence.symmetries:
        for a, b in zip(group.slots, group.slots[1:]):
            swapped = np.swapaxes(f.data, a, b)
            expected = swapped if group.sign > 0 else -swapped
            if not coeffs_equal(f.data, expected):
                kind = "symmetry" if group.sign > 0 else "antisymmetry"
                problems.append(f"{kind} of slots ({a},{b}) violated")
    return problems


def check_symmetries(t: AnyJet) -> None:
    problems = audit_symmetries(t)
    if problems:
        raise SymmetryError(problems)


# ---------- products and contractions ----------


def tensor_product(a: TensorFieldJet, b: TensorFieldJet) -> TensorFieldJet:
    if not same_dimensions(a, b):
        raise DimensionMismatch("tensor product of jets over different dimensions")
    n = a.n if a.valence.has_fiber_slots else b.n
    order = min(a.order, b.order)
    la = EINSUM_LETTERS[: a.rank]
    lb = EINSUM_LETTERS[a.rank: a.rank + b.rank]
    data = coeff_einsum(f"{la},{lb}->{la}{lb}", a.data, b.data, a.m, order)
    shifted = tuple(SymmetryGroup(tuple(s + a.rank for s in g.slots), g.sign) for g in b.valence.symmetries)
    valence = Valence(a.valence.slots + b.valence.slots, a.valence.symmetries + shifted)
    return TensorFieldJet(a.m, n, valence, order, data)


def contract(t: TensorFieldJet, upper: int, lower: int) -> TensorFieldJet:
    """Trace an upper slot against a lower slot of the same range."""
    kinds = t.valence.slots
    if not (0 <= upper < t.rank and 0 <= lower < t.rank) or upper == lower:
        raise ValenceError(f"cannot contract slots {upper} and {lower}")
    if not kinds[upper].is_upper or kinds[lower].is_upper:
        raise ValenceError("contraction pairs an upper slot with a lower slot")
    if kinds[upper].is_fiber != kinds[lower].is_fiber:
        raise ValenceError("contraction slots must share their index range")
    data = np.diagonal(t.data, axis1=upper, axis2=lower).sum(axis=-1)
    remaining = [i for i in range(t.rank) if i not in (upper, lower)]
    remap = {old: new for new, old in enumerate(remaining)}
    groups = []
    for g in t.valence.symmetries:
        if upper in g.slots or lower in g.slots:
            continue
        groups.append(SymmetryGroup(tuple(remap[s] for s in g.slots), g.sign))
    valence = Valence(tuple(kinds[i] for i in remaining), tuple(groups))
    return TensorFieldJet(t.m, t.n, valence, t.order, data)


# ---------- symmetric jet parts ----------


@dataclass(frozen=True, eq=False)
class SymmetricJetPart:
    """Totally symmetrized top coordinates of a connection jet.

    ``classical``: ``values[lambda, mu_1, ..., mu_t]``.
    ``linear``: ``values[j, i, mu_1, ..., mu_t]``.
    """

    kind: str
    m: int
    n: int
    degree: int
    values: np.ndarray

    def __post_init__(self) -> None:
        lead = (self.m,) if self.kind == "classical" else (self.n, self.n)
        if self.kind not in ("classical", "linear"):
            raise ValenceError(f"unknown symmetric part kind {self.kind!r}")
        expected = lead + (self.m,) * self.degree
        if self.values.shape != expected:
            raise DimensionMismatch(f"symmetric part shape {self.values.shape}, expected {expected}")

    def value(self, lead: Sequence[int], mi: Sequence[int]) -> Fraction:
        return self.values[tuple(int(v) - 1 for v in lead) + tuple(int(v) - 1 for v in mi)]

    def is_zero(self) -> bool:
        return bool(np.all(self.values == 0))

    def __sub__(self, other: "SymmetricJetPart") -> "SymmetricJetPart":
        return replace(self, values=self.values - other.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymmetricJetPart):
            return NotImplemented
        return (
            (self.kind, self.m, self.n, self.degree) == (other.kind, other.m, other.n, other.degree)
            and coeffs_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]


def remove_labels(mi: Sequence[int], *labels: int) -> Tuple[int, ...]:
    rest = list(mi)
    for label in labels:
        rest.remove(label)
    return tuple(rest)


def classical_symmetrization_weights(mi: Sequence[int]) -> List[Tuple[int, int, Fraction]]:
    """Weights ``(a, b, w)`` with ``s^l_M = sum w * Lambda_a^l_{b, M - {a, b}}``; ``a <= b``."""
    counts = Counter(mi)
    t = len(mi)
    out = []
    labels = sorted(counts)
    for i, a in enumerate(labels):
        for b in labels[i:]:
            if a == b:
                w = Fraction(counts[a] * (counts[a] - 1), t * (t - 1))
            else:
                w = Fraction(2 * counts[a] * counts[b], t * (t - 1))
            if w:
                out.append((a, b, w))
    return out


def linear_symmetrization_weights(mi: Sequence[int]) -> List[Tuple[int, Fraction]]:
    """Weights ``(a, w)`` with ``s_j^i_M = sum w * K_j^i_{a, M - {a}}``."""
    counts = Counter(mi)
    t = len(mi)
    return [(a, Fraction(counts[a], t)) for a in sorted(counts)]


def _fill_symmetric(values: np.ndarray, lead: Tuple[int, ...], mi: Sequence[int], value: Fraction) -> None:
    for perm in set(permutations(mi)):
        values[lead + tuple(p - 1 for p in perm)] = value


def symmetric_part_classical(lam: ClassicalConnectionJet, degree: int) -> SymmetricJetPart:
    """Symmetrized coordinates of derivative order ``degree - 2``."""
    m = lam.m
    if degree < 2 or degree - 2 > lam.order:
        raise OrderError(f"no degree-{degree} symmetric part of an order-{lam.order} classical jet")
    values = np.full((m,) + (m,) * degree, ZERO, dtype=object)
    for mi in monomial_basis(m, degree).multi_indices[monomial_basis(m, degree).degree_slice(degree)]:
        for rho in range(1, m + 1):
            total = ZERO
            for a, b, w in classical_symmetrization_weights(mi):
                total += w * jet_coordinate(lam, (a, rho, b), remove_labels(mi, a, b))
            _fill_symmetric(values, (rho - 1,), mi, total)
    return SymmetricJetPart("classical", m, 0, degree, values)


def symmetric_part_linear(K: LinearConnectionJet, degree: int) -> SymmetricJetPart:
    """Symmetrized coordinates of derivative order ``degree - 1``."""
    m, n = K.m, K.n
    if degree < 1 or degree - 1 > K.order:
        raise OrderError(f"no degree-{degree} symmetric part of an order-{K.order} linear jet")
    values = np.full((n, n) + (m,) * degree, ZERO, dtype=object)
    for mi in monomial_basis(m, degree).multi_indices[monomial_basis(m, degree).degree_slice(degree)]:
        for j, i in product(range(1, n + 1), repeat=2):
            total = ZERO
            for a, w in linear_symmetrization_weights(mi):
                total += w * jet_coordinate(K, (j, i, a), remove_labels(mi, a))
            _fill_symmetric(values, (j - 1, i - 1), mi, total)
    return SymmetricJetPart("linear", m, n, degree, values)


# ---------- random jets ----------


def random_fractions(rng: np.random.Generator, shape: Tuple[int, ...], bound: int) -> np.ndarray:
    size = int(np.prod(shape)) if shape else 1
    if bound <= 0:
        return np.full(shape, ZERO, dtype=object)
    nums = rng.integers(-bound, bound + 1, size=size)
    dens = rng.integers(1, bound + 1, size=size)
    flat = np.array([Fraction(int(a), int(b)) for a, b in zip(nums, dens)], dtype=object)
    return flat.reshape(shape)


def impose_symmetries(t: TensorFieldJet) -> TensorFieldJet:
    out = t
    for group in t.valence.symmetries:
        out = symmetrize_slots(out, group.slots) if group.sign > 0 else alternate_slots(out, group.slots)
    return out.with_data(out.data, valence=t.valence)


def random_jet(kind: str, m: int, n: int, order: int, seed: int, bound: int = 3,
               valence: Optional[Valence] = None) -> AnyJet:
    """Deterministic random jet; ``kind`` is ``classical``, ``linear`` or ``tensor``."""
    rng = np.random.default_rng([seed, sum(map(ord, kind))])
    size = basis_size(m, order)
    if kind == "classical":
        raw = TensorFieldJet(m, 0, CLASSICAL_VALENCE, order, random_fractions(rng, (m, m, m, size), bound))
        return ClassicalConnectionJet(impose_symmetries(raw))
    if kind == "linear":
        return LinearConnectionJet.from_data(m, n, order, random_fractions(rng, (n, n, m, size), bound))
    if kind == "tensor":
        if valence is None:
            raise ValenceError("random tensor jets need a valence")
        raw = TensorFieldJet(m, n, valence, order, random_fractions(rng, valence.dims(m, n) + (size,), bound))
        return impose_symmetries(raw)
    raise ValenceError(f"unknown jet kind {kind!r}")


__all__ = [
    "SlotKind",
    "SymmetryGroup",
    "Valence",
    "TensorFieldJet",
    "CLASSICAL_VALENCE",
    "LINEAR_VALENCE",
    "ClassicalConnectionJet",
    "LinearConnectionJet",
    "AnyJet",
    "project_jet",
    "pad_jet",
    "jet_coordinate",
    "symmetrize_slots",
    "alternate_slots",
    "alternate_last_pair",
    "audit_symmetries",
    "check_symmetries",
    "tensor_product",
    "contract",
    "SymmetricJetPart",
    "classical_symmetrization_weights",
    "linear_symmetrization_weights",
    "remove_labels",
    "symmetric_part_classical",
    "symmetric_part_linear",
    "random_fractions",
    "impose_symmetries",
    "random_jet",
    "EINSUM_LETTERS",
]
