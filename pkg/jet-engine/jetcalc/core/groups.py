"""The jet groups ``W^(t1,t2)_m GL(n)`` and their actions on jets.

An element ``(phi, g)`` is read as the bundle automorphism
``(x, y) -> (phi(x), g(x) y)``; the group law is
``(phi, g)(psi, h) = (phi o psi, (g o psi) h)`` and every action below is the
push-forward along that automorphism, so all of them are left actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatch, OrderError, SingularError
from .fields import (
    EINSUM_LETTERS,
    ClassicalConnectionJet,
    LinearConnectionJet,
    SlotKind,
    TensorFieldJet,
    random_fractions,
)
from .linalg import identity_matrix, inverse_matrix
from .series import (
    ONE,
    Substitution,
    TruncatedSeries,
    basis_size,
    coeff_einsum,
    coeff_gradient,
    coeff_identity_map,
    coeff_invert_map,
    coeff_invert_matrix,
    coeff_truncate,
    coeff_zeros,
    coeffs_equal,
    linear_part,
    monomial_basis,
    multiplicity_factorial,
    canonical_multi_index,
)


@dataclass(frozen=True, eq=False)
class DiffeoJet:
    """Jet at the origin of a diffeomorphism of R^m fixing the origin; data is ``(m, monomials)``."""

    m: int
    order: int
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.order < 1:
            raise OrderError("diffeomorphism jets have order >= 1")
        if self.data.shape != (self.m, basis_size(self.m, self.order)):
            raise DimensionMismatch(f"diffeomorphism data shape {self.data.shape}")
        if any(c != 0 for c in self.data[:, 0]):
            raise SingularError("diffeomorphism jet must fix the origin")
        inverse_matrix(linear_part(self.data, self.m))

    @classmethod
    def identity(cls, m: int, order: int) -> "DiffeoJet":
        return cls(m, order, coeff_identity_map(m, order))

    def components(self) -> List[TruncatedSeries]:
        return [TruncatedSeries(self.m, self.order, self.data[lam]) for lam in range(self.m)]

    def coordinate(self, lam: int, mi: Sequence[int]) -> Fraction:
        """``a^lam_{mi}`` as a derivative value (1-based)."""
        key = canonical_multi_index(mi)
        pos = monomial_basis(self.m, self.order).position[key]
        return self.data[lam - 1, pos] * multiplicity_factorial(key)

    def truncate(self, order: int) -> "DiffeoJet":
        if order > self.order:
            raise OrderError(f"diffeomorphism jet has order {self.order} < {order}")
        return DiffeoJet(self.m, order, coeff_truncate(self.data, self.m, order))


@dataclass(frozen=True, eq=False)
class GaugeJet:
    """Jet of a GL(n)-valued map; data is ``(n, n, monomials)`` with ``data[i, j] = a^i_j``."""

    m: int
    n: int
    order: int
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.shape != (self.n, self.n, basis_size(self.m, self.order)):
            raise DimensionMismatch(f"gauge data shape {self.data.shape}")
        inverse_matrix(self.data[:, :, 0])

    @classmethod
    def identity(cls, m: int, n: int, order: int) -> "GaugeJet":
        data = coeff_zeros((n, n), m, order)
        for i in range(n):
            data[i, i, 0] = ONE
        return cls(m, n, order, data)

    def coordinate(self, i: int, j: int, mi: Sequence[int]) -> Fraction:
        key = canonical_multi_index(mi)
        pos = monomial_basis(self.m, self.order).position[key]
        return self.data[i - 1, j - 1, pos] * multiplicity_factorial(key)

    def truncate(self, order: int) -> "GaugeJet":
        if order > self.order:
            raise OrderError(f"gauge jet has order {self.order} < {order}")
        return GaugeJet(self.m, self.n, order, coeff_truncate(self.data, self.m, order))


@dataclass(frozen=True, eq=False)
class WGroupElement:
    base: DiffeoJet
    gauge: GaugeJet

    def __post_init__(self) -> None:
        if self.base.m != self.gauge.m:
            raise DimensionMismatch("base and gauge parts live over different m")
        if self.base.order < self.gauge.order:
            raise OrderError(
                f"base order {self.base.order} below gauge order {self.gauge.order}"
            )

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n(self) -> int:
        return self.gauge.n

    @property
    def orders(self) -> Tuple[int, int]:
        return self.base.order, self.gauge.order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WGroupElement):
            return NotImplemented
        return (
            (self.m, self.n, self.orders) == (other.m, other.n, other.orders)
            and coeffs_equal(self.base.data, other.base.data)
            and coeffs_equal(self.gauge.data, other.gauge.data)
        )

    __hash__ = None  # type: ignore[assignment]


def group_identity(m: int, n: int, t1: int, t2: int) -> WGroupElement:
    return WGroupElement(DiffeoJet.identity(m, t1), GaugeJet.identity(m, n, t2))


def group_project(g: WGroupElement, t1: int, t2: int) -> WGroupElement:
    return WGroupElement(g.base.truncate(t1), g.gauge.truncate(t2))


def group_mul(g1: WGroupElement, g2: WGroupElement) -> WGroupElement:
    if (g1.m, g1.n) != (g2.m, g2.n):
        raise DimensionMismatch("group elements over different (m, n)")
    if g1.orders != g2.orders:
        raise OrderError(f"group orders differ: {g1.orders} vs {g2.orders}")
    m = g1.m
    t1, t2 = g1.orders
    sub = Substitution(g2.base.data, m, t1)
    base, _ = sub.apply(g1.base.data, t1)
    moved, _ = sub.apply(g1.gauge.data, t2)
    gauge = coeff_einsum("ij,jk->ik", moved, g2.gauge.data, m, t2)
    return WGroupElement(DiffeoJet(m, t1, base), GaugeJet(m, g1.n, t2, gauge))


def group_inv(g: WGroupElement) -> WGroupElement:
    m = g.m
    t1, t2 = g.orders
    phi_inv = coeff_invert_map(g.base.data, m, t1)
    moved, _ = Substitution(phi_inv, m, t1).apply(g.gauge.data, t2)
    gauge = coeff_invert_matrix(moved, m, t2)
    return WGroupElement(DiffeoJet(m, t1, phi_inv), GaugeJet(m, g.n, t2, gauge))


def is_kernel_element(g: WGroupElement, k: int) -> bool:
    """True when ``g`` projects to the identity of ``W^(k,k)``."""
    t1, t2 = g.orders
    if k > min(t1, t2):
        return False
    ident = group_identity(g.m, g.n, k, k)
    return group_project(g, k, k) == ident


# ---------- actions ----------


def _require(g: WGroupElement, base: int, gauge: int, what: str) -> None:
    t1, t2 = g.orders
    if t1 < base or t2 < gauge:
        raise OrderError(f"{what} needs group orders ({base}, {gauge}), element has ({t1}, {t2})")


def _conjugated_connection(
    target: np.ndarray, G: np.ndarray, Ginv: np.ndarray, dG: np.ndarray, Jt: np.ndarray, m: int, order: int
) -> np.ndarray:
    # bar K[j,i,r] = G[i,a] K~[b,a,l] J~[l,r] G^-1[b,j] + dG[i,a,r] G^-1[a,j]
    KJ = coeff_einsum("bal,lr->bar", target, Jt, m, order)
    GKJ = coeff_einsum("ia,bar->bir", G, KJ, m, order)
    term = coeff_einsum("bir,bj->jir", GKJ, Ginv, m, order)
    return term + coeff_einsum("iar,aj->jir", dG, Ginv, m, order)


def act_on_linear(g: WGroupElement, K: LinearConnectionJet) -> LinearConnectionJet:
    if (g.m, g.n) != (K.m, K.n):
        raise DimensionMismatch("group element and linear connection over different (m, n)")
    r = K.order
    _require(g, r + 1, r + 1, "linear connection action")
    m = g.m
    phi_inv = coeff_invert_map(g.base.data, m, r + 1)
    sub = Substitution(phi_inv, m, r + 1)
    Kt, _ = sub.apply(K.data, r)
    Jt = coeff_gradient(phi_inv, m, r + 1)
    G, _ = sub.apply(g.gauge.data, r + 1)
    Ginv = coeff_invert_matrix(G, m, r)
    dG = coeff_gradient(G, m, r + 1)
    return LinearConnectionJet.from_data(m, K.n, r, _conjugated_connection(Kt, G, Ginv, dG, Jt, m, r))


def act_on_classical(g: WGroupElement, lam: ClassicalConnectionJet) -> ClassicalConnectionJet:
    if g.m != lam.m:
        raise DimensionMismatch("group element and classical connection over different m")
    s = lam.order
    _require(g, s + 2, 0, "classical connection action")
    m = g.m
    phi_inv = coeff_invert_map(g.base.data, m, s + 2)
    sub = Substitution(phi_inv, m, s + 2)
    Lt, _ = sub.apply(lam.data, s)
    Jt = coeff_gradient(phi_inv, m, s + 2)
    G = coeff_invert_matrix(Jt, m, s + 1)
    dG = coeff_gradient(G, m, s + 1)
    return ClassicalConnectionJet.from_data(m, s, _conjugated_connection(Lt, G, Jt, dG, Jt, m, s))


def _act_on_slot(data: np.ndarray, slot: int, rank: int, matrix: np.ndarray, upper: bool,
                 m: int, order: int) -> np.ndarray:
    letters = EINSUM_LETTERS[:rank]
    old, new = letters[slot], EINSUM_LETTERS[rank]
    result = letters[:slot] + new + letters[slot + 1:]
    if upper:
        return coeff_einsum(f"{new}{old},{letters}->{result}", matrix, data, m, order)
    return coeff_einsum(f"{letters},{old}{new}->{result}", data, matrix, m, order)


def act_on_tensor(g: WGroupElement, t: TensorFieldJet) -> TensorFieldJet:
    """Order-(1,0) tensorial action prolonged through the base diffeomorphism."""
    if g.m != t.m or (t.valence.has_fiber_slots and g.n != t.n):
        raise DimensionMismatch("group element and tensor over different dimensions")
    N = t.order
    has_base = t.valence.has_base_slots
    base_order = N + 1 if has_base else max(N, 1)
    _require(g, base_order, N if t.valence.has_fiber_slots else 0, "tensor action")
    m = g.m
    phi_inv = coeff_invert_map(g.base.data, m, base_order)
    sub = Substitution(phi_inv, m, base_order)
    data, _ = sub.apply(t.data, N)
    if t.valence.has_fiber_slots:
        G, _ = sub.apply(g.gauge.data, N)
        Ginv = coeff_invert_matrix(G, m, N)
    if has_base:
        Jt = coeff_gradient(phi_inv, m, base_order)
        J = coeff_invert_matrix(Jt, m, N)
    for slot, kind in enumerate(t.valence.slots):
        if kind is SlotKind.FIBER_UP:
            data = _act_on_slot(data, slot, t.rank, G, True, m, N)
        elif kind is SlotKind.FIBER_DOWN:
            data = _act_on_slot(data, slot, t.rank, Ginv, False, m, N)
        elif kind is SlotKind.BASE_UP:
            data = _act_on_slot(data, slot, t.rank, J, True, m, N)
        else:
            data = _act_on_slot(data, slot, t.rank, Jt, False, m, N)
    return t.with_data(data, N)


# ---------- sampling ----------


def _random_invertible(rng: np.random.Generator, size: int, bound: int) -> np.ndarray:
    bound = max(bound, 1)
    L = identity_matrix(size)
    U = identity_matrix(size)
    D = identity_matrix(size)
    for i in range(size):
        for j in range(i):
            L[i, j] = random_fractions(rng, (), bound)[()]
            U[j, i] = random_fractions(rng, (), bound)[()]
        num = int(rng.integers(1, bound + 1)) * (1 if rng.integers(0, 2) else -1)
        D[i, i] = Fraction(num, int(rng.integers(1, bound + 1)))
    return np.dot(np.dot(L, D), U)


def _randomize_degrees(rng: np.random.Generator, data: np.ndarray, m: int, order: int,
                       low: int, bound: int) -> np.ndarray:
    basis = monomial_basis(m, order)
    if low > order:
        return data
    start = basis.offsets[low]
    noise = random_fractions(rng, data.shape[:-1] + (basis.size - start,), bound)
    out = data.copy()
    out[..., start:] = out[..., start:] + noise
    return out


def make_kernel_element(m: int, n: int, profile: Tuple[int, int, int], seed: int,
                        bound: int = 3) -> WGroupElement:
    """Random element of ``W^(t1,t2)`` that projects to the identity of ``W^(k,k)``."""
    t1, t2, k = profile
    if k > t1 or k > t2:
        raise OrderError(f"kernel order {k} exceeds group orders ({t1}, {t2})")
    rng = np.random.default_rng([seed, 17])
    base = _randomize_degrees(rng, coeff_identity_map(m, t1), m, t1, k + 1, bound)
    gauge = _randomize_degrees(rng, GaugeJet.identity(m, n, t2).data, m, t2, k + 1, bound)
    return WGroupElement(DiffeoJet(m, t1, base), GaugeJet(m, n, t2, gauge))


def random_group_element(m: int, n: int, t1: int, t2: int, seed: int, bound: int = 3) -> WGroupElement:
    """Random element with invertible linear parts built from unit-triangular and diagonal factors."""
    rng = np.random.default_rng([seed, 29])
    base = coeff_zeros((m,), m, t1)
    base[:, 1: 1 + m] = _random_invertible(rng, m, bound)
    base = _randomize_degrees(rng, base, m, t1, 2, bound)
    gauge = coeff_zeros((n, n), m, t2)
    gauge[:, :, 0] = _random_invertible(rng, n, bound)
    gauge = _randomize_degrees(rng, gauge, m, t2, 1, bound)
    return WGroupElement(DiffeoJet(m, t1, base), GaugeJet(m, n, t2, gauge))


def group_orders_first(s: int, r: int) -> Tuple[int, int]:
    """Group orders acting on (Lambda of order s, K of order r)."""
    return max(s + 2, r + 1), r + 1


def group_orders_second(s1: int, s2: int, r: int) -> Tuple[int, int]:
    """Group orders acting on (Lambda of order s1, K of order s2, Phi of order r)."""
    return max(s1 + 2, s2 + 1, r + 1), max(s2 + 1, r)


__all__ = [
    "DiffeoJet",
    "GaugeJet",
    "WGroupElement",
    "group_identity",
    "group_project",
    "group_mul",
    "group_inv",
    "is_kernel_element",
    "act_on_linear",
    "act_on_classical",
    "act_on_tensor",
    "make_kernel_element",
    "random_group_element",
    "group_orders_first",
    "group_orders_second",
]
