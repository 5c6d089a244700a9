"""Exact truncated multivariate power series.

A series over ``m`` base variables is stored as a dense numpy object array of
``Fraction`` monomial coefficients, ordered by total degree and, inside one
degree, by the sorted multi-index of the monomial.  Because that ordering does
not depend on the truncation order, truncating is slicing a prefix.

Fields of series (tensors, matrices, maps) are numpy object arrays whose last
axis is the monomial axis; the ``coeff_*`` helpers below work on those arrays
and are what the rest of the engine builds on.  ``TruncatedSeries`` is the
single-component view with operator overloads.

Every value carries a trust order.  Results carry the weakest trust order of
their inputs; a derivative loses one.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatch, OrderError, PreconditionError
from .linalg import inverse_matrix

ZERO = Fraction(0)
ONE = Fraction(1)

MultiIndex = Tuple[int, ...]


def canonical_multi_index(labels: Iterable[int]) -> MultiIndex:
    """Sorted tuple of 1-based base-axis labels."""
    return tuple(sorted(int(label) for label in labels))


def multiplicity_factorial(mi: Sequence[int]) -> int:
    out = 1
    for count in Counter(mi).values():
        out *= factorial(count)
    return out


@dataclass(frozen=True)
class MonomialBasis:
    m: int
    order: int
    multi_indices: Tuple[MultiIndex, ...]
    offsets: Tuple[int, ...]
    position: Dict[MultiIndex, int]

    @property
    def size(self) -> int:
        return len(self.multi_indices)

    def degree_slice(self, degree: int) -> slice:
        return slice(self.offsets[degree], self.offsets[degree + 1])


@lru_cache(maxsize=None)
def monomial_basis(m: int, order: int) -> MonomialBasis:
    if m < 1 or order < 0:
        raise OrderError(f"no monomial basis for m={m}, order={order}")
    multi_indices: List[MultiIndex] = []
    offsets = [0]
    for degree in range(order + 1):
        multi_indices.extend(combinations_with_replacement(range(1, m + 1), degree))
        offsets.append(len(multi_indices))
    position = {mi: i for i, mi in enumerate(multi_indices)}
    return MonomialBasis(m, order, tuple(multi_indices), tuple(offsets), position)


def basis_size(m: int, order: int) -> int:
    return monomial_basis(m, order).size


@lru_cache(maxsize=None)
def _product_table(m: int, order: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    basis = monomial_basis(m, order)
    left: List[int] = []
    right: List[int] = []
    target: List[int] = []
    for i, a in enumerate(basis.multi_indices):
        for j, b in enumerate(basis.multi_indices):
            if len(a) + len(b) > order:
                break
            left.append(i)
            right.append(j)
            target.append(basis.position[tuple(sorted(a + b))])
    return (
        np.array(left, dtype=np.intp),
        np.array(right, dtype=np.intp),
        np.array(target, dtype=np.intp),
    )


@lru_cache(maxsize=None)
def _partial_table(m: int, order: int, axis: int) -> Tuple[np.ndarray, np.ndarray]:
    source = monomial_basis(m, order)
    target = monomial_basis(m, order - 1)
    label = axis + 1
    index: List[int] = []
    factors: List[Fraction] = []
    for mi in target.multi_indices:
        index.append(source.position[tuple(sorted(mi + (label,)))])
        factors.append(Fraction(mi.count(label) + 1))
    return np.array(index, dtype=np.intp), np.array(factors, dtype=object)


@lru_cache(maxsize=None)
def coordinate_factors(m: int, order: int) -> np.ndarray:
    """Multiplicity factorials per basis monomial (coefficient -> jet coordinate)."""
    basis = monomial_basis(m, order)
    return np.array([Fraction(multiplicity_factorial(mi)) for mi in basis.multi_indices], dtype=object)


# ---------- coefficient-array kernel ----------


def coeff_zeros(lead: Tuple[int, ...], m: int, order: int) -> np.ndarray:
    return np.full(tuple(lead) + (basis_size(m, order),), ZERO, dtype=object)


def coeff_truncate(a: np.ndarray, m: int, order: int) -> np.ndarray:
    return a[..., : basis_size(m, order)]


def coeff_pad(a: np.ndarray, m: int, order: int) -> np.ndarray:
    """Extend with zero coefficients up to ``order`` (used to zero top jets)."""
    size = basis_size(m, order)
    if a.shape[-1] >= size:
        return a[..., :size]
    out = np.full(a.shape[:-1] + (size,), ZERO, dtype=object)
    out[..., : a.shape[-1]] = a
    return out


def _scatter(paired: np.ndarray, target: np.ndarray, size: int) -> np.ndarray:
    lead = paired.shape[:-1]
    out = np.full((size,) + lead, ZERO, dtype=object)
    np.add.at(out, target, np.moveaxis(paired, -1, 0))
    return np.moveaxis(out, 0, -1)


def coeff_mul(a: np.ndarray, b: np.ndarray, m: int, order: int) -> np.ndarray:
    """Componentwise series product with numpy broadcasting of leading axes."""
    left, right, target = _product_table(m, order)
    size = basis_size(m, order)
    paired = a[..., :size][..., left] * b[..., :size][..., right]
    return _scatter(paired, target, size)


def coeff_einsum(spec: str, a: np.ndarray, b: np.ndarray, m: int, order: int) -> np.ndarray:
    """``np.einsum`` over series-valued operands; the monomial axis is implicit.

    ``spec`` must not use the letter ``z``.
    """
    left, right, target = _product_table(m, order)
    size = basis_size(m, order)
    inputs, output = spec.split("->")
    spec_a, spec_b = inputs.split(",")
    paired = np.einsum(
        f"{spec_a}z,{spec_b}z->{output}z",
        a[..., :size][..., left],
        b[..., :size][..., right],
    )
    return _scatter(paired, target, size)


def coeff_partial(a: np.ndarray, m: int, order: int, axis: int) -> np.ndarray:
    """Formal derivative along 0-based ``axis``; the result has trust order ``order - 1``."""
    if order < 1:
        raise OrderError("cannot differentiate an order-0 jet")
    index, factors = _partial_table(m, order, axis)
    return a[..., : basis_size(m, order)][..., index] * factors


def coeff_gradient(a: np.ndarray, m: int, order: int) -> np.ndarray:
    """All first partials stacked on a new axis placed just before the monomial axis."""
    return np.stack([coeff_partial(a, m, order, axis) for axis in range(m)], axis=-2)


def coeff_evaluate(a: np.ndarray, m: int, order: int, point: Sequence[Fraction]) -> np.ndarray:
    basis = monomial_basis(m, order)
    values = []
    for mi in basis.multi_indices:
        v = ONE
        for label in mi:
            v *= Fraction(point[label - 1])
        values.append(v)
    return np.dot(a[..., : basis.size], np.array(values, dtype=object))


class Substitution:
    """Precomposition with a fixed inner map, ``outer -> outer o inner``.

    The inner map has ``m`` components with zero constant term, so composition
    is a linear operator on coefficient vectors; its matrix (rows are the
    powers of the inner map) is built once and reused for every outer series.
    """

    def __init__(self, inner: np.ndarray, m: int, order: int):
        if inner.shape[0] != m:
            raise DimensionMismatch(f"inner map has {inner.shape[0]} components, expected {m}")
        if any(c != 0 for c in inner[:, 0]):
            raise PreconditionError("inner series must vanish at the origin")
        self.m = m
        self.order = order
        basis = monomial_basis(m, order)
        inner = coeff_pad(inner, m, order)
        powers = coeff_zeros((basis.size,), m, order)
        powers[0, 0] = ONE
        for idx in range(1, basis.size):
            mi = basis.multi_indices[idx]
            rest = basis.position[mi[1:]]
            powers[idx] = coeff_mul(powers[rest], inner[mi[0] - 1], m, order)
        self.matrix = powers

    def apply(self, outer: np.ndarray, outer_order: int) -> Tuple[np.ndarray, int]:
        order = min(outer_order, self.order)
        size = basis_size(self.m, order)
        return np.dot(outer[..., :size], self.matrix[:size, :size]), order


def linear_part(F: np.ndarray, m: int) -> np.ndarray:
    """Jacobian at the origin of a map given as an ``(m, size)`` coefficient array."""
    return np.array([[F[lam, 1 + mu] for mu in range(m)] for lam in range(m)], dtype=object)


def coeff_identity_map(m: int, order: int) -> np.ndarray:
    X = coeff_zeros((m,), m, order)
    for lam in range(m):
        X[lam, 1 + lam] = ONE
    return X


def coeff_invert_map(F: np.ndarray, m: int, order: int) -> np.ndarray:
    """Compositional inverse by fixed-point iteration ``G = A^-1 (x - H(G))``."""
    if order < 1:
        raise OrderError("a diffeomorphism jet needs order >= 1")
    A_inv = inverse_matrix(linear_part(F, m))
    H = coeff_truncate(F, m, order).copy()
    H[:, : 1 + m] = ZERO
    X = coeff_identity_map(m, order)
    G = np.dot(A_inv, X)
    for _ in range(order - 1):
        HG, _ = Substitution(G, m, order).apply(H, order)
        G = np.dot(A_inv, X - HG)
    return G


def coeff_invert_matrix(M: np.ndarray, m: int, order: int) -> np.ndarray:
    """Inverse of a square matrix of series; the constant matrix must be invertible."""
    M = coeff_truncate(M, m, order)
    n = M.shape[0]
    X0 = coeff_zeros((n, n), m, order)
    X0[:, :, 0] = inverse_matrix(M[:, :, 0])
    H = M.copy()
    H[:, :, 0] = ZERO
    N = coeff_einsum("ij,jk->ik", X0, H, m, order)
    X = X0
    for _ in range(order):
        X = X0 - coeff_einsum("ij,jk->ik", N, X, m, order)
    return X


def coeffs_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.all(a == b))


# ---------- single-series API ----------


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    m: int
    order: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        expected = basis_size(self.m, self.order)
        if self.coeffs.shape != (expected,):
            raise DimensionMismatch(f"expected {expected} coefficients, got {self.coeffs.shape}")

    @classmethod
    def zero(cls, m: int, order: int) -> "TruncatedSeries":
        return cls(m, order, coeff_zeros((), m, order))

    @classmethod
    def constant(cls, m: int, order: int, value) -> "TruncatedSeries":
        c = coeff_zeros((), m, order)
        c[0] = Fraction(value)
        return cls(m, order, c)

    @classmethod
    def variable(cls, m: int, order: int, axis: int) -> "TruncatedSeries":
        """The coordinate function ``x^axis`` (1-based)."""
        return cls.from_monomials(m, order, {(axis,): 1})

    @classmethod
    def from_monomials(cls, m: int, order: int, terms: Mapping[Sequence[int], object]) -> "TruncatedSeries":
        basis = monomial_basis(m, order)
        c = coeff_zeros((), m, order)
        for mi, value in terms.items():
            key = canonical_multi_index(mi)
            if key in basis.position:
                c[basis.position[key]] += Fraction(value)
        return cls(m, order, c)

    def coefficient(self, mi: Sequence[int]) -> Fraction:
        key = canonical_multi_index(mi)
        if len(key) > self.order:
            raise OrderError(f"monomial {key} beyond trust order {self.order}")
        return self.coeffs[monomial_basis(self.m, self.order).position[key]]

    def jet_coordinate(self, mi: Sequence[int]) -> Fraction:
        """Partial derivative value at the origin along the multi-index."""
        return self.coefficient(mi) * multiplicity_factorial(mi)

    def value_at_origin(self) -> Fraction:
        return self.coeffs[0]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise OrderError(f"cannot raise trust order {self.order} to {order}")
        return TruncatedSeries(self.m, order, coeff_truncate(self.coeffs, self.m, order))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_add(self, other)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_sub(self, other)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def __neg__(self) -> "TruncatedSeries":
        return series_neg(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.m == other.m and self.order == other.order and coeffs_equal(self.coeffs, other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        basis = monomial_basis(self.m, self.order)
        terms = [f"{c}*x{list(mi)}" for mi, c in zip(basis.multi_indices, self.coeffs) if c != 0]
        return f"TruncatedSeries(m={self.m}, order={self.order}, {' + '.join(terms) or '0'})"


def _common(a: TruncatedSeries, b: TruncatedSeries) -> int:
    if a.m != b.m:
        raise DimensionMismatch(f"base dimensions differ: {a.m} vs {b.m}")
    return min(a.order, b.order)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = _common(a, b)
    return TruncatedSeries(a.m, order, coeff_truncate(a.coeffs, a.m, order) + coeff_truncate(b.coeffs, b.m, order))


def series_sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = _common(a, b)
    return TruncatedSeries(a.m, order, coeff_truncate(a.coeffs, a.m, order) - coeff_truncate(b.coeffs, b.m, order))


def series_neg(a: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(a.m, a.order, -a.coeffs)


def series_scale(a: TruncatedSeries, factor) -> TruncatedSeries:
    return TruncatedSeries(a.m, a.order, a.coeffs * Fraction(factor))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = _common(a, b)
    return TruncatedSeries(a.m, order, coeff_mul(a.coeffs, b.coeffs, a.m, order))


def series_partial(a: TruncatedSeries, axis: int) -> TruncatedSeries:
    """Formal ``d/dx^axis`` (1-based axis)."""
    if not 1 <= axis <= a.m:
        raise DimensionMismatch(f"axis {axis} outside 1..{a.m}")
    return TruncatedSeries(a.m, a.order - 1, coeff_partial(a.coeffs, a.m, a.order, axis - 1))


def series_evaluate(a: TruncatedSeries, point: Sequence[Fraction]) -> Fraction:
    if len(point) != a.m:
        raise DimensionMismatch(f"point has {len(point)} coordinates, expected {a.m}")
    return coeff_evaluate(a.coeffs, a.m, a.order, point)


def _stack(series: Sequence[TruncatedSeries]) -> Tuple[np.ndarray, int, int]:
    if not series:
        raise DimensionMismatch("empty map")
    m = series[0].m
    if any(s.m != m for s in series):
        raise DimensionMismatch("map components have different base dimensions")
    order = min(s.order for s in series)
    return np.stack([coeff_truncate(s.coeffs, m, order) for s in series]), m, order


def series_compose(outer: TruncatedSeries, inner: Sequence[TruncatedSeries]) -> TruncatedSeries:
    inner_arr, m, order = _stack(inner)
    if outer.m != len(inner):
        raise DimensionMismatch(f"outer has m={outer.m} but inner map has {len(inner)} components")
    if m != outer.m:
        raise DimensionMismatch(f"inner map lives over m={m}, outer over m={outer.m}")
    coeffs, order = Substitution(inner_arr, m, order).apply(outer.coeffs, outer.order)
    return TruncatedSeries(m, order, coeffs)


def diffeo_invert(components: Sequence[TruncatedSeries]) -> List[TruncatedSeries]:
    F, m, order = _stack(components)
    if len(components) != m:
        raise DimensionMismatch(f"a diffeomorphism of R^{m} needs {m} components")
    if any(c != 0 for c in F[:, 0]):
        raise PreconditionError("diffeomorphism jet must fix the origin")
    G = coeff_invert_map(F, m, order)
    return [TruncatedSeries(m, order, G[lam]) for lam in range(m)]


def matrix_series_inverse(M: Sequence[Sequence[TruncatedSeries]]) -> List[List[TruncatedSeries]]:
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionMismatch("matrix of series must be square")
    flat = [s for row in M for s in row]
    arr, m, order = _stack(flat)
    inv = coeff_invert_matrix(arr.reshape(n, n, -1), m, order)
    return [[TruncatedSeries(m, order, inv[i, j]) for j in range(n)] for i in range(n)]


__all__ = [
    "ZERO",
    "ONE",
    "MultiIndex",
    "canonical_multi_index",
    "multiplicity_factorial",
    "MonomialBasis",
    "monomial_basis",
    "basis_size",
    "coordinate_factors",
    "coeff_zeros",
    "coeff_truncate",
    "coeff_pad",
    "coeff_mul",
    "coeff_einsum",
    "coeff_partial",
    "coeff_gradient",
    "coeff_evaluate",
    "coeff_identity_map",
    "coeff_invert_map",
    "coeff_invert_matrix",
    "coeffs_equal",
    "linear_part",
    "Substitution",
    "TruncatedSeries",
    "series_add",
    "series_sub",
    "series_neg",
    "series_scale",
    "series_mul",
    "series_partial",
    "series_evaluate",
    "series_compose",
    "diffeo_invert",
    "matrix_series_inverse",
]
