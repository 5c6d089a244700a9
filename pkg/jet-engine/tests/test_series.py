import sys
from fractions import Fraction
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core.series import (  # noqa: E402
    TruncatedSeries,
    diffeo_invert,
    matrix_series_inverse,
    monomial_basis,
    multiplicity_factorial,
    series_compose,
    series_evaluate,
    series_partial,
)
from jetcalc.errors import DimensionMismatch, OrderError, PreconditionError, SingularError  # noqa: E402


def poly(m, order, terms):
    return TruncatedSeries.from_monomials(m, order, terms)


def test_basis_is_graded_then_lexicographic():
    basis = monomial_basis(2, 2)
    assert basis.multi_indices == ((), (1,), (2,), (1, 1), (1, 2), (2, 2))
    assert basis.degree_slice(2) == slice(3, 6)
    assert monomial_basis(3, 3).size == 20


def test_multiplicity_factorial():
    assert multiplicity_factorial(()) == 1
    assert multiplicity_factorial((1, 1, 2)) == 2
    assert multiplicity_factorial((2, 2, 2)) == 6


def test_product_truncates_at_trust_order():
    one = TruncatedSeries.constant(1, 3, 1)
    x = TruncatedSeries.variable(1, 3, 1)
    assert (one + x) * (one - x) == poly(1, 3, {(): 1, (1, 1): -1})

    short = TruncatedSeries.variable(1, 1, 1)
    assert (x * x + short).order == 1


def test_jet_coordinate_counts_repeated_labels():
    s = poly(2, 3, {(1, 1): 1, (1, 2): 3})
    assert s.coefficient((1, 1)) == 1
    assert s.jet_coordinate((1, 1)) == 2
    assert s.jet_coordinate((2, 1)) == 3
    with pytest.raises(OrderError):
        s.coefficient((1, 1, 1, 2))


def test_partial_lowers_order():
    s = poly(2, 3, {(1, 1, 2): 1})
    d1 = series_partial(s, 1)
    assert d1.order == 2
    assert d1 == poly(2, 2, {(1, 2): 2})
    with pytest.raises(OrderError):
        series_partial(TruncatedSeries.constant(2, 0, 5), 1)
    with pytest.raises(DimensionMismatch):
        series_partial(s, 3)


def test_compose_with_linear_substitution():
    outer = poly(2, 3, {(1, 1): 1})
    inner = [poly(2, 3, {(1,): 1, (2,): 1}), TruncatedSeries.variable(2, 3, 2)]
    assert series_compose(outer, inner) == poly(2, 3, {(1, 1): 1, (1, 2): 2, (2, 2): 1})


def test_compose_rejects_inner_constant_term():
    outer = TruncatedSeries.variable(1, 2, 1)
    with pytest.raises(PreconditionError):
        series_compose(outer, [poly(1, 2, {(): 1, (1,): 1})])


def test_diffeo_inverse_one_dimensional():
    F = [poly(1, 3, {(1,): 1, (1, 1): 1})]
    (G,) = diffeo_invert(F)
    assert G == poly(1, 3, {(1,): 1, (1, 1): -1, (1, 1, 1): 2})
    assert series_compose(F[0], [G]) == TruncatedSeries.variable(1, 3, 1)


def test_diffeo_inverse_preconditions():
    with pytest.raises(PreconditionError):
        diffeo_invert([poly(1, 2, {(): 1, (1,): 1})])
    with pytest.raises(SingularError):
        diffeo_invert([poly(2, 2, {(1,): 1}), poly(2, 2, {(1,): 2})])


def test_matrix_series_inverse_geometric():
    x = TruncatedSeries.variable(1, 3, 1)
    [[inv]] = matrix_series_inverse([[TruncatedSeries.constant(1, 3, 1) + x]])
    assert inv == poly(1, 3, {(): 1, (1,): -1, (1, 1): 1, (1, 1, 1): -1})


def test_evaluate_polynomial():
    s = poly(2, 2, {(): 1, (1,): 2, (1, 2): 3})
    assert series_evaluate(s, [Fraction(1, 2), Fraction(2)]) == 5
    with pytest.raises(DimensionMismatch):
        series_evaluate(s, [1])


def test_mixed_dimensions_raise():
    with pytest.raises(DimensionMismatch):
        TruncatedSeries.variable(1, 2, 1) + TruncatedSeries.variable(2, 2, 1)
