import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core.linalg import as_fraction_matrix, inverse_matrix, matrix_rank, solve_exact  # noqa: E402
from jetcalc.errors import SingularError  # noqa: E402


def test_inverse_matrix_is_exact():
    inv = inverse_matrix([[2, 1], [1, 1]])
    assert inv.tolist() == [[1, -1], [-1, 2]]
    third = inverse_matrix([[3]])
    assert third[0, 0] == Fraction(1, 3)


def test_inverse_matrix_pivots_past_zero():
    inv = inverse_matrix([[0, 1], [1, 0]])
    assert inv.tolist() == [[0, 1], [1, 0]]


def test_singular_matrix_raises():
    with pytest.raises(SingularError):
        inverse_matrix([[1, 2], [2, 4]])


def test_solve_exact_unique_solution():
    result = solve_exact([[1, 1], [1, -1]], [3, 1], 2)
    assert result.consistent
    assert result.unique
    assert result.solution == [2, 1]


def test_solve_exact_detects_inconsistency():
    result = solve_exact([[1, 1], [2, 2]], [1, 3], 2)
    assert not result.consistent
    assert result.solution is None
    assert not result.unique


def test_solve_exact_underdetermined_sets_free_to_zero():
    result = solve_exact([[1, 2, 0]], [4], 3)
    assert result.consistent
    assert result.rank == 1
    assert not result.unique
    assert result.solution == [4, 0, 0]


def test_matrix_rank_and_fraction_conversion():
    assert matrix_rank([[1, 2], [2, 4], [0, 1]]) == 2
    assert matrix_rank([]) == 0
    converted = as_fraction_matrix(np.array([[1, 2]], dtype=object))
    assert all(isinstance(v, Fraction) for v in converted.ravel())
