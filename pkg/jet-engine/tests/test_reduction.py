import sys
from dataclasses import replace
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core.fields import Valence, random_jet  # noqa: E402
from jetcalc.core.groups import is_kernel_element, make_kernel_element  # noqa: E402
from jetcalc.core.identities import ricci_equation_residuals  # noqa: E402
from jetcalc.core.reduction import (  # noqa: E402
    ReducedDataFirst,
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
from jetcalc.errors import NonMembership, PreconditionError, ValenceError  # noqa: E402


def pair(seed, s=2, r=2, m=2, n=1):
    return random_jet("classical", m, n, s, seed), random_jet("linear", m, n, r, seed)


def triple(seed, orders=(2, 2, 2), m=2, n=1, valence=None):
    s1, s2, r = orders
    phi = random_jet("tensor", m, n, r, seed, valence=valence or Valence.standard(p1=1))
    return random_jet("classical", m, n, s1, seed), random_jet("linear", m, n, s2, seed), phi


@pytest.mark.parametrize(
    "orders",
    [(2, 2, 4), (0, 3, 1), (1, 1, 0), (-1, 0, 1)],
)
def test_first_kind_rejects_inadmissible_orders(orders):
    with pytest.raises(PreconditionError):
        check_first_orders(*orders)


def test_second_kind_rejects_inadmissible_orders():
    with pytest.raises(PreconditionError):
        check_second_orders(1, 1, 3, 1)
    with pytest.raises(PreconditionError):
        check_second_orders(2, 2, 2, 4)
    check_second_orders(2, 2, 2, 3)


def test_reduce_first_layout():
    lam, K = pair(1)
    d = reduce_first(lam, K, 2)
    assert d.lam_low.order == 0
    assert d.K_low.order == 1
    assert [c.order for c in d.R_C] == [0, 1]
    assert [c.order for c in d.R_L] == [1]

    d1 = reduce_first(lam, K, 1)
    assert d1.lam_low is None
    assert [c.order for c in d1.R_L] == [0, 1]


def test_reduced_data_validates_chains():
    lam, K = pair(1)
    d = reduce_first(lam, K, 2)
    with pytest.raises(ValenceError):
        replace(d, R_C=d.R_C[:1])
    with pytest.raises(PreconditionError):
        reduce_first(lam, K, 4)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_reduce_first_is_kernel_invariant(k):
    lam, K = pair(3)
    h = make_kernel_element(2, 1, kernel_profile_first(2, 2, k), seed=3)
    assert reduce_first(*act_on_pair(h, lam, K), k) == reduce_first(lam, K, k)


def test_reconstruct_first_round_trip():
    lam, K = pair(4)
    d = reduce_first(lam, K, 2)
    (lam2, K2), trace = reconstruct_first(d)
    assert reduce_first(lam2, K2, 2) == d
    assert trace.all_unique
    assert trace.stages() == ["classical", "linear"]
    with pytest.raises(PreconditionError):
        reconstruct_first(d, orders=(1, 2))


def test_reconstruct_first_is_canonical():
    lam, K = pair(5)
    h = make_kernel_element(2, 1, kernel_profile_first(2, 2, 2), seed=6)
    moved = act_on_pair(h, lam, K)
    first, _ = reconstruct_first(reduce_first(lam, K, 2))
    second, _ = reconstruct_first(reduce_first(*moved, 2))
    assert first[0] == second[0]
    assert first[1] == second[1]


def test_orbit_solve_recovers_kernel_element():
    lam, K = pair(7)
    h = make_kernel_element(2, 1, kernel_profile_first(2, 2, 2), seed=8)
    moved = act_on_pair(h, lam, K)
    found = orbit_solve((lam, K), moved, 2)
    assert found is not None
    assert is_kernel_element(found, 2)
    assert act_on_pair(found, *moved) == (lam, K)


def test_orbit_solve_returns_none_for_other_orbits():
    assert orbit_solve(pair(7), pair(9), 2) is None


def test_reduce_second_layout():
    lam, K, phi = triple(2)
    d = reduce_second(lam, K, phi, 2)
    assert d.K_low.order == 0
    assert d.K_sym_top.degree == 2
    assert d.phi_low.order == 1
    assert len(d.V) == 1
    assert d.field_differential(2).valence.label() == "E,D,D"


def test_field_stage_rank_is_computed():
    lam, K, phi = triple(6)
    d = reduce_second(lam, K, phi, 2)
    (_, _, phi2), trace = reconstruct_second(d)
    field = [step for step in trace.steps if step.stage == "field"]
    assert [step.order for step in field] == [2]
    step = field[0]
    assert (step.unknowns, step.equations, step.rank) == (3, 4, 3)
    assert step.unique
    assert phi2.order == 2


@pytest.mark.slow
def test_second_kind_kernel_invariance_and_round_trip():
    lam, K, phi = triple(3)
    d = reduce_second(lam, K, phi, 2)
    h = make_kernel_element(2, 1, kernel_profile_second(2, 2, 2, 2), seed=3)
    moved = act_on_triple(h, lam, K, phi)
    assert reduce_second(*moved, 2) == d

    (lam2, K2, phi2), trace = reconstruct_second(d)
    assert reduce_second(lam2, K2, phi2, 2) == d
    assert trace.all_unique
    assert "field" in trace.stages()

    found = orbit_solve_second((lam, K, phi), moved, 2)
    assert found is not None
    assert act_on_triple(found, *moved) == (lam, K, phi)


def test_ricci_equations_hold_on_reduced_data():
    lam, K, phi = triple(4, valence=Valence.standard(q1=1, q2=1))
    d = reduce_second(lam, K, phi, 2)
    assert all(res.is_zero() for res in ricci_equation_residuals(d, 2))


def test_perturbed_field_differential_is_rejected():
    lam, K, phi = triple(5)
    d = reduce_second(lam, K, phi, 2)
    data = d.V[0].data.copy()
    data[0, 0, 1, 0] += 1
    bad = replace(d, V=(d.V[0].with_data(data),))

    assert not all(res.is_zero() for res in ricci_equation_residuals(bad, 2))
    with pytest.raises(NonMembership) as excinfo:
        reconstruct_second(bad)
    assert excinfo.value.stage == "ricci"
    assert excinfo.value.order == 2


def test_reduced_first_rejects_missing_low_jet():
    lam, K = pair(1)
    d = reduce_first(lam, K, 2)
    with pytest.raises(ValenceError):
        ReducedDataFirst(m=2, n=1, s=2, r=2, k=2, lam_low=None, K_low=d.K_low, R_C=d.R_C, R_L=d.R_L)
