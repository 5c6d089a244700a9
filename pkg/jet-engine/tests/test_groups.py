import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core.fields import Valence, audit_symmetries, jet_coordinate, random_jet  # noqa: E402
from jetcalc.core.groups import (  # noqa: E402
    act_on_classical,
    act_on_linear,
    act_on_tensor,
    group_identity,
    group_inv,
    group_mul,
    group_orders_first,
    group_orders_second,
    is_kernel_element,
    make_kernel_element,
    random_group_element,
)
from jetcalc.core.series import monomial_basis  # noqa: E402
from jetcalc.errors import DimensionMismatch, OrderError, SingularError  # noqa: E402


@pytest.fixture()
def elements():
    return [random_group_element(2, 1, 3, 2, seed) for seed in (1, 2, 3)]


def test_group_laws(elements):
    g1, g2, g3 = elements
    ident = group_identity(2, 1, 3, 2)
    assert group_mul(group_mul(g1, g2), g3) == group_mul(g1, group_mul(g2, g3))
    assert group_mul(ident, g1) == g1
    assert group_mul(g1, group_inv(g1)) == ident
    assert group_mul(group_inv(g1), g1) == ident


def test_mul_requires_matching_orders(elements):
    other = random_group_element(2, 1, 2, 2, 1)
    with pytest.raises(OrderError):
        group_mul(elements[0], other)
    with pytest.raises(DimensionMismatch):
        group_mul(elements[0], random_group_element(2, 2, 3, 2, 1))


def test_actions_compose_as_left_actions(elements):
    g1, g2, _ = elements
    g12 = group_mul(g1, g2)
    lam = random_jet("classical", 2, 1, 1, seed=8)
    K = random_jet("linear", 2, 1, 1, seed=8)
    t = random_jet("tensor", 2, 1, 1, seed=8, valence=Valence.standard(p1=1, q2=1))
    assert act_on_classical(g12, lam) == act_on_classical(g1, act_on_classical(g2, lam))
    assert act_on_linear(g12, K) == act_on_linear(g1, act_on_linear(g2, K))
    assert act_on_tensor(g12, t) == act_on_tensor(g1, act_on_tensor(g2, t))
    assert not audit_symmetries(act_on_classical(g1, lam))


def test_identity_acts_trivially():
    ident = group_identity(2, 2, 4, 3)
    K = random_jet("linear", 2, 2, 2, seed=6)
    lam = random_jet("classical", 2, 2, 2, seed=6)
    assert act_on_linear(ident, K) == K
    assert act_on_classical(ident, lam) == lam


def test_classical_gate_shifts_single_top_coordinate():
    # P^1 with coordinate c at (2,2) on an order-0 classical jet over R^2
    c = Fraction(5, 3)
    lam = random_jet("classical", 2, 1, 0, seed=12)
    ident = group_identity(2, 1, 2, 0)
    base = ident.base.data.copy()
    base[0, monomial_basis(2, 2).position[(2, 2)]] += c / 2
    g = replace(ident, base=replace(ident.base, data=base))

    acted = act_on_classical(g, lam)
    diff = acted.data - lam.data
    assert jet_coordinate(acted, (2, 1, 2), ()) - jet_coordinate(lam, (2, 1, 2), ()) == c
    assert np.count_nonzero(diff != 0) == 1


def test_linear_gate_shifts_single_top_coordinate():
    # Q^1_2 at (1,) on an order-0 linear jet moves K_2^1_1 only
    c = Fraction(-2)
    K = random_jet("linear", 2, 2, 0, seed=12)
    ident = group_identity(2, 2, 1, 1)
    gauge = ident.gauge.data.copy()
    gauge[0, 1, monomial_basis(2, 1).position[(1,)]] += c
    g = replace(ident, gauge=replace(ident.gauge, data=gauge))

    acted = act_on_linear(g, K)
    diff = acted.data - K.data
    assert diff[1, 0, 0, 0] == c
    assert np.count_nonzero(diff != 0) == 1


def test_kernel_elements_project_to_identity():
    h1 = make_kernel_element(2, 1, (3, 2, 1), seed=4)
    h2 = make_kernel_element(2, 1, (3, 2, 1), seed=5)
    assert is_kernel_element(h1, 1)
    assert is_kernel_element(group_mul(h1, h2), 1)
    assert is_kernel_element(group_identity(2, 1, 3, 2), 2)
    assert not is_kernel_element(h1, 3)
    with pytest.raises(OrderError):
        make_kernel_element(2, 1, (3, 2, 3), seed=4)


def test_action_needs_enough_group_order():
    g = random_group_element(2, 1, 2, 2, seed=1)
    lam = random_jet("classical", 2, 1, 1, seed=1)
    with pytest.raises(OrderError):
        act_on_classical(g, lam)
    K = random_jet("linear", 2, 1, 2, seed=1)
    with pytest.raises(OrderError):
        act_on_linear(g, K)


def test_singular_linear_part_is_rejected():
    ident = group_identity(2, 1, 2, 1)
    base = ident.base.data.copy()
    base[1, 2] = Fraction(0)
    with pytest.raises(SingularError):
        replace(ident.base, data=base)


def test_group_order_requirements():
    assert group_orders_first(2, 2) == (4, 3)
    assert group_orders_first(0, 2) == (3, 3)
    assert group_orders_second(2, 2, 2) == (4, 3)
    assert group_orders_second(1, 1, 3) == (4, 3)
