import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core.covariant import (  # noqa: E402
    CurvatureDifferentialData,
    covariant_differential,
    curvature_chain_classical,
    curvature_chain_linear,
    curvature_classical,
    curvature_linear,
    curvature_valence,
    differential_chain,
    formal_curvature_map_classical,
    formal_curvature_map_linear,
    iterated_covariant_differential,
)
from jetcalc.core.fields import (  # noqa: E402
    ClassicalConnectionJet,
    LinearConnectionJet,
    TensorFieldJet,
    Valence,
    project_jet,
    random_jet,
)
from jetcalc.core.series import monomial_basis  # noqa: E402
from jetcalc.errors import OrderError, ValenceError  # noqa: E402


def test_classical_curvature_from_linear_coordinate():
    # Lambda_1^1_1 = x^2 gives w_1^1_12 = 1 at the origin
    data = ClassicalConnectionJet.zeros(2, 1).data.copy()
    data[0, 0, 0, monomial_basis(2, 1).position[(2,)]] = Fraction(1)
    w = curvature_classical(ClassicalConnectionJet.from_data(2, 1, data))
    assert w.order == 0
    assert w.value((1, 1, 1, 2)) == 1
    assert w.value((1, 1, 2, 1)) == -1
    assert np.count_nonzero(w.data != 0) == 2


def test_linear_curvature_of_constant_noncommuting_connection():
    data = LinearConnectionJet.zeros(2, 2, 1).data.copy()
    data[0, 1, 0, 0] = Fraction(1)
    data[1, 0, 1, 0] = Fraction(1)
    u = curvature_linear(LinearConnectionJet.from_data(2, 2, 1, data))
    assert u.value((1, 1, 1, 2)) == -1
    assert u.value((2, 2, 1, 2)) == 1
    assert u.value((1, 1, 2, 1)) == 1


def test_flat_connections_have_no_curvature():
    assert curvature_classical(ClassicalConnectionJet.zeros(3, 2)).is_zero()
    data = LinearConnectionJet.zeros(2, 2, 1).data.copy()
    data[0, 0, 0, 0] = Fraction(2)
    data[1, 1, 1, 0] = Fraction(-1)
    assert curvature_linear(LinearConnectionJet.from_data(2, 2, 1, data)).is_zero()
    with pytest.raises(OrderError):
        curvature_linear(LinearConnectionJet.zeros(2, 2, 0))


def test_covariant_differential_without_connection_terms_is_gradient():
    valence = Valence.standard(p1=1)
    t = TensorFieldJet.zeros(2, 1, valence, 2)
    data = t.data.copy()
    data[0, monomial_basis(2, 2).position[(1, 2)]] = Fraction(1)
    dt = covariant_differential(t.with_data(data), LinearConnectionJet.zeros(2, 1, 1))
    assert dt.valence.label() == "E,D"
    assert dt.order == 1
    assert dt.component((1, 1)).jet_coordinate((2,)) == 1
    assert dt.component((1, 2)).jet_coordinate((1,)) == 1


def test_covariant_differential_upper_and_lower_signs():
    lam = random_jet("classical", 2, 1, 1, seed=2)
    up = TensorFieldJet.zeros(2, 1, Valence.standard(p2=1), 1)
    down = TensorFieldJet.zeros(2, 1, Valence.standard(q2=1), 1)
    up_data, down_data = up.data.copy(), down.data.copy()
    up_data[0, 0] = Fraction(1)
    down_data[0, 0] = Fraction(1)
    d_up = covariant_differential(up.with_data(up_data), lam=lam)
    d_down = covariant_differential(down.with_data(down_data), lam=lam)
    # constant fields: nabla_nu X^rho = -Lambda_1^rho_nu and nabla_nu a_mu = +Lambda_mu^1_nu
    assert d_up.value((2, 1)) == -lam.field.value((1, 2, 1))
    assert d_down.value((2, 1)) == lam.field.value((2, 1, 1))


def test_covariant_differential_needs_connections():
    t = random_jet("tensor", 2, 1, 2, seed=1, valence=Valence.standard(p1=1, q2=1))
    with pytest.raises(ValenceError):
        covariant_differential(t, K=random_jet("linear", 2, 1, 2, seed=1))
    with pytest.raises(OrderError):
        iterated_covariant_differential(t, None, None, 3)


def test_differential_chain_matches_iteration():
    lam = random_jet("classical", 2, 1, 2, seed=3)
    K = random_jet("linear", 2, 1, 2, seed=3)
    t = random_jet("tensor", 2, 1, 2, seed=3, valence=Valence.standard(p1=1, q2=1))
    chain = differential_chain(t, K, lam, 1, 2)
    assert chain[0] == iterated_covariant_differential(t, K, lam, 1).at_origin()
    assert chain[1] == iterated_covariant_differential(t, K, lam, 2).at_origin()


def test_formal_curvature_maps_use_only_needed_orders():
    lam = random_jet("classical", 2, 2, 2, seed=7)
    K = random_jet("linear", 2, 2, 3, seed=7)
    w1 = formal_curvature_map_classical(lam, 1)
    assert w1 == formal_curvature_map_classical(project_jet(lam, 2), 1)
    assert w1.tensor.valence.label() == "T*,T,T*,T*,D"
    u1 = formal_curvature_map_linear(lam, K, 1)
    assert u1 == formal_curvature_map_linear(project_jet(lam, 0), project_jet(K, 2), 1)
    assert formal_curvature_map_linear(None, K, 0).tensor == curvature_linear(K).at_origin()
    with pytest.raises(OrderError):
        formal_curvature_map_classical(lam, 2)
    with pytest.raises(OrderError):
        formal_curvature_map_linear(None, K, 1)


def test_curvature_chains_cover_requested_range():
    lam = random_jet("classical", 2, 2, 2, seed=8)
    K = random_jet("linear", 2, 2, 2, seed=8)
    chain = curvature_chain_classical(lam, 0, 1)
    assert [c.order for c in chain] == [0, 1]
    assert chain[1] == formal_curvature_map_classical(lam, 1)
    linear = curvature_chain_linear(lam, K, 1, 1)
    assert linear == [formal_curvature_map_linear(lam, K, 1)]
    assert curvature_chain_classical(lam, 2, 1) == []
    with pytest.raises(OrderError):
        curvature_chain_linear(lam, K, 0, 2)


def test_curvature_data_validates_shape():
    lam = random_jet("classical", 2, 0, 1, seed=1)
    w = curvature_classical(lam)
    assert CurvatureDifferentialData("classical", 0, w).m == 2
    assert curvature_valence("linear", 2).label() == "E*,E,T*,T*,D,D"
    with pytest.raises(ValenceError):
        CurvatureDifferentialData("linear", 0, w)
    with pytest.raises(ValenceError):
        CurvatureDifferentialData("classical", 0, w.with_data(np.abs(w.data) + 1))
