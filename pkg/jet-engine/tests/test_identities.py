import sys
from fractions import Fraction
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core.covariant import (  # noqa: E402
    CLASSICAL_CURVATURE_VALENCE,
    alt_nabla2_curvature_oracle,
    covariant_differential,
    curvature_chain_classical,
    curvature_chain_linear,
    curvature_classical,
    curvature_linear,
)
from jetcalc.core.fields import (  # noqa: E402
    TensorFieldJet,
    Valence,
    alternate_last_pair,
    project_jet,
    random_jet,
)
from jetcalc.core.identities import (  # noqa: E402
    bianchi_first_classical_residual,
    bianchi_generalized_linear_residual,
    bianchi_second_classical_residual,
    c_space_membership,
    ricci_identity_residual,
)
from jetcalc.core.pinned import load_pinned  # noqa: E402
from jetcalc.errors import OrderError  # noqa: E402


@pytest.fixture()
def connections():
    lam = random_jet("classical", 2, 2, 3, seed=21)
    K = random_jet("linear", 2, 2, 3, seed=21)
    return lam, K


def test_first_bianchi_identity(connections):
    lam, _ = connections
    assert bianchi_first_classical_residual(curvature_classical(lam)).is_zero()


def test_second_and_generalized_bianchi_identities(connections):
    lam, K = connections
    dw = covariant_differential(curvature_classical(lam), None, lam)
    du = covariant_differential(curvature_linear(K), K, lam)
    assert bianchi_second_classical_residual(dw).is_zero()
    assert bianchi_generalized_linear_residual(du).is_zero()


def test_pinned_random_tensors_violate_first_bianchi():
    control = load_pinned().bianchi_random_tensor
    assert control.seeds
    for seed in control.seeds:
        noise = random_jet("tensor", control.m, 1, control.order, seed, control.bound, CLASSICAL_CURVATURE_VALENCE)
        assert not bianchi_first_classical_residual(noise).is_zero()


@pytest.mark.parametrize("counts", [(1, 0, 0, 0), (0, 1, 0, 1), (1, 0, 1, 1)])
def test_ricci_identity_vanishes(counts):
    lam = random_jet("classical", 2, 2, 2, seed=5)
    K = random_jet("linear", 2, 2, 2, seed=5)
    t = random_jet("tensor", 2, 2, 2, seed=5, valence=Valence.standard(*counts))
    assert ricci_identity_residual(t, K, lam).is_zero()


def test_ricci_identity_needs_second_order():
    lam = random_jet("classical", 2, 1, 2, seed=5)
    t = random_jet("tensor", 2, 1, 1, seed=5, valence=Valence.standard(q2=1))
    with pytest.raises(OrderError):
        ricci_identity_residual(t, None, lam)


def test_alternated_second_differential_of_linear_curvature(connections):
    lam, K = connections
    u = curvature_linear(K)
    second = covariant_differential(covariant_differential(u, K, lam), K, lam)
    engine = project_jet(alternate_last_pair(second), 0)
    closed = project_jet(alt_nabla2_curvature_oracle(u, curvature_classical(lam)), 0)
    assert (engine.data == closed.data).all()


def test_membership_accepts_attained_curvature():
    lam = random_jet("classical", 2, 0, 2, seed=14)
    candidate = curvature_chain_classical(lam, 0, 1)
    result = c_space_membership(candidate, "classical")
    assert result.member
    assert result.trace.all_unique
    assert curvature_chain_classical(result.witness, 0, 1) == candidate


def test_membership_linear_kind_uses_classical_jet():
    lam = random_jet("classical", 2, 2, 1, seed=15)
    K = random_jet("linear", 2, 2, 2, seed=15)
    candidate = curvature_chain_linear(lam, K, 0, 1)
    result = c_space_membership(candidate, "linear", lam=lam)
    assert result
    assert curvature_chain_linear(lam, result.witness, 0, 1) == candidate


def test_membership_rejects_bianchi_violation():
    data = TensorFieldJet.zeros(3, 0, CLASSICAL_CURVATURE_VALENCE, 0).data.copy()
    data[0, 0, 1, 2] = Fraction(1)
    data[0, 0, 2, 1] = Fraction(-1)
    w = TensorFieldJet(3, 0, CLASSICAL_CURVATURE_VALENCE, 0, data)
    assert not bianchi_first_classical_residual(w).is_zero()

    result = c_space_membership([w], "classical")
    assert not result.member
    assert result.failing_order == 0
    assert result.reasons


def test_membership_reports_wrong_valence():
    K = random_jet("linear", 2, 2, 1, seed=3)
    result = c_space_membership([curvature_linear(K)], "classical")
    assert not result.member
    assert result.failing_order == 0
