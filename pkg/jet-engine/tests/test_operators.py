import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jetcalc.core.fields import Valence  # noqa: E402
from jetcalc.core.groups import group_orders_first, random_group_element  # noqa: E402
from jetcalc.core.operators import (  # noqa: E402
    SAMPLE_OPERATORS,
    equivariance_check,
    evaluate_sample_operator,
    factorization_check,
    get_operator,
    operators_for,
    random_inputs,
    residual_entries,
)
from jetcalc.core.pinned import load_pinned  # noqa: E402
from jetcalc.errors import OrderError, ValenceError  # noqa: E402


def test_catalogue_partitions_by_family():
    first = {op.name for op in operators_for("first")}
    second = {op.name for op in operators_for("second")}
    assert first | second == set(SAMPLE_OPERATORS)
    assert not first & second
    assert {op.name for op in operators_for("first", natural=False)} == {"raw_K_top", "raw_Lambda_top"}
    assert {op.name for op in operators_for("second", natural=False)} == {"raw_Phi_top"}


def test_unknown_operator_raises():
    with pytest.raises(ValenceError):
        get_operator("nabla_torsion")


def test_evaluation_checks_input_orders():
    inputs = random_inputs(2, 1, (1, 1), seed=2)
    with pytest.raises(OrderError):
        evaluate_sample_operator(get_operator("nabla_R_K"), inputs, 1)


def test_trace_square_factors_through_reduced_data():
    inputs = random_inputs(2, 2, (2, 2), seed=11)
    report = factorization_check(get_operator("trR2"), inputs, 2, seed=11)
    assert report.equal
    assert report.passed
    assert report.residual_nonzero == 0


@pytest.mark.parametrize("name", ["R_K", "R_Lambda", "ricci_Lambda", "nabla_R_K", "low_jet_K"])
def test_natural_first_kind_operators_factor(name):
    inputs = random_inputs(2, 1, (2, 2), seed=3)
    assert factorization_check(get_operator(name), inputs, 2, seed=3).equal


def test_second_kind_operators_factor():
    inputs = random_inputs(2, 1, (2, 2, 2), seed=4, field_valence=Valence.standard(p1=1))
    for name in ("nabla_Phi_k", "Phi_low_jet", "R_K_Phi"):
        assert factorization_check(get_operator(name), inputs, 2, seed=4).equal, name


def test_pinned_probes_do_not_factor():
    probes = {control.operator: control for control in load_pinned().factorization_probes}
    control = probes["raw_K_top"]
    op = get_operator(control.operator)
    for seed in control.seeds:
        inputs = random_inputs(control.m, control.n, control.orders, seed)
        report = factorization_check(op, inputs, control.k, seed)
        assert not report.equal
        assert report.passed
        assert report.residual


def test_natural_operator_is_equivariant_and_probe_is_not():
    t1, t2 = group_orders_first(2, 2)
    inputs = random_inputs(2, 2, (2, 2), seed=41)
    g = random_group_element(2, 2, t1, t2, seed=41)
    assert equivariance_check(get_operator("R_K"), inputs, g, 1, seed=41).equal

    control = load_pinned().equivariance_probes[0]
    probe = get_operator(control.operator)
    probe_inputs = random_inputs(control.m, control.n, control.orders, control.seeds[0])
    g = random_group_element(control.m, control.n, t1, t2, seed=control.seeds[0])
    report = equivariance_check(probe, probe_inputs, g, control.k, seed=control.seeds[0])
    assert not report.equal
    assert report.passed


def test_residual_entries_samples_differences():
    a = random_inputs(2, 1, (1, 1), seed=1).K
    b = random_inputs(2, 1, (1, 1), seed=2).K
    count, sample = residual_entries(a, a)
    assert (count, sample) == (0, {})
    count, sample = residual_entries(a, b, limit=2)
    assert count > 0
    assert len(sample) <= 2
