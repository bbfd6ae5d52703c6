from types import SimpleNamespace

import numpy as np
import pytest

from coherent import vqa
from coherent.circuit import GateKind, gate_count
from coherent.errors import DomainError
from coherent.fock import coherent_target
from coherent.vqa import (
    DEFAULT_COST_TOLERANCE,
    DEFAULT_MAX_ITERATIONS,
    AnsatzSpec,
    ResourceReport,
    build_ansatz,
    cost,
    gradient,
    initial_params,
    layer_sweep,
    param_count,
    resource_report,
    structural_count,
    train,
)

ALPHA = 1 + 1j


@pytest.fixture(scope="module")
def target4():
    return coherent_target(ALPHA, 4)


def test_param_counts():
    assert param_count(AnsatzSpec("A", 4, 1)) == 16
    assert param_count(AnsatzSpec("B", 4, 1)) == 16
    assert param_count(AnsatzSpec("C", 4, 1)) == 15
    assert param_count(AnsatzSpec("b", 3, 5)) == 24
    assert initial_params(AnsatzSpec("C", 3, 2)).tolist() == [1.0] * 20


def test_spec_validation():
    with pytest.raises(DomainError):
        AnsatzSpec("D", 4, 1)
    with pytest.raises(DomainError):
        AnsatzSpec("A", 4, 0)
    with pytest.raises(DomainError):
        AnsatzSpec("A", 1, 2)
    assert AnsatzSpec("b", 1, 2).scheme == "B"


def test_scheme_a_gate_order():
    spec = AnsatzSpec("A", 4, 1)
    gates = build_ansatz(spec, np.arange(16, dtype=float)).gates
    assert [(g.kind, g.qubits, g.angle) for g in gates[:3]] == [
        (GateKind.RX, (0,), 0.0), (GateKind.RZ, (0,), 1.0), (GateKind.RX, (0,), 2.0),
    ]
    assert [(g.kind, g.qubits, g.angle) for g in gates[12:]] == [
        (GateKind.CRY, (0, 1), 12.0), (GateKind.CRY, (1, 2), 13.0),
        (GateKind.CRY, (2, 3), 14.0), (GateKind.CRY, (3, 0), 15.0),
    ]


def test_scheme_b_layout():
    gates = build_ansatz(AnsatzSpec("B", 4, 1), np.arange(16, dtype=float)).gates
    assert [g.kind for g in gates[12:15]] == [GateKind.CNOT] * 3
    assert [(g.kind, g.qubits[0], g.angle) for g in gates[15:]] == [(GateKind.RY, q, 12.0 + q) for q in range(4)]


def test_scheme_c_block():
    gates = build_ansatz(AnsatzSpec("C", 2, 1), [1.0, 2.0, 3.0, 4.0, 5.0]).gates
    assert [(g.kind, g.qubits) for g in gates] == [
        (GateKind.RZ, (0,)), (GateKind.RX, (0,)), (GateKind.RZ, (1,)), (GateKind.RX, (1,)),
        (GateKind.CNOT, (0, 1)), (GateKind.RZ, (1,)), (GateKind.CNOT, (0, 1)),
    ]


def test_build_rejects_bad_parameters():
    spec = AnsatzSpec("A", 4, 1)
    with pytest.raises(DomainError):
        build_ansatz(spec, np.ones(15))
    with pytest.raises(DomainError):
        build_ansatz(spec, np.full(16, np.nan))


@pytest.mark.parametrize("scheme", ["A", "B", "C"])
def test_zero_parameters_give_vacuum_overlap(scheme, target4):
    spec = AnsatzSpec(scheme, 4, 2)
    assert cost(spec, np.zeros(spec.param_count), target4) == pytest.approx(1 - target4.probabilities[0], abs=1e-12)
    assert cost(spec, np.zeros(spec.param_count), coherent_target(0, 4)) == pytest.approx(0.0, abs=1e-15)


def test_cost_rejects_mismatched_target():
    spec = AnsatzSpec("B", 3, 1)
    with pytest.raises(DomainError):
        cost(spec, np.ones(spec.param_count), coherent_target(ALPHA, 4))


@pytest.mark.parametrize("scheme", ["A", "B", "C"])
def test_cost_stays_in_unit_interval(scheme, target4):
    rng = np.random.default_rng(29)
    spec = AnsatzSpec(scheme, 4, 1)
    for _ in range(1000):
        value = cost(spec, rng.uniform(-np.pi, np.pi, spec.param_count), target4)
        assert 0.0 <= value <= 1.0


def test_leading_rz_on_vacuum_has_zero_gradient(target4):
    spec = AnsatzSpec("C", 4, 1)
    params = np.random.default_rng(31).uniform(-1, 1, spec.param_count)
    assert abs(gradient(spec, params, target4)[0]) < 1e-6


@pytest.mark.parametrize("scheme", ["A", "B", "C"])
def test_gradient_agrees_across_step_sizes(scheme):
    target = coherent_target(0.5 - 0.3j, 3)
    spec = AnsatzSpec(scheme, 3, 2)
    params = np.random.default_rng(37).uniform(-np.pi, np.pi, spec.param_count)
    fine = gradient(spec, params, target, step=1e-6)
    coarse = gradient(spec, params, target, step=1e-4)
    assert fine.shape == (spec.param_count,)
    assert np.max(np.abs(fine - coarse)) < 1e-4


def test_resource_report_examples():
    assert resource_report(AnsatzSpec("A", 4, 4)) == ResourceReport(params=64, single_qubit=80, cnot=32)
    assert resource_report(AnsatzSpec("C", 4, 6)) == ResourceReport(params=90, single_qubit=90, cnot=36)
    assert resource_report(AnsatzSpec("B", 4, 6)) == ResourceReport(params=36, single_qubit=36, cnot=18)
    assert resource_report(AnsatzSpec("B", 1, 3)).cnot == 0


def test_scheme_a_single_layer_gate_count():
    counted = gate_count(build_ansatz(AnsatzSpec("A", 4, 1), np.ones(16)))
    assert (counted.single_qubit, counted.cnot) == (20, 8)


@pytest.mark.parametrize("scheme", ["A", "B", "C"])
def test_closed_form_counts_match_built_circuits(scheme):
    for n in range(2, 6):
        for layers in range(1, 7):
            spec = AnsatzSpec(scheme, n, layers)
            assert resource_report(spec) == structural_count(spec)


def test_train_vacuum_target():
    spec = AnsatzSpec("B", 2, 1)
    report = train(spec, coherent_target(0, 2), cost_tolerance=1e-9, optimizer_tolerance=1e-15)
    assert report.converged
    assert report.cost_trace[-1] < 1e-8
    assert report.final_fidelity == pytest.approx(1 - report.cost_trace[-1], abs=1e-12)
    assert report.cost_trace[-1] <= report.cost_trace[0]


def test_train_vacuum_target_with_default_settings():
    report = train(AnsatzSpec("B", 2, 1), coherent_target(0, 2))
    assert report.converged
    assert report.cost_trace[-1] < DEFAULT_COST_TOLERANCE


def test_optimizer_tolerance_reaches_scipy(monkeypatch):
    seen = []

    def fake_minimize(fun, x0, **kwargs):
        seen.append((kwargs["method"], kwargs["options"]))
        return SimpleNamespace(x=np.asarray(x0), message="stub")

    monkeypatch.setattr(vqa, "minimize", fake_minimize)
    target = coherent_target(ALPHA, 2)
    train(AnsatzSpec("B", 2, 1), target)
    train(AnsatzSpec("B", 2, 1), target, method="bfgs", optimizer_tolerance=1e-8, max_iterations=7)
    assert seen == [
        ("SLSQP", {"maxiter": DEFAULT_MAX_ITERATIONS, "ftol": 1e-6}),
        ("BFGS", {"maxiter": 7, "gtol": 1e-8}),
    ]


def test_train_is_deterministic():
    spec = AnsatzSpec("B", 2, 1)
    target = coherent_target(0.4 + 0.2j, 2)
    first = train(spec, target, max_iterations=25)
    second = train(spec, target, max_iterations=25)
    assert first.cost_trace == second.cost_trace
    assert first.iterations == second.iterations
    assert np.array_equal(first.final_params, second.final_params)
    assert first.report_to_json() == second.report_to_json()


def test_train_reports_non_convergence():
    spec = AnsatzSpec("B", 2, 1)
    report = train(spec, coherent_target(ALPHA, 2), max_iterations=1)
    assert not report.converged
    assert report.iterations <= 1
    assert len(report.cost_trace) >= 1
    assert report.final_fidelity == pytest.approx(1 - report.cost_trace[-1], abs=1e-12)


def test_train_calls_back_every_iteration():
    seen = []
    spec = AnsatzSpec("C", 2, 1)
    report = train(spec, coherent_target(0.3, 2), max_iterations=10, callback=lambda i, c: seen.append((i, c)))
    assert [i for i, _ in seen] == list(range(1, report.iterations + 1))
    assert all(0 <= c <= 1 for _, c in seen)


def test_train_report_document():
    spec = AnsatzSpec("B", 2, 1)
    document = train(spec, coherent_target(0, 2)).report_to_json()
    assert {"scheme", "n_qubits", "layers", "iterations", "final_fidelity", "converged", "cost_trace"} <= set(document)
    assert document["scheme"] == "B"
    assert document["converged"] is True


def test_train_rejects_bad_configuration():
    spec = AnsatzSpec("B", 2, 1)
    with pytest.raises(DomainError):
        train(spec, coherent_target(0, 2), max_iterations=0)
    with pytest.raises(DomainError):
        train(spec, coherent_target(0, 2), method="nelder-mead")
    with pytest.raises(DomainError):
        train(spec, coherent_target(0, 2), initial_params=np.ones(3))
    with pytest.raises(DomainError):
        train(spec, coherent_target(0, 2), optimizer_tolerance=0.0)


def test_layer_sweep_vacuum_target():
    rows = layer_sweep("B", 2, coherent_target(0, 2), [1, 2, 3])
    assert [row.layers for row in rows] == [1, 2, 3]
    assert all(row.final_fidelity > 1 - 1e-5 for row in rows)
    assert layer_sweep("B", 2, coherent_target(0, 2), [1, 2, 3], threads=3) == rows


def test_layer_sweep_rejects_empty_list():
    with pytest.raises(DomainError):
        layer_sweep("B", 2, coherent_target(0, 2), [])


# --- Full-depth convergence runs ---

@pytest.mark.slow
@pytest.mark.parametrize("scheme, layers", [("A", 4), ("B", 6), ("C", 6)])
def test_schemes_reach_target_at_reported_depth(scheme, layers, target4):
    report = train(AnsatzSpec(scheme, 4, layers), target4)
    print(f"scheme {scheme}, M_l={layers}: {report.iterations} iterations, F={report.final_fidelity:.6f}")
    assert report.final_fidelity > 0.9999


@pytest.mark.slow
def test_shallow_scheme_a_stays_below_threshold(target4):
    for layers in (1, 2):
        assert train(AnsatzSpec("A", 4, layers), target4).final_fidelity < 0.9999


@pytest.mark.slow
def test_gradient_vanishes_at_trained_optimum(target4):
    spec = AnsatzSpec("B", 4, 6)
    report = train(spec, target4, cost_tolerance=1e-7, optimizer_tolerance=1e-15)
    assert np.max(np.abs(gradient(spec, report.final_params, target4))) < 1e-3


def first_layer_above(rows, threshold=0.9999):
    return next((row.layers for row in rows if row.final_fidelity > threshold), None)


@pytest.mark.slow
def test_scheme_a_layer_sweep_crosses_at_four(target4):
    rows = layer_sweep("A", 4, target4, range(1, 7))
    assert [row.layers for row in rows] == [1, 2, 3, 4, 5, 6]
    assert first_layer_above(rows) == 4


@pytest.mark.slow
def test_scheme_b_layer_sweep_crosses_at_six(target4):
    rows = layer_sweep("B", 4, target4, range(1, 7))
    assert first_layer_above(rows) == 6
