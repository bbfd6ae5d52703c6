# coherent/vqa.py
"""Variational coherent-state preparation over three ansatz families.

Scheme A: per layer, RX-RZ-RX on every qubit followed by a ring of
controlled-RY gates. Scheme B: one RX-RZ-RX column, then layers of a CNOT
chain and an RY column. Scheme C: a checkerboard of two-qubit blocks on
neighbouring pairs. The cost is 1 - |<psi(theta)|alpha>|^2 starting from the
vacuum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from coherent.circuit import Circuit, Gate, Statevector, _evolve, gate_count
from coherent.displacement import fidelity
from coherent.errors import DomainError
from coherent.fock import CoherentTarget
from coherent.parallel import run_rows

SCHEMES = ("A", "B", "C")
OPTIMIZERS = ("SLSQP", "BFGS")

DEFAULT_MAX_ITERATIONS = 10000
DEFAULT_COST_TOLERANCE = 1e-5
DEFAULT_GRADIENT_STEP = 1e-6
# SLSQP ftol / BFGS gtol; 1e-6 is the SciPy SLSQP default
DEFAULT_OPTIMIZER_TOLERANCE = 1e-6
DEFAULT_INITIAL_VALUE = 1.0


@dataclass(frozen=True)
class AnsatzSpec:
    scheme: str
    n_qubits: int
    layers: int

    def __post_init__(self):
        scheme = str(self.scheme).upper()
        if scheme not in SCHEMES:
            raise DomainError(f"Unknown scheme {self.scheme!r}; expected one of {', '.join(SCHEMES)}")
        object.__setattr__(self, "scheme", scheme)
        for name in ("n_qubits", "layers"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value!r}")
        if scheme in ("A", "C") and self.n_qubits < 2:
            raise DomainError(f"Scheme {scheme} needs at least two qubits")

    @property
    def param_count(self) -> int:
        n, layers = self.n_qubits, self.layers
        if self.scheme == "A":
            return 4 * n * layers
        if self.scheme == "B":
            return (3 + layers) * n
        return 5 * (n - 1) * layers


@dataclass(frozen=True)
class ResourceReport:
    params: int
    single_qubit: int
    cnot: int


@dataclass(frozen=True, eq=False)
class OptimizationReport:
    spec: AnsatzSpec
    iterations: int
    cost_trace: tuple[float, ...]
    final_fidelity: float
    final_params: np.ndarray
    converged: bool
    message: str = ""

    def report_to_json(self) -> dict:
        return {
            "scheme": self.spec.scheme,
            "n_qubits": self.spec.n_qubits,
            "layers": self.spec.layers,
            "iterations": self.iterations,
            "final_fidelity": self.final_fidelity,
            "converged": self.converged,
            "cost_trace": list(self.cost_trace),
            "final_params": [float(v) for v in self.final_params],
        }


@dataclass(frozen=True)
class LayerRow:
    layers: int
    final_fidelity: float
    iterations: int
    converged: bool


def param_count(spec: AnsatzSpec) -> int:
    return spec.param_count


def initial_params(spec: AnsatzSpec, value: float = DEFAULT_INITIAL_VALUE) -> np.ndarray:
    return np.full(spec.param_count, float(value))


def _check_params(spec: AnsatzSpec, params) -> np.ndarray:
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.shape[0] != spec.param_count:
        raise DomainError(
            f"Scheme {spec.scheme} with N={spec.n_qubits}, M_l={spec.layers} takes "
            f"{spec.param_count} parameters, got {params.shape[0]}"
        )
    if not np.all(np.isfinite(params)):
        raise DomainError("Ansatz parameters must be finite")
    return params


# --- Ansatz builders ---

def _euler_column(n: int, theta) -> list[Gate]:
    gates = []
    for q in range(n):
        gates += [Gate.rx(q, next(theta)), Gate.rz(q, next(theta)), Gate.rx(q, next(theta))]
    return gates


def _scheme_a(spec: AnsatzSpec, theta) -> list[Gate]:
    n = spec.n_qubits
    gates = []
    for _ in range(spec.layers):
        gates += _euler_column(n, theta)
        gates += [Gate.cry(q, q + 1, next(theta)) for q in range(n - 1)]
        gates.append(Gate.cry(n - 1, 0, next(theta)))
    return gates


def _scheme_b(spec: AnsatzSpec, theta) -> list[Gate]:
    n = spec.n_qubits
    gates = _euler_column(n, theta)
    for _ in range(spec.layers):
        gates += [Gate.cnot(q, q + 1) for q in range(n - 1)]
        gates += [Gate.ry(q, next(theta)) for q in range(n)]
    return gates


def _scheme_c(spec: AnsatzSpec, theta) -> list[Gate]:
    gates = []
    for _ in range(spec.layers):
        for q in range(spec.n_qubits - 1):
            gates += [
                Gate.rz(q, next(theta)),
                Gate.rx(q, next(theta)),
                Gate.rz(q + 1, next(theta)),
                Gate.rx(q + 1, next(theta)),
                Gate.cnot(q, q + 1),
                Gate.rz(q + 1, next(theta)),
                Gate.cnot(q, q + 1),
            ]
    return gates


_BUILDERS = {"A": _scheme_a, "B": _scheme_b, "C": _scheme_c}


def build_ansatz(spec: AnsatzSpec, params) -> Circuit:
    params = _check_params(spec, params)
    theta = iter(float(v) for v in params)
    return Circuit(spec.n_qubits, tuple(_BUILDERS[spec.scheme](spec, theta)))


# --- Cost and gradient ---

def _check_target(spec: AnsatzSpec, target: CoherentTarget) -> None:
    size = len(np.asarray(getattr(target, "amplitudes", target)))
    if size != 1 << spec.n_qubits:
        raise DomainError(f"Target has {size} amplitudes, ansatz prepares {1 << spec.n_qubits}")


def _cost(spec: AnsatzSpec, params: np.ndarray, target) -> float:
    circuit = build_ansatz(spec, params)
    psi = _evolve(Statevector.zero(spec.n_qubits).amplitudes, circuit.gates, spec.n_qubits)
    return min(1.0, max(0.0, 1.0 - fidelity(psi, target)))


def cost(spec: AnsatzSpec, params, target: CoherentTarget) -> float:
    """C = 1 - |<psi_f|psi_tar>|^2, clipped to [0, 1]."""
    _check_target(spec, target)
    return _cost(spec, _check_params(spec, params), target)


def gradient(spec: AnsatzSpec, params, target: CoherentTarget, step: float = DEFAULT_GRADIENT_STEP) -> np.ndarray:
    """Central finite differences, one coordinate at a time."""
    _check_target(spec, target)
    params = _check_params(spec, params)
    if not math.isfinite(step) or step <= 0:
        raise DomainError(f"Finite-difference step must be positive, got {step!r}")
    grad = np.empty_like(params)
    shifted = params.copy()
    for i in range(params.shape[0]):
        shifted[i] = params[i] + step
        forward = _cost(spec, shifted, target)
        shifted[i] = params[i] - step
        backward = _cost(spec, shifted, target)
        shifted[i] = params[i]
        grad[i] = (forward - backward) / (2 * step)
    return grad


# --- Training ---

class _ToleranceReached(Exception):
    def __init__(self, params: np.ndarray):
        super().__init__("cost below tolerance")
        self.params = params


@dataclass
class _TrainState:
    trace: list[float] = field(default_factory=list)
    iterations: int = 0
    last_params: np.ndarray | None = None
    last_cost: float | None = None


def train(
    spec: AnsatzSpec,
    target: CoherentTarget,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    cost_tolerance: float = DEFAULT_COST_TOLERANCE,
    initial_params=None,
    callback=None,
    gradient_step: float = DEFAULT_GRADIENT_STEP,
    method: str = "SLSQP",
    optimizer_tolerance: float = DEFAULT_OPTIMIZER_TOLERANCE,
) -> OptimizationReport:
    """Minimizes the cost from all-ones (or the given) angles.

    Stops at the first evaluated cost below cost_tolerance, at max_iterations,
    or when the optimizer terminates on its own (optimizer_tolerance is the
    SLSQP ftol or the BFGS gtol). Not converging is reported, never raised.
    `callback(iteration, cost)` is invoked after each iteration.
    """
    if isinstance(max_iterations, bool) or int(max_iterations) != max_iterations or max_iterations < 1:
        raise DomainError(f"max_iterations must be a positive integer, got {max_iterations!r}")
    if not math.isfinite(cost_tolerance) or cost_tolerance <= 0:
        raise DomainError(f"cost_tolerance must be positive, got {cost_tolerance!r}")
    if not math.isfinite(optimizer_tolerance) or optimizer_tolerance <= 0:
        raise DomainError(f"optimizer_tolerance must be positive, got {optimizer_tolerance!r}")
    method = method.upper()
    if method not in OPTIMIZERS:
        raise DomainError(f"Unknown optimizer {method!r}; expected one of {', '.join(OPTIMIZERS)}")
    _check_target(spec, target)

    x0 = initial_params if initial_params is not None else np.full(spec.param_count, DEFAULT_INITIAL_VALUE)
    x0 = _check_params(spec, x0).copy()
    state = _TrainState()

    def objective(x):
        value = _cost(spec, x, target)
        state.last_params, state.last_cost = np.array(x), value
        if value < cost_tolerance:
            raise _ToleranceReached(np.array(x))
        return value

    def jacobian(x):
        return gradient(spec, x, target, step=gradient_step)

    def on_iteration(xk, *_):
        state.iterations += 1
        value = state.last_cost if np.array_equal(xk, state.last_params) else _cost(spec, xk, target)
        state.trace.append(value)
        if callback is not None:
            callback(state.iterations, value)

    state.trace.append(_cost(spec, x0, target))
    message = ""
    if state.trace[0] < cost_tolerance:
        final = x0
    else:
        stop_key = "ftol" if method == "SLSQP" else "gtol"
        options = {"maxiter": int(max_iterations), stop_key: float(optimizer_tolerance)}
        try:
            result = minimize(objective, x0, jac=jacobian, method=method, callback=on_iteration, options=options)
            final, message = np.asarray(result.x, dtype=float), str(result.message)
        except _ToleranceReached as reached:
            final, message = reached.params, "cost below tolerance"

    final_cost = _cost(spec, final, target)
    if state.trace[-1] != final_cost:
        state.trace.append(final_cost)
    final.setflags(write=False)
    return OptimizationReport(
        spec=spec,
        iterations=state.iterations,
        cost_trace=tuple(float(c) for c in state.trace),
        final_fidelity=1.0 - final_cost,
        final_params=final,
        converged=final_cost < cost_tolerance,
        message=message,
    )


def layer_sweep(
    scheme: str,
    n_qubits: int,
    target: CoherentTarget,
    layer_values,
    threads: int = 1,
    initial_value: float = DEFAULT_INITIAL_VALUE,
    **train_options,
) -> list[LayerRow]:
    """Independent train runs per layer count, every one started from the same constant angles."""
    layer_values = list(layer_values)
    if not layer_values:
        raise DomainError("layer_values must not be empty")
    specs = [AnsatzSpec(scheme, n_qubits, layers) for layers in layer_values]

    def row(spec: AnsatzSpec) -> LayerRow:
        report = train(spec, target, initial_params=initial_params(spec, initial_value), **train_options)
        return LayerRow(spec.layers, report.final_fidelity, report.iterations, report.converged)

    return run_rows(row, specs, threads)


def resource_report(spec: AnsatzSpec) -> ResourceReport:
    """Closed-form parameter and native gate counts (a CRY is 2 rotations + 2 CNOTs)."""
    n, layers = spec.n_qubits, spec.layers
    if spec.scheme == "A":
        single, cnot = 5 * n * layers, 2 * n * layers
    elif spec.scheme == "B":
        single, cnot = (3 + layers) * n, (n - 1) * layers
    else:
        single, cnot = 5 * (n - 1) * layers, 2 * (n - 1) * layers
    return ResourceReport(params=spec.param_count, single_qubit=single, cnot=cnot)


def structural_count(spec: AnsatzSpec) -> ResourceReport:
    counted = gate_count(build_ansatz(spec, np.zeros(spec.param_count)))
    return ResourceReport(params=spec.param_count, single_qubit=counted.single_qubit, cnot=counted.cnot)
