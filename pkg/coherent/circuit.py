# coherent/circuit.py
"""Gate-level circuits, dense statevector simulation and gate accounting.

Conventions: R_a(theta) = exp(-i theta sigma_a / 2); PAULI_EXP(theta, P)
applies exp(-i theta P) for a unit-coefficient string P. Qubit 0 is the most
significant bit, so a basis index is the Fock occupation number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from coherent.errors import DomainError, UnsupportedGateError
from coherent.pauli import PauliTerm, apply_pauli


class GateKind(str, Enum):
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"
    CRY = "CRY"
    PAULI_EXP = "PAULI_EXP"


ROTATIONS = (GateKind.RX, GateKind.RY, GateKind.RZ)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: float = 0.0
    pauli: PauliTerm | None = None

    def __post_init__(self):
        if len(set(self.qubits)) != len(self.qubits):
            raise DomainError(f"{self.kind.value} acts on repeated qubits {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise DomainError(f"{self.kind.value} has a negative qubit index in {self.qubits}")
        if not math.isfinite(self.angle):
            raise DomainError(f"{self.kind.value} angle must be finite, got {self.angle}")

    @classmethod
    def rx(cls, qubit: int, angle: float) -> "Gate":
        return cls(GateKind.RX, (qubit,), float(angle))

    @classmethod
    def ry(cls, qubit: int, angle: float) -> "Gate":
        return cls(GateKind.RY, (qubit,), float(angle))

    @classmethod
    def rz(cls, qubit: int, angle: float) -> "Gate":
        return cls(GateKind.RZ, (qubit,), float(angle))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def cry(cls, control: int, target: int, angle: float) -> "Gate":
        return cls(GateKind.CRY, (control, target), float(angle))

    @classmethod
    def pauli_exp(cls, axes: str, angle: float) -> "Gate":
        term = PauliTerm(axes, 1.0)
        support = tuple(q for q, axis in enumerate(axes) if axis != "I")
        return cls(GateKind.PAULI_EXP, support, float(angle), term)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DomainError(f"A circuit needs at least one qubit, got {self.n_qubits}")
        for gate in self.gates:
            _check_gate(gate, self.n_qubits)


@dataclass(frozen=True, eq=False)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", np.array(self.amplitudes, dtype=complex))
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise DomainError(
                f"Expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, got {self.amplitudes.shape}"
            )
        self.amplitudes.setflags(write=False)

    @classmethod
    def zero(cls, n_qubits: int) -> "Statevector":
        return cls.basis(n_qubits, 0)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "Statevector":
        if isinstance(index, bool) or not isinstance(index, (int, np.integer)) or not 0 <= index < (1 << n_qubits):
            raise DomainError(f"Basis index {index!r} outside 0..{(1 << n_qubits) - 1} for {n_qubits} qubits")
        amplitudes = np.zeros(1 << n_qubits, dtype=complex)
        amplitudes[index] = 1.0
        return cls(n_qubits, amplitudes)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class GateCount:
    single_qubit: int = 0
    cnot: int = 0


def _check_gate(gate: Gate, n_qubits: int) -> None:
    if any(q >= n_qubits for q in gate.qubits):
        raise DomainError(f"{gate.kind.value} on qubits {gate.qubits} is out of range for {n_qubits} qubits")
    if gate.kind == GateKind.PAULI_EXP and (gate.pauli is None or gate.pauli.n_qubits != n_qubits):
        raise DomainError(f"PAULI_EXP string must span all {n_qubits} qubits")


def rotation_matrix(kind: GateKind, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    if kind == GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == GateKind.RZ:
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=complex)
    raise UnsupportedGateError(f"{kind} is not a single-qubit rotation")


def _apply_single(psi: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    # psi is the [2]*n tensor view; returns a fresh tensor
    return np.moveaxis(np.tensordot(matrix, psi, axes=([1], [axis])), 0, axis)


def _controlled_slices(n: int, control: int, target: int):
    def at(c: int, t: int):
        index = [slice(None)] * n
        index[control], index[target] = c, t
        return tuple(index)

    return at


def _evolve(amplitudes: np.ndarray, gates, n: int) -> np.ndarray:
    """Applies gates in order to a raw amplitude vector without re-validating them."""
    psi = np.array(amplitudes, dtype=complex)
    for gate in gates:
        kind = gate.kind
        if kind in ROTATIONS:
            tensor = psi.reshape([2] * n)
            psi = _apply_single(tensor, rotation_matrix(kind, gate.angle), gate.qubits[0]).reshape(-1)
        elif kind == GateKind.CNOT:
            control, target = gate.qubits
            tensor = psi.reshape([2] * n)
            out = tensor.copy()
            at = _controlled_slices(n, control, target)
            out[at(1, 0)], out[at(1, 1)] = tensor[at(1, 1)], tensor[at(1, 0)]
            psi = out.reshape(-1)
        elif kind == GateKind.CRY:
            control, target = gate.qubits
            tensor = psi.reshape([2] * n)
            out = tensor.copy()
            index = [slice(None)] * n
            index[control] = 1
            index = tuple(index)
            # dropping the control axis shifts every later axis down by one
            axis = target if target < control else target - 1
            out[index] = _apply_single(tensor[index], rotation_matrix(GateKind.RY, gate.angle), axis)
            psi = out.reshape(-1)
        elif kind == GateKind.PAULI_EXP:
            psi = math.cos(gate.angle) * psi - 1j * math.sin(gate.angle) * apply_pauli(gate.pauli.axes, psi)
        else:
            raise UnsupportedGateError(f"Cannot simulate gate kind {kind!r}")
    return psi


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    _check_gate(gate, state.n_qubits)
    return Statevector(state.n_qubits, _evolve(state.amplitudes, (gate,), state.n_qubits))


def run(circuit: Circuit, initial: Statevector | None = None) -> Statevector:
    if initial is None:
        initial = Statevector.zero(circuit.n_qubits)
    if initial.n_qubits != circuit.n_qubits:
        raise DomainError(f"Circuit has {circuit.n_qubits} qubits but the initial state has {initial.n_qubits}")
    return Statevector(circuit.n_qubits, _evolve(initial.amplitudes, circuit.gates, circuit.n_qubits))


def gate_count(circuit: Circuit) -> GateCount:
    """Counts native gates; each CRY is two single-qubit gates and two CNOTs."""
    single = cnot = 0
    for gate in circuit.gates:
        if gate.kind in ROTATIONS:
            single += 1
        elif gate.kind == GateKind.CNOT:
            cnot += 1
        elif gate.kind == GateKind.CRY:
            single += 2
            cnot += 2
        else:
            raise UnsupportedGateError(f"{gate.kind.value} gates are not counted; compile them first")
    return GateCount(single_qubit=single, cnot=cnot)


def circuit_to_json(circuit: Circuit) -> dict:
    gates = []
    for gate in circuit.gates:
        entry = {"kind": gate.kind.value, "qubits": list(gate.qubits)}
        if gate.kind != GateKind.CNOT:
            entry["angle"] = gate.angle
        if gate.pauli is not None:
            entry["pauli"] = gate.pauli.axes
        gates.append(entry)
    return {"n_qubits": circuit.n_qubits, "gates": gates}

