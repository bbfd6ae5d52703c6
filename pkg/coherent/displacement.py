# coherent/displacement.py
"""Trotterized displacement operator, coherent-state preparation and fidelities.

D(a + ib) = exp(-i a Z1 - i b Z2) is approximated by M first-order steps of
exp(-i a Z1 / M) exp(-i b Z2 / M), each exponential expanded term by term
over the closed-form Pauli strings.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from coherent.circuit import Circuit, Gate, Statevector, run
from coherent.errors import DomainError
from coherent.fock import UNNORMALIZED_SERIES, FockDim, as_fock_dim, coherent_target, displacement_matrix
from coherent.parallel import run_rows
from coherent.pauli import ladder_strings

REAL_FIRST = "real_first"
IMAG_FIRST = "imag_first"
BLOCK_ORDERS = (REAL_FIRST, IMAG_FIRST)

# Trotter fidelities are quoted against the bare truncated series, not its unit-norm rescaling
TROTTER_BASELINE = UNNORMALIZED_SERIES


@dataclass(frozen=True)
class DisplacementPlan:
    alpha: complex
    dim: FockDim
    trotter_steps: int
    block_order: str = REAL_FIRST

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "dim", as_fock_dim(self.dim))
        if not cmath.isfinite(self.alpha):
            raise DomainError(f"alpha must be finite, got {self.alpha}")
        if isinstance(self.trotter_steps, bool) or int(self.trotter_steps) != self.trotter_steps or self.trotter_steps < 1:
            raise DomainError(f"trotter_steps must be a positive integer, got {self.trotter_steps!r}")
        if self.block_order not in BLOCK_ORDERS:
            raise DomainError(f"Unknown block order {self.block_order!r}; expected one of {BLOCK_ORDERS}")


@dataclass(frozen=True)
class SweepRow:
    m: int
    fidelity: float


def build_displacement_circuit(plan: DisplacementPlan) -> Circuit:
    n_qubits = plan.dim.n_qubits
    steps = int(plan.trotter_steps)
    a, b = plan.alpha.real, plan.alpha.imag

    # exp(-i a c P / M) for Z1 weights c; Z2 weights already carry their minus sign
    real_block = [Gate.pauli_exp(t.axes, a * t.coefficient / steps) for t in ladder_strings(1, n_qubits).terms]
    imag_block = [Gate.pauli_exp(t.axes, b * t.coefficient / steps) for t in ladder_strings(2, n_qubits).terms]

    step = real_block + imag_block if plan.block_order == REAL_FIRST else imag_block + real_block
    return Circuit(n_qubits, tuple(step * steps))


def prepare(plan: DisplacementPlan) -> Statevector:
    return run(build_displacement_circuit(plan), Statevector.zero(plan.dim.n_qubits))


def prepare_exact(alpha, dim) -> Statevector:
    """Dense expm(alpha a^dag - alpha* a)|0>, the Trotter-free reference."""
    dim = as_fock_dim(dim)
    return Statevector(dim.n_qubits, displacement_matrix(alpha, dim)[:, 0])


def _amplitudes(state) -> np.ndarray:
    return np.asarray(getattr(state, "amplitudes", state), dtype=complex)


def fidelity(state, target) -> float:
    """|<psi_f|psi_tar>|^2 between a prepared state and a target (or another state)."""
    psi, phi = _amplitudes(state), _amplitudes(target)
    if psi.shape != phi.shape:
        raise DomainError(f"Dimension mismatch: {psi.shape[0]} vs {phi.shape[0]}")
    return float(min(1.0, abs(np.vdot(psi, phi)) ** 2))


def trotter_sweep(alpha, dim, m_values, threads: int = 1, block_order: str = REAL_FIRST) -> list[SweepRow]:
    m_values = list(m_values)
    if not m_values:
        raise DomainError("m_values must not be empty")
    dim = as_fock_dim(dim)
    plans = [DisplacementPlan(alpha, dim, m, block_order) for m in m_values]
    target = coherent_target(alpha, dim, TROTTER_BASELINE)

    def row(plan: DisplacementPlan) -> SweepRow:
        return SweepRow(m=int(plan.trotter_steps), fidelity=fidelity(prepare(plan), target))

    return run_rows(row, plans, threads)


def fock_distribution(state) -> list[float]:
    return [float(p) for p in np.abs(_amplitudes(state)) ** 2]


def total_variation(p, q) -> float:
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DomainError(f"Distributions differ in length: {p.shape[0]} vs {q.shape[0]}")
    return float(0.5 * np.abs(p - q).sum())
