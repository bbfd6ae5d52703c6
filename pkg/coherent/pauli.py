# coherent/pauli.py
"""Pauli-string algebra and the decomposition of Z1/Z2 into weighted strings.

Qubit 0 is the leftmost axis and the most significant bit of a basis index.
A Pauli string P acts on a basis state as P|x> = phase(x) |x XOR flip>, which
is all both the projection oracle and the simulator need.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product

import numpy as np

from coherent.errors import DomainError

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

ODD_Y = "odd_y"
EVEN_Y = "even_y"

PRUNE_THRESHOLD = 1e-12
HERMITIAN_TOLERANCE = 1e-10


@dataclass(frozen=True)
class PauliTerm:
    axes: str
    coefficient: float = 1.0

    def __post_init__(self):
        if not self.axes or any(axis not in PAULI_MATRICES for axis in self.axes):
            raise DomainError(f"Pauli axes must be a nonempty string over IXYZ, got {self.axes!r}")
        if not math.isfinite(self.coefficient):
            raise DomainError(f"Pauli coefficient must be finite, got {self.coefficient!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.axes)

    @property
    def n_y(self) -> int:
        return self.axes.count("Y")


@dataclass(frozen=True)
class PauliDecomposition:
    n_qubits: int
    terms: tuple[PauliTerm, ...]
    parity: str | None = None

    def as_dict(self) -> dict[str, float]:
        return {term.axes: term.coefficient for term in self.terms}


def _parity_of(terms) -> str | None:
    parities = {term.n_y % 2 for term in terms}
    if parities == {1}:
        return ODD_Y
    if parities == {0}:
        return EVEN_Y
    return None


@lru_cache(maxsize=None)
def pauli_action(axes: str) -> tuple[int, np.ndarray]:
    """Returns (flip_mask, phases) with P|x> = phases[x] |x ^ flip_mask>."""
    n = len(axes)
    flip_mask = 0
    sign_mask = 0
    for qubit, axis in enumerate(axes):
        bit = 1 << (n - 1 - qubit)
        if axis in "XY":
            flip_mask |= bit
        if axis in "YZ":
            sign_mask |= bit
    indices = np.arange(1 << n)
    parity = np.array([bin(value).count("1") & 1 for value in indices & sign_mask])
    phases = (1j ** axes.count("Y")) * (1 - 2 * parity)
    phases.setflags(write=False)
    return flip_mask, phases


def apply_pauli(axes: str, amplitudes: np.ndarray) -> np.ndarray:
    flip_mask, phases = pauli_action(axes)
    indices = np.arange(len(amplitudes))
    return (phases * amplitudes)[indices ^ flip_mask]


def pauli_term_matrix(term: PauliTerm) -> np.ndarray:
    return term.coefficient * reduce(np.kron, [PAULI_MATRICES[axis] for axis in term.axes])


def reconstruct(decomp: PauliDecomposition) -> np.ndarray:
    size = 1 << decomp.n_qubits
    matrix = np.zeros((size, size), dtype=complex)
    for term in decomp.terms:
        matrix += pauli_term_matrix(term)
    return matrix


def _qubits_for_size(size: int) -> int:
    if size < 2 or size & (size - 1):
        raise DomainError(f"Matrix dimension must be a power of two >= 2, got {size}")
    return size.bit_length() - 1


def trace_project(matrix) -> PauliDecomposition:
    """Hilbert-Schmidt projection c_P = Tr(P M) / 2^N onto every Pauli string."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"Expected a square matrix, got shape {matrix.shape}")
    n_qubits = _qubits_for_size(matrix.shape[0])
    if not np.allclose(matrix, matrix.conj().T, atol=HERMITIAN_TOLERANCE, rtol=0):
        raise DomainError("Matrix is not Hermitian")

    indices = np.arange(matrix.shape[0])
    terms = []
    for axes in map("".join, product("IXYZ", repeat=n_qubits)):
        flip_mask, phases = pauli_action(axes)
        coefficient = np.sum(phases * matrix[indices, indices ^ flip_mask]).real / matrix.shape[0]
        if abs(coefficient) > PRUNE_THRESHOLD:
            terms.append(PauliTerm(axes, float(coefficient)))
    return PauliDecomposition(n_qubits=n_qubits, terms=tuple(terms), parity=_parity_of(terms))


def _prefix_signs(prefix: tuple[str, ...], count: int) -> np.ndarray:
    # (-1)^eps_k: each Z in the diagonal prefix reads one bit of the block index k
    k = np.arange(count)
    width = len(prefix)
    exponent = np.zeros(count, dtype=int)
    for position, axis in enumerate(prefix):
        if axis == "Z":
            exponent += (k >> (width - 1 - position)) & 1
    return 1 - 2 * (exponent & 1)


def ladder_strings(k: int, n_qubits: int) -> PauliDecomposition:
    """Closed-form decomposition of Z1 (k=1) or Z2 (k=2) into N*2^(N-1) strings.

    For suffix length m the strings are (I|Z)^(N-m) (X|Y)^m. The weight is

        (+-1)^(gamma+eps_k) / 2^(N-1) * sum_k sqrt(2^(m-1) (2k+1)),  k < 2^(N-m)

    with gamma = floor(n_y/2) + (Y count in the m-1 rightmost suffix axes),
    odd n_y kept for Z1 and even n_y for Z2, and an overall -1 for Z2.
    """
    if k not in (1, 2):
        raise DomainError(f"k must be 1 or 2, got {k!r}")
    if isinstance(n_qubits, bool) or int(n_qubits) != n_qubits or n_qubits < 1:
        raise DomainError(f"n_qubits must be a positive integer, got {n_qubits!r}")
    n_qubits = int(n_qubits)
    keep_odd = k == 1
    scale = 1.0 / (1 << (n_qubits - 1))

    terms = []
    for m in range(1, n_qubits + 1):
        count = 1 << (n_qubits - m)
        weights = np.sqrt((1 << (m - 1)) * (2.0 * np.arange(count) + 1.0))
        for prefix in product("IZ", repeat=n_qubits - m):
            total = float(np.dot(_prefix_signs(prefix, count), weights))
            for suffix in product("XY", repeat=m):
                n_y = suffix.count("Y")
                if (n_y % 2 == 1) != keep_odd:
                    continue
                gamma = (n_y // 2 + suffix[1:].count("Y")) % 2
                coefficient = (-1.0) ** gamma * total * scale
                if k == 2:
                    coefficient = -coefficient
                terms.append(PauliTerm("".join(prefix + suffix), coefficient))
    return PauliDecomposition(n_qubits=n_qubits, terms=tuple(terms), parity=ODD_Y if keep_odd else EVEN_Y)


def decomposition_to_json(decomp: PauliDecomposition) -> dict:
    return {
        "n_qubits": decomp.n_qubits,
        "parity": decomp.parity,
        "terms": [{"axes": term.axes, "coeff": term.coefficient} for term in decomp.terms],
    }


def decomposition_from_json(document: dict) -> PauliDecomposition:
    try:
        terms = tuple(PauliTerm(entry["axes"], float(entry["coeff"])) for entry in document["terms"])
        n_qubits = int(document["n_qubits"])
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"Malformed decomposition document: {e}") from e
    if any(term.n_qubits != n_qubits for term in terms):
        raise DomainError("Every term must span n_qubits axes")
    return PauliDecomposition(n_qubits=n_qubits, terms=terms, parity=document.get("parity", _parity_of(terms)))
