# coherent/fock.py
"""Truncated bosonic Fock-space algebra.

N qubits hold the lowest 2^N number states; the ladder matrices are the
top-left 2^N x 2^N block of the infinite operators. Factorials and powers of
|alpha| are handled in log-space so large occupation numbers never overflow.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln, logsumexp

from coherent.errors import DomainError, TruncationWarning

CREATION = "creation"
ANNIHILATION = "annihilation"

RAW_TRUNCATED = "raw_truncated"
GAMMA_RENORMALIZED = "gamma_renormalized"
# Bare e^{-|alpha|^2/2} alpha^k / sqrt(k!) series, squared norm Gamma(2^N, |alpha|^2) / Gamma(2^N)
UNNORMALIZED_SERIES = "unnormalized_series"
NORMALIZATION_MODES = (RAW_TRUNCATED, GAMMA_RENORMALIZED, UNNORMALIZED_SERIES)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class FockDim:
    n_qubits: int

    def __post_init__(self):
        if isinstance(self.n_qubits, bool) or not isinstance(self.n_qubits, (int, np.integer)):
            raise DomainError(f"n_qubits must be an integer, got {self.n_qubits!r}")
        if self.n_qubits < 1:
            raise DomainError(f"n_qubits must be at least 1, got {self.n_qubits}")

    @property
    def dim(self) -> int:
        return 1 << int(self.n_qubits)


def as_fock_dim(dim) -> FockDim:
    """Accepts a FockDim or a bare qubit count."""
    return dim if isinstance(dim, FockDim) else FockDim(dim)


@dataclass(frozen=True, eq=False)
class LadderMatrix:
    kind: str
    dim: FockDim
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class CoherentTarget:
    alpha: complex
    dim: FockDim
    amplitudes: np.ndarray
    normalization_mode: str = RAW_TRUNCATED

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _check_alpha(alpha) -> complex:
    try:
        alpha = complex(alpha)
    except (TypeError, ValueError) as e:
        raise DomainError(f"alpha must be a complex number, got {alpha!r}") from e
    if not cmath.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha}")
    return alpha


def ladder_matrix(kind: str, dim) -> LadderMatrix:
    dim = as_fock_dim(dim)
    annihilation = np.diag(np.sqrt(np.arange(1, dim.dim, dtype=float)), k=1).astype(complex)
    if kind == ANNIHILATION:
        entries = annihilation
    elif kind == CREATION:
        entries = annihilation.conj().T.copy()
    else:
        raise DomainError(f"Unknown ladder kind {kind!r}; expected {CREATION!r} or {ANNIHILATION!r}")
    return LadderMatrix(kind=kind, dim=dim, entries=_frozen(entries))


def z_matrix(k: int, dim) -> np.ndarray:
    """Z1 = i(a^dag - a) (Hermitian) or Z2 = -(a + a^dag) (real symmetric)."""
    a = ladder_matrix(ANNIHILATION, dim).entries
    a_dag = ladder_matrix(CREATION, dim).entries
    if k == 1:
        return 1j * (a_dag - a)
    if k == 2:
        return -(a + a_dag)
    raise DomainError(f"k must be 1 or 2, got {k!r}")


def displacement_matrix(alpha, dim) -> np.ndarray:
    """Dense exp(alpha a^dag - alpha* a) on the truncated space."""
    alpha = _check_alpha(alpha)
    a = ladder_matrix(ANNIHILATION, dim).entries
    a_dag = ladder_matrix(CREATION, dim).entries
    return expm(alpha * a_dag - np.conj(alpha) * a)


def upper_incomplete_gamma(k: int, x: float) -> float:
    """Gamma(k, x) for integer k >= 1 via the finite closed form.

    Gamma(k, x) = (k-1)! e^{-x} sum_{j<k} x^j / j!
    """
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"x must be a finite nonnegative real, got {x!r}")
    k = int(k)
    return math.exp(_log_upper_gamma(k, float(x)))


def _log_upper_gamma(k: int, x: float) -> float:
    if x == 0.0:
        return float(gammaln(k))
    j = np.arange(k, dtype=float)
    return float(gammaln(k) - x + logsumexp(j * math.log(x) - gammaln(j + 1)))


def truncation_factor(alpha, dim) -> float:
    """Gamma(2^N) / Gamma(2^N, |alpha|^2), the ratio P'_m / P_m."""
    alpha = _check_alpha(alpha)
    n = as_fock_dim(dim).dim
    return math.exp(float(gammaln(n)) - _log_upper_gamma(n, abs(alpha) ** 2))


def poisson_prob(m: int, alpha) -> float:
    """e^{-|alpha|^2} |alpha|^{2m} / m!"""
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    mean = abs(_check_alpha(alpha)) ** 2
    if mean == 0.0:
        return 1.0 if m == 0 else 0.0
    return math.exp(-mean + m * math.log(mean) - float(gammaln(m + 1)))


def truncated_prob(m: int, alpha, dim) -> float:
    dim = as_fock_dim(dim)
    if not 0 <= m < dim.dim:
        raise DomainError(f"Fock number {m} outside truncated space of dimension {dim.dim}")
    return poisson_prob(m, alpha) * truncation_factor(alpha, dim)


def _series_amplitudes(alpha: complex, n: int) -> np.ndarray:
    k = np.arange(n, dtype=float)
    mean = abs(alpha) ** 2
    if mean == 0.0:
        amplitudes = np.zeros(n, dtype=complex)
        amplitudes[0] = 1.0
        return amplitudes
    magnitude = np.exp(-mean / 2 + k * math.log(abs(alpha)) - gammaln(k + 1) / 2)
    return magnitude * np.exp(1j * k * cmath.phase(alpha))


def coherent_target(alpha, dim, mode: str = RAW_TRUNCATED) -> CoherentTarget:
    alpha = _check_alpha(alpha)
    dim = as_fock_dim(dim)
    if mode not in NORMALIZATION_MODES:
        raise DomainError(f"Unknown normalization mode {mode!r}; expected one of {NORMALIZATION_MODES}")
    if abs(alpha) ** 2 > dim.dim / 2:
        warnings.warn(
            f"|alpha|^2 = {abs(alpha) ** 2:.4g} exceeds half of the truncated dimension {dim.dim}; "
            "the target loses significant weight to truncation",
            TruncationWarning,
            stacklevel=2,
        )

    amplitudes = _series_amplitudes(alpha, dim.dim)
    if mode == RAW_TRUNCATED:
        amplitudes = amplitudes / np.linalg.norm(amplitudes)
    elif mode == GAMMA_RENORMALIZED:
        amplitudes = amplitudes * math.sqrt(truncation_factor(alpha, dim))
    return CoherentTarget(alpha=alpha, dim=dim, amplitudes=_frozen(amplitudes), normalization_mode=mode)


def mean_photon_number(probabilities) -> float:
    probabilities = np.asarray(probabilities, dtype=float)
    return float(np.dot(np.arange(len(probabilities)), probabilities))
