import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad
from scipy.special import gamma, gammaincc

from coherent.errors import DomainError, TruncationWarning
from coherent.fock import (
    ANNIHILATION,
    CREATION,
    GAMMA_RENORMALIZED,
    RAW_TRUNCATED,
    UNNORMALIZED_SERIES,
    FockDim,
    coherent_target,
    displacement_matrix,
    ladder_matrix,
    mean_photon_number,
    poisson_prob,
    truncated_prob,
    truncation_factor,
    upper_incomplete_gamma,
    z_matrix,
)

ALPHA = 1 + 1j


def test_fock_dim_rejects_zero_and_bool():
    assert FockDim(3).dim == 8
    with pytest.raises(DomainError):
        FockDim(0)
    with pytest.raises(DomainError):
        FockDim(True)


def test_ladder_matrices_single_qubit():
    assert_allclose(ladder_matrix(ANNIHILATION, 1).entries, [[0, 1], [0, 0]])
    assert_allclose(ladder_matrix(CREATION, 1).entries, [[0, 0], [1, 0]])


def test_annihilation_superdiagonal_two_qubits():
    a = ladder_matrix(ANNIHILATION, 2).entries
    assert_allclose(np.diag(a, k=1), np.sqrt([1, 2, 3]))
    assert_allclose(a - np.diag(np.diag(a, k=1), k=1), 0)


def test_creation_is_conjugate_transpose():
    for n in range(1, 5):
        assert_allclose(ladder_matrix(CREATION, n).entries, ladder_matrix(ANNIHILATION, n).entries.conj().T)


def test_ladder_entries_are_read_only():
    with pytest.raises(ValueError):
        ladder_matrix(ANNIHILATION, 2).entries[0, 1] = 5


def test_z_matrices_single_qubit():
    assert_allclose(z_matrix(1, 1), [[0, -1j], [1j, 0]])
    assert_allclose(z_matrix(2, 1), [[0, -1], [-1, 0]])


def test_z_matrix_two_qubits_magnitudes():
    z1 = z_matrix(1, 2)
    assert_allclose(np.abs(np.diag(z1, k=1)), np.sqrt([1, 2, 3]))
    assert_allclose(np.abs(np.diag(z1, k=-1)), np.sqrt([1, 2, 3]))


@pytest.mark.parametrize("n", range(1, 7))
def test_z_matrix_symmetry(n):
    z1, z2 = z_matrix(1, n), z_matrix(2, n)
    assert np.max(np.abs(z1 - z1.conj().T)) < 1e-14
    assert np.max(np.abs(z2.imag)) < 1e-14
    assert np.max(np.abs(z2 - z2.T)) < 1e-14


def test_z_matrix_rejects_unknown_k():
    with pytest.raises(DomainError):
        z_matrix(3, 2)


def test_displacement_matrix_is_unitary():
    d = displacement_matrix(ALPHA, 3)
    assert_allclose(d @ d.conj().T, np.eye(8), atol=1e-10)


def test_vacuum_target():
    target = coherent_target(0, 2, RAW_TRUNCATED)
    assert_allclose(target.amplitudes, [1, 0, 0, 0])


def test_normalization_modes_agree():
    for n in (2, 3, 4, 5):
        raw = coherent_target(ALPHA, n, RAW_TRUNCATED)
        renormalized = coherent_target(ALPHA, n, GAMMA_RENORMALIZED)
        assert_allclose(raw.amplitudes, renormalized.amplitudes, atol=1e-12)
        assert abs(np.sum(raw.probabilities) - 1) < 1e-12


def test_unnormalized_series_keeps_truncation_loss():
    for n in (2, 3, 4):
        series = coherent_target(ALPHA, n, UNNORMALIZED_SERIES)
        raw = coherent_target(ALPHA, n, RAW_TRUNCATED)
        assert np.sum(series.probabilities) == pytest.approx(gammaincc(1 << n, 2.0), rel=1e-12)
        assert_allclose(series.amplitudes * math.sqrt(truncation_factor(ALPHA, n)), raw.amplitudes, atol=1e-12)
    assert series.amplitudes[0] == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert_allclose(coherent_target(0, 2, UNNORMALIZED_SERIES).amplitudes, [1, 0, 0, 0])


def test_target_amplitudes_follow_alpha_powers():
    target = coherent_target(ALPHA, 3)
    k = np.arange(8)
    unnormalized = np.array([ALPHA ** j / math.sqrt(math.factorial(j)) for j in k])
    ratio = target.amplitudes / unnormalized
    assert_allclose(ratio, ratio[0], rtol=1e-12)


def test_target_matches_truncated_poisson():
    target = coherent_target(ALPHA, 3)
    expected = [truncated_prob(m, ALPHA, 3) for m in range(8)]
    assert_allclose(target.probabilities, expected, atol=1e-12)


def test_large_truncation_reaches_poisson():
    target = coherent_target(ALPHA, 5)
    assert abs(target.probabilities[2] - 2 * math.exp(-2)) < 1e-6


def test_large_alpha_warns_but_returns_target():
    with pytest.warns(TruncationWarning):
        target = coherent_target(3, 2)
    assert abs(np.sum(target.probabilities) - 1) < 1e-12


def test_non_finite_alpha_is_rejected():
    with pytest.raises(DomainError):
        coherent_target(complex(float("nan"), 0), 2)
    with pytest.raises(DomainError):
        coherent_target(complex(0, float("inf")), 2)


def test_unknown_normalization_mode():
    with pytest.raises(DomainError):
        coherent_target(ALPHA, 2, "bogus")


def test_poisson_prob_values():
    assert poisson_prob(0, 0) == 1.0
    assert poisson_prob(3, 0) == 0.0
    assert abs(poisson_prob(2, ALPHA) - 2 * math.exp(-2)) < 1e-15


def test_poisson_prob_normalization_and_large_m():
    total = sum(poisson_prob(m, ALPHA) for m in range(200))
    assert abs(total - 1) < 1e-10
    tail = poisson_prob(500, 3.0)
    assert math.isfinite(tail) and 0 <= tail < 1e-100


def test_poisson_prob_rejects_negative_m():
    with pytest.raises(DomainError):
        poisson_prob(-1, ALPHA)


def test_truncation_factor_closed_form():
    assert abs(truncation_factor(ALPHA, 3) / (21 * math.e ** 2 / 155) - 1) < 1e-12
    for m in range(8):
        assert abs(truncated_prob(m, ALPHA, 3) / poisson_prob(m, ALPHA) - 21 * math.e ** 2 / 155) < 1e-12


def test_truncation_factor_vacuum():
    assert truncated_prob(0, 0, 3) == pytest.approx(1.0, abs=1e-15)
    assert truncation_factor(0, 4) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("alpha", [0, ALPHA, 2, -1.5j, 0.3 - 1.2j])
def test_truncated_probabilities_sum_to_one(n, alpha):
    total = sum(truncated_prob(m, alpha, n) for m in range(1 << n))
    assert abs(total - 1) < 1e-12


def test_truncated_prob_out_of_range():
    with pytest.raises(DomainError):
        truncated_prob(8, ALPHA, 3)


def test_upper_incomplete_gamma_examples():
    assert upper_incomplete_gamma(1, 0) == pytest.approx(1.0)
    assert math.factorial(7) / upper_incomplete_gamma(8, 2) == pytest.approx(21 * math.e ** 2 / 155, rel=1e-12)
    expected = 24 * math.exp(-3) * (1 + 3 + 9 / 2 + 27 / 6 + 81 / 24)
    assert upper_incomplete_gamma(5, 3) == pytest.approx(expected, rel=1e-12)
    integral, _ = quad(lambda t: t ** 4 * math.exp(-t), 3, np.inf)
    assert upper_incomplete_gamma(5, 3) == pytest.approx(integral, rel=1e-9)


def test_upper_incomplete_gamma_matches_scipy_grid():
    for k in range(1, 33):
        for x in np.linspace(0, 10, 11):
            expected = gammaincc(k, x) * gamma(k)
            assert upper_incomplete_gamma(k, float(x)) == pytest.approx(expected, rel=1e-9)


def test_upper_incomplete_gamma_rejects_bad_arguments():
    with pytest.raises(DomainError):
        upper_incomplete_gamma(0, 1.0)
    with pytest.raises(DomainError):
        upper_incomplete_gamma(2, -1.0)


def test_mean_photon_number():
    assert mean_photon_number([0.5, 0.5]) == pytest.approx(0.5)
    assert mean_photon_number(coherent_target(ALPHA, 6).probabilities) == pytest.approx(2.0, abs=1e-6)
