import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from divlab.errors import DomainError, InvalidInput, InvalidPartition, NotPositive
from divlab.spectral import (ZeroPolicy, apply_spectral_function, as_hermitian, check_partition,
                             diagonal_partition, eig_hermitian, is_projection, matrix_exp,
                             matrix_log, matrix_power, pinch, support_projection)
from divlab.states import random_density, random_unitary


def _herm(rng, d):
    H = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (H + H.conj().T) / 2


@given(seed=st.integers(0, 2 ** 32 - 1), d=st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_exp_log_match_scipy(seed, d):
    rng = np.random.default_rng(seed)
    H = _herm(rng, d)
    np.testing.assert_allclose(matrix_exp(H), sla.expm(H), atol=1e-10 * np.abs(sla.expm(H)).max())
    rho = random_density(d, rng).operator
    np.testing.assert_allclose(matrix_log(rho), sla.logm(rho), atol=1e-8)


def test_fractional_power_matches_scipy(rng):
    rho = random_density(4, rng).operator
    for p in (0.3, 0.5, 1.7, -0.5):
        np.testing.assert_allclose(matrix_power(rho, p), sla.fractional_matrix_power(rho, p),
                                   atol=1e-9)


def test_eig_hermitian_reconstructs(rng):
    H = _herm(rng, 5)
    vals, vecs = eig_hermitian(H)
    assert np.all(np.diff(vals) >= 0)
    np.testing.assert_allclose((vecs * vals) @ vecs.conj().T, H, atol=1e-12)


def test_as_hermitian_rejects():
    with pytest.raises(InvalidInput):
        as_hermitian(np.ones((2, 3)))
    with pytest.raises(InvalidInput):
        as_hermitian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(InvalidInput):
        as_hermitian(np.array([[np.nan, 0], [0, 1]]))


def test_zero_policies():
    P = np.diag([2.0, 0.0])
    np.testing.assert_allclose(apply_spectral_function(P, np.log), np.diag([np.log(2), 0]))
    np.testing.assert_allclose(apply_spectral_function(P, np.cos, ZeroPolicy.APPLY_AT_ZERO),
                               np.diag([np.cos(2), 1.0]))
    with pytest.raises(DomainError):
        apply_spectral_function(P, np.log, ZeroPolicy.ERROR_ON_ZERO)
    with pytest.raises(DomainError):
        matrix_log(P)


def test_unitary_covariance(rng):
    H = _herm(rng, 4)
    U = random_unitary(4, rng)
    g = lambda x: np.sin(x) + x ** 3
    lhs = apply_spectral_function(U @ H @ U.conj().T, g, ZeroPolicy.APPLY_AT_ZERO)
    rhs = U @ apply_spectral_function(H, g, ZeroPolicy.APPLY_AT_ZERO) @ U.conj().T
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_support_projection(rng):
    rho = random_density(5, rng, rank=2).operator
    P = support_projection(rho)
    assert is_projection(P)
    assert round(np.trace(P).real) == 2
    np.testing.assert_allclose(P @ rho, rho, atol=1e-12)
    with pytest.raises(NotPositive):
        support_projection(np.diag([1.0, -0.5]))


def test_pinching(rng):
    rho = random_density(4, rng).operator
    parts = diagonal_partition(4)
    check_partition(parts, 4)
    np.testing.assert_allclose(pinch(rho, parts), np.diag(np.diag(rho)), atol=1e-15)
    blocks = [np.diag([1, 1, 0, 0]).astype(float), np.diag([0, 0, 1, 1]).astype(float)]
    out = pinch(rho, blocks)
    assert np.allclose(out[:2, 2:], 0) and np.allclose(out[:2, :2], rho[:2, :2])


def test_bad_partitions():
    with pytest.raises(InvalidPartition):
        check_partition([])
    with pytest.raises(InvalidPartition):
        check_partition([np.diag([1.0, 0.0])])
    with pytest.raises(InvalidPartition):
        check_partition([np.diag([1.0, 1.0]), np.diag([1.0, 0.0])])
    with pytest.raises(InvalidPartition):
        check_partition([np.array([[1.0, 1.0], [0.0, 0.0]]), np.diag([0.0, 1.0])])
