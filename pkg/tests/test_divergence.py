import math

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from divlab import (catalog_lookup, classical_f_divergence, relative_entropy,
                    relative_modular_spectrum, standard_f_divergence, transpose,
                    truncated_f_divergence)
from divlab.errors import DimensionError
from divlab.states import direct_sum, make_functional, random_density, random_unitary
from divlab.suites import CATALOG

seeds = st.integers(0, 2 ** 32 - 1)


def _pair(seed, d):
    rng = np.random.default_rng(seed)
    return random_density(d, rng), random_density(d, rng)


def _umegaki(rho, sigma):
    return float(np.trace(rho @ (sla.logm(rho) - sla.logm(sigma))).real)


@given(seed=seeds, d=st.integers(1, 5))
@settings(max_examples=40, deadline=None)
def test_matrix_function_oracles(seed, d):
    rho, sigma = _pair(seed, d)
    R, S = rho.operator, sigma.operator
    Sinv, Rinv = np.linalg.inv(S), np.linalg.inv(R)
    sqrt = sla.sqrtm
    cases = {
        "t_log_t": _umegaki(R, S),
        "neg_log": _umegaki(S, R),
        "square_dev": np.trace(R @ R @ Sinv).real - 2 * rho.trace + sigma.trace,
        "square_dev_over_t": np.trace(S @ S @ Rinv).real - 2 * sigma.trace + rho.trace,
        "hellinger": rho.trace + sigma.trace - 2 * np.trace(sqrt(R) @ sqrt(S)).real,
        "power:2": np.trace(R @ R @ Sinv).real,
        "power:0.5": -np.trace(sqrt(R) @ sqrt(S)).real,
        "power:1.5": np.trace(sla.fractional_matrix_power(R, 1.5)
                              @ sla.fractional_matrix_power(S, -0.5)).real,
    }
    for name, want in cases.items():
        got = standard_f_divergence(name, rho, sigma)
        assert got == pytest.approx(want, rel=1e-7, abs=1e-8), name


def test_boundary_terms_hand_computed():
    rho = make_functional(np.diag([0.5, 0.5, 0.0]))
    sigma = make_functional(np.diag([0.25, 0.0, 0.75]))
    # pairs: (0.5, 0.25) overlap; rho mass 0.5 outside s(sigma); sigma mass 0.75 outside s(rho)
    assert standard_f_divergence("hellinger", rho, sigma) == pytest.approx(
        (math.sqrt(0.5) - math.sqrt(0.25)) ** 2 + 0.75 + 0.5)
    assert standard_f_divergence("power:0.5", rho, sigma) == pytest.approx(-math.sqrt(0.125))
    assert standard_f_divergence("t_log_t", rho, sigma) == math.inf
    assert standard_f_divergence("neg_log", rho, sigma) == math.inf


def test_inf_times_zero_is_zero():
    rho = make_functional(np.diag([0.3, 0.0]))
    sigma = make_functional(np.diag([0.6, 0.0]))
    # both outside masses vanish, so infinite boundary values contribute nothing
    assert standard_f_divergence("t_log_t", rho, sigma) == pytest.approx(0.3 * math.log(0.5))
    assert standard_f_divergence("neg_log", rho, sigma) == pytest.approx(0.6 * math.log(2))


def test_orthogonal_supports():
    rho = make_functional(np.diag([1.0, 0.0]))
    sigma = make_functional(np.diag([0.0, 1.0]))
    assert standard_f_divergence("hellinger", rho, sigma) == pytest.approx(2.0)
    assert standard_f_divergence("power:0.5", rho, sigma) == 0.0
    assert standard_f_divergence("square_dev", rho, sigma) == math.inf


@given(seed=seeds, d=st.integers(2, 4), lam=st.floats(0.1, 10))
@settings(max_examples=30, deadline=None)
def test_homogeneity_and_unitary_invariance(seed, d, lam):
    rho, sigma = _pair(seed, d)
    U = random_unitary(d, np.random.default_rng(seed + 1))
    for name in CATALOG:
        base = standard_f_divergence(name, rho, sigma)
        assert standard_f_divergence(name, rho.scaled(lam), sigma.scaled(lam)) == pytest.approx(
            lam * base, rel=1e-9, abs=1e-10)
        rot = standard_f_divergence(name, make_functional(U @ rho.operator @ U.conj().T),
                                    make_functional(U @ sigma.operator @ U.conj().T))
        assert rot == pytest.approx(base, rel=1e-9, abs=1e-10)


def test_additivity_on_direct_sums(rng):
    r1, s1 = random_density(2, rng), random_density(2, rng)
    r2, s2 = random_density(3, rng, rank=2), random_density(3, rng)
    for name in CATALOG:
        total = standard_f_divergence(name, direct_sum(r1, r2), direct_sum(s1, s2))
        parts = standard_f_divergence(name, r1, s1) + standard_f_divergence(name, r2, s2)
        assert total == pytest.approx(parts, rel=1e-10)


def test_affine_shift(rng):
    # adding a + b(t - 1) to f adds a sigma(1) + b (rho(1) - sigma(1))
    rho, sigma = random_density(3, rng, trace=1.7), random_density(3, rng, trace=0.6)
    f = catalog_lookup("hellinger")
    a, b = 0.4, -1.3
    g = type(f)("shifted", lambda t: f(t) + a + b * (np.asarray(t) - 1), f.f_at_zero_plus + a - b,
                f.fprime_at_infinity + b)
    got = standard_f_divergence(g, rho, sigma)
    want = standard_f_divergence(f, rho, sigma) + a * sigma.trace + b * (rho.trace - sigma.trace)
    assert got == pytest.approx(want, rel=1e-12)


def test_transpose_is_relative_entropy_swap(rng):
    rho, sigma = random_density(3, rng), random_density(3, rng)
    assert standard_f_divergence(transpose(catalog_lookup("t_log_t")), sigma, rho) == pytest.approx(
        relative_entropy(rho, sigma), rel=1e-12)


def test_classical_divergence():
    p, q = np.array([0.2, 0.8, 0.0]), np.array([0.5, 0.25, 0.25])
    kl = 0.2 * math.log(0.4) + 0.8 * math.log(3.2)
    assert classical_f_divergence("t_log_t", p, q) == pytest.approx(kl)
    assert classical_f_divergence("neg_log", p, q) == math.inf
    with pytest.raises(DimensionError):
        classical_f_divergence("t_log_t", p, q[:2])


def test_modular_spectrum_masses(rng):
    rho = random_density(4, rng, rank=2)
    sigma = random_density(4, rng, rank=3)
    spec = relative_modular_spectrum(rho, sigma)
    assert spec.w.shape == (2, 3)
    assert np.sum(spec.w * spec.a[:, None]) + spec.rho_off_mass == pytest.approx(rho.trace)
    assert np.sum(spec.w * spec.b[None, :]) + spec.sigma_off_mass == pytest.approx(sigma.trace)
    with pytest.raises(DimensionError):
        relative_modular_spectrum(rho, random_density(3, rng))


@pytest.mark.parametrize("name", CATALOG)
def test_truncated_divergence_increases(name, rng):
    rho, sigma = random_density(3, rng, rank=2), random_density(3, rng)
    vals = [truncated_f_divergence(name, rho, sigma, n) for n in (1, 8, 64, 512)]
    assert all(math.isfinite(v) for v in vals)
    assert np.all(np.diff(vals) >= -1e-10)
    assert vals[-1] <= standard_f_divergence(name, rho, sigma) + 1e-9
