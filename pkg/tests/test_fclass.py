import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from divlab.errors import UnsupportedFunction
from divlab.fclass import (GRID, INF, IntegralRepresentation, catalog_lookup, ext_mul, h_n_evaluate,
                           second_difference_min, transpose, truncate, validate_representation)
from divlab.suites import CATALOG

T = np.geomspace(1e-3, 1e3, 61)


@pytest.mark.parametrize("name", CATALOG)
def test_catalog_convex_and_normalized(name):
    f = catalog_lookup(name)
    assert second_difference_min(f) >= -1e-9
    if not name.startswith("power"):
        assert f(1.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("name", CATALOG)
def test_transpose_representation(name):
    f = catalog_lookup(name)
    g = transpose(f)
    np.testing.assert_allclose(g(T), T * f(1 / T), rtol=1e-12, atol=1e-12)
    assert validate_representation(g, GRID, relative=True) <= 1e-12
    assert (g.f_at_zero_plus, g.fprime_at_infinity) == (f.fprime_at_infinity, f.f_at_zero_plus)
    back = transpose(g)
    assert back.name == f.name
    np.testing.assert_allclose(back(T), f(T), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("name", CATALOG)
def test_perspective_matches_evaluator(name):
    f = catalog_lookup(name)
    a, b = np.meshgrid(np.geomspace(1e-3, 10, 9), np.geomspace(1e-3, 10, 9))
    np.testing.assert_allclose(f.perspective(a, b), b * f(a / b), rtol=1e-11, atol=1e-13)


def test_perspective_survives_extreme_ratios():
    f = catalog_lookup("t_log_t")
    assert f.perspective(np.array([1.0]), np.array([1e-300]))[0] == pytest.approx(math.log(1e300))
    g = catalog_lookup("neg_log")
    assert np.isfinite(g.perspective(np.array([1e-300]), np.array([1.0]))[0])


def test_boundary_values():
    assert catalog_lookup("neg_log").f_at_zero_plus == INF
    assert catalog_lookup("t_log_t").fprime_at_infinity == INF
    assert catalog_lookup("hellinger").f_at_zero_plus == 1.0
    assert catalog_lookup("power:0.5").fprime_at_infinity == 0.0
    assert catalog_lookup("square_dev_over_t").fprime_at_infinity == 1.0


def test_power_convention_below_one():
    f = catalog_lookup("power", 0.3)
    assert f(4.0) == pytest.approx(-4.0 ** 0.3)
    assert catalog_lookup("power:0.3") is f


@pytest.mark.parametrize("bad", ["power:1", "power:2.5", "power:0", "power:-1", "power:x", "nope"])
def test_unsupported(bad):
    with pytest.raises(UnsupportedFunction):
        catalog_lookup(bad)


@given(alpha=st.floats(0.02, 1.98).filter(lambda a: abs(a - 1) > 1e-3))
@settings(max_examples=25, deadline=None)
def test_power_family_validates(alpha):
    f = catalog_lookup("power", alpha)
    assert validate_representation(f, np.geomspace(1e-3, 1e3, 31), relative=True) <= 1e-12


def test_validation_catches_wrong_representation():
    f = catalog_lookup("hellinger")
    wrong = type(f)(f.name, f.func, f.f_at_zero_plus, f.fprime_at_infinity,
                    IntegralRepresentation(a=0.0, b=0.0, c=1.0))
    assert validate_representation(wrong) > 1e-3


def test_ext_mul_convention():
    assert ext_mul(INF, 0.0) == 0.0
    assert ext_mul(INF, 2.0) == INF
    assert ext_mul(1.5, 2.0) == 3.0


@pytest.mark.parametrize("name", CATALOG)
def test_truncation_limits(name):
    f = catalog_lookup(name)
    prev = None
    for n in (1, 4, 64, 1024):
        tr = truncate(f, n)
        fn = np.array([tr.fn(t) for t in (0.01, 0.5, 3.0, 100.0)])
        if prev is not None:
            # f_n increases to f
            assert np.all(fn >= prev - 1e-10)
        prev = fn
    # the slowest entry (power 1.5) converges like n^(-1/2)
    np.testing.assert_allclose(prev, f(np.array([0.01, 0.5, 3.0, 100.0])), rtol=0.25, atol=0.05)
    assert tr.fn(1.0) == pytest.approx(f(1.0), abs=1e-12)


def test_neg_log_truncation_at_two():
    tr = truncate(catalog_lookup("neg_log"), 2)
    assert tr.fn_at_zero_plus == pytest.approx(2 / 3 + math.log(2), abs=1e-12)
    # f_n(t) -> boundary value as t -> 0
    assert tr.fn(1e-9) == pytest.approx(tr.fn_at_zero_plus, abs=1e-8)


@pytest.mark.parametrize("name", CATALOG)
@pytest.mark.parametrize("n", [1, 3, 50])
def test_h_n_identity(name, n):
    # f_n(t) = f_n(0+) + t f_n'(inf) - h_n(t)
    tr = truncate(catalog_lookup(name), n)
    for t in (0.02, 0.7, 1.0, 9.0):
        lhs = tr.fn(t)
        rhs = tr.fn_at_zero_plus + t * tr.fn_prime_at_infinity - h_n_evaluate(tr, t)
        assert lhs == pytest.approx(rhs, abs=1e-9 * max(1, abs(lhs), t * abs(tr.fn_prime_at_infinity)))


def test_h_n_monotone_and_bounded():
    tr = truncate(catalog_lookup("t_log_t"), 16)
    t = np.geomspace(1e-3, 1e3, 25)
    h = np.array([h_n_evaluate(tr, x) for x in t])
    assert h_n_evaluate(tr, 0.0) == 0.0
    assert np.all(np.diff(h) > 0)
    assert np.all(h <= tr.nu_mass() * np.maximum(t, 1) + 1e-12)
    with pytest.raises(ValueError):
        h_n_evaluate(tr, -1.0)


def test_truncate_rejects():
    with pytest.raises(ValueError):
        truncate(catalog_lookup("t_log_t"), 0)


@pytest.mark.parametrize("alpha", [0.984375, 0.999, 1.001])
def test_powers_near_one(alpha):
    assert validate_representation(catalog_lookup("power", alpha), GRID, relative=True) <= 1e-12
