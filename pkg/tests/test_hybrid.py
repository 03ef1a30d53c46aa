import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab import BranchCutError, DomainError, scan_zeros
from zetalab.hybrid import (HybridConfig, approx_form, cue_hybrid_moment,
                            density_matched_dimension, hybrid_compare, prime_factor,
                            splitting_dimension, splitting_experiment, zero_factor)
from zetalab.primes import build_tables
from zetalab.specfun import exp_integral_e1
from zetalab.zeros import ZeroTable

SEED = 1


@pytest.fixture(scope="module")
def zeros_200():
    return scan_zeros(200.0)


@pytest.fixture(scope="module")
def tables_1000():
    return build_tables(1000)


def _euler_log_by_powers(s, x, primes):
    # log of prod_p exp(sum_{k: p^k <= x} p^{-ks}/k), written independently of the sieve
    total = 0j
    for p in primes:
        k, q = 1, p
        while q <= x:
            total += q ** (-s) / k
            k += 1
            q *= p
    return total


def test_config_validation():
    assert HybridConfig(100.0).zero_window == pytest.approx(50 / math.log(100))
    for kw in ({"x_cutoff": 1.0}, {"x_cutoff": 10.0, "sign_convention": "x"},
               {"x_cutoff": 10.0, "argument_convention": "x"},
               {"x_cutoff": 10.0, "zero_window": -1.0}):
        with pytest.raises(DomainError):
            HybridConfig(**kw)


def test_prime_factor_x2(tables_1000):
    cfg = HybridConfig(2.0)
    for t in (0.0, 3.7, -11.0):
        assert abs(prime_factor(t, cfg, tables_1000) - cmath.exp(2 ** (-0.5 - 1j * t))) < 1e-14


@given(st.floats(0.0, 1000.0), st.floats(2.0, 1000.0))
def test_prime_factor_conjugation(t, x):
    tab = build_tables(1000)
    cfg = HybridConfig(x)
    assert abs(prime_factor(-t, cfg, tab) - np.conj(prime_factor(t, cfg, tab))) < 1e-9


@given(st.floats(2.0, 1000.0), st.floats(2.0, 4.0), st.floats(-50.0, 50.0))
def test_prime_factor_equals_prime_power_truncated_product(x, sigma, t):
    tab = build_tables(1000)
    s = complex(sigma, t)
    ref = cmath.exp(_euler_log_by_powers(s, x, [int(p) for p in tab.primes if p <= x]))
    got = prime_factor(t, HybridConfig(x), tab, sigma=sigma)
    assert abs(got - ref) < 1e-12 * abs(ref)


@given(st.floats(2.0, 1000.0))
def test_prime_factor_full_euler_product_tail_bound(x):
    # omitted powers p^k > x contribute at most p^{-2k0}/(k0 (1 - p^{-2})) per prime
    tab = build_tables(1000)
    ps = tab.primes[tab.primes <= x].astype(float)
    full = -np.sum(np.log1p(-ps ** -2.0))
    got = math.log(prime_factor(0.0, HybridConfig(x), tab, sigma=2.0).real)
    k0 = np.floor(np.log(x) / np.log(ps)) + 1
    bound = np.sum(ps ** (-2 * k0) / (k0 * (1 - ps ** -2.0)))
    assert 0 <= full - got <= bound * (1 + 1e-9) + 1e-15


@pytest.mark.xfail(strict=True, reason="the full geometric factors include powers p^k > x, "
                   "which the prime sum omits; the gap at x = 1000 is 1.5e-6")
def test_prime_factor_full_euler_product_stated_tolerance(tables_1000):
    ps = tables_1000.primes.astype(float)
    full = math.exp(-np.sum(np.log1p(-ps ** -2.0)))
    got = prime_factor(0.0, HybridConfig(1000.0), tables_1000, sigma=2.0).real
    assert abs(got / full - 1) < 1e-6


def test_prime_factor_table_too_small():
    with pytest.raises(DomainError):
        prime_factor(1.0, HybridConfig(5000.0), build_tables(100))


def test_zero_factor_vanishes_at_ordinate(zeros_200):
    g1 = float(zeros_200.gammas[0])
    cfg = HybridConfig(100.0)
    assert abs(zero_factor(g1, cfg, zeros_200)) < 1e-6
    assert abs(zero_factor(g1 + 1e-9, cfg, zeros_200)) < 1e-6


def test_zero_factor_far_from_zeros_tends_to_one():
    tab = ZeroTable(np.array([100.0]), 1000.0)
    cfg = HybridConfig(1e4, zero_window=450.0)
    for t in (400.0, 540.0):
        u = np.array([t - 100.0, t + 100.0])  # ordinate and its mirror image
        bound = float(np.sum(1.0 / (np.abs(u) * cfg.log_x)))
        assert abs(math.log(abs(zero_factor(t, cfg, tab)))) <= bound


def test_zero_factor_window_doubling_example(zeros_200):
    a = zero_factor(20.0, HybridConfig(100.0, zero_window=30.0), zeros_200)
    b = zero_factor(20.0, HybridConfig(100.0, zero_window=60.0), zeros_200)
    assert a != 0 and np.isfinite(a)
    assert abs(math.log(abs(b)) - math.log(abs(a))) < 0.05


def _window_change(x, table):
    t = np.arange(50.0, 60.0 + 1e-9, 0.05)
    t = t[np.min(np.abs(t[:, None] - table.window(40, 70)[None, :]), axis=1) > 1e-3]
    cfg = HybridConfig(x)
    cfg2 = HybridConfig(x, zero_window=2 * cfg.zero_window)
    a = np.log(np.abs(zero_factor(t, cfg, table)))
    b = np.log(np.abs(zero_factor(t, cfg2, table)))
    return float(np.max(np.abs(a - b)))


@pytest.mark.parametrize("x", [10.0, 100.0, 1000.0])
def test_zero_factor_window_convergence_where_it_holds(x, zeros_200):
    assert _window_change(x, zeros_200) < 0.05


@pytest.mark.xfail(strict=True, reason="with the default window 50/log x the change reaches "
                   "0.088 at x = 30")
def test_zero_factor_window_convergence_all_x(zeros_200):
    assert max(_window_change(x, zeros_200) for x in (2.0, 5.0, 10.0, 30.0, 100.0, 300.0,
                                                      1000.0)) < 0.05


def test_zero_factor_errors(zeros_200):
    g1 = float(zeros_200.gammas[0])
    with pytest.raises(BranchCutError):
        zero_factor(g1 - 0.3, HybridConfig(100.0, argument_convention="real_arg"), zeros_200)
    with pytest.raises(DomainError):
        zero_factor(g1, HybridConfig(100.0, sign_convention="plus_E1"), zeros_200)
    with pytest.raises(DomainError):
        zero_factor(195.0, HybridConfig(100.0), zeros_200)
    sparse = ZeroTable(np.array([100.0]), 1000.0)
    with pytest.raises(DomainError):
        zero_factor(500.0, HybridConfig(100.0, zero_window=1.0), sparse)


def test_all_conventions_run(zeros_200):
    t = 60.0
    for sign in ("plus_E1", "minus_E1"):
        cfg = HybridConfig(100.0, sign, "imaginary_arg")
        assert np.isfinite(zero_factor(t, cfg, zeros_200))
    # real_arg is defined only where every t - gamma in the window is positive
    cfg = HybridConfig(100.0, "minus_E1", "real_arg", zero_window=5.0)
    past = ZeroTable(np.array([100.0, 113.0]), 200.0)
    assert np.isfinite(zero_factor(116.0, cfg, past))


def test_default_sign_is_the_vanishing_one():
    z = 1e-6j
    assert abs(cmath.exp(-exp_integral_e1(z))) < 1e-5
    assert abs(cmath.exp(exp_integral_e1(z))) > 1e5


@pytest.fixture(scope="module")
def compare_100(zeros_200, tables_1000):
    return hybrid_compare(50.0, 60.0, 0.05, HybridConfig(100.0), zeros_200, tables_1000)


@pytest.fixture(scope="module")
def compare_1000(zeros_200, tables_1000):
    return hybrid_compare(50.0, 60.0, 0.05, HybridConfig(1000.0), zeros_200, tables_1000)


def test_compare_correlation(compare_1000, compare_100):
    assert compare_1000.correlation_of_moduli > 0.95
    assert compare_100.correlation_of_moduli > 0.95
    assert len(compare_1000.grid) == len(compare_1000.model_values) == 201
    assert -1 <= compare_1000.correlation_of_moduli <= 1


@pytest.mark.xfail(strict=True, reason="max log ratio is not monotone in x on [50, 60]: "
                   "0.103 at x = 100 and 0.115 at x = 1000")
def test_compare_ratio_decreases_with_x(compare_100, compare_1000):
    assert compare_1000.max_log_ratio_away_from_zeros < compare_100.max_log_ratio_away_from_zeros


def test_model_dips_at_ordinates(zeros_200, tables_1000):
    cfg = HybridConfig(1000.0)
    for g in zeros_200.window(50.0, 60.0):
        t = g + np.linspace(-0.01, 0.01, 21)
        model = np.abs(prime_factor(t, cfg, tables_1000) * zero_factor(t, cfg, zeros_200))
        assert model.min() < 0.01


def test_model_zeros_coincide_with_ordinates(zeros_200, tables_1000):
    cfg = HybridConfig(1000.0)
    for g in zeros_200.window(50.0, 60.0):
        def model(t):
            return abs(prime_factor(t, cfg, tables_1000) * zero_factor(t, cfg, zeros_200))

        near = max(model(g - 1e-4), model(g + 1e-4))
        far = min(model(g - 0.5), model(g + 0.5))
        assert near < far


def test_compare_rows_and_validation(compare_100, zeros_200, tables_1000):
    rows = compare_100.rows()
    assert len(rows) == 201 and len(rows[0]) == 5
    with pytest.raises(DomainError):
        hybrid_compare(60.0, 50.0, 0.05, HybridConfig(100.0), zeros_200, tables_1000)


def test_approx_form_examples(tables_1000):
    cfg = HybridConfig(2.0)
    assert abs(approx_form(0.0, cfg, tables_1000) - 1 / (1 - 2 ** -0.5)) < 1e-14
    cfg = HybridConfig(50.0)
    phi = 0.3
    base = approx_form(0.0, cfg, tables_1000)
    with_angle = approx_form(0.0, cfg, tables_1000, angles=np.array([-phi]), theta=0.0)
    factor = abs(with_angle / base)
    assert abs(factor - math.exp(1 - math.cos(phi * math.log(50.0)))) < 1e-12


def test_approx_form_does_not_tend_to_one(tables_1000):
    # diagnostic: the exp(1 - x^{i phi}) factor does not decay away from the angle
    cfg = HybridConfig(50.0)
    far = [abs(approx_form(0.0, cfg, tables_1000, angles=np.array([-d]), theta=0.0)
               / approx_form(0.0, cfg, tables_1000)) for d in (1.0, 2.0, 3.0)]
    e1 = [abs(cmath.exp(-exp_integral_e1(1j * d * math.log(50.0)))) for d in (1.0, 2.0, 3.0)]
    assert max(abs(f - 1) for f in far) > 0.5
    assert max(abs(e - 1) for e in e1[2:]) < 0.1


def test_splitting_dimension():
    assert splitting_dimension(2000.0) == 1
    assert splitting_dimension(1e10) == 4
    assert density_matched_dimension(2000.0) == 6


def test_splitting_k0():
    r = splitting_experiment(0, 100.0, 10.0)
    assert r.prime_moment == r.matrix_moment == r.product == r.zeta_moment == 1.0


def test_splitting_preconditions():
    with pytest.raises(DomainError):
        splitting_experiment(3, 100.0, 10.0)
    with pytest.raises(DomainError):
        splitting_experiment(1, -1.0, 10.0)


def test_matrix_moment_rotation_invariant():
    cfg = HybridConfig(50.0)
    for N in (1, 6):
        a, ea = cue_hybrid_moment(1, N, 2000, SEED, cfg, theta=0.0)
        b, eb = cue_hybrid_moment(1, N, 2000, SEED + 1, cfg, theta=1.3)
        assert abs(a - b) < 3 * math.hypot(ea, eb)


@pytest.fixture(scope="module")
def splitting_2000():
    return splitting_experiment(1, 2000.0, 50.0, samples=2000, seed=SEED,
                                zeros=scan_zeros(2000.0))


def test_splitting_within_factor_two(splitting_2000):
    r = splitting_2000
    assert r.N == 1
    assert 0.5 <= r.ratio <= 2.0
    assert abs(r.product - r.prime_moment * r.matrix_moment) < 1e-12 * r.product


@pytest.mark.xfail(strict=True, reason="at T = 2000 the product overshoots the measured "
                   "moment by a factor 1.68")
def test_splitting_ratio_near_one(splitting_2000):
    assert 0.7 <= splitting_2000.ratio <= 1.3
