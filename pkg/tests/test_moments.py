import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab import DomainError
from zetalab.moments import (GK_CAP, DirichletPolynomial, MollifierSpec, ak_tail_constant,
                             arithmetic_factor_ak, build_mollifier, conjectured_moment,
                             dirichlet_poly_mean, gk_exact, mean_square_constant,
                             mollified_moment, moment_integral, moment_rows, off_diagonal_term)
from zetalab.primes import build_tables


@pytest.fixture(scope="module")
def zeros_2000():
    from zetalab import scan_zeros

    return scan_zeros(2000.0)


@pytest.fixture(scope="module")
def i1_2000(zeros_2000):
    return moment_integral(1, 0.5, 2000.0, zeros=zeros_2000)


def test_k0_is_exactly_T():
    for sigma in (0.5, 0.7, 2.0):
        assert moment_integral(0, sigma, 100.0).value == 100.0


def test_sigma2_mean_square_close_to_zeta4():
    r = moment_integral(1, 2.0, 2000.0)
    assert abs(r.value / 2000.0 / (math.pi ** 4 / 90) - 1) < 0.02
    assert r.est_error >= 0


def test_sigma2_fourth_moment_diagonal_oracle():
    # sum d(n)^2 n^{-4} = zeta(4)^4 / zeta(8)
    oracle = (math.pi ** 4 / 90) ** 4 / (math.pi ** 8 / 9450)
    r = moment_integral(2, 2.0, 2000.0)
    assert abs(r.value / 2000.0 / oracle - 1) < 0.02


def test_mean_square_against_mpmath_quadrature(zeros_1000):
    g = [0.0] + [float(x) for x in zeros_1000.window(0, 30)] + [30.0]
    ref = float(mp.quad(lambda t: abs(mp.zeta(mp.mpc(0.5, t))) ** 2, g))
    r = moment_integral(1, 0.5, 30.0, zeros=zeros_1000)
    assert abs(r.value - ref) < 1e-6 * ref


def test_critical_line_ratio_increases(zeros_1000):
    vals = [moment_integral(1, 0.5, T, zeros=zeros_1000).value / (T * math.log(T))
            for T in (250.0, 500.0, 1000.0)]
    assert vals[0] < vals[1] < vals[2] < 1.1


@pytest.mark.parametrize("k, sigma, T", [(1, 0.5, -1.0), (4, 0.5, 10.0), (1, 0.3, 10.0),
                                         (1, 1.0, 10.0)])
def test_moment_preconditions(k, sigma, T):
    with pytest.raises(DomainError):
        moment_integral(k, sigma, T)


@given(st.floats(0.0, 3.0), st.floats(0.6, 3.0))
def test_moment_nonnegative(k, sigma):
    assert moment_integral(k, sigma, 5.0).value >= 0


def test_mean_square_constant():
    assert abs(mean_square_constant(2.0) - math.pi ** 4 / 90) < 1e-12
    with pytest.raises(DomainError):
        mean_square_constant(0.5)


def test_dirichlet_single_term():
    r = dirichlet_poly_mean(DirichletPolynomial([1.0]), 0.5, 100.0)
    assert r.quadrature == 100.0 and r.diagonal == 100.0 and r.off_diagonal_bound == 0.0


def test_dirichlet_two_terms_closed_form():
    r = dirichlet_poly_mean(DirichletPolynomial([1.0, 1.0]), 0.5, 100.0)
    # int_0^T 2 Re 2^{-1/2 - it} dt = 2 sqrt(1/2) sin(T log 2)/log 2
    exact = 2 * math.sqrt(0.5) * math.sin(100 * math.log(2)) / math.log(2)
    assert abs(r.off_diagonal_bound - exact) < 1e-12
    assert abs(r.quadrature - r.diagonal - exact) < 1e-6


def test_dirichlet_ten_terms_diagonal_dominates():
    r = dirichlet_poly_mean(DirichletPolynomial(np.ones(10)), 0.5, 1e4)
    assert abs(r.quadrature / r.diagonal - 1) < 0.05


@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=1, max_size=8),
       st.floats(0.0, 1.5), st.floats(1.0, 60.0))
def test_three_way_identity(coefs, sigma, T):
    a = np.array([complex(x, y) for x, y in coefs])
    r = dirichlet_poly_mean(DirichletPolynomial(a), sigma, T)
    assert abs(r.quadrature - r.diagonal - r.off_diagonal_bound) <= 1e-6 * max(r.diagonal, 1e-3)


def test_off_diagonal_brute_force():
    a = np.array([1.0, -0.5j, 0.3 + 0.2j])
    sigma, T = 0.3, 17.0
    n = np.arange(1, 4)
    total = 0j
    for i in range(3):
        for j in range(3):
            if i != j:
                lr = math.log(n[j] / n[i])
                total += (a[i] * np.conj(a[j]) * (n[i] * n[j]) ** -sigma
                          * (np.exp(1j * T * lr) - 1) / (1j * lr))
    assert abs(off_diagonal_term(a, sigma, T) - total.real) < 1e-12


def test_polynomial_validation():
    with pytest.raises(DomainError):
        DirichletPolynomial([])
    p = DirichletPolynomial([1.0, 0.0, 0.0])
    assert p.length == 3
    with pytest.raises(ValueError):
        p.coefficients[0] = 2.0


def test_ak_examples(tables_1e6):
    assert arithmetic_factor_ak(1).value == 1.0
    a2 = arithmetic_factor_ak(2, 10 ** 5, tables_1e6)
    assert abs(a2.value - 6 / math.pi ** 2) < 2 * a2.tail_bound + 1e-12
    a3 = arithmetic_factor_ak(3, 10 ** 5, tables_1e6)
    a3b = arithmetic_factor_ak(3, 10 ** 6, tables_1e6)
    assert abs(a3.value - a3b.value) < 1e-6


def test_ak_k2_truncated_product_oracle(tables_1e5):
    p = tables_1e5.primes.astype(float)
    oracle = math.exp(math.fsum(np.log1p(-p ** -2)))
    assert abs(arithmetic_factor_ak(2, 10 ** 5, tables_1e5).value - oracle) < 1e-12


@pytest.mark.parametrize("k", [2, 3, 4])
def test_ak_tail_bound_covers_increase(k, tables_1e6):
    lo = arithmetic_factor_ak(k, 1000, tables_1e6)
    hi = arithmetic_factor_ak(k, 10 ** 6, tables_1e6)
    assert abs(hi.value - lo.value) <= lo.tail_bound
    assert ak_tail_constant(k) > 0


def test_ak_preconditions():
    with pytest.raises(DomainError):
        arithmetic_factor_ak(2, 50)
    with pytest.raises(DomainError):
        arithmetic_factor_ak(0)


def test_gk_values():
    assert [gk_exact(k) for k in (1, 2, 3, 4)] == [1, 2, 42, 24024]
    assert all(isinstance(gk_exact(k), Fraction) for k in range(1, 5))


@pytest.mark.parametrize("k", range(1, 7))
def test_gk_positive_integer(k):
    g = gk_exact(k)
    assert g > 0 and g.denominator == 1


def test_gk_against_barnes_g():
    # g_k/(k^2)! = G(k+1)^2 / G(2k+1)
    for k in range(1, GK_CAP + 1):
        ref = mp.barnesg(k + 1) ** 2 / mp.barnesg(2 * k + 1) * mp.factorial(k * k)
        assert abs(float(gk_exact(k)) / float(ref) - 1) < 1e-12


def test_gk_cap():
    with pytest.raises(OverflowError):
        gk_exact(GK_CAP + 1)


def test_conjectured_examples():
    T = 1e4
    assert abs(conjectured_moment(1, T) / (T * math.log(T)) - 1) < 1e-12
    r = conjectured_moment(2, T) * 2 * math.pi ** 2 / (T * math.log(T) ** 4)
    assert abs(r - 1) < 1e-6
    c4 = conjectured_moment(4, T, 10 ** 5) / (T * math.log(T) ** 16)
    a4 = arithmetic_factor_ak(4, 10 ** 5).value
    assert abs(c4 - a4 * 24024 / math.factorial(16)) < 1e-12 * c4


def test_mollifier_coefficients(tables_1e5):
    m = build_mollifier(MollifierSpec(30), tables_1e5).coefficients
    assert m[0] == 1.0
    assert m[29] == 0.0
    assert m[3] == 0.0
    general = build_mollifier(MollifierSpec(30, smoothing=(1.0, -1.0)), tables_1e5).coefficients
    assert np.allclose(general, m)
    with pytest.raises(DomainError):
        build_mollifier(MollifierSpec(10 ** 6), tables_1e5)


@pytest.mark.parametrize("kw", [{"N": 0}, {"N": 5, "theta": 1.0}, {"N": 5, "theta": 0.0}])
def test_mollifier_spec_validation(kw):
    with pytest.raises(DomainError):
        MollifierSpec(**kw)


def test_mollifier_from_theta():
    assert MollifierSpec.from_theta(2500.0, 0.5).N == 50


def test_mollified_identity(zeros_1000):
    a = mollified_moment(MollifierSpec(1), 0.5, 200.0, zeros=zeros_1000)
    b = moment_integral(1, 0.5, 200.0, zeros=zeros_1000)
    assert abs(a.value - b.value) <= 1e-8 * b.value


def test_mollified_rejects_sigma_out_of_range():
    with pytest.raises(DomainError):
        mollified_moment(MollifierSpec(5), 0.4, 10.0)
    with pytest.raises(DomainError):
        mollified_moment(MollifierSpec(5), 1.0, 10.0)


def test_mollifier_dampens_and_is_stable(zeros_2000, i1_2000):
    T = 2000.0
    m20 = mollified_moment(MollifierSpec(20), 0.5, T, zeros=zeros_2000).value / T
    m40 = mollified_moment(MollifierSpec(40), 0.5, T, zeros=zeros_2000).value / T
    assert m40 <= 1.1 * m20
    assert m40 < i1_2000.value / T


def test_moment_rows_shape():
    rows = moment_rows([1], 2.0, [10.0, 20.0])
    assert len(rows) == 2 and all(len(r) == 6 for r in rows)
