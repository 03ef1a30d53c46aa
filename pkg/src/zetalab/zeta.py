"""Evaluation of zeta(s), the Hardy Z-function and -zeta'/zeta.

The workhorse is Euler-Maclaurin summation with ten Bernoulli corrections
and cutoff ``N = max(20, ceil(|t|/2 + 10))``. An independent route through
the alternating (eta) series with Borwein's acceleration is kept for
cross-checks.
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhausted, PoleError, ZeroOfZetaError
from .specfun import DEFAULT_BUDGET, PrecisionBudget, lngamma, riemann_siegel_theta

# B_{2j} / (2j)! for j = 1..11; the eleventh term only feeds the error estimate.
_BERNOULLI = (
    (1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730), (7, 6),
    (-3617, 510), (43867, 798), (-174611, 330), (854513, 138),
)
_EM_COEF = tuple(num / den / math.factorial(2 * j)
                 for j, (num, den) in enumerate(_BERNOULLI, start=1))
EM_ORDER = 10
_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class ZetaEvaluation:
    s: complex
    value: complex
    est_error: float
    terms_used: int


def em_cutoff(t):
    return np.maximum(20, np.ceil(np.abs(t) / 2.0 + 10.0)).astype(np.int64)


def _em_block(s, n_cut):
    """Euler-Maclaurin for a block of points sharing one cutoff."""
    n = np.arange(1, n_cut, dtype=float)
    logn = np.log(n)
    head = np.exp(-np.multiply.outer(s, logn)).sum(axis=-1)
    big_n = float(n_cut)
    log_n = math.log(big_n)
    n_pow = np.exp(-s * log_n)  # N^{-s}
    value = head + big_n * n_pow / (s - 1.0) + 0.5 * n_pow
    poch = s.copy()
    power = n_pow / big_n  # N^{-s-1}
    for j in range(EM_ORDER):
        value = value + _EM_COEF[j] * poch * power
        poch = poch * (s + 2 * j + 1) * (s + 2 * j + 2)
        power = power / (big_n * big_n)
    est = np.abs(_EM_COEF[EM_ORDER] * poch * power)
    return value, est


def zeta_em(s, scale=1):
    """Vectorized Euler-Maclaurin zeta. Returns ``(values, est_error, cutoffs)``."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(s == 1.0):
        raise PoleError("zeta has a pole at s = 1")
    cut = em_cutoff(s.imag) * int(scale)
    values = np.empty_like(s)
    est = np.empty(s.shape, dtype=float)
    order = np.argsort(cut, kind="stable")
    sorted_cut = cut[order]
    start = 0
    while start < order.size:
        stop = start + max(1, _CHUNK_ELEMENTS // int(sorted_cut[start]))
        stop = min(stop, order.size)
        # shrink until rows * (largest cutoff in the chunk) fits the element budget
        while stop - start > 1 and (stop - start) * int(sorted_cut[stop - 1]) > _CHUNK_ELEMENTS:
            stop = start + max(1, _CHUNK_ELEMENTS // int(sorted_cut[stop - 1]))
        idx = order[start:stop]
        n_cut = int(sorted_cut[stop - 1])
        values[idx], est[idx] = _em_block(s[idx], n_cut)
        start = stop
    return values, est, cut


def zeta_values(s, budget: PrecisionBudget = DEFAULT_BUDGET):
    """Array-in, array-out zeta; enlarges the cutoff wherever the budget is not met."""
    s_arr = np.asarray(s, dtype=complex)
    flat = s_arr.ravel()
    values, est, cut = zeta_em(flat)
    bad = est > budget.tolerance(values)
    scale = 1
    while bad.any():
        scale *= 2
        if int(cut[bad].max()) * scale > budget.max_terms:
            raise BudgetExhausted(
                f"zeta: Euler-Maclaurin cutoff would exceed max_terms={budget.max_terms}")
        v2, e2, c2 = zeta_em(flat[bad], scale=scale)
        values[bad], est[bad] = v2, e2
        cut[bad] = c2
        bad_idx = np.flatnonzero(bad)
        still = e2 > budget.tolerance(v2)
        bad = np.zeros_like(bad)
        bad[bad_idx[still]] = True
    return values.reshape(s_arr.shape), est.reshape(s_arr.shape), cut.reshape(s_arr.shape)


def zeta(s, budget: PrecisionBudget = DEFAULT_BUDGET) -> ZetaEvaluation:
    """zeta(s) for a single complex point, with truncation-error estimate."""
    s = complex(s)
    values, est, cut = zeta_values(np.array([s]), budget)
    return ZetaEvaluation(s=s, value=complex(values[0]), est_error=float(est[0]),
                          terms_used=int(cut[0]))


@functools.lru_cache(maxsize=64)
def _borwein_weights(n):
    i = np.arange(n + 1)
    logs = np.array([math.lgamma(n + k) + k * math.log(4.0) - math.lgamma(n - k + 1)
                     - math.lgamma(2 * k + 1) for k in i])
    logs -= logs.max()
    terms = np.exp(logs)
    cum = np.cumsum(terms)
    return cum[:-1] / cum[-1] - 1.0  # (d_k - d_n) / d_n, k = 0..n-1


def zeta_alternating(s, digits=14):
    """zeta(s) = eta(s) / (1 - 2^{1-s}) with Borwein's accelerated eta series."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    t = abs(s.imag)
    target = math.pi * t / 2.0 + math.log(3.0 * (1.0 + 2.0 * t)) + digits * math.log(10.0)
    n = int(math.ceil(target / math.log(3.0 + math.sqrt(8.0)))) + 5
    w = _borwein_weights(n)
    k = np.arange(n)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    terms = signs * w * np.exp(-s * np.log(k + 1.0))
    total = complex(math.fsum(terms.real), math.fsum(terms.imag))
    denom = 1.0 - cmath.exp((1.0 - s) * math.log(2.0))
    if abs(denom) < 1e-12:
        raise PoleError("1 - 2^{1-s} vanishes; use zeta() instead")
    return -total / denom


def hardy_z_values(t, budget: PrecisionBudget = DEFAULT_BUDGET, return_imag=False):
    """Vectorized Z(t) = e^{i theta(t)} zeta(1/2 + it)."""
    t = np.asarray(t, dtype=float)
    vals, _, _ = zeta_values(0.5 + 1j * t, budget)
    rotated = np.exp(1j * riemann_siegel_theta(t)) * vals
    if return_imag:
        return rotated.real, rotated.imag
    return rotated.real


def hardy_z(t: float, budget: PrecisionBudget = DEFAULT_BUDGET) -> float:
    """Real Hardy function Z(t); the imaginary residue is checked, then dropped."""
    if not t > 0:
        raise ValueError(f"hardy_z needs t > 0, got {t}")
    re, im = hardy_z_values(np.array([t]), budget, return_imag=True)
    # rounding in n^{-it} grows like t * eps * sqrt(N); anything larger is a bug
    if abs(im[0]) > max(1e-8, 1e-12 * t):
        raise ArithmeticError(f"Z({t}) has imaginary residue {im[0]:.3e}")
    return float(re[0])


def completed_zeta(s):
    """pi^{-s/2} Gamma(s/2) zeta(s)."""
    s = np.asarray(s, dtype=complex)
    z, _, _ = zeta_values(s)
    return np.exp(-0.5 * s * math.log(math.pi) + lngamma(0.5 * s)) * z


def _check_funceq_poles(s):
    for u in (0.5 * s, 0.5 * (1.0 - s)):
        if u.imag == 0 and u.real <= 0 and u.real == round(u.real):
            raise PoleError(f"Gamma factor singular at s = {s}")
    if s == 1 or s == 0:
        raise PoleError(f"functional equation has a pole at s = {s}")


def functional_equation_defect(s) -> float:
    """Relative mismatch between the completed zeta at s and at 1 - s."""
    s = complex(s)
    _check_funceq_poles(s)
    both = completed_zeta(np.array([s, 1.0 - s]))
    lhs, rhs = complex(both[0]), complex(both[1])
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


LAMBDA_SERIES_SIGMA = 1.5
_LAMBDA_SERIES_LIMIT = 2_000_000


@functools.lru_cache(maxsize=1)
def _prime_power_table():
    from .primes import build_tables  # local import: primes depends on this module

    tables = build_tables(_LAMBDA_SERIES_LIMIT)
    n = np.flatnonzero(tables.mangoldt)
    lam = tables.mangoldt[n]
    psi_m = math.fsum(lam)
    return n.astype(float), lam, float(tables.limit), psi_m


def _log_deriv_series(s):
    n, lam, m, psi_m = _prime_power_table()
    head = np.sum(lam * np.exp(-s * np.log(n)))
    # tail by partial summation with psi(x) ~ x beyond the table
    tail = s * m ** (1.0 - s) / (s - 1.0) - psi_m * m ** (-s)
    return complex(head + tail)


def zeta_derivative(s, radius=None, points=32):
    """zeta'(s) from the trapezoid rule on Cauchy's integral over a small circle."""
    s = complex(s)
    if radius is None:
        radius = min(0.25, 0.5 * abs(s - 1.0))
    phi = 2.0 * math.pi * np.arange(points) / points
    ring = np.exp(1j * phi)
    vals, _, _ = zeta_values(s + radius * ring)
    return complex(np.mean(vals / ring) / radius)


def zeta_log_deriv(s, method=None) -> complex:
    """-zeta'/zeta(s): Lambda-series for Re s > 1.5, numeric derivative otherwise."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta'/zeta has a pole at s = 1")
    if method is None:
        method = "series" if s.real > LAMBDA_SERIES_SIGMA else "derivative"
    if method == "series":
        if s.real <= 1.0:
            raise ValueError("Lambda-series needs Re s > 1")
        return _log_deriv_series(s)
    z = zeta(s).value
    if abs(z) < 1e-10:
        raise ZeroOfZetaError(f"|zeta(s)| = {abs(z):.2e} at s = {s}")
    return -zeta_derivative(s) / z
