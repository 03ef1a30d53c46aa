"""Hybrid Euler-Hadamard model of zeta on the critical line: a prime factor
exp(sum Lambda(n)/(n^s log n)) times a zero factor built from E1, its
comparison with zeta, the approximate product form, and the splitting
experiment for moments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .moments import QUAD_BUDGET, moment_integral
from .primes import ArithmeticTables, build_tables
from .quadrature import adaptive_simpson
from .rmt import EigenangleSet, eigenangles_unitary_batch, sample_cue_batch
from .specfun import DEFAULT_BUDGET, PrecisionBudget, exp_integral_e1
from .zeros import ZeroTable
from .zeta import zeta_values

SIGNS = {"plus_E1": 1.0, "minus_E1": -1.0}
ARGUMENTS = ("real_arg", "imaginary_arg")


@dataclass(frozen=True)
class HybridConfig:
    """``zero_window`` defaults to 50/log x_cutoff."""

    x_cutoff: float
    sign_convention: str = "minus_E1"
    argument_convention: str = "imaginary_arg"
    zero_window: float | None = None

    def __post_init__(self):
        if not self.x_cutoff > 1:
            raise DomainError(f"x_cutoff must exceed 1, got {self.x_cutoff}")
        if self.sign_convention not in SIGNS:
            raise DomainError(f"unknown sign convention {self.sign_convention!r}")
        if self.argument_convention not in ARGUMENTS:
            raise DomainError(f"unknown argument convention {self.argument_convention!r}")
        if self.zero_window is None:
            object.__setattr__(self, "zero_window", 50.0 / math.log(self.x_cutoff))
        if not self.zero_window > 0:
            raise DomainError(f"zero_window must be positive, got {self.zero_window}")

    @property
    def log_x(self) -> float:
        return math.log(self.x_cutoff)


def _prime_powers(x, tables):
    m = int(math.floor(x))
    if m > tables.limit:
        raise DomainError(f"x_cutoff {x} exceeds table limit {tables.limit}")
    n = np.flatnonzero(tables.mangoldt[: m + 1])
    n = n[n >= 2]
    return n.astype(float), tables.mangoldt[n.astype(int)]


def prime_sum(s, x, tables: ArithmeticTables):
    """sum_{2 <= n <= x} Lambda(n) / (n^s log n) for an array of s."""
    n, lam = _prime_powers(x, tables)
    s = np.asarray(s, dtype=complex)
    if n.size == 0:
        return np.zeros(s.shape, dtype=complex)
    logn = np.log(n)
    w = lam / logn
    flat = s.ravel()
    out = np.empty(flat.shape, dtype=complex)
    chunk = max(1, 2_000_000 // n.size)
    for i in range(0, flat.size, chunk):
        out[i:i + chunk] = np.exp(-np.multiply.outer(flat[i:i + chunk], logn)) @ w
    return out.reshape(s.shape)


def prime_factor(t, config: HybridConfig, tables: ArithmeticTables, sigma: float = 0.5):
    """exp(sum_{2 <= n <= x} Lambda(n)/(n^{sigma + it} log n)); sigma != 1/2 is the off-line variant."""
    out = np.exp(prime_sum(sigma + 1j * np.asarray(t, dtype=float), config.x_cutoff, tables))
    return complex(out) if out.ndim == 0 else out


def _zero_terms(u, config: HybridConfig):
    """Per-zero exponent +-E1(c u log x); u = t - gamma, c = 1 or i."""
    sign = SIGNS[config.sign_convention]
    c = 1j if config.argument_convention == "imaginary_arg" else 1.0
    z = c * np.asarray(u, dtype=float) * config.log_x
    return sign * exp_integral_e1(z)


def _window_ordinates(t, config: HybridConfig, table: ZeroTable):
    lo, hi = t - config.zero_window, t + config.zero_window
    if hi > table.t_max:
        raise DomainError(f"zero table ends at {table.t_max}, window needs {hi}")
    g = table.window(max(lo, 0.0), hi + 1e-300)
    g = g[(g >= lo) & (g <= hi)]
    mirrored = -table.window(max(-hi, 0.0), max(-lo, 0.0) + 1e-300)
    return np.concatenate([mirrored[::-1], g])


def zero_factor(t, config: HybridConfig, table: ZeroTable):
    """prod over ordinates gamma (and their mirror images -gamma) within
    ``zero_window`` of t of exp(+-E1(c (t - gamma) log x))."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(ts.shape, dtype=complex)
    for i, ti in enumerate(ts):
        g = _window_ordinates(ti, config, table)
        if g.size == 0:
            raise DomainError(f"no zero ordinates within {config.zero_window} of t = {ti}")
        u = ti - g
        if np.any(u == 0):
            if config.sign_convention == "minus_E1":
                out[i] = 0.0
                continue
            raise DomainError(f"exp(+E1) is infinite at the ordinate t = {ti}")
        out[i] = np.exp(np.sum(_zero_terms(u, config)))
    return complex(out[0]) if np.ndim(t) == 0 else out


@dataclass(frozen=True, eq=False)
class ModelComparison:
    grid: np.ndarray
    model_values: np.ndarray
    zeta_values: np.ndarray
    correlation_of_moduli: float
    max_log_ratio_away_from_zeros: float

    def rows(self):
        """CSV rows (t, |model|, |zeta|, arg model, arg zeta)."""
        return [(float(t), float(abs(m)), float(abs(z)), float(np.angle(m)), float(np.angle(z)))
                for t, m, z in zip(self.grid, self.model_values, self.zeta_values)]


COMPARE_CSV_HEADER = ("t", "abs_model", "abs_zeta", "arg_model", "arg_zeta")


def hybrid_compare(t_lo: float, t_hi: float, step: float, config: HybridConfig,
                   table: ZeroTable, tables: ArithmeticTables,
                   budget: PrecisionBudget = DEFAULT_BUDGET) -> ModelComparison:
    """Model P_x(t) Z_x(t) against zeta(1/2 + it) on an equally spaced grid.

    The log-ratio maximum only uses points farther than 0.5/log x from
    every ordinate.
    """
    if not (0 < t_lo < t_hi and step > 0):
        raise DomainError("need 0 < t_lo < t_hi and step > 0")
    grid = t_lo + step * np.arange(int(math.floor((t_hi - t_lo) / step + 1e-9)) + 1)
    model = prime_factor(grid, config, tables) * zero_factor(grid, config, table)
    zeta, _, _ = zeta_values(0.5 + 1j * grid, budget)
    am, az = np.abs(model), np.abs(zeta)
    corr = float(np.corrcoef(am, az)[0, 1])
    g = table.window(t_lo - 1.0, t_hi + 1.0)
    if g.size:
        dist = np.min(np.abs(grid[:, None] - g[None, :]), axis=1)
    else:
        dist = np.full(grid.shape, np.inf)
    far = dist > 0.5 / config.log_x
    ratio = np.abs(np.log(am[far] / az[far])) if far.any() else np.array([np.nan])
    return ModelComparison(grid=grid, model_values=model, zeta_values=zeta,
                           correlation_of_moduli=corr,
                           max_log_ratio_away_from_zeros=float(np.max(ratio)))


def approx_form(t, config: HybridConfig, tables: ArithmeticTables,
                angles: EigenangleSet | None = None, theta=None):
    """prod_{p <= x} (1 - p^{-(1/2 + it)})^{-1} prod_n exp(1 - x^{i(theta - theta_n)}).

    ``theta`` defaults to t; with no angles only the prime product is
    returned.
    """
    t_arr = np.asarray(t, dtype=float)
    m = int(math.floor(config.x_cutoff))
    if m > tables.limit:
        raise DomainError(f"x_cutoff {config.x_cutoff} exceeds table limit {tables.limit}")
    p = tables.primes[tables.primes <= m].astype(float)
    s = 0.5 + 1j * t_arr
    log_euler = -np.sum(np.log1p(-np.exp(-np.multiply.outer(s, np.log(p)))), axis=-1)
    out = np.exp(log_euler)
    if angles is not None:
        th = t_arr if theta is None else np.asarray(theta, dtype=float)
        a = np.asarray(angles.angles if isinstance(angles, EigenangleSet) else angles,
                       dtype=float)
        phase = np.multiply.outer(th, np.ones_like(a)) - a
        out = out * np.exp(np.sum(1.0 - np.exp(1j * phase * config.log_x), axis=-1))
    return complex(out) if np.ndim(out) == 0 else out


def matrix_factor_log(angles, theta, config: HybridConfig):
    """Re sum_n -E1(i (theta - theta_n) log x) per row; differences wrapped to (-pi, pi]."""
    d = theta - np.asarray(angles, dtype=float)
    d = np.pi - np.mod(np.pi - d, 2.0 * np.pi)
    return np.sum(_zero_terms(d, config).real, axis=-1)


def splitting_dimension(T: float) -> int:
    """N = nearest integer to (1/2 pi) log T, at least 1."""
    return max(1, int(round(math.log(T) / (2.0 * math.pi))))


def density_matched_dimension(T: float) -> int:
    """N = round(log(T / 2 pi)), for which the CUE mean spacing 2 pi/N equals
    the mean zero spacing at height T."""
    return max(1, int(round(math.log(T / (2.0 * math.pi)))))


@dataclass(frozen=True)
class SplittingResult:
    k: int
    T: float
    x: float
    N: int
    samples: int
    prime_moment: float
    matrix_moment: float
    matrix_stderr: float
    product: float
    zeta_moment: float
    ratio: float


def splitting_experiment(k: int, T: float, x: float, N: int | None = None, samples: int = 2000,
                         seed: int = 1, tables: ArithmeticTables | None = None,
                         budget: PrecisionBudget = QUAD_BUDGET, zeros=None,
                         theta: float = 0.0) -> SplittingResult:
    """Prime-side mean times CUE-side mean against I_k(1/2, T)/T.

    prime_moment = (1/T) int_0^T |P_x(1/2 + it)|^{2k} dt;
    matrix_moment = E_CUE prod_n |exp(-E1(i(theta - theta_n) log x))|^{2k}.
    """
    if int(k) != k or not 0 <= k <= 2:
        raise DomainError(f"k must be 0, 1 or 2 at desk scale, got {k}")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    k = int(k)
    if N is None:
        N = splitting_dimension(T)
    if k == 0:
        return SplittingResult(0, T, x, N, samples, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0)
    config = HybridConfig(x_cutoff=x)
    if tables is None:
        tables = build_tables(max(2, int(math.ceil(x))))

    def prime_integrand(t):
        return np.exp(2.0 * k * prime_sum(0.5 + 1j * np.asarray(t), x, tables).real)

    res = adaptive_simpson(prime_integrand, np.append(np.arange(0.0, T, 1.0), T),
                           abs_tol=budget.abs_tol, rel_tol=budget.rel_tol,
                           max_evals=budget.max_terms)
    prime_moment = float(res.value) / T

    matrix_moment, matrix_stderr = cue_hybrid_moment(k, N, samples, seed, config, theta)
    zeta_moment = moment_integral(k, 0.5, T, budget, zeros=zeros).value / T
    product = prime_moment * matrix_moment
    return SplittingResult(k, float(T), float(x), int(N), int(samples), prime_moment,
                           matrix_moment, matrix_stderr, product, zeta_moment,
                           product / zeta_moment)


def cue_hybrid_moment(k, N, samples, seed, config: HybridConfig, theta=0.0, chunk=200):
    """Monte Carlo mean and standard error of prod_n |exp(-E1(i(theta - theta_n) log x))|^{2k}."""
    if N < 2:
        # a 1x1 Haar unitary is a uniform phase
        from .rmt import SplitMix64

        angles = np.array([2.0 * math.pi * SplitMix64(seed, j).uniform(1) for j in range(samples)])
        vals = np.exp(2.0 * k * matrix_factor_log(angles, theta, config))
    else:
        vals = np.empty(samples)
        for start in range(0, samples, chunk):
            m = min(chunk, samples - start)
            U = sample_cue_batch(N, m, seed, first_stream=start)
            angles, _ = eigenangles_unitary_batch(U, seed, first_stream=start)
            vals[start:start + m] = np.exp(2.0 * k * matrix_factor_log(angles, theta, config))
    return float(math.fsum(vals) / samples), float(np.std(vals, ddof=1) / math.sqrt(samples))
