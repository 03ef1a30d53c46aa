"""Pair correlation of zero ordinates: Montgomery's form factor F(alpha, T),
kernel-smoothed pair sums, pair-correlation histograms against the sine
kernel, n-level determinants and the Dirichlet-series mean value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .errors import DomainError, ZeroTableError
from .moments import DirichletPolynomial, MomentEstimate, QUAD_BUDGET
from .primes import ArithmeticTables
from .quadrature import adaptive_simpson
from .specfun import PrecisionBudget
from .zeros import ZeroTable, n_main_term

ROW_CHUNK = 256


def weight_w(u):
    """Montgomery's weight w(u) = 4/(4 + u^2)."""
    u = np.asarray(u, dtype=float)
    return 4.0 / (4.0 + u * u)


@dataclass(frozen=True)
class FormFactorPoint:
    alpha: float
    F: float
    imag_residue: float = 0.0


def _ordinates_up_to(table: ZeroTable, T):
    if T > table.t_max:
        raise ZeroTableError(f"T = {T} exceeds zero table range {table.t_max}")
    return np.asarray(table.up_to(T).gammas, dtype=float)


def _pair_sum(gammas, kernel, cutoff=None):
    """sum over ordered pairs of kernel(d) for d = gamma - gamma', chunked by rows.

    ``kernel`` maps a 2-d array of differences to real or complex values.
    """
    total_re, total_im = [], []
    for i in range(0, gammas.size, ROW_CHUNK):
        d = gammas[i:i + ROW_CHUNK, None] - gammas[None, :]
        vals = kernel(d)
        if cutoff is not None:
            vals = np.where(np.abs(d) > cutoff, 0.0, vals)
        total_re.append(np.sum(vals.real, axis=1))
        if np.iscomplexobj(vals):
            total_im.append(np.sum(vals.imag, axis=1))
    re = math.fsum(np.concatenate(total_re)) if total_re else 0.0
    im = math.fsum(np.concatenate(total_im)) if total_im else 0.0
    return re, im


def montgomery_F_theoretical(alpha, T):
    """T^{-2|alpha|} log T + |alpha| for |alpha| < 1, and 1 beyond."""
    a = np.abs(np.asarray(alpha, dtype=float))
    logT = math.log(T)
    return np.where(a < 1.0, np.exp(-2.0 * a * logT) * logT + a, 1.0)


def montgomery_F(alpha: float, table: ZeroTable | None, T: float, mode: str = "empirical",
                 cutoff: float | None = None) -> FormFactorPoint:
    """Montgomery's F(alpha, T).

    The empirical mode evaluates the full double sum unless ``cutoff`` is
    given, in which case pairs with |gamma - gamma'| > cutoff are dropped
    (w < 4/cutoff^2 there). The full sum is a positive-definite quadratic
    form, hence nonnegative.
    """
    if T < 10:
        raise DomainError(f"T must be >= 10, got {T}")
    if mode == "theoretical":
        return FormFactorPoint(float(alpha), float(montgomery_F_theoretical(alpha, T)))
    if mode != "empirical":
        raise DomainError(f"unknown mode {mode!r}")
    gammas = _ordinates_up_to(table, T)
    logT = math.log(T)
    freq = alpha * logT

    def kernel(d):
        return weight_w(d) * np.exp(1j * freq * d)

    re, im = _pair_sum(gammas, kernel, cutoff)
    norm = T / (2.0 * math.pi) * logT
    return FormFactorPoint(float(alpha), re / norm, abs(im) / norm)


def montgomery_F_curve(alphas, table: ZeroTable, T: float, cutoff=None):
    return [montgomery_F(float(a), table, T, cutoff=cutoff) for a in np.asarray(alphas)]


@dataclass(frozen=True)
class KernelSpec:
    """Test kernel r-hat. ``fejer`` is max(0, (1 - |alpha/beta|)/beta); ``custom``
    is an even, nonnegative table ``values`` on the symmetric grid ``grid``."""

    kind: str = "fejer"
    beta: float = 1.0
    grid: tuple | None = None
    values: tuple | None = None

    def __post_init__(self):
        if self.kind == "fejer":
            if not 0 < self.beta <= 1:
                raise DomainError(f"Fejer kernel support (-beta, beta) needs 0 < beta <= 1, "
                                  f"got beta = {self.beta}")
            return
        if self.kind != "custom":
            raise DomainError(f"unknown kernel kind {self.kind!r}")
        grid = np.asarray(self.grid, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != vals.shape or grid.size < 3:
            raise DomainError("custom kernel needs matching 1-d grid and values")
        if np.any(np.diff(grid) <= 0) or not np.allclose(grid, -grid[::-1], atol=1e-12):
            raise DomainError("custom kernel grid must be increasing and symmetric")
        if np.any(vals < 0) or not np.allclose(vals, vals[::-1], atol=1e-12):
            raise DomainError("custom kernel must be even and nonnegative")
        support = np.abs(grid[vals > 0])
        if support.size and support.max() >= 1.0:
            raise DomainError("custom kernel support must lie inside (-1, 1)")
        object.__setattr__(self, "grid", tuple(grid))
        object.__setattr__(self, "values", tuple(vals))

    def rhat(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        if self.kind == "fejer":
            return np.maximum(0.0, (1.0 - np.abs(alpha / self.beta)) / self.beta)
        return np.interp(alpha, self.grid, self.values, left=0.0, right=0.0)

    def r(self, u):
        """Inverse transform r(u) = int rhat(alpha) e^{2 pi i alpha u} d alpha."""
        u = np.asarray(u, dtype=float)
        if self.kind == "fejer":
            return np.sinc(self.beta * u) ** 2
        # exact transform of the piecewise-linear interpolant, summed over segments
        g = np.asarray(self.grid)
        v = np.asarray(self.values)
        half = g >= 0
        gp, vp = g[half], v[half]
        w = 2.0 * math.pi * u
        out = np.zeros(u.shape)
        small = np.abs(w) < 1e-8
        for a, b, fa, fb in zip(gp[:-1], gp[1:], vp[:-1], vp[1:]):
            slope = (fb - fa) / (b - a)
            ws = np.where(small, 1.0, w)
            seg = ((fb * np.sin(ws * b) - fa * np.sin(ws * a)) / ws
                   + slope * (np.cos(ws * b) - np.cos(ws * a)) / ws ** 2)
            out += 2.0 * np.where(small, 0.5 * (fa + fb) * (b - a), seg)
        return out

    def integral_x_rhat(self):
        """int |alpha| rhat(alpha) d alpha."""
        if self.kind == "fejer":
            return self.beta / 3.0
        g = np.asarray(self.grid)
        return float(np.trapezoid(np.abs(g) * np.asarray(self.values), g))

    def rhat_at_zero(self):
        return float(self.rhat(0.0))


def kernel_pair_sum(spec: KernelSpec, table: ZeroTable, T: float):
    """Sum over ordered pairs of r((gamma - gamma') log T / 2 pi) w(gamma - gamma').

    ``predicted`` is (rhat(0) + int |alpha| rhat) (T/2 pi) log T, which is
    (1/beta + beta/3)(T/2 pi) log T for the Fejer kernel.
    """
    gammas = _ordinates_up_to(table, T)
    logT = math.log(T)
    scale = logT / (2.0 * math.pi)

    def kernel(d):
        return spec.r(d * scale) * weight_w(d)

    empirical, _ = _pair_sum(gammas, kernel)
    predicted = (spec.rhat_at_zero() + spec.integral_x_rhat()) * T / (2.0 * math.pi) * logT
    return PairSumResult(empirical=empirical, predicted=predicted, zeros=int(gammas.size))


@dataclass(frozen=True)
class PairSumResult:
    empirical: float
    predicted: float
    zeros: int


@dataclass(frozen=True)
class FejerBound:
    pair_bound_coeff: float
    simple_fraction: float


def fejer_simple_zero_bound(beta):
    """Coefficient 1/beta + beta/3 of the Fejer pair bound and 2 minus it.

    Rational input is kept exact, so beta = 1 gives (4/3, 2/3) as Fractions.
    """
    from fractions import Fraction

    if not 0 < beta <= 1:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    if isinstance(beta, (int, Fraction)):
        b = Fraction(beta)
        coeff = 1 / b + b / 3
        return FejerBound(coeff, 2 - coeff)
    coeff = 1.0 / beta + beta / 3.0
    return FejerBound(coeff, 2.0 - coeff)


def sine_kernel_density(x):
    """1 - (sin pi x / pi x)^2."""
    return 1.0 - np.sinc(np.asarray(x, dtype=float)) ** 2


def _sine_kernel_antiderivative(x):
    """int_0^x (sin pi u / pi u)^2 du = (Si(2 pi x) - sin^2(pi x)/(pi x)) / pi."""
    x = np.asarray(x, dtype=float)
    si, _ = sici(2.0 * math.pi * x)
    safe = np.where(x == 0, 1.0, x)
    tail = np.where(x == 0, 0.0, np.sin(math.pi * x) ** 2 / (math.pi * safe))
    return (si - tail) / math.pi


def sine_kernel_integral(alpha: float, beta: float) -> float:
    """int_alpha^beta (1 - (sin pi x/pi x)^2) dx + delta, delta = 1 iff 0 in [alpha, beta]."""
    if not alpha < beta:
        raise DomainError(f"need alpha < beta, got [{alpha}, {beta}]")
    smooth = (beta - alpha) - float(_sine_kernel_antiderivative(beta)
                                    - _sine_kernel_antiderivative(alpha))
    delta = 1.0 if alpha <= 0.0 <= beta else 0.0
    return smooth + delta


@dataclass(frozen=True)
class CorrelationHistogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    reference: np.ndarray
    total_weight: float

    def __post_init__(self):
        if not (len(self.counts) == len(self.bin_edges) - 1 == len(self.reference)):
            raise DomainError("histogram arrays have inconsistent lengths")

    def sup_distance(self, x_max=None):
        right = self.bin_edges[1:]
        keep = np.ones(right.shape, bool) if x_max is None else right <= x_max + 1e-12
        return float(np.max(np.abs(self.counts[keep] - self.reference[keep])))


def bin_averaged_reference(edges):
    """Bin averages of 1 - (sin pi x/pi x)^2, via the closed-form antiderivative."""
    edges = np.asarray(edges, dtype=float)
    width = np.diff(edges)
    inner = np.diff(_sine_kernel_antiderivative(edges))
    return (width - inner) / width


def smooth_zero_count(t):
    """Smooth part of N(t), (t/2 pi) log(t/2 pi) - t/2 pi."""
    return n_main_term(t)


def pair_histogram(table: ZeroTable, T: float, x_max: float = 3.0, bins: int = 30,
                   unfold: str = "local", weighted: bool = False,
                   min_zeros: int = 500) -> CorrelationHistogram:
    """Histogram of normalized gaps gamma' - gamma > 0 against 1 - (sin pi x/pi x)^2.

    ``unfold="local"`` maps each ordinate through the smooth zero count
    (unit mean spacing at every height) and divides counts by the number of
    zeros. ``unfold="log_T"`` scales differences by log T/2 pi and divides by
    (T/2 pi) log T. ``weighted`` multiplies each pair by w(gamma' - gamma).
    """
    if bins < 10:
        raise DomainError(f"bins must be >= 10, got {bins}")
    if not 0 < x_max <= 5:
        raise DomainError(f"x_max must lie in (0, 5], got {x_max}")
    gammas = _ordinates_up_to(table, T)
    if gammas.size < min_zeros:
        raise ZeroTableError(f"{gammas.size} zeros below T = {T}; need at least {min_zeros}")
    if unfold == "local":
        u = smooth_zero_count(gammas)
        norm = float(gammas.size)
        raw_scale = None
    elif unfold == "log_T":
        raw_scale = math.log(T) / (2.0 * math.pi)
        u = gammas * raw_scale
        norm = T / (2.0 * math.pi) * math.log(T)
    else:
        raise DomainError(f"unknown unfolding {unfold!r}")
    edges = np.linspace(0.0, x_max, bins + 1)
    counts = np.zeros(bins)
    for i in range(u.size - 1):
        j = np.searchsorted(u, u[i] + x_max, side="right")
        diffs = u[i + 1:j] - u[i]
        keep = diffs > 0
        diffs = diffs[keep]
        if weighted:
            wts = weight_w(gammas[i + 1:j][keep] - gammas[i])
        else:
            wts = None
        counts += np.histogram(diffs, bins=edges, weights=wts)[0]
    total = float(counts.sum())
    counts = counts / (norm * np.diff(edges))
    return CorrelationHistogram(bin_edges=edges, counts=counts,
                                reference=bin_averaged_reference(edges), total_weight=total)


def n_level_form_factor(points) -> float:
    """det[S(x_i - x_j)] with S(x) = sin(pi x)/(pi x) and S(0) = 1."""
    x = np.atleast_1d(np.asarray(points, dtype=float))
    if not 1 <= x.size <= 12:
        raise DomainError(f"need 1 to 12 points, got {x.size}")
    kernel = np.sinc(x[:, None] - x[None, :])
    return float(np.linalg.det(kernel))


def _mangoldt_tail_sum(tables, c, g, g_int):
    """Upper bound for sum_{n > c} Lambda(n) log(n) g(n), g decreasing and positive.

    Partial summation with psi(u) <= 1.03883 u gives
    (1.03883 c - psi(c)) g(c) + 1.03883 int_c^inf g.
    """
    psi_c = float(tables.psi_cumulative()[int(c)])
    return max(0.0, 1.03883 * c - psi_c) * g(c) + 1.03883 * g_int(c)


DEFAULT_TAIL_FACTOR = 100


def montgomery_coefficients(x, tail_cutoff, tables: ArithmeticTables):
    """a_n = Lambda(n) (x/n)^{-1/2} for n <= x, Lambda(n) (x/n)^{3/2} for x < n <= cutoff."""
    n = np.arange(1, tail_cutoff + 1, dtype=float)
    lam = tables.mangoldt[1: tail_cutoff + 1]
    ratio = x / n
    return np.where(n <= x, lam * ratio ** -0.5, lam * ratio ** 1.5)


def montgomery_dirichlet_mean(x: float, T: float, tables: ArithmeticTables,
                              tail_cutoff: int | None = None,
                              budget: PrecisionBudget = QUAD_BUDGET) -> MomentEstimate:
    """(1/x) int_0^T |sum_{n<=x} Lambda(n)(x/n)^{-1/2+it} + sum_{n>x} Lambda(n)(x/n)^{3/2+it}|^2 dt.

    The second sum stops at ``tail_cutoff``. ``tail_bound`` majorizes
    (1/x) int |omitted terms|^2 by the mean-value theorem
    int |sum b_n n^{-it}|^2 <= sum |b_n|^2 (T + 3 pi n); the cross term with
    the kept terms has no diagonal and does not grow with T. The default
    cutoff is 100 x (clipped to the table).
    """
    if not x > 1:
        raise DomainError(f"x must exceed 1, got {x}")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    if tail_cutoff is None:
        tail_cutoff = min(int(math.ceil(DEFAULT_TAIL_FACTOR * x)), tables.limit)
    if tail_cutoff < 10 * x:
        raise DomainError(f"tail_cutoff {tail_cutoff} must be >= 10 x = {10 * x}")
    if tail_cutoff > tables.limit:
        raise DomainError(f"tail_cutoff {tail_cutoff} exceeds table limit {tables.limit}")
    coef = montgomery_coefficients(x, tail_cutoff, tables)
    # |x^{it}| = 1, so only n^{-it} matters inside the modulus
    poly = DirichletPolynomial(coef)

    def integrand(t):
        return np.abs(poly(1j * np.asarray(t))) ** 2

    res = adaptive_simpson(integrand, np.append(np.arange(0.0, T, 1.0), T),
                           abs_tol=budget.abs_tol, rel_tol=budget.rel_tol,
                           max_evals=budget.max_terms)
    value = float(res.value) / x

    c = float(tail_cutoff)

    # Lambda(n)^2 <= Lambda(n) log n; b_n^2 = Lambda(n)^2 x^3 / n^3
    def g3(u):
        return math.log(u) / u ** 3

    def g3_int(u):
        return (2.0 * math.log(u) + 1.0) / (4.0 * u * u)

    def g2(u):
        return math.log(u) / u ** 2

    def g2_int(u):
        return (math.log(u) + 1.0) / u

    tail = x ** 3 * (T * _mangoldt_tail_sum(tables, c, g3, g3_int)
                     + 3.0 * math.pi * _mangoldt_tail_sum(tables, c, g2, g2_int)) / x
    if tail > 0.01 * value:
        raise DomainError(f"tail_cutoff {tail_cutoff} too small: tail bound {tail:.3g} "
                          f"exceeds 1% of the value {value:.3g}")
    return MontgomeryMean(value=value, est_error=float(res.est_error) / x,
                          panels_or_samples=res.panels, tail_bound=tail)


@dataclass(frozen=True)
class MontgomeryMean(MomentEstimate):
    tail_bound: float = 0.0


def form_factor_rows(alphas, table, T, cutoff=None):
    """CSV rows (alpha, F_empirical, F_theoretical)."""
    return [(p.alpha, p.F, float(montgomery_F_theoretical(p.alpha, T)))
            for p in montgomery_F_curve(alphas, table, T, cutoff)]


def histogram_rows(hist: CorrelationHistogram):
    """CSV rows (bin_left, bin_right, count, reference)."""
    e = hist.bin_edges
    return [(float(e[i]), float(e[i + 1]), float(hist.counts[i]), float(hist.reference[i]))
            for i in range(hist.counts.size)]
