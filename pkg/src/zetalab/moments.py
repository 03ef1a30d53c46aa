"""Mean values: moment integrals of zeta, Dirichlet-polynomial mean values,
the arithmetic factor a_k, the integers g_k, conjectured moment
asymptotics and mollifiers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .primes import ArithmeticTables, build_tables
from .quadrature import adaptive_simpson
from .specfun import PrecisionBudget
from .zeta import zeta_values

QUAD_BUDGET = PrecisionBudget(abs_tol=1e-10, rel_tol=1e-8, max_terms=5_000_000)


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    est_error: float
    panels_or_samples: int


@dataclass(frozen=True, eq=False)
class DirichletPolynomial:
    """F(s) = sum_{n <= N} a_n n^{-s}; ``coefficients[n - 1]`` is a_n."""

    coefficients: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if a.ndim != 1 or a.size < 1:
            raise DomainError("a Dirichlet polynomial needs at least one coefficient")
        a.setflags(write=False)
        object.__setattr__(self, "coefficients", a)

    @property
    def length(self) -> int:
        return self.coefficients.size

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        nz = np.flatnonzero(self.coefficients)
        logn = np.log(nz + 1.0)
        a = self.coefficients[nz]
        flat = s.ravel()
        out = np.empty(flat.shape, dtype=complex)
        chunk = max(1, 2_000_000 // max(1, nz.size))
        for i in range(0, flat.size, chunk):
            out[i:i + chunk] = np.exp(-np.multiply.outer(flat[i:i + chunk], logn)) @ a
        return out.reshape(s.shape)


def _breakpoints(T, sigma, zeros):
    pts = np.arange(0.0, T, 1.0)
    if zeros is not None and sigma == 0.5:
        pts = np.concatenate([pts, zeros[(zeros > 0) & (zeros < T)]])
    return np.unique(np.append(pts, T))


def _zeros_for(T, sigma, zeros):
    if sigma != 0.5 or T <= 14:
        return None
    if zeros is None:
        from .zeros import scan_zeros

        zeros = scan_zeros(T).gammas
    return np.asarray(getattr(zeros, "gammas", zeros), dtype=float)


def _integrate(f, T, sigma, zeros, budget):
    pts = _breakpoints(T, sigma, _zeros_for(T, sigma, zeros))
    res = adaptive_simpson(f, pts, abs_tol=budget.abs_tol, rel_tol=budget.rel_tol,
                           max_evals=budget.max_terms)
    return MomentEstimate(float(np.real(res.value)), float(res.est_error), res.panels)


def moment_integral(k: float, sigma: float, T: float,
                    budget: PrecisionBudget = QUAD_BUDGET, zeros=None) -> MomentEstimate:
    """I_k(sigma, T) = int_0^T |zeta(sigma + it)|^{2k} dt by adaptive Simpson.

    On the critical line the panels are snapped to zero ordinates (scanned
    on demand unless ``zeros`` is given), where |zeta|^{2k} has cusps.
    """
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    if not 0 <= k <= 3:
        raise DomainError(f"k must lie in [0, 3], got {k}")
    if sigma < 0.4:
        raise DomainError(f"sigma must be >= 0.4, got {sigma}")
    if k == 0:
        return MomentEstimate(float(T), 0.0, 0)
    if sigma == 1.0:
        raise DomainError("|zeta(1 + it)|^{2k} is not integrable at t = 0")

    def integrand(t):
        z, _, _ = zeta_values(sigma + 1j * t)
        return np.abs(z) ** (2.0 * k)

    return _integrate(integrand, T, sigma, zeros, budget)


@dataclass(frozen=True)
class DirichletMean:
    quadrature: float
    diagonal: float
    off_diagonal_bound: float
    quad_error: float


def off_diagonal_term(coefficients, sigma, T):
    """Exact sum over m != n of a_n conj(a_m) (nm)^{-sigma} int_0^T (m/n)^{it} dt."""
    a = np.asarray(coefficients, dtype=complex)
    n = np.arange(1, a.size + 1, dtype=float)
    nz = np.flatnonzero(a)
    a, n = a[nz], n[nz]
    w = a * n ** (-sigma)
    total = 0.0 + 0.0j
    block = max(1, 4_000_000 // max(1, n.size))
    for i in range(0, n.size, block):
        ln = np.log(n[i:i + block])[:, None]
        lm = np.log(n)[None, :]
        d = lm - ln  # log(m/n)
        same = d == 0
        safe = np.where(same, 1.0, d)
        integral = np.where(same, 0.0, np.expm1(1j * T * safe) / (1j * safe))
        total += np.sum(w[i:i + block, None] * np.conj(w)[None, :] * integral)
    return float(total.real)


def dirichlet_poly_mean(poly: DirichletPolynomial, sigma: float, T: float,
                        budget: PrecisionBudget = QUAD_BUDGET) -> DirichletMean:
    """int_0^T |F(sigma + it)|^2 dt three ways: quadrature, diagonal, and the
    exact off-diagonal pair sum."""
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    a = poly.coefficients
    n = np.arange(1, a.size + 1, dtype=float)
    diagonal = float(T * np.sum(np.abs(a) ** 2 * n ** (-2.0 * sigma)))
    off = off_diagonal_term(a, sigma, T)

    def integrand(t):
        return np.abs(poly(sigma + 1j * t)) ** 2

    res = adaptive_simpson(integrand, np.append(np.arange(0.0, T, 1.0), T),
                           abs_tol=budget.abs_tol, rel_tol=budget.rel_tol,
                           max_evals=budget.max_terms)
    return DirichletMean(quadrature=float(res.value), diagonal=diagonal,
                         off_diagonal_bound=off, quad_error=float(res.est_error))


@dataclass(frozen=True)
class AkFactor:
    value: float
    tail_bound: float


def _ak_log_factor(m, p):
    p = np.asarray(p, dtype=float)
    poly = sum(math.comb(m, r) ** 2 * p ** (-float(r)) for r in range(m + 1))
    return m * m * np.log1p(-1.0 / p) + np.log(poly)


def ak_tail_constant(k: int) -> float:
    """C(k) with |log factor(p)| <= C(k)/p^2 for every p >= 100.

    With u = 1/p and Q(u) = sum_r C(k-1, r)^2 u^r the log factor is
    f(u) = (k-1)^2 log(1-u) + log Q(u), f(0) = f'(0) = 0, so
    |f(u)| <= u^2/2 * sup|f''| and on u <= 1/100
    |f''| <= (k-1)^2/0.99^2 + Q''(0.01) + Q'(0.01)^2 (Q >= 1).
    """
    m = k - 1
    u = 0.01
    q1 = sum(r * math.comb(m, r) ** 2 * u ** (r - 1) for r in range(1, m + 1))
    q2 = sum(r * (r - 1) * math.comb(m, r) ** 2 * u ** (r - 2) for r in range(2, m + 1))
    return 0.5 * (m * m / 0.99 ** 2 + q2 + q1 * q1)


def arithmetic_factor_ak(k: int, prime_cutoff: int = 10**6,
                         tables: ArithmeticTables | None = None) -> AkFactor:
    """a_k = prod_p (1 - 1/p)^{(k-1)^2} sum_r C(k-1, r)^2 p^{-r}, truncated at the cutoff."""
    if k < 1 or int(k) != k:
        raise DomainError(f"k must be a positive integer, got {k}")
    if prime_cutoff < 100:
        raise DomainError(f"prime_cutoff must be >= 100, got {prime_cutoff}")
    k = int(k)
    if tables is None or tables.limit < prime_cutoff:
        tables = build_tables(int(prime_cutoff))
    primes = tables.primes[tables.primes <= prime_cutoff]
    m = k - 1
    if m == 0:
        return AkFactor(1.0, 0.0)
    log_value = math.fsum(_ak_log_factor(m, primes))
    value = math.exp(log_value)
    # sum_{p > P} p^{-2} < sum_{n > P} n^{-2} < 1/P
    log_tail = ak_tail_constant(k) / prime_cutoff
    return AkFactor(value, value * math.expm1(log_tail))


GK_CAP = 8


def gk_exact(k: int) -> Fraction:
    """g_k = (k^2)! prod_{j<k} j!/(j+k)! in exact rational arithmetic."""
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    k = int(k)
    if k > GK_CAP:
        raise OverflowError(f"g_k is capped at k <= {GK_CAP}")
    g = Fraction(math.factorial(k * k))
    for j in range(k):
        g *= Fraction(math.factorial(j), math.factorial(j + k))
    return g


def conjectured_moment(k: int, T: float, prime_cutoff: int = 10**6) -> float:
    """(a_k g_k / Gamma(k^2 + 1)) T log^{k^2} T."""
    if not 1 <= k <= 4:
        raise DomainError(f"k must lie in 1..4, got {k}")
    coeff = arithmetic_factor_ak(k, prime_cutoff).value * float(
        gk_exact(k) / math.factorial(k * k))
    return coeff * T * math.log(T) ** (k * k)


@dataclass(frozen=True)
class MollifierSpec:
    """Mollifier of length N; ``smoothing`` is ``"levinson_linear"`` or the
    ascending coefficients of a polynomial P."""

    N: int
    theta: float = 0.5
    shift_a: float = 0.5
    smoothing: str | tuple = "levinson_linear"

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"mollifier length must be a positive integer, got {self.N}")
        if not 0 < self.theta < 1:
            raise DomainError(f"theta must lie in (0, 1), got {self.theta}")
        if self.smoothing != "levinson_linear":
            object.__setattr__(self, "smoothing", tuple(float(c) for c in self.smoothing))

    @classmethod
    def from_theta(cls, T, theta, **kw):
        return cls(N=max(1, int(T ** theta)), theta=theta, **kw)


def build_mollifier(spec: MollifierSpec, tables: ArithmeticTables) -> DirichletPolynomial:
    if spec.N > tables.limit:
        raise DomainError(f"mollifier length {spec.N} exceeds table limit {tables.limit}")
    n = np.arange(1, spec.N + 1, dtype=float)
    mu = tables.moebius[1: spec.N + 1].astype(float)
    x = np.log(n) / math.log(spec.N) if spec.N > 1 else np.zeros(1)
    if spec.smoothing == "levinson_linear":
        coef = mu * n ** (spec.shift_a - 0.5) * (1.0 - x)
        if spec.N == 1:
            coef = mu.copy()
    else:
        coef = mu * np.polynomial.polynomial.polyval(x, spec.smoothing)
    return DirichletPolynomial(coef)


def mollified_moment(spec: MollifierSpec, sigma: float, T: float,
                     budget: PrecisionBudget = QUAD_BUDGET, tables: ArithmeticTables | None = None,
                     zeros=None) -> MomentEstimate:
    """int_0^T |zeta(sigma + it) M(sigma + it)|^2 dt."""
    if not 0.45 <= sigma <= 1.0:
        raise DomainError(f"sigma must lie in [0.45, 1], got {sigma}")
    if sigma == 1.0:
        raise DomainError("|zeta M|^2 is not integrable at s = 1")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    if tables is None:
        tables = build_tables(max(2, spec.N))
    mollifier = build_mollifier(spec, tables)

    def integrand(t):
        s = sigma + 1j * t
        z, _, _ = zeta_values(s)
        return np.abs(z * mollifier(s)) ** 2

    return _integrate(integrand, T, sigma, zeros, budget)


def mean_square_constant(sigma: float) -> float:
    """Diagonal oracle zeta(2 sigma) for lim I_1(sigma, T)/T when sigma > 1/2."""
    if not sigma > 0.5:
        raise DomainError(f"needs sigma > 1/2, got {sigma}")
    from .zeta import zeta

    return zeta(2.0 * sigma).value.real


MOMENT_CSV_HEADER = ("T", "k", "sigma", "value", "conjectured", "ratio")


def moment_rows(ks, sigma, Ts, budget: PrecisionBudget = QUAD_BUDGET, zeros=None):
    """Rows (T, k, sigma, value, conjectured, ratio); conjectured is blank off the line."""
    rows = []
    for T in Ts:
        for k in ks:
            value = moment_integral(k, sigma, T, budget, zeros=zeros).value
            if sigma == 0.5 and int(k) == k and k >= 1:
                conj = conjectured_moment(int(k), T)
                rows.append((float(T), k, sigma, value, conj, value / conj))
            else:
                rows.append((float(T), k, sigma, value, "", ""))
    return rows
