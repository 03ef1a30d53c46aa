"""Prime-side arithmetic: sieved tables of Lambda and mu, Chebyshev psi and
pi, the truncated explicit formula, and PNT-error / prime-gap scans.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

MAX_LIMIT = 10**8


@dataclass(frozen=True, eq=False)
class ArithmeticTables:
    """Sieved tables covering 1..limit (index 0 unused).

    ``mangoldt[n]`` is Lambda(n) and ``moebius[n]`` is mu(n).
    """

    limit: int
    primes: np.ndarray
    mangoldt: np.ndarray
    moebius: np.ndarray
    _psi_cache: dict = field(default_factory=dict, repr=False)

    def psi_cumulative(self):
        """Running sums psi(n) for n = 0..limit (float accumulation)."""
        if "psi" not in self._psi_cache:
            self._psi_cache["psi"] = np.cumsum(self.mangoldt)
        return self._psi_cache["psi"]


def _smallest_prime_factor(limit):
    spf = np.zeros(limit + 1, dtype=np.int32 if limit < 2**31 else np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p:: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[0] = 0
    spf[1] = 1
    return spf


def build_tables(limit: int) -> ArithmeticTables:
    """Sieve primes, Lambda(n) and mu(n) for 1 <= n <= limit."""
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"limit must be >= 2, got {limit}")
    if limit > MAX_LIMIT:
        raise DomainError(f"limit {limit} exceeds the desk-scale cap {MAX_LIMIT}")
    spf = _smallest_prime_factor(limit)
    n = np.arange(limit + 1)
    is_prime = (spf == n) & (n >= 2)
    primes = np.flatnonzero(is_prime)

    mangoldt = np.zeros(limit + 1)
    mangoldt[primes] = np.log(primes.astype(float))
    for p in primes[primes <= math.isqrt(limit)]:
        q = int(p) * int(p)
        logp = math.log(int(p))
        while q <= limit:
            mangoldt[q] = logp
            q *= int(p)

    # mu by repeated division by the smallest prime factor
    moebius = np.ones(limit + 1, dtype=np.int8)
    moebius[0] = 0
    rem = n[2:].copy()
    idx = n[2:].copy()
    while rem.size:
        p = spf[rem]
        rem = rem // p
        square = (rem > 1) & (spf[np.maximum(rem, 1)] == p) & (rem % p == 0)
        moebius[idx] = np.where(square, 0, -moebius[idx])
        live = (rem > 1) & ~square
        rem, idx = rem[live], idx[live]
    return ArithmeticTables(limit=limit, primes=primes, mangoldt=mangoldt, moebius=moebius)


@dataclass(frozen=True)
class PsiSnapshot:
    x: float
    psi: float
    pi: int


def _check_x(tables, x, lower=2):
    if not lower <= x <= tables.limit:
        raise DomainError(f"x = {x} outside table range [{lower}, {tables.limit}]")


def summatory(tables: ArithmeticTables, x: float) -> PsiSnapshot:
    """psi(x) and pi(x) as correctly rounded finite sums."""
    _check_x(tables, x)
    m = int(math.floor(x))
    psi = math.fsum(tables.mangoldt[2: m + 1])
    pi = int(np.searchsorted(tables.primes, m, side="right"))
    return PsiSnapshot(x=float(x), psi=psi, pi=pi)


def psi_by_prime_powers(tables: ArithmeticTables, x: float) -> float:
    """psi(x) = sum over p^k <= x of log p, enumerating prime powers directly."""
    m = int(math.floor(x))
    terms = []
    for p in tables.primes[tables.primes <= m]:
        p = int(p)
        logp = math.log(p)
        q = p
        while q <= m:
            terms.append(logp)
            q *= p
    return math.fsum(terms)


@functools.lru_cache(maxsize=1)
def log_deriv_at_zero() -> float:
    """zeta'/zeta(0), evaluated once by the zeta engine (equals log 2 pi)."""
    from .zeta import zeta_log_deriv

    return float((-zeta_log_deriv(0.0)).real)


def prime_power_base(x):
    """Return p if the integer x is a prime power p^k, else None."""
    if x != math.floor(x) or x < 2:
        return None
    m = int(x)
    p = next((d for d in range(2, math.isqrt(m) + 1) if m % d == 0), m)
    while m % p == 0:
        m //= p
    return p if m == 1 else None


@dataclass(frozen=True)
class ExplicitFormulaResult:
    x: float
    T: float
    value: float
    direct: float
    residual: float
    zeros_used: int


def explicit_formula_values(x, gammas):
    """x - 2 Re sum x^rho/rho - zeta'/zeta(0) - (1/2) log(1 - x^{-2}), rho = 1/2 + i gamma."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    gammas = np.asarray(gammas, dtype=float)
    rho = 0.5 + 1j * gammas
    logx = np.log(x)
    zero_sum = np.zeros(x.shape)
    for start in range(0, gammas.size, 4096):
        r = rho[start:start + 4096]
        zero_sum += np.sum(np.exp(np.multiply.outer(logx, r)) / r, axis=-1).real
    return x - 2.0 * zero_sum - log_deriv_at_zero() - 0.5 * np.log1p(-x ** -2.0)


def explicit_formula_psi(x: float, T: float, table, tables: ArithmeticTables | None = None):
    """Truncated explicit formula for psi(x) against the direct sieve sum."""
    if not x > 1:
        raise DomainError(f"explicit formula needs x > 1, got {x}")
    if T > table.t_max:
        raise DomainError(f"T = {T} exceeds zero table range {table.t_max}")
    if tables is None:
        tables = build_tables(max(10, int(math.ceil(x)) + 1))
    gammas = table.gammas[table.gammas <= T]
    value = float(explicit_formula_values(x, gammas)[0])
    direct = summatory(tables, x).psi
    if prime_power_base(x) is not None:
        warnings.warn(f"x = {x} is a prime power; comparing against psi(x) - Lambda(x)/2",
                      stacklevel=2)
        direct -= 0.5 * float(tables.mangoldt[int(x)])
    return ExplicitFormulaResult(x=float(x), T=float(T), value=value, direct=direct,
                                 residual=value - direct, zeros_used=int(gammas.size))


def explicit_formula_scan(xs, T, table, tables):
    """Vectorized residuals over a grid of non-prime-power sample points."""
    xs = np.asarray(xs, dtype=float)
    gammas = table.gammas[table.gammas <= T]
    values = explicit_formula_values(xs, gammas)
    psi = tables.psi_cumulative()[np.floor(xs).astype(int)]
    return values - psi


@dataclass(frozen=True)
class PntErrorPoint:
    x: float
    psi: float
    pi: int
    psi_minus_x: float
    normalized: float


def pnt_error_scan(tables: ArithmeticTables, x_grid) -> list[PntErrorPoint]:
    """(psi(x) - x)/sqrt(x) along a grid of sample points."""
    xs = np.asarray(x_grid, dtype=float)
    if xs.size and (xs.min() < 1 or xs.max() > tables.limit):
        raise DomainError("grid exceeds the arithmetic table range")
    psi_all = tables.psi_cumulative()
    m = np.floor(xs).astype(int)
    psi = psi_all[m]
    pi = np.searchsorted(tables.primes, m, side="right")
    diff = psi - xs
    return [PntErrorPoint(float(x), float(p), int(c), float(d), float(d / math.sqrt(x)))
            for x, p, c, d in zip(xs, psi, pi, diff)]


@dataclass(frozen=True)
class PrimeGapRecord:
    max_gap: int
    at_prime: int
    log_sq_ratio: float


def prime_gap_scan(tables: ArithmeticTables, X: int) -> PrimeGapRecord:
    """Largest gap between consecutive primes not exceeding X."""
    if X > tables.limit:
        raise DomainError(f"X = {X} exceeds table limit {tables.limit}")
    ps = tables.primes[tables.primes <= X]
    if ps.size < 2:
        raise DomainError(f"need two primes below X = {X}")
    gaps = np.diff(ps)
    i = int(np.argmax(gaps))
    p = int(ps[i])
    gap = int(gaps[i])
    return PrimeGapRecord(max_gap=gap, at_prime=p, log_sq_ratio=gap / math.log(p) ** 2)
