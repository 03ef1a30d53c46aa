"""Complex special functions: log-Gamma, the exponential integral E1 and
the Riemann-Siegel theta function.

Everything here accepts Python scalars or numpy arrays and returns the
same shape. Functions are pure; no state is shared between calls.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchCutError, BudgetExhausted, DomainError, PoleError

EULER_GAMMA = 0.57721566490153286061
HALF_LOG_2PI = 0.91893853320467274178


@dataclass(frozen=True)
class PrecisionBudget:
    """Tolerances and a hard cap on terms/evaluations for one operation."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_terms: int = 2_000_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")

    def tolerance(self, magnitude):
        return np.maximum(self.abs_tol, self.rel_tol * np.abs(magnitude))


DEFAULT_BUDGET = PrecisionBudget()


def _unwrap_scalar(value, like):
    if np.ndim(like) == 0:
        return value[()] if isinstance(value, np.ndarray) else value
    return value


# Lanczos approximation, g = 7, nine coefficients. Valid for Re z >= 1/2.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993227684700473478,
    676.520368121885098567009190444019,
    -1259.13921672240287047156078755283,
    771.3234287776530788486528258894,
    -176.61502916214059906584551353999,
    12.507343278686904814458936853287,
    -0.13857109526572011689554706984971,
    9.984369578019570859563e-6,
    1.50563273514931155834e-7,
)


def _lngamma_right(z):
    zm1 = z - 1.0
    acc = np.full_like(z, _LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        acc = acc + _LANCZOS_COEF[k] / (zm1 + k)
    t = zm1 + _LANCZOS_G + 0.5
    return HALF_LOG_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(acc)


def lngamma(z):
    """Principal branch of log Gamma(z).

    For Re z < 1/2 the argument is shifted right with the recurrence
    ``log Gamma(z) = log Gamma(z + m) - sum log(z + j)``; each ``log(z + j)``
    has its cut inside the negative real axis, so the result stays on the
    principal branch and is continuous on the cut plane.
    """
    arr = np.asarray(z, dtype=complex)
    re = arr.real
    if np.any((arr.imag == 0) & (re <= 0) & (re == np.round(re))):
        raise PoleError("log Gamma has a pole at non-positive integers")
    shift = np.where(re < 0.5, np.ceil(0.5 - re), 0.0).astype(np.int64)
    out = _lngamma_right(arr + shift)
    m_max = int(shift.max()) if shift.size else 0
    for j in range(m_max):
        active = shift > j
        out = np.where(active, out - np.log(np.where(active, arr + j, 1.0)), out)
    return _unwrap_scalar(out, z)


def _e1_series(z, max_terms):
    # E1(z) = -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
    total = np.zeros_like(z)
    term = np.ones_like(z)
    done = np.zeros(z.shape, dtype=bool)
    for k in range(1, max_terms + 1):
        term = term * (-z) / k
        contrib = term / k
        total = total + np.where(done, 0.0, contrib)
        done |= np.abs(contrib) <= 1e-17 * np.maximum(np.abs(total), 1e-300)
        if done.all():
            return -EULER_GAMMA - np.log(z) - total
    raise BudgetExhausted("E1 power series did not converge")


def _e1_contfrac(z, max_terms):
    # Modified Lentz evaluation of e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))).
    tiny = 1e-300
    b = z + 1.0
    c = np.full_like(z, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(z.shape, dtype=bool)
    for i in range(1, max_terms + 1):
        an = -float(i * i)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = c * d
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) <= 4e-16
        if done.all():
            return h * np.exp(-z)
    raise BudgetExhausted("E1 continued fraction did not converge")


E1_SWITCH_RADIUS = 2.0


def exp_integral_e1(z, budget: PrecisionBudget = DEFAULT_BUDGET, branch=None):
    """Exponential integral E1(z) = int_z^inf e^{-w}/w dw, principal branch.

    Power series inside ``|z| <= 2``, continued fraction outside.
    ``branch`` forces ``"series"`` or ``"cf"`` (used to cross-check the two).
    """
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(arr == 0):
        raise PoleError("E1 is singular at z = 0")
    if np.any((arr.imag == 0) & (arr.real < 0)):
        raise BranchCutError("E1 argument on the negative real axis (branch cut)")
    max_terms = min(budget.max_terms, 100_000)
    out = np.empty_like(arr)
    if branch is None:
        small = np.abs(arr) <= E1_SWITCH_RADIUS
    elif branch == "series":
        small = np.ones(arr.shape, dtype=bool)
    elif branch == "cf":
        small = np.zeros(arr.shape, dtype=bool)
    else:
        raise DomainError(f"unknown E1 branch {branch!r}")
    if small.any():
        out[small] = _e1_series(arr[small], max_terms)
    if (~small).any():
        out[~small] = _e1_contfrac(arr[~small], max_terms)
    if np.ndim(z) == 0:
        return complex(out[0])
    return out.reshape(np.shape(z))


THETA_ASYMPTOTIC_FROM = 30.0
# Coefficients of t^{-1}, t^{-3}, ..., t^{-9} in the Stirling expansion of theta.
_THETA_TAIL = (1.0 / 48.0, 7.0 / 5760.0, 31.0 / 80640.0, 127.0 / 430080.0, 511.0 / 1216512.0)


def theta_asymptotic(t):
    t = np.asarray(t, dtype=float)
    out = 0.5 * t * np.log(t / (2.0 * math.pi)) - 0.5 * t - math.pi / 8.0
    inv = 1.0 / t
    inv2 = inv * inv
    power = inv
    for c in _THETA_TAIL:
        out = out + c * power
        power = power * inv2
    return out


def theta_lngamma(t):
    t = np.asarray(t, dtype=float)
    return np.imag(lngamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def riemann_siegel_theta(t):
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi.

    Uses log Gamma for |t| < 30 and the Stirling series beyond; odd in t.
    """
    arr = np.asarray(t, dtype=float)
    a = np.abs(arr)
    big = a >= THETA_ASYMPTOTIC_FROM
    out = np.empty(arr.shape, dtype=float)
    if np.any(big):
        out[big] = theta_asymptotic(a[big])
    if np.any(~big):
        out[~big] = theta_lngamma(a[~big])
    out = np.sign(arr) * out
    return float(out) if out.ndim == 0 else out


def theta_derivative(t):
    """theta'(t), from the same Stirling expansion (first terms suffice for stepping)."""
    t = np.asarray(t, dtype=float)
    return 0.5 * np.log(np.abs(t) / (2.0 * math.pi)) - 1.0 / (48.0 * t * t)
