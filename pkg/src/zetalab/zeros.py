"""Critical-line zeros: scanning Z(t), zero tables on disk, counts against
the main term of N(T), and a numeric Littlewood-lemma balance.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ArgumentTrackingError, DomainError, ZeroTableError
from .quadrature import composite_simpson
from .specfun import DEFAULT_BUDGET, PrecisionBudget
from .zeta import hardy_z_values, zeta_values

TWO_PI = 2.0 * math.pi
BISECTION_HALF_WIDTH = 1e-9


def n_main_term(T):
    """(T/2 pi) log(T/2 pi) - T/2 pi."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise DomainError("n_main_term needs T > 0")
    u = T / TWO_PI
    out = u * np.log(u) - u
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ZeroOrdinate:
    gamma: float
    refined_to: float
    multiplicity: int = 1


@dataclass(frozen=True, eq=False)
class ZeroTable:
    """Sorted ordinates of critical-line zeros up to ``t_max``."""

    gammas: np.ndarray
    t_max: float
    source: str = "computed"
    refined_to: np.ndarray | None = None
    multiplicity: np.ndarray | None = None
    warnings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        g = np.array(self.gammas, dtype=float)
        if self.source not in ("computed", "ingested"):
            raise DomainError(f"unknown table source {self.source!r}")
        if not self.t_max > 0:
            raise DomainError("t_max must be positive")
        if g.size and (g[0] <= 0 or np.any(np.diff(g) <= 0)):
            raise ZeroTableError("ordinates must be positive and strictly increasing")
        if g.size and g[-1] > self.t_max:
            raise ZeroTableError(f"ordinate {g[-1]} exceeds t_max {self.t_max}")
        ref = (np.full(g.size, BISECTION_HALF_WIDTH) if self.refined_to is None
               else np.array(self.refined_to, dtype=float))
        mult = (np.ones(g.size, dtype=int) if self.multiplicity is None
                else np.array(self.multiplicity, dtype=int))
        for arr in (g, ref, mult):
            arr.setflags(write=False)
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "refined_to", ref)
        object.__setattr__(self, "multiplicity", mult)

    def __len__(self):
        return self.gammas.size

    @property
    def ordinates(self):
        return [ZeroOrdinate(float(g), float(r), int(m))
                for g, r, m in zip(self.gammas, self.refined_to, self.multiplicity)]

    def up_to(self, T):
        """Sub-table of ordinates <= T."""
        if T > self.t_max:
            raise DomainError(f"T = {T} exceeds table range {self.t_max}")
        k = int(np.searchsorted(self.gammas, T, side="right"))
        return ZeroTable(self.gammas[:k], float(T), self.source, self.refined_to[:k],
                         self.multiplicity[:k], self.warnings)

    def count(self, T):
        return int(np.searchsorted(self.gammas, T, side="right"))

    def window(self, lo, hi):
        i, j = np.searchsorted(self.gammas, [lo, hi])
        return self.gammas[i:j]


def _bisect(lo, hi, z_lo, budget):
    """Vectorized bisection on brackets with sign(Z(lo)) = sign(z_lo)."""
    lo, hi = lo.copy(), hi.copy()
    s_lo = np.sign(z_lo)
    while np.any(0.5 * (hi - lo) > BISECTION_HALF_WIDTH):
        mid = 0.5 * (lo + hi)
        zm = hardy_z_values(mid, budget)
        left = np.sign(zm) == s_lo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
        exact = zm == 0
        lo = np.where(exact, mid, lo)
        hi = np.where(exact, mid, hi)
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def _sign_brackets(t, z):
    s = np.sign(z)
    # a grid value of exactly zero is nudged to the sign of its left neighbour
    for i in np.flatnonzero(s == 0):
        s[i] = s[i - 1] if i > 0 else 1.0
    change = np.flatnonzero(s[:-1] != s[1:])
    return change


def _probe_minima(t, z, budget):
    """Resample inside local minima of |Z| that show no sign change.

    A close pair of zeros between two grid points hides as such a minimum.
    """
    a = np.abs(z)
    idx = 1 + np.flatnonzero((a[1:-1] < a[:-2]) & (a[1:-1] < a[2:])
                             & (np.sign(z[:-2]) == np.sign(z[2:])))
    if idx.size == 0:
        return np.empty(0), np.empty(0)
    lo, hi = t[idx - 1], t[idx + 1]
    fine = np.linspace(0.0, 1.0, 17)[1:-1]
    pts = (lo[:, None] + (hi - lo)[:, None] * fine[None, :]).ravel()
    return pts, hardy_z_values(pts, budget)


def _scan_block(lo, hi, step, budget):
    n = max(2, int(math.ceil((hi - lo) / step)) + 1)
    t = np.linspace(lo, hi, n)
    z = hardy_z_values(t, budget)
    et, ez = _probe_minima(t, z, budget)
    if et.size:
        t = np.concatenate([t, et])
        z = np.concatenate([z, ez])
        order = np.argsort(t)
        t, z = t[order], z[order]
    change = _sign_brackets(t, z)
    if change.size == 0:
        return np.empty(0), np.empty(0)
    return _bisect(t[change], t[change + 1], z[change], budget)


SCAN_START = 1.0
SCAN_BLOCK = 50.0
MAX_HALVINGS = 4


def scan_zeros(t_max: float, grid_step: float = 0.05,
               budget: PrecisionBudget = DEFAULT_BUDGET, workers: int = 1) -> ZeroTable:
    """Locate sign changes of Z(t) on (0, t_max] and refine them by bisection.

    The range is scanned in blocks of width 50. After each block the running
    count is compared with ``n_main_term``; a block that leaves the count
    more than 2 behind is rescanned with the step halved (up to four times).
    """
    if not t_max > 14:
        raise DomainError(f"t_max must exceed 14, got {t_max}")
    if not 0 < grid_step <= 0.25:
        raise DomainError(f"grid_step must lie in (0, 0.25], got {grid_step}")
    edges = np.arange(SCAN_START, t_max, SCAN_BLOCK)
    edges = np.append(edges, t_max)
    blocks = list(zip(edges[:-1], edges[1:]))

    def first_pass(block):
        return _scan_block(block[0], block[1], grid_step, budget)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(first_pass, blocks))
    else:
        results = [first_pass(b) for b in blocks]

    warnings = []
    found, widths = [], []
    running = 0
    for (lo, hi), (g, w) in zip(blocks, results):
        step = grid_step
        halvings = 0
        while running + g.size < n_main_term(hi) - 2 and halvings < MAX_HALVINGS:
            step /= 2.0
            halvings += 1
            g, w = _scan_block(lo, hi, step, budget)
        if running + g.size < n_main_term(hi) - 2:
            warnings.append(
                f"count {running + g.size} behind main term {n_main_term(hi):.2f} "
                f"on ({lo:.2f}, {hi:.2f}] after {halvings} halvings")
        found.append(g)
        widths.append(w)
        running += g.size
    gammas = np.concatenate(found) if found else np.empty(0)
    refined = np.concatenate(widths) if widths else np.empty(0)
    keep = np.concatenate([[True], np.diff(gammas) > 1e-8]) if gammas.size else np.empty(0, bool)
    refined = np.maximum(refined[keep], np.finfo(float).tiny)
    return ZeroTable(gammas[keep], float(t_max), "computed", refined,
                     np.ones(int(keep.sum()), dtype=int), tuple(warnings))


def save_zero_table(table: ZeroTable, path) -> None:
    lines = [f"# source={table.source}", f"# t_max={table.t_max!r}",
             f"# count={len(table)}"]
    lines.extend(f"{g:.12f}" for g in table.gammas)
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_zero_table(path) -> ZeroTable:
    """Read one decimal ordinate per line; '#' starts a comment."""
    gammas, t_max = [], None
    prev = 0.0
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                if key.strip() == "t_max":
                    try:
                        t_max = float(value)
                    except ValueError:
                        raise ZeroTableError(f"bad t_max header {value!r}", lineno) from None
                continue
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                g = float(line)
            except ValueError:
                raise ZeroTableError(f"cannot parse ordinate {line!r}", lineno) from None
            if not math.isfinite(g) or g <= 0:
                raise ZeroTableError(f"ordinate must be positive and finite, got {line!r}",
                                     lineno)
            if g <= prev:
                raise ZeroTableError(f"ordinate {line} is not above the previous one {prev}",
                                     lineno)
            gammas.append(g)
            prev = g
    if not gammas and t_max is None:
        raise ZeroTableError("file holds no ordinates")
    if t_max is None or (gammas and t_max < gammas[-1]):
        t_max = gammas[-1]
    return ZeroTable(np.array(gammas), float(t_max), "ingested")


def zero_table_io(path, mode: str, table: ZeroTable | None = None) -> ZeroTable:
    if mode == "load":
        return load_zero_table(path)
    if mode == "save":
        if table is None:
            raise DomainError("save mode needs a table")
        save_zero_table(table, path)
        return table
    raise DomainError(f"mode must be 'load' or 'save', got {mode!r}")


@dataclass(frozen=True)
class ZeroCounts:
    count: int
    main_term: float
    defect: float
    simple_count: int


def zero_counts_report(table: ZeroTable, T: float) -> ZeroCounts:
    if T > table.t_max:
        raise DomainError(f"T = {T} exceeds table range {table.t_max}")
    k = table.count(T)
    main = n_main_term(T)
    simple = int(np.sum(table.multiplicity[:k] == 1))
    return ZeroCounts(count=k, main_term=main, defect=k - main, simple_count=simple)


@dataclass(frozen=True)
class LittlewoodBalance:
    dist_sum: float
    log_integral: float
    arg_terms: float
    residual: float


def _f(s):
    """(s - 1) zeta(s): entire, so the lemma applies to rectangles through s = 1."""
    s = np.asarray(s, dtype=complex)
    safe = np.where(s == 1.0, 2.0, s)
    z, _, _ = zeta_values(safe)
    return np.where(s == 1.0, 1.0, (s - 1.0) * z)


def _unwrap_path(values):
    phase = np.angle(values)
    step = np.diff(phase)
    wrapped = (step + math.pi) % (2.0 * math.pi) - math.pi
    if np.any(np.abs(wrapped) > 0.5 * math.pi):
        k = int(np.argmax(np.abs(wrapped)))
        raise ArgumentTrackingError(
            f"argument jumps by {wrapped[k]:.3f} rad between adjacent samples; refine sampling")
    return np.concatenate([[phase[0]], phase[0] + np.cumsum(wrapped)])


def _samples(length, per_unit):
    n = max(2, int(math.ceil(length * per_unit)))
    return n + (n % 2 == 0)  # odd count for Simpson


def littlewood_balance(sigma0: float, sigma1: float, T: float, table: ZeroTable,
                       samples_per_unit: int = 2000) -> LittlewoodBalance:
    """Both sides of Littlewood's lemma for (s - 1) zeta(s) on the rectangle
    [sigma0, sigma1] x [0, T], with the zeros taken from ``table`` on the
    critical line.
    """
    if not sigma0 < sigma1 <= 2.0 or sigma0 <= -1.0:
        raise DomainError("need -1 < sigma0 < sigma1 <= 2")
    if T > table.t_max:
        raise DomainError(f"T = {T} exceeds table range {table.t_max}")
    if abs(sigma0 - 0.5) < 1e-12 or abs(sigma1 - 0.5) < 1e-12:
        raise DomainError("a vertical edge runs along the critical line (zero on contour)")
    near = table.window(T - 1e-6, T + 1e-6)
    if sigma0 < 0.5 < sigma1 and near.size:
        raise DomainError(f"top edge passes through the zero at {near[0]}")

    inside = table.count(T) if sigma0 < 0.5 < sigma1 else 0
    dist_sum = 2.0 * math.pi * inside * (0.5 - sigma0)

    nv = _samples(T, samples_per_unit)
    t = np.linspace(0.0, T, nv)
    h_t = T / (nv - 1)
    left = _f(sigma0 + 1j * t)
    right = _f(sigma1 + 1j * t)
    if np.any(left == 0) or np.any(right == 0):
        raise DomainError("zeta vanishes on a vertical edge")
    log_integral = (composite_simpson(np.log(np.abs(left)), h_t)
                    - composite_simpson(np.log(np.abs(right)), h_t))

    nh = _samples(sigma1 - sigma0, samples_per_unit)
    sig = np.linspace(sigma1, sigma0, nh)  # right to left
    h_s = (sigma1 - sigma0) / (nh - 1)
    # continuous arg: start at sigma1 on the real axis, go up the right edge, then left
    up = _unwrap_path(right)
    top_vals = _f(sig + 1j * T)
    top = _unwrap_path(np.concatenate([[right[-1]], top_vals]))[1:] + (up[-1] - np.angle(right[-1]))
    bottom = _unwrap_path(_f(sig + 0j))
    # sig runs right to left, so the integrals over [sigma0, sigma1] equal the sums as given
    arg_terms = composite_simpson(top, h_s) - composite_simpson(bottom, h_s)
    residual = dist_sum - (log_integral + arg_terms)
    return LittlewoodBalance(dist_sum=dist_sum, log_integral=float(log_integral),
                             arg_terms=float(arg_terms), residual=float(residual))
