"""Random matrix ensembles: seeded GUE/CUE sampling, spectra by cyclic Jacobi,
characteristic polynomials Z_N(U, theta), Monte Carlo moments and eigenvalue
pair correlation.

Randomness comes from SplitMix64 in counter mode. Sample ``j`` of a seeded
run always uses substream ``(seed, j)``, so batch and single draws agree
bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

from .errors import ConvergenceError, DomainError
from .moments import MomentEstimate
from .paircorr import CorrelationHistogram, bin_averaged_reference

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def _mix64_array(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """SplitMix64 generator; output i is mix(key + (i + 1) * GOLDEN).

    The key of substream ``(seed, stream)`` is
    ``mix(mix(seed) ^ mix(stream + GOLDEN))``.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        self.key = _mix64(_mix64(self.seed) ^ _mix64(self.stream + _GOLDEN))
        self.counter = 0

    def next_uint64(self, n: int) -> np.ndarray:
        idx = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            z = np.uint64(self.key) + idx * np.uint64(_GOLDEN)
            return _mix64_array(z)

    def uniform(self, n: int) -> np.ndarray:
        """Doubles in [0, 1) from the top 53 bits."""
        return (self.next_uint64(n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def normal(self, n: int) -> np.ndarray:
        """Standard normals by the Box-Muller transform (two per uniform pair)."""
        m = (n + 1) // 2
        u = self.uniform(2 * m)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))  # 1 - u lies in (0, 1]
        phi = 2.0 * math.pi * u[1::2]
        out = np.empty(2 * m)
        out[0::2] = r * np.cos(phi)
        out[1::2] = r * np.sin(phi)
        return out[:n]


@dataclass(frozen=True, eq=False)
class HermitianSample:
    dim: int
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class UnitarySample:
    dim: int
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class EigenangleSet:
    dim: int
    angles: np.ndarray
    phase: float = 0.0

    def __len__(self):
        return self.dim


def _check_dim(N):
    if int(N) != N or not 2 <= N <= 500:
        raise DomainError(f"N must be an integer in [2, 500], got {N}")
    return int(N)


def _gue_from_stream(N, rng):
    """Diagonal N(0, 1/2); off-diagonal real and imaginary parts N(0, 1/4)."""
    iu = np.triu_indices(N, 1)
    diag = rng.normal(N) * math.sqrt(0.5)
    off = rng.normal(2 * iu[0].size) * 0.5
    H = np.zeros((N, N), dtype=complex)
    H[iu] = off[0::2] + 1j * off[1::2]
    H = H + H.conj().T
    H[np.diag_indices(N)] = diag
    return H


def sample_gue(N: int, seed: int, stream: int = 0) -> HermitianSample:
    N = _check_dim(N)
    return HermitianSample(N, _gue_from_stream(N, SplitMix64(seed, stream)))


def sample_gue_batch(N: int, samples: int, seed: int, first_stream: int = 0) -> np.ndarray:
    N = _check_dim(N)
    return np.stack([_gue_from_stream(N, SplitMix64(seed, first_stream + j))
                     for j in range(samples)])


def _ginibre(N, rng):
    z = rng.normal(2 * N * N).reshape(N, N, 2)
    return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)


def _haar_from_ginibre(Z):
    """QR with the phase correction that makes diag(R) positive."""
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    return Q * (d / np.abs(d))[..., None, :]


def sample_cue(N: int, seed: int, stream: int = 0) -> UnitarySample:
    N = _check_dim(N)
    return UnitarySample(N, _haar_from_ginibre(_ginibre(N, SplitMix64(seed, stream))))


def sample_cue_batch(N: int, samples: int, seed: int, first_stream: int = 0) -> np.ndarray:
    N = _check_dim(N)
    Z = np.stack([_ginibre(N, SplitMix64(seed, first_stream + j)) for j in range(samples)])
    return _haar_from_ginibre(Z)


def _round_robin(n):
    """Rounds of disjoint index pairs covering every pair once (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        pairs = [(players[i], players[n - 1 - i]) for i in range(n // 2)]
        rounds.append((np.array([min(p) for p in pairs]), np.array([max(p) for p in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def _off_norm(A):
    n = A.shape[-1]
    off = np.abs(A) ** 2
    off[..., np.arange(n), np.arange(n)] = 0.0
    return np.sqrt(np.sum(off, axis=(-2, -1)))


def _rotation(app, aqq, apq):
    """(c, s, e^{i phi}) of the complex Jacobi rotation annihilating a_pq."""
    mag = np.abs(apq)
    skip = mag < 1e-300
    safe = np.where(skip, 1.0, mag)
    with np.errstate(over="ignore"):
        tau = np.clip((aqq - app) / (2.0 * safe), -1e150, 1e150)
    t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = np.where(skip, 0.0, t * c)
    c = np.where(skip, 1.0, c)
    ph = np.where(skip, 1.0, apq / safe)
    return c, s, ph


def _jacobi_numpy(A, limit, max_sweeps):
    """Parallel-order cyclic Jacobi on a stack; each round applies N/2
    disjoint rotations to every matrix at once."""
    B, N, _ = A.shape
    if N % 2:
        A = np.concatenate([A, np.zeros((B, N, 1), complex)], axis=2)
        A = np.concatenate([A, np.zeros((B, 1, N + 1), complex)], axis=1)
    n = A.shape[-1]
    rounds = _round_robin(n)
    rows = np.arange(B)[:, None]
    for _ in range(max_sweeps):
        active = _off_norm(A) > limit
        if not active.any():
            break
        idx = np.flatnonzero(active)
        sub = A[idx]
        r = rows[: idx.size]
        for P, Q in rounds:
            c, s, ph = _rotation(sub[r, P, P].real, sub[r, Q, Q].real, sub[r, P, Q])
            c3, s3, ph3 = c[..., None], s[..., None], ph[..., None]
            # columns: A <- A J
            colP = sub[r, :, P]
            colQ = sub[r, :, Q]
            sub[r, :, P] = c3 * colP - s3 * np.conj(ph3) * colQ
            sub[r, :, Q] = s3 * ph3 * colP + c3 * colQ
            # rows: A <- J^H A
            rowP = sub[r, P, :]
            rowQ = sub[r, Q, :]
            sub[r, P, :] = c3 * rowP - s3 * ph3 * rowQ
            sub[r, Q, :] = s3 * np.conj(ph3) * rowP + c3 * rowQ
            sub[r, P, Q] = 0.0
            sub[r, Q, P] = 0.0
        A[idx] = sub
    else:
        if (_off_norm(A) > limit).any():
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.diagonal(A, axis1=-2, axis2=-1).real[:, :N]

if numba is not None:
    @numba.njit(cache=True)
    def _jacobi_compiled(A, limit, max_sweeps):
        """Serial cyclic-by-row Jacobi; returns sweeps used or -1."""
        n = A.shape[0]
        for sweep in range(max_sweeps + 1):
            off = 0.0
            for i in range(n):
                for j in range(n):
                    if i != j:
                        off += A[i, j].real ** 2 + A[i, j].imag ** 2
            if math.sqrt(off) <= limit:
                return sweep
            if sweep == max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = A[p, q]
                    mag = abs(apq)
                    if mag < 1e-300:
                        continue
                    tau = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                    tau = min(max(tau, -1e150), 1e150)
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    sp = t * c * (apq / mag)
                    spc = sp.conjugate()
                    for k in range(n):
                        x = A[k, p]
                        y = A[k, q]
                        A[k, p] = c * x - spc * y
                        A[k, q] = sp * x + c * y
                    for k in range(n):
                        x = A[p, k]
                        y = A[q, k]
                        A[p, k] = c * x - sp * y
                        A[q, k] = spc * x + c * y
                    A[p, q] = 0.0
                    A[q, p] = 0.0
        return -1


def jacobi_eigvalsh(H, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS, engine=None):
    """Sorted eigenvalues of one Hermitian matrix or a stack, by cyclic Jacobi.

    Sweeps stop once the off-diagonal Frobenius norm is below
    ``tol * max(1, ||H||_F)``. ``engine`` is ``"compiled"`` (numba, the
    default when importable) or ``"numpy"`` (vectorized parallel ordering).
    """
    A = np.array(H, dtype=complex)
    single = A.ndim == 2
    if single:
        A = A[None]
    limit = tol * np.maximum(1.0, np.sqrt(np.sum(np.abs(A) ** 2, axis=(-2, -1))))
    if engine is None:
        engine = "compiled" if numba is not None else "numpy"
    if engine == "compiled":
        if numba is None:
            raise DomainError("compiled Jacobi engine needs numba")
        for b in range(A.shape[0]):
            M = np.ascontiguousarray(A[b])
            if _jacobi_compiled(M, float(limit[b]), max_sweeps) < 0:
                raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
            A[b] = M
        ev = np.diagonal(A, axis1=-2, axis2=-1).real
    elif engine == "numpy":
        ev = _jacobi_numpy(A, limit, max_sweeps)
    else:
        raise DomainError(f"unknown Jacobi engine {engine!r}")
    ev = np.sort(ev, axis=-1)
    return ev[0] if single else ev


def eigen_hermitian(H) -> EigenangleSet:
    """Sorted eigenvalues of a Hermitian sample."""
    M = H.entries if isinstance(H, HermitianSample) else np.asarray(H)
    ev = jacobi_eigvalsh(M)
    return EigenangleSet(M.shape[-1], ev)


CAYLEY_LIMIT = 1e7


def _cayley_angles(U, phases):
    """Eigenangles of U e^{i phi} via H = i(I - U')(I + U')^{-1}; None where ill-conditioned."""
    n = U.shape[-1]
    Up = U * np.exp(1j * phases)[:, None, None]
    eye = np.eye(n)
    # X (I + U') = I - U'  <=>  (I + U')^T X^T = (I - U')^T
    Xt = np.linalg.solve(np.swapaxes(eye + Up, -1, -2), np.swapaxes(eye - Up, -1, -2))
    H = 1j * np.swapaxes(Xt, -1, -2)
    H = 0.5 * (H + np.conj(np.swapaxes(H, -1, -2)))
    lam = jacobi_eigvalsh(H)
    bad = np.max(np.abs(lam), axis=-1) > CAYLEY_LIMIT
    theta = np.mod(2.0 * np.arctan(lam) - phases[:, None], 2.0 * math.pi)
    return np.sort(theta, axis=-1), bad


def eigenangles_unitary_batch(U, seed: int = 0, first_stream: int = 0):
    """Eigenangles in [0, 2 pi) for a stack of unitaries, with random global phases.

    Returns ``(angles, phases)``. A sample whose Cayley transform is
    ill-conditioned is retried once with a fresh phase.
    """
    U = np.asarray(U, dtype=complex)
    single = U.ndim == 2
    if single:
        U = U[None]
    count = U.shape[0]
    phases = np.array([2.0 * math.pi * SplitMix64(seed, first_stream + j).uniform(1)[0]
                       for j in range(count)]) - math.pi
    angles, bad = _cayley_angles(U, phases)
    if bad.any():
        idx = np.flatnonzero(bad)
        retry = np.array([2.0 * math.pi * SplitMix64(seed, first_stream + j).uniform(2)[1]
                          for j in idx]) - math.pi
        a2, bad2 = _cayley_angles(U[idx], retry)
        if bad2.any():
            raise ConvergenceError("Cayley transform ill-conditioned after a phase retry")
        angles[idx] = a2
        phases[idx] = retry
    return (angles[0], phases[0]) if single else (angles, phases)


def eigenangles_unitary(U, seed: int = 0) -> EigenangleSet:
    M = U.entries if isinstance(U, UnitarySample) else np.asarray(U)
    angles, phase = eigenangles_unitary_batch(M, seed)
    return EigenangleSet(M.shape[-1], angles, float(phase))


def char_poly_Z(angles, theta):
    """Z_N(U, theta) = prod_n (1 - e^{i(theta_n - theta)}).

    Each factor is 2|sin(d/2)| in modulus; moduli are summed in log space
    and arguments are summed separately.
    """
    a = np.asarray(angles.angles if isinstance(angles, EigenangleSet) else angles, dtype=float)
    theta = np.asarray(theta, dtype=float)
    d = np.subtract.outer(theta, a) * -1.0  # theta_n - theta
    f = 1.0 - np.exp(1j * d)
    mod = np.abs(f)
    zero = np.any(mod == 0.0, axis=-1)
    with np.errstate(divide="ignore"):
        logmag = np.sum(np.log(mod), axis=-1)
    arg = np.sum(np.angle(f), axis=-1)
    out = np.where(zero, 0.0, np.exp(np.where(zero, 0.0, logmag) + 1j * arg))
    return complex(out) if out.ndim == 0 else out


MC_CHUNK = 250


def cue_moment_mc(N: int, k: int, samples: int, seed: int) -> MomentEstimate:
    """Monte Carlo mean of |Z_N(U, 0)|^{2k} over Haar unitaries, Z_N(U, 0) = det(I - U).

    ``est_error`` is the standard error of the mean.
    """
    if not 0 <= k <= 4 or int(k) != k:
        raise DomainError(f"k must be an integer in [0, 4], got {k}")
    if samples < 1000:
        raise DomainError(f"need at least 1000 samples, got {samples}")
    N = _check_dim(N)
    if k == 0:
        return MomentEstimate(1.0, 0.0, int(samples))
    vals = np.empty(samples)
    for start in range(0, samples, MC_CHUNK):
        m = min(MC_CHUNK, samples - start)
        U = sample_cue_batch(N, m, seed, first_stream=start)
        _, logabs = np.linalg.slogdet(np.eye(N) - U)
        vals[start:start + m] = np.exp(2.0 * k * logabs)
    mean = math.fsum(vals) / samples
    stderr = float(np.std(vals, ddof=1)) / math.sqrt(samples)
    return MomentEstimate(mean, stderr, int(samples))


MOMENT_CSV_HEADER = ("N", "k", "samples", "mean", "stderr")


def _pair_counts(u, centers_mask, x_max, edges):
    """Histogram of forward gaps u_j - u_i in (0, x_max] for i in the mask."""
    counts = np.zeros(edges.size - 1)
    for i in np.flatnonzero(centers_mask):
        j = np.searchsorted(u, u[i] + x_max, side="right")
        diffs = u[i + 1:j] - u[i]
        counts += np.histogram(diffs[diffs > 0], bins=edges)[0]
    return counts


MIN_PAIRS = 100


def eigen_pair_correlation(ensemble: str, N: int, samples: int, x_max: float = 3.0,
                           bins: int = 30, seed: int = 0) -> CorrelationHistogram:
    """Unfolded eigenvalue pair-gap histogram against 1 - (sin pi x/pi x)^2.

    CUE angles are unfolded by theta N / 2 pi and gaps taken on the circle.
    GUE eigenvalues are unfolded through the pooled empirical distribution
    (rank interpolation) and only points from the central half of each
    spectrum act as left ends of pairs.
    """
    if N < 50 or samples < 50:
        raise DomainError(f"need N >= 50 and samples >= 50, got N = {N}, samples = {samples}")
    if bins < 1 or not x_max > 0:
        raise DomainError("need bins >= 1 and x_max > 0")
    N = _check_dim(N)
    edges = np.linspace(0.0, x_max, bins + 1)
    counts = np.zeros(bins)
    centers = 0
    if ensemble == "cue":
        chunk = 50
        for start in range(0, samples, chunk):
            m = min(chunk, samples - start)
            U = sample_cue_batch(N, m, seed, first_stream=start)
            angles, _ = eigenangles_unitary_batch(U, seed, first_stream=start)
            for th in angles:
                u = th * N / (2.0 * math.pi)
                wrapped = np.concatenate([u, u + N])  # circular gaps
                mask = np.zeros(wrapped.size, bool)
                mask[:N] = True
                counts += _pair_counts(wrapped, mask, x_max, edges)
                centers += N
    elif ensemble == "gue":
        spectra = []
        chunk = 25
        for start in range(0, samples, chunk):
            m = min(chunk, samples - start)
            H = sample_gue_batch(N, m, seed, first_stream=start)
            spectra.append(jacobi_eigvalsh(H))
        spectra = np.concatenate(spectra)
        pooled = np.sort(spectra.ravel())
        ranks = (np.arange(pooled.size) + 0.5) / pooled.size * N
        lo, hi = N // 4, N - N // 4
        for ev in spectra:
            u = np.interp(ev, pooled, ranks)
            mask = np.zeros(N, bool)
            mask[lo:hi] = True
            counts += _pair_counts(u, mask, x_max, edges)
            centers += hi - lo
    else:
        raise DomainError(f"unknown ensemble {ensemble!r}")
    total = float(counts.sum())
    if total < MIN_PAIRS:
        raise DomainError(f"only {total:.0f} pairs fell in (0, {x_max}]")
    density = counts / (centers * np.diff(edges))
    return CorrelationHistogram(bin_edges=edges, counts=density,
                                reference=bin_averaged_reference(edges), total_weight=total)
