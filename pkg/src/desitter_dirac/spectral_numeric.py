"""Finite-difference oracle for 1D Schrodinger-type operators.

``-d^2/dx^2 + V(x)`` on ``(lo, hi)`` with homogeneous Dirichlet ends is
discretized on ``N`` strictly interior points with the three-point stencil.
The resulting symmetric tridiagonal matrix is diagonalized by Sturm-sequence
bisection (LAPACK ``stebz``) with inverse iteration (``stein``) for vectors.
"""
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .exceptions import ConvergenceError, DomainError


@dataclass(frozen=True)
class Grid1D:
    lo: float
    hi: float
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"grid needs at least one interior point, got N={self.N}")
        if not self.hi > self.lo:
            raise DomainError(f"empty interval ({self.lo}, {self.hi})")

    @property
    def h(self):
        return (self.hi - self.lo) / (self.N + 1)

    @property
    def points(self):
        return self.lo + self.h * np.arange(1, self.N + 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid1D = None

    @property
    def N(self):
        return len(self.diag)

    def dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, v):
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = None  # columns, h-weighted unit norm


def discretize(V, grid):
    """Three-point stencil: ``diag = 2/h^2 + V(x_i)``, ``offdiag = -1/h^2``."""
    x = grid.points
    v = np.asarray(V(x), dtype=float)
    if v.shape != x.shape:
        v = np.broadcast_to(v, x.shape).astype(float)
    bad = ~np.isfinite(v)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"potential is not finite at grid point x={x[i]!r}")
    h = grid.h
    return TridiagonalOperator(
        diag=2.0 / h**2 + v,
        offdiag=np.full(grid.N - 1, -1.0 / h**2),
        grid=grid,
    )


def sturm_count(op, lam):
    """Number of eigenvalues strictly below ``lam`` (LDL^T inertia)."""
    d = op.diag - lam
    e2 = op.offdiag**2
    count = 0
    q = d[0]
    tiny = np.finfo(float).tiny
    for i in range(op.N):
        if i > 0:
            q = d[i] - e2[i - 1] / q
        if q == 0.0:
            q = -tiny
        if q < 0.0:
            count += 1
    return count


def _normalize(vecs, h):
    vecs = vecs / np.sqrt(h * np.sum(np.abs(vecs) ** 2, axis=0))
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    return vecs * signs


def eigen_smallest(op, k, want_vectors=False):
    """The ``k`` lowest eigenpairs of a symmetric tridiagonal operator."""
    if not 1 <= k <= op.N:
        raise DomainError(f"k must be in [1, {op.N}], got {k}")
    try:
        res = linalg.eigh_tridiagonal(
            op.diag,
            op.offdiag,
            eigvals_only=not want_vectors,
            select="i",
            select_range=(0, k - 1),
            lapack_driver="stebz",
        )
    except linalg.LinAlgError as exc:
        # LAPACK reports the number of non-converged pairs in the message
        raise ConvergenceError(f"tridiagonal eigensolve failed: {exc}") from exc
    if not want_vectors:
        return EigenResult(np.asarray(res))
    w, v = res
    h = op.grid.h if op.grid is not None else 1.0
    return EigenResult(np.asarray(w), _normalize(v, h))


def complex_spectrum(diag, offdiag, k):
    """``k`` eigenvalues of smallest modulus of a complex tridiagonal matrix.

    Dense Hessenberg/QR; sorted by modulus, ties broken by real then
    imaginary part so that conjugate spectra pair up deterministically.
    """
    diag = np.asarray(diag, dtype=complex)
    offdiag = np.asarray(offdiag, dtype=complex)
    n = len(diag)
    if len(offdiag) != max(n - 1, 0):
        raise DomainError("offdiag must have length N-1")
    if not 1 <= k <= n:
        raise DomainError(f"k must be in [1, {n}], got {k}")
    if n == 1:
        return diag.copy()
    T = np.diag(diag) + np.diag(offdiag, 1) + np.diag(offdiag, -1)
    try:
        w = linalg.eigvals(T, check_finite=True)
    except linalg.LinAlgError as exc:
        raise ConvergenceError(f"complex eigensolve failed: {exc}") from exc
    order = np.lexsort((w.imag, w.real, np.round(np.abs(w), 12)))
    return w[order][:k]


def temporal_operator(potential, grid):
    """Complex tridiagonal pieces of ``-d^2/dtau^2 + U(tau)`` on ``grid``."""
    tau = grid.points
    u = np.asarray(potential(tau), dtype=complex)
    h = grid.h
    return 2.0 / h**2 + u, np.full(grid.N - 1, -1.0 / h**2, dtype=complex)


def richardson_h2(coarse, fine, h_coarse, h_fine):
    """Cancel the leading ``h^2`` error term between two refinements."""
    coarse = np.asarray(coarse)
    fine = np.asarray(fine)
    return (h_coarse**2 * fine - h_fine**2 * coarse) / (h_coarse**2 - h_fine**2)


def loglog_slope(h, err):
    """Least-squares slope of ``log(err)`` against ``log(h)``."""
    return float(np.polyfit(np.log(h), np.log(err), 1)[0])
