"""Supersymmetric factorization of the angular problem.

The superpotential ``W(theta) = B csc(theta) - A cot(theta)`` with
``A = (1 + 2m)/2`` and ``B = 1/2`` gives the trigonometric Scarf-type pair

    V_plus  = W^2 - W' = -A^2 + (A^2 + B^2 - A) csc^2 - B(2A - 1) csc cot
    V_minus = W^2 + W'

``V_plus`` is the Dirac angular potential ``m^2 csc^2 - m cot csc`` shifted
down by ``A^2``.  Its spectrum is ``(A + n)^2 - A^2`` with eigenfunctions

    (1 - cos)^{(A-B)/2} (1 + cos)^{(A+B)/2} P_n^{(A-B-1/2, A+B-1/2)}(cos)

``V_minus`` is ``V_plus`` with ``A -> A + 1`` (that is ``m -> m + 1``) plus
the constant ``(A+1)^2 - A^2``, so ``(d + W)`` maps level ``n`` of ``h_plus``
onto level ``n - 1`` of ``h_minus``.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .exceptions import DomainError
from .separation import _check_theta

B_CONST = 0.5


def jacobi_poly(n, alpha, beta, x):
    """``P_n^{(alpha, beta)}(x)`` by the three-term recurrence."""
    if n < 0 or int(n) != n:
        raise DomainError(f"degree must be a nonnegative integer, got {n!r}")
    if alpha <= -1 or beta <= -1:
        raise DomainError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p = (alpha + 1) + (alpha + beta + 2) * (x - 1) / 2
    ab = alpha + beta
    for k in range(2, int(n) + 1):
        c = 2 * k + ab
        a1 = 2 * k * (k + ab) * (c - 2)
        a2 = (c - 1) * (alpha**2 - beta**2)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (k + alpha - 1) * (k + beta - 1) * c
        p_prev, p = p, ((a2 + a3 * x) * p - a4 * p_prev) / a1
    return p


def jacobi_poly_derivative(n, alpha, beta, x, order=1):
    """``d^order/dx^order P_n^{(alpha, beta)}``."""
    if order > n:
        return np.zeros_like(np.asarray(x, dtype=float))
    scale = np.exp(special.gammaln(alpha + beta + n + 1 + order) - special.gammaln(alpha + beta + n + 1))
    return scale / 2**order * jacobi_poly(n - order, alpha + order, beta + order, x)


@dataclass(frozen=True)
class SusyFactorization:
    m: float
    A_const: float = field(init=False)
    B_const: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "A_const", (1 + 2 * self.m) / 2)
        object.__setattr__(self, "B_const", B_CONST)

    def W(self, theta):
        _check_theta(theta)
        return self.B_const / np.sin(theta) - self.A_const / np.tan(theta)

    def dW(self, theta):
        _check_theta(theta)
        s = np.sin(theta)
        return (-self.B_const * np.cos(theta) + self.A_const) / s**2

    def V_plus(self, theta):
        """``W^2 - W'``: the shifted potential whose ground level is zero."""
        return self.W(theta) ** 2 - self.dW(theta)

    def V_minus(self, theta):
        """``W^2 + W'``: the supersymmetric partner."""
        return self.W(theta) ** 2 + self.dW(theta)

    def V_plus_scarf(self, theta):
        """Closed Scarf form of ``W^2 - W'``, for cross-checking."""
        _check_theta(theta)
        A, B = self.A_const, self.B_const
        s = np.sin(theta)
        return -(A**2) + (A**2 + B**2 - A) / s**2 - B * (2 * A - 1) * np.cos(theta) / s**2

    @property
    def offset(self):
        """Constant separating ``V_plus`` from the Dirac angular potential."""
        return -self.A_const**2

    def lower(self, f, df):
        """``(d/dtheta + W) f`` given samples of ``f`` and ``f'`` on a grid."""

        def apply(theta):
            return df(theta) + self.W(theta) * f(theta)

        return apply

    def raise_(self, f, df):
        """``(-d/dtheta + W) f``."""

        def apply(theta):
            return -df(theta) + self.W(theta) * f(theta)

        return apply


def susy_factorization(m):
    return SusyFactorization(float(m))


CONVENTIONS = ("shifted", "dirac")


def analytic_spectrum(m, n, convention="shifted"):
    """Closed-form ``omega^2`` of level ``n``.

    ``"shifted"`` is ``(A + n)^2 - A^2`` for ``W^2 - W'`` (ground level 0);
    ``"dirac"`` is ``(A + n)^2`` for the unshifted Dirac angular operator.
    ``omega`` itself is defined up to sign; only ``omega^2`` is returned.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"level must be a nonnegative integer, got {n!r}")
    A = (1 + 2 * m) / 2
    if convention == "shifted":
        return (A + n) ** 2 - A**2
    if convention == "dirac":
        return (A + n) ** 2
    raise DomainError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")


@dataclass(frozen=True)
class JacobiMode:
    """A bound state of ``-d^2 + W^2 - W'`` for superpotential constants (A, B)."""

    A: float
    B: float
    n: int
    norm_const: float = 1.0

    @property
    def m(self):
        return self.A - 0.5

    @property
    def alpha(self):
        return self.A - self.B - 0.5

    @property
    def beta(self):
        return self.A + self.B - 0.5

    @property
    def omega2(self):
        return (self.A + self.n) ** 2 - self.A**2

    def _parts(self, theta):
        _check_theta(theta)
        p, q = (self.A - self.B) / 2, (self.A + self.B) / 2
        c = np.cos(theta)
        u = (1 - c) ** p * (1 + c) ** q
        # u'/u and (u'/u)' in half-angle form
        half = np.asarray(theta, dtype=float) / 2
        L = p / np.tan(half) - q * np.tan(half)
        dL = -p / (2 * np.sin(half) ** 2) - q / (2 * np.cos(half) ** 2)
        return u, L, dL, c

    def __call__(self, theta):
        u, _, _, c = self._parts(theta)
        return self.norm_const * u * jacobi_poly(self.n, self.alpha, self.beta, c)

    def derivative(self, theta, order=1):
        """Analytic first or second derivative in theta."""
        u, L, dL, c = self._parts(theta)
        s = np.sin(theta)
        P = jacobi_poly(self.n, self.alpha, self.beta, c)
        P1 = jacobi_poly_derivative(self.n, self.alpha, self.beta, c, 1)
        Pt = -s * P1
        if order == 1:
            return self.norm_const * u * (L * P + Pt)
        if order == 2:
            P2 = jacobi_poly_derivative(self.n, self.alpha, self.beta, c, 2)
            Ptt = s**2 * P2 - c * P1
            return self.norm_const * u * ((L**2 + dL) * P + 2 * L * Pt + Ptt)
        raise DomainError("only first and second derivatives are provided")

    def normalized(self):
        """Copy scaled so that the integral of the square over (0, pi) is 1."""
        raw = JacobiMode(self.A, self.B, self.n, 1.0)
        val, _ = integrate.quad(lambda t: raw(t) ** 2, 0.0, np.pi, epsabs=1e-14, epsrel=1e-13, limit=200)
        return JacobiMode(self.A, self.B, self.n, 1.0 / np.sqrt(val))

    def interior_zeros(self, N=4000):
        t = np.pi * np.arange(1, N + 1) / (N + 1)
        v = self(t)
        return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))


def _mode(A, n, B=B_CONST):
    if n < 0 or int(n) != n:
        raise DomainError(f"level must be a nonnegative integer, got {n!r}")
    alpha, beta = A - B - 0.5, A + B - 0.5
    if alpha <= -1 or beta <= -1:
        raise DomainError(f"Jacobi parameters ({alpha}, {beta}) must exceed -1")
    return JacobiMode(float(A), float(B), int(n)).normalized()


def jacobi_eigenfunction(m, n):
    """Normalized level-``n`` eigenfunction of ``h_plus`` for parameter ``m``."""
    return _mode((1 + 2 * m) / 2, n)


def partner_eigenfunction(m, n):
    """Normalized level-``n`` eigenfunction of ``h_minus = -d^2 + W^2 + W'``.

    Built from the ``A -> A + 1`` parameters; its eigenvalue is the level
    ``n + 1`` value of ``h_plus``.
    """
    return _mode((1 + 2 * m) / 2 + 1, n)


def mirror_eigenfunction(m, n):
    """``Theta(pi - theta)``: eigenfunction of the Dirac potential ``V_-``
    obtained from ``V_+`` by ``m -> -m`` (equivalently ``theta -> pi - theta``)."""
    mode = jacobi_eigenfunction(m, n)
    return lambda theta: mode(np.pi - np.asarray(theta, dtype=float))


def normalization_closed_form(m, n):
    """Gamma-function normalization constant quoted alongside the Jacobi
    solutions; kept as a comparison value only."""
    return (
        2 ** (m + 2)
        / (2 * n + m + 2)
        * special.gamma(n + m + 1.5)
        * special.gamma(n + 1.5)
        / (special.factorial(n) * special.gamma(n + m + 2))
    )


def interior_grid(N):
    return np.pi * np.arange(1, N + 1) / (N + 1)


def h_plus_residual(m, n, lam, N=2000):
    """``max|h_plus Theta - lam Theta| / max|Theta|`` on an interior grid,
    with derivatives of ``Theta`` taken analytically."""
    fac = susy_factorization(m)
    mode = jacobi_eigenfunction(m, n)
    t = interior_grid(N)
    th = mode(t)
    r = -mode.derivative(t, 2) + fac.V_plus(t) * th - lam * th
    return float(np.max(np.abs(r)) / np.max(np.abs(th)))


def zero_mode_residual(m, N=2000):
    """``max|(d + W) Theta_0|`` for the normalized ground state."""
    fac = susy_factorization(m)
    mode = jacobi_eigenfunction(m, 0)
    t = interior_grid(N)
    return float(np.max(np.abs(mode.derivative(t) + fac.W(t) * mode(t))))


def superpotential_zero_mode(m, theta):
    """Unnormalized ``exp(-int W)`` = ``sin^A(theta) tan^{-B}(theta/2)``."""
    fac = susy_factorization(m)
    theta = np.asarray(theta, dtype=float)
    return np.sin(theta) ** fac.A_const * np.tan(theta / 2) ** (-fac.B_const)


@dataclass(frozen=True)
class IntertwineResult:
    residual: float
    sign: float
    omega: float


def intertwine(m, n, N=2000, derivative="analytic"):
    """Compare ``(d + W) Theta_{+,n}`` with ``omega_n Theta_{-,n-1}``.

    ``omega_n = sqrt((A+n)^2 - A^2)``.  The overall sign of the partner mode
    is matched at ``theta = pi/2``.  ``derivative="fd"`` uses fourth-order
    central differences instead of the analytic derivative.
    """
    if n < 1:
        raise DomainError("the intertwining relation needs n >= 1")
    fac = susy_factorization(m)
    plus = jacobi_eigenfunction(m, n)
    minus = partner_eigenfunction(m, n - 1)
    omega = np.sqrt(analytic_spectrum(m, n))
    t = interior_grid(N)
    if derivative == "analytic":
        d = plus.derivative(t)
        tt = t
        f = plus(t)
    elif derivative == "fd":
        from .separation import central_diff4

        h = t[1] - t[0]
        d = central_diff4(plus(t), h)
        tt = t[2:-2]
        f = plus(tt)
    else:
        raise DomainError(f"unknown derivative mode {derivative!r}")
    lowered = d + fac.W(tt) * f
    target = omega * minus(tt)
    mid = np.pi / 2
    ref = float(plus.derivative(mid) + fac.W(mid) * plus(mid))
    sign = np.sign(ref) * np.sign(float(minus(mid))) or 1.0
    return IntertwineResult(float(np.max(np.abs(lowered - sign * target))), float(sign), float(omega))


def intertwine_check(m, n, N=2000, derivative="analytic"):
    return intertwine(m, n, N, derivative).residual


def oracle_spectrum(potential, k, N):
    """Lowest ``k`` eigenvalues of ``-d^2 + potential`` on (0, pi), Dirichlet."""
    from .spectral_numeric import Grid1D, discretize, eigen_smallest

    return eigen_smallest(discretize(potential, Grid1D(0.0, np.pi, N)), k).eigenvalues


def oracle_spectrum_extrapolated(potential, k, N):
    """Richardson combination of the ``N`` and ``(N+1)/2 - 1`` grid spectra."""
    from .spectral_numeric import richardson_h2

    Nc = (N + 1) // 2 - 1
    fine = oracle_spectrum(potential, k, N)
    coarse = oracle_spectrum(potential, k, Nc)
    return richardson_h2(coarse, fine, np.pi / (Nc + 1), np.pi / (N + 1))
