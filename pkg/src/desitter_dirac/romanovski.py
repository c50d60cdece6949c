"""Romanovski polynomials and the time-dependent solutions built from them.

``R_nu^{(a,b)}`` is the monic polynomial solution of

    (1 + x^2) R'' + (2 b x + a) R' - nu (nu - 1 + 2b) R = 0

obtained by matching coefficients from the top degree down.  With rational
``a`` and ``b`` (``int`` or :class:`fractions.Fraction`) the coefficients are
exact rationals.

In the variable ``z`` the temporal equation

    -(1 + z^2) Y'' - z Y' + (-(lM)^2 / (1 + z^2) + omega^2 + lM eps z / (1 + z^2)) Y = 0

is solved by ``Y = (z + i)^{-(A + iB)/2} (z - i)^{-(A - iB)/2} R_nu^{(a,b)}(z)``
with ``(a, b) = (-2B, 1/2 - A)`` whenever ``A^2 + A - B^2 = (lM)^2``,
``B (2A + 1) = lM eps`` and ``A^2 - omega^2 = -nu (nu - 1 + 2b)``.
"""
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy import integrate, optimize

from .exceptions import DegeneracyError, DivergenceError, DomainError


def _is_exact(*vals):
    return all(isinstance(v, Rational) for v in vals)


@dataclass(frozen=True)
class RomanovskiPoly:
    nubar: int
    a: object
    b: object
    coeffs: tuple  # ascending powers, coeffs[-1] == 1

    normalization = "monic"

    @property
    def exact(self):
        return _is_exact(self.a, self.b, *self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def eigen_term(self):
        return self.nubar * (self.nubar - 1 + 2 * self.b)

    def __call__(self, x):
        c = np.array([float(v) for v in self.coeffs])
        return np.polynomial.polynomial.polyval(x, c)

    def derivative(self, x, order=1):
        c = np.array([float(v) for v in self.coeffs])
        return np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyder(c, order))

    def ode_residual_coeffs(self):
        """Coefficients of the defining ODE applied to this polynomial.

        Every entry is exactly zero for exact input; the list is in
        ascending powers of ``x``.
        """
        c = list(self.coeffs) + [0, 0]
        lam = self.eigen_term
        out = []
        for k in range(self.degree + 1):
            out.append(
                (k + 2) * (k + 1) * c[k + 2]
                + k * (k - 1) * c[k]
                + 2 * self.b * k * c[k]
                + self.a * (k + 1) * c[k + 1]
                - lam * c[k]
            )
        return out


def romanovski_poly(nubar, a, b):
    """Monic ``R_nubar^{(a, b)}`` by downward coefficient recurrence.

    Raises :class:`DegeneracyError` when ``k(k - 1 + 2b) = nu(nu - 1 + 2b)``
    for some ``k < nu``.
    """
    if nubar < 0 or int(nubar) != nubar:
        raise DomainError(f"nubar must be a nonnegative integer, got {nubar!r}")
    nubar = int(nubar)
    exact = _is_exact(a, b)
    if exact:
        a, b = Fraction(a), Fraction(b)
        one, zero = Fraction(1), Fraction(0)
    else:
        a, b = float(a), float(b)
        one, zero = 1.0, 0.0
    lam = nubar * (nubar - 1 + 2 * b)
    c = [zero] * (nubar + 3)
    c[nubar] = one
    for k in range(nubar - 1, -1, -1):
        den = k * (k - 1 + 2 * b) - lam
        if den == 0 or (not exact and abs(den) < 1e-12 * max(1.0, abs(lam))):
            raise DegeneracyError(
                f"degenerate recurrence for nubar={nubar}, b={b}: denominator vanishes at k={k}", k=k
            )
        c[k] = -((k + 2) * (k + 1) * c[k + 2] + a * (k + 1) * c[k + 1]) / den
    return RomanovskiPoly(nubar, a, b, tuple(c[: nubar + 1]))


def romanovski_weight(z, a, b):
    """``(1 + z^2)^{b - 1} exp(a arctan z)``."""
    z = np.asarray(z, dtype=float)
    return (1 + z**2) ** (float(b) - 1) * np.exp(float(a) * np.arctan(z))


def orthogonality_converges(nu1, nu2, b):
    return nu1 + nu2 + 2 * (float(b) - 1) < -1


def orthogonality_integral(nu1, nu2, a, b, epsabs=1e-10):
    """Weighted overlap of two Romanovski polynomials over the real line.

    Integrated in ``u = arctan z`` on ``(-pi/2, pi/2)``.  Raises
    :class:`DivergenceError` outside the finite-orthogonality region.
    """
    if not orthogonality_converges(nu1, nu2, b):
        raise DivergenceError(
            f"integral diverges: nu1 + nu2 + 2(b - 1) = {nu1 + nu2 + 2 * (float(b) - 1)} >= -1"
        )
    p1 = romanovski_poly(nu1, a, b)
    p2 = romanovski_poly(nu2, a, b)
    af, bf = float(a), float(b)

    def integrand(u):
        c = np.cos(u)
        z = np.tan(u)
        # (1+z^2)^{b-1} dz = cos(u)^{-2b} du
        return c ** (-2 * bf) * np.exp(af * u) * p1(z) * p2(z)

    val, _ = integrate.quad(integrand, -np.pi / 2, np.pi / 2, epsabs=epsabs, epsrel=1e-12, limit=400)
    return float(val)


@dataclass(frozen=True)
class ModelConstants:
    ellM: float
    eps: int
    A_big: float
    B_big: float
    a1: float

    @property
    def a(self):
        return -2 * self.B_big

    @property
    def b(self):
        return 0.5 - self.A_big

    @property
    def nu(self):
        """The combination ``sqrt(2)/(16 lM eps) sqrt(a1 - 1 - 4 l^2M^2) (a1 + 1 + 4 l^2M^2)``."""
        L = self.ellM
        s = np.sqrt(max(self.a1 - 1 - 4 * L**2, 0.0))
        return np.sqrt(2) / (16 * L * self.eps) * s * (self.a1 + 1 + 4 * L**2)

    def chain_conditions(self):
        """Residuals of the two conditions the ansatz imposes on (A, B)."""
        A, B, L = self.A_big, self.B_big, self.ellM
        return A**2 + A - B**2 - L**2, B * (2 * A + 1) - L * self.eps


def model_constants(ellM, eps):
    if ellM == 0:
        raise DomainError("ellM must be nonzero")
    if eps not in (-1, 1):
        raise DomainError(f"eps must be -1 or +1, got {eps!r}")
    L = float(ellM)
    a1 = np.sqrt((1 + 4 * L**2) ** 2 + 16 * L**2)
    s = np.sqrt(max(a1 - 1 - 4 * L**2, 0.0))
    A = (-8 * L * eps + 4 * np.sqrt(2) * L**2 * s + np.sqrt(2) * (1 + a1) * s) / (16 * L * eps)
    B = np.sqrt(max((a1 - 1) / 8 - L**2 / 2, 0.0))
    return ModelConstants(L, int(eps), float(A), float(B), float(a1))


def eps_for_component(k):
    if k not in (1, 2):
        raise DomainError(f"component k must be 1 or 2, got {k!r}")
    return -1 if k == 1 else 1


Z_MAPS = ("cot", "coth")


@dataclass(frozen=True)
class TimeSolution:
    k: int
    nubar: int
    constants: ModelConstants
    omega2: float
    poly: RomanovskiPoly
    z_map: str = "cot"

    @property
    def exponents(self):
        A, B = self.constants.A_big, self.constants.B_big
        return -(A + 1j * B) / 2, -(A - 1j * B) / 2

    def _check_z(self, z):
        z = np.asarray(z)
        if np.iscomplexobj(z) and np.any(z.imag != 0):
            raise DomainError("evaluation restricted to real z (branch cuts along z = +-i)")
        return np.asarray(z, dtype=float)

    def prefactor_log_derivs(self, z):
        """First and second log-derivatives of the branch prefactor."""
        al, be = self.exponents
        zp, zm = z + 1j, z - 1j
        L1 = al / zp + be / zm
        L2 = -al / zp**2 - be / zm**2
        return L1, L2

    def ybar(self, z):
        z = self._check_z(z)
        al, be = self.exponents
        return (z + 1j) ** al * (z - 1j) ** be * self.poly(z)

    def ybar_derivatives(self, z):
        """``(Y, Y', Y'')`` at real ``z``."""
        z = self._check_z(z)
        al, be = self.exponents
        F = (z + 1j) ** al * (z - 1j) ** be
        L1, L2 = self.prefactor_log_derivs(z)
        R, R1, R2 = self.poly(z), self.poly.derivative(z, 1), self.poly.derivative(z, 2)
        Y = F * R
        Y1 = F * (L1 * R + R1)
        Y2 = F * ((L1**2 + L2) * R + 2 * L1 * R1 + R2)
        return Y, Y1, Y2

    def y(self, z):
        z = self._check_z(z)
        return (1 + z**2) ** -0.25 * self.ybar(z)

    def z_of_tau(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.z_map == "cot":
            if np.any((tau <= 0) | (tau >= np.pi)):
                raise DomainError("the cot map needs tau in (0, pi)")
            return 1.0 / np.tan(tau)
        if np.any(tau <= 0):
            raise DomainError("the coth map needs tau > 0")
        return 1.0 / np.tanh(tau)

    def T(self, tau):
        """``csch(tau)^{3/2} y(z(tau))`` through the configured map."""
        tau = np.asarray(tau, dtype=float)
        return np.sinh(tau) ** -1.5 * self.y(self.z_of_tau(tau))

    @property
    def map_caveat(self):
        return None if self.z_map == "cot" else "coth map: z in (1, inf) only covers part of the real z line"


def time_solution(k, nubar, constants, z_map="cot"):
    """Time-part solution of component ``k`` with ``omega^2`` from the
    quantization condition ``A^2 - omega^2 = -nu (nu - 1 + 2b)``."""
    eps = eps_for_component(k)
    if constants.eps != eps:
        raise DomainError(f"constants were built for eps={constants.eps}, component {k} needs eps={eps}")
    if z_map not in Z_MAPS:
        raise DomainError(f"unknown z map {z_map!r}; choose from {Z_MAPS}")
    poly = romanovski_poly(nubar, constants.a, constants.b)
    omega2 = constants.A_big**2 + poly.eigen_term
    return TimeSolution(k, int(nubar), constants, float(omega2), poly, z_map)


def reduced_equation_residual(sol, z):
    """Max relative residual of the reduced temporal equation at real ``z``."""
    z = np.asarray(z, dtype=float)
    Y, Y1, Y2 = sol.ybar_derivatives(z)
    L, eps = sol.constants.ellM, sol.constants.eps
    q = 1 + z**2
    terms = (-q * Y2, -z * Y1, (-(L**2) / q + sol.omega2 + L * eps * z / q) * Y)
    res = sum(terms)
    scale = np.maximum.reduce([np.abs(t) for t in terms])
    return float(np.max(np.abs(res) / np.where(scale > 0, scale, 1.0)))


def polynomial_equation_residual(sol, z):
    """Residual of ``(1+z^2) Q'' + (z(1-2A) - 2B) Q' + (A^2 - omega^2) Q`` where
    ``Q`` strips the branch prefactor from ``ybar`` (so ``Q`` is the polynomial)."""
    z = np.asarray(z, dtype=float)
    Y = sol.ybar(z)
    al, be = sol.exponents
    Q = (z + 1j) ** (-al) * (z - 1j) ** (-be) * Y
    R = sol.poly
    A, B = sol.constants.A_big, sol.constants.B_big
    Q1, Q2 = R.derivative(z, 1), R.derivative(z, 2)
    terms = ((1 + z**2) * Q2, (z * (1 - 2 * A) - 2 * B) * Q1, (A**2 - sol.omega2) * Q)
    res = sum(terms)
    scale = np.maximum.reduce([np.abs(t) for t in terms])
    return float(np.max(np.abs(res) / np.where(scale > 0, scale, 1.0)))


def unreduced_equation_residual(sol, z):
    """Residual of the unreduced ``z``-equation for ``y = (1+z^2)^{-1/4} ybar``.

    Reported, not asserted: the reduction to the ``ybar`` equation leaves an
    extra ``(z^2 + 2) / (2 (1 + z^2))`` term, so this is generally O(1).
    """
    z = np.asarray(z, dtype=float)
    Y, Y1, Y2 = sol.ybar_derivatives(z)
    q = 1 + z**2
    s = q**-0.25
    s1 = -0.5 * z * q**-1.25
    s2 = -0.5 * q**-1.25 + 1.25 * z**2 * q**-2.25
    y, y1, y2 = s * Y, s1 * Y + s * Y1, s2 * Y + 2 * s1 * Y1 + s * Y2
    L, eps = sol.constants.ellM, sol.constants.eps
    terms = (-q * y2, -2 * z * y1, (-(L**2 - 0.25) / q + sol.omega2 + 0.25 + L * eps * z / q) * y)
    res = sum(terms)
    scale = np.maximum.reduce([np.abs(t) for t in terms])
    return float(np.max(np.abs(res) / np.where(scale > 0, scale, 1.0)))


@dataclass(frozen=True)
class EigenRoot:
    nubar: float
    quantizable: bool


def eigencondition(A_big, omega2):
    """Real roots of ``A^2 - omega^2 = -nu (nu - 1 + 2b)`` with ``b = 1/2 - A``.

    The equation reduces to ``(nu - A)^2 = omega^2``.  A root is flagged
    quantizable when it is a nonnegative integer (to 1e-9).
    """
    if omega2 < 0:
        return []
    w = np.sqrt(omega2)
    roots = sorted({A_big - w, A_big + w})
    out = []
    for r in roots:
        q = r > -1e-9 and abs(r - round(r)) < 1e-9
        out.append(EigenRoot(float(r), bool(q)))
    return out


def nu_from_ellM(ellM, eps):
    return model_constants(ellM, eps).nu


def ellM_from_nu(nu, eps, bracket=(1e-6, 1e6)):
    """Invert the ``nu(lM)`` relation for ``lM`` by bracketed root finding.

    ``nu`` runs monotonically from ``eps/2`` (``lM -> 0``) to ``eps * inf``
    for positive ``lM``; values outside that range raise :class:`DomainError`.
    """
    lo, hi = bracket

    def f(L):
        return nu_from_ellM(L, eps) - nu

    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise DomainError(f"nu={nu} is not attained for lM in {bracket} with eps={eps}")
    return optimize.brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


@dataclass(frozen=True)
class ConsistencyReport:
    m: float
    n: int
    nu: float
    energy_match_residual: float
    A_branch_residual: float
    m_condition_residual: float
    m_solved: float
    m_solved_quarter: float
    ellM_solved: float
    ell_solved: float
    nu_roundtrip_error: float
    omega2_angular: float
    omega2_time: float
    A_minus_nu: float

    def as_dict(self):
        return dict(self.__dict__)


def solve_m_from_n(n, rhs=0.5):
    """Solve ``n^2 + 2 m n + n = rhs`` for ``m``."""
    if n == 0:
        raise DomainError("n = 0 leaves m undetermined (division by zero)")
    return (rhs - n - n**2) / (2 * n)


def quantum_consistency(m, n, nu, constants, M=1.0):
    """Evaluate the coupling conditions between angular and time quantum numbers.

    ``nu`` is the Romanovski degree entering the time-part quantization; the
    ``lM`` inversion treats ``nu`` as the value of ``constants.nu`` to be
    attained.  ``m_solved`` uses the quoted right-hand side 1/2;
    ``m_solved_quarter`` uses 1/4, which is what ``A = nu_lM - 1/2`` implies.
    """
    A = constants.A_big
    b = constants.b
    eig = nu * (nu - 1 + 2 * b)
    w2_ang = (m + n + 0.5) ** 2 - (m + 0.5) ** 2
    r_energy = A**2 + (m + 0.5) ** 2 - (m + n + 0.5) ** 2 + eig
    root = np.sqrt(max(n + 2 * m * n + n**2, 0.0))
    r_branch = min(abs(A - (nu + root)), abs(A - (nu - root)))
    r_mcond = n**2 + 2 * m * n + n - 0.5
    m_half = solve_m_from_n(n, 0.5)
    m_quarter = solve_m_from_n(n, 0.25)
    try:
        L = ellM_from_nu(nu, constants.eps)
        rt = abs(nu_from_ellM(L, constants.eps) - nu)
    except DomainError:
        L, rt = float("nan"), float("nan")
    return ConsistencyReport(
        m=float(m),
        n=int(n),
        nu=float(nu),
        energy_match_residual=float(r_energy),
        A_branch_residual=float(r_branch),
        m_condition_residual=float(r_mcond),
        m_solved=float(m_half),
        m_solved_quarter=float(m_quarter),
        ellM_solved=float(L),
        ell_solved=float(L / M),
        nu_roundtrip_error=float(rt),
        omega2_angular=float(w2_ang),
        omega2_time=float(A**2 + eig),
        A_minus_nu=float(A - constants.nu),
    )
