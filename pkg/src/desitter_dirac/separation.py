"""Separated angular and temporal equations of the Dirac system.

With ``psi_j = T_j(tau) exp(i m phi) Theta_j(theta)`` and the gauge
``A_1(theta) = i cot(theta) / (2e)`` the angular problem reduces to the pair
of Schrodinger-like operators ``-d^2 + V_pm`` and the temporal problem to
``-y'' + U_k(tau) y = 0`` with ``T_k = csch(tau)^{3/2} y_k``.
"""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .exceptions import DomainError
from .geometry import POLE_TOL


def _check_theta(theta):
    s = np.sin(np.asarray(theta, dtype=float))
    if np.any(np.abs(s) < POLE_TOL):
        raise DomainError("angular quantity evaluated on a pole (sin(theta)=0)")


def _check_tau(tau):
    t = np.asarray(tau, dtype=float)
    if np.any(t == 0.0):
        raise DomainError("tau = 0 is singular (csch)")


@dataclass(frozen=True)
class GaugeChoice:
    """Angular gauge ``A_1(theta) = i cot(theta) / (2e)``."""

    e: float = 1.0

    def __post_init__(self):
        if self.e == 0:
            raise DomainError("charge e must be nonzero")

    def A1(self, theta):
        _check_theta(theta)
        return 1j / np.tan(theta) / (2 * self.e)

    def dA1(self, theta):
        _check_theta(theta)
        return -0.5j / (self.e * np.sin(theta) ** 2)


@dataclass(frozen=True)
class AngularPotentialPair:
    m: float

    def V_plus(self, theta):
        _check_theta(theta)
        s = np.sin(theta)
        return -self.m * np.cos(theta) / s**2 + self.m**2 / s**2

    def V_minus(self, theta):
        _check_theta(theta)
        s = np.sin(theta)
        return self.m * np.cos(theta) / s**2 + self.m**2 / s**2


def angular_potentials(m):
    return AngularPotentialPair(float(m))


def second_order_angular_coefficients(m, theta, gauge, component):
    """First-derivative coefficient and potential of the second-order
    angular equations before the gauge is specialized.

    ``component=1`` gives the equation for ``Theta_1``; ``2`` for ``Theta_2``.
    Both use ``A_1`` for the vector potential in the damping and square terms.
    Returns ``(c1, V)`` such that the operator reads ``-f'' + c1 f' + V f``.
    """
    _check_theta(theta)
    sign = {1: -1.0, 2: 1.0}[component]
    eA = gauge.e * gauge.A1(theta)
    cot = 1.0 / np.tan(theta)
    csc = 1.0 / np.sin(theta)
    c1 = -2j * eA - cot
    V = (
        (eA - 0.5j * cot) ** 2
        + sign * m * cot * csc
        + (m**2 + 0.5) * csc**2
        - 1j * gauge.e * gauge.dA1(theta)
    )
    return c1, V


@dataclass(frozen=True)
class TemporalPotential:
    ellM: float
    omega2: float
    k: int

    @property
    def eps(self):
        return -1 if self.k == 1 else 1

    def __call__(self, tau):
        _check_tau(tau)
        tau = np.asarray(tau, dtype=float)
        return (
            0.25
            - self.ellM**2
            + self.eps * 1j * self.ellM / np.tanh(tau)
            - (self.omega2 + 0.25) / np.sinh(tau) ** 2
        )


def temporal_potential(ellM, omega2, k):
    if k not in (1, 2):
        raise DomainError(f"component k must be 1 or 2, got {k!r}")
    return TemporalPotential(float(ellM), float(omega2), k)


def central_diff4(f, h):
    """Fourth-order central first derivative at interior samples ``f[2:-2]``."""
    f = np.asarray(f)
    return (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)


def _uniform(grid):
    x = np.asarray(grid, dtype=float)
    if x.ndim != 1 or len(x) < 5:
        raise DomainError("residual grids need at least 5 uniform points")
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0.0):
        raise DomainError("residual grids must be uniform")
    return x, h


def first_order_residuals(T1, T2, Theta1, Theta2, m, omega, ellM, tau_grid, theta_grid):
    """Residuals of the four first-order separated equations.

    Temporal pair (with ``omega_1 = omega_2 = omega``)::

        (d + coth + i lM) T1 - i omega csch T2 = 0
        -(d + coth - i lM) T2 + i omega csch T1 = 0

    Angular pair in the gauge ``A_1 = i cot / (2e)``, where ``cot/2 + i e A_1``
    vanishes identically::

        (-d - m csc) Theta2 - omega Theta1 = 0
        ( d - m csc) Theta1 - omega Theta2 = 0

    Derivatives are fourth-order central differences; the two outermost
    samples at each end of a grid are excluded.  Returns max-abs residuals
    keyed by equation.
    """
    tau, ht = _uniform(tau_grid)
    th, hth = _uniform(theta_grid)
    if np.any(tau <= 0.0):
        raise DomainError("tau grid must be strictly positive")
    if np.any(np.abs(np.sin(th)) < POLE_TOL):
        raise DomainError("theta grid touches a pole")

    t1 = np.asarray(T1(tau), dtype=complex)
    t2 = np.asarray(T2(tau), dtype=complex)
    a1 = np.asarray(Theta1(th), dtype=complex)
    a2 = np.asarray(Theta2(th), dtype=complex)

    ti = tau[2:-2]
    coth, csch = 1.0 / np.tanh(ti), 1.0 / np.sinh(ti)
    rt1 = central_diff4(t1, ht) + (coth + 1j * ellM) * t1[2:-2] - 1j * omega * csch * t2[2:-2]
    rt2 = -(central_diff4(t2, ht) + (coth - 1j * ellM) * t2[2:-2]) + 1j * omega * csch * t1[2:-2]

    thi = th[2:-2]
    csc = 1.0 / np.sin(thi)
    ra2 = -central_diff4(a2, hth) - m * csc * a2[2:-2] - omega * a1[2:-2]
    ra1 = central_diff4(a1, hth) - m * csc * a1[2:-2] - omega * a2[2:-2]

    def mx(r):
        return float(np.max(np.abs(r))) if r.size else 0.0

    return {"temporal_1": mx(rt1), "temporal_2": mx(rt2), "angular_2": mx(ra2), "angular_1": mx(ra1)}


def first_order_residual(T1, T2, Theta1, Theta2, m, omega, ellM, tau_grid, theta_grid):
    """Largest of the four residuals from :func:`first_order_residuals`."""
    return max(first_order_residuals(T1, T2, Theta1, Theta2, m, omega, ellM, tau_grid, theta_grid).values())


def integrate_temporal_pair(omega, ellM, tau_span, initial=(1.0, 0.0), rtol=1e-12, atol=1e-14):
    """Solve the temporal first-order pair numerically from ``initial`` at
    ``tau_span[0]``; returns dense-output callables ``(T1, T2)``."""
    lo, hi = tau_span
    if lo <= 0.0:
        raise DomainError("temporal integration must start at tau > 0")

    def rhs(t, y):
        T1, T2 = y
        coth, csch = 1.0 / np.tanh(t), 1.0 / np.sinh(t)
        return [
            -(coth + 1j * ellM) * T1 + 1j * omega * csch * T2,
            -(coth - 1j * ellM) * T2 + 1j * omega * csch * T1,
        ]

    sol = solve_ivp(rhs, (lo, hi), np.asarray(initial, dtype=complex), method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True)
    if not sol.success:
        raise RuntimeError(f"temporal integration failed: {sol.message}")
    return (lambda t: sol.sol(t)[0]), (lambda t: sol.sol(t)[1])


def assemble_spinor(T1, T2, Theta1, Theta2, m):
    """Return ``psi(tau, theta, phi) -> (psi_1, psi_2)`` (broadcasting)."""

    def psi(tau, theta, phi):
        phase = np.exp(1j * m * np.asarray(phi, dtype=float))
        return (
            np.asarray(T1(tau)) * phase * np.asarray(Theta1(theta)),
            np.asarray(T2(tau)) * phase * np.asarray(Theta2(theta)),
        )

    return psi
