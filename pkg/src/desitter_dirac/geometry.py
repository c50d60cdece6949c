"""Geometry of the expanding (2+1)-dimensional de Sitter-like background.

Line element::

    ds^2 = l^2 dtau^2 - l^2 sinh^2(tau) dtheta^2 - l^2 sinh^2(tau) sin^2(theta) dphi^2

Coordinates are ordered ``(tau, theta, phi)`` everywhere; local Lorentz
indices use ``eta = diag(+1, -1, -1)``.  All quantities are evaluated at a
single interior point; nothing depends on ``phi``.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

POLE_TOL = 1e-14

MINKOWSKI = np.diag([1.0, -1.0, -1.0])

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def check_interior(tau, theta):
    """Reject tau <= 0 and points on the polar axis."""
    if not np.isfinite(tau) or tau <= 0.0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    if abs(np.sin(theta)) < POLE_TOL:
        raise DomainError(f"theta={theta!r} lies on a pole (sin(theta)=0)")


def _check_ell(ell):
    if not ell > 0:
        raise DomainError(f"ell must be positive, got {ell!r}")


@dataclass(frozen=True)
class Metric3:
    ell: float
    g00: float
    g11: float
    g22: float

    @property
    def matrix(self):
        return np.diag([self.g00, self.g11, self.g22])

    @property
    def inverse(self):
        return np.diag([1.0 / self.g00, 1.0 / self.g11, 1.0 / self.g22])

    @property
    def determinant(self):
        return self.g00 * self.g11 * self.g22


def metric_at(ell, tau, theta):
    _check_ell(ell)
    check_interior(tau, theta)
    s = np.sinh(tau)
    return Metric3(
        ell=ell,
        g00=ell**2,
        g11=-(ell**2) * s**2,
        g22=-(ell**2) * s**2 * np.sin(theta) ** 2,
    )


def metric_derivatives(ell, tau, theta):
    """Analytic ``dg[mu, a, b] = d g_ab / d x^mu`` for the diagonal metric."""
    check_interior(tau, theta)
    s, c = np.sinh(tau), np.cosh(tau)
    st, ct = np.sin(theta), np.cos(theta)
    dg = np.zeros((3, 3, 3))
    dg[0, 1, 1] = -2 * ell**2 * s * c
    dg[0, 2, 2] = -2 * ell**2 * s * c * st**2
    dg[1, 2, 2] = -2 * ell**2 * s**2 * st * ct
    return dg


@dataclass(frozen=True)
class Vierbein:
    """Diagonal frame ``e_a^mu`` (rows: Lorentz index a, columns: mu)."""

    ell: float
    e0: float
    e1: float
    e2: float

    @property
    def matrix(self):
        return np.diag([self.e0, self.e1, self.e2])

    @property
    def coframe(self):
        """Inverse frame ``e^a_mu``, indexed ``[mu, a]``."""
        return np.diag([1.0 / self.e0, 1.0 / self.e1, 1.0 / self.e2])

    def inverse_metric(self):
        """``g^{mu nu} = e_a^mu e_b^nu eta^{ab}``."""
        e = self.matrix
        return e.T @ MINKOWSKI @ e


def vierbein_at(ell, tau, theta):
    _check_ell(ell)
    check_interior(tau, theta)
    s = np.sinh(tau)
    return Vierbein(ell=ell, e0=1.0 / ell, e1=1.0 / (ell * s), e2=1.0 / (ell * s * np.sin(theta)))


def coframe_derivatives(ell, tau, theta):
    """Analytic ``de[mu, nu, a] = d e^a_nu / d x^mu`` of the coframe."""
    check_interior(tau, theta)
    s, c = np.sinh(tau), np.cosh(tau)
    st, ct = np.sin(theta), np.cos(theta)
    de = np.zeros((3, 3, 3))
    de[0, 1, 1] = ell * c
    de[0, 2, 2] = ell * c * st
    de[1, 2, 2] = ell * s * ct
    return de


def christoffel_symbols(g_inv, dg):
    """Levi-Civita connection ``G[rho, nu, mu]`` from ``g^{-1}`` and ``dg[mu, a, b]``.

    Works for any metric; the derivative array can come from an analytic
    formula or from finite differences.
    """
    # term[k, n, m] = d_m g_kn + d_n g_km - d_k g_nm
    term = np.einsum("mkn->knm", dg) + np.einsum("nkm->knm", dg) - np.einsum("knm->knm", dg)
    return 0.5 * np.einsum("rk,knm->rnm", g_inv, term)


def christoffel_at(ell, tau, theta):
    g = metric_at(ell, tau, theta)
    return christoffel_symbols(g.inverse, metric_derivatives(ell, tau, theta))


@dataclass(frozen=True)
class GammaSet:
    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray

    @classmethod
    def standard(cls):
        """``gamma^0 = sigma^3``, ``gamma^1 = i sigma^1``, ``gamma^2 = i sigma^2``."""
        s1, s2, s3 = PAULI
        return cls(gamma0=s3.copy(), gamma1=1j * s1, gamma2=1j * s2)

    def __iter__(self):
        return iter((self.gamma0, self.gamma1, self.gamma2))

    def __getitem__(self, a):
        return (self.gamma0, self.gamma1, self.gamma2)[a]

    def anticommutator_defect(self):
        """Max entry of ``{g^a, g^b} - 2 eta^{ab} I`` over all index pairs."""
        worst = 0.0
        for a in range(3):
            for b in range(3):
                ga, gb = self[a], self[b]
                d = ga @ gb + gb @ ga - 2 * MINKOWSKI[a, b] * np.eye(2)
                worst = max(worst, float(np.abs(d).max()))
        return worst

    def adjoint_signs(self):
        """+1 where ``g^dagger = g``, -1 where ``g^dagger = -g``, 0 otherwise.

        The fixed representation gives (+1, -1, -1); the opposite convention for
        ``gamma^0`` is not enforced.
        """
        out = []
        for g in self:
            h = g.conj().T
            if np.array_equal(h, g):
                out.append(1)
            elif np.array_equal(h, -g):
                out.append(-1)
            else:
                out.append(0)
        return tuple(out)


@dataclass(frozen=True)
class SpinConnectionValues:
    gamma_mu0: np.ndarray
    gamma_mu1: np.ndarray
    gamma_mu2: np.ndarray

    def __iter__(self):
        return iter((self.gamma_mu0, self.gamma_mu1, self.gamma_mu2))

    def max_difference(self, other):
        return max(float(np.abs(a - b).max()) for a, b in zip(self, other))


def curved_gammas(vierbein, gammas):
    """``gamma^mu(x) = e_a^mu gamma^a``."""
    e = vierbein.matrix
    return [sum(e[a, mu] * gammas[a] for a in range(3)) for mu in range(3)]


def spin_connection_at(ell, tau, theta, gammas=None):
    """Spin connection from the general vierbein/Christoffel formula.

    ``Gamma_mu = 1/4 g_{lam rho} (d_mu e^a_nu e_a^rho - G^rho_{nu mu}) S^{lam nu}``
    with ``S^{lam nu} = [gamma^lam(x), gamma^nu(x)] / 2``.
    """
    gammas = GammaSet.standard() if gammas is None else gammas
    g = metric_at(ell, tau, theta).matrix
    vb = vierbein_at(ell, tau, theta)
    frame = vb.matrix  # e_a^rho, [a, rho]
    de = coframe_derivatives(ell, tau, theta)  # [mu, nu, a]
    chris = christoffel_at(ell, tau, theta)  # [rho, nu, mu]
    gx = curved_gammas(vb, gammas)
    S = [[0.5 * (gx[l] @ gx[n] - gx[n] @ gx[l]) for n in range(3)] for l in range(3)]

    out = []
    for mu in range(3):
        # K[nu, rho] = d_mu e^a_nu e_a^rho - G^rho_{nu mu}
        K = de[mu] @ frame - chris[:, :, mu].T
        C = g @ K.T  # C[lam, nu] = g_{lam rho} K[nu, rho]
        M = np.zeros((2, 2), dtype=complex)
        for lam in range(3):
            for nu in range(3):
                if C[lam, nu] != 0.0:
                    M += C[lam, nu] * S[lam][nu]
        out.append(0.25 * M)
    return SpinConnectionValues(*out)


def spin_connection_closed_form(ell, tau, theta, gammas=None):
    """Closed forms: ``Gamma_0 = 0``, ``Gamma_1 = -cosh(tau) g0 g1 / 2``,
    ``Gamma_2 = -(cosh(tau) sin(theta) g0 g2 + cos(theta) g1 g2) / 2``.

    ``ell`` drops out; it is accepted for symmetry with the general path.
    """
    _check_ell(ell)
    check_interior(tau, theta)
    g0, g1, g2 = GammaSet.standard() if gammas is None else gammas
    ch = np.cosh(tau)
    return SpinConnectionValues(
        np.zeros((2, 2), dtype=complex),
        -0.5 * ch * (g0 @ g1),
        -0.5 * (ch * np.sin(theta) * (g0 @ g2) + np.cos(theta) * (g1 @ g2)),
    )
