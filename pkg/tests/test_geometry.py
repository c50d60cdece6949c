import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desitter_dirac import geometry as G
from desitter_dirac.exceptions import DomainError

taus = st.floats(0.05, 4.0)
thetas = st.floats(0.05, np.pi - 0.05)
ells = st.floats(0.2, 5.0)


def test_gamma_clifford_exact():
    gam = G.GammaSet.standard()
    # entries are 0, +-1, +-i so the products are exact
    for a in range(3):
        for b in range(3):
            anti = gam[a] @ gam[b] + gam[b] @ gam[a]
            np.testing.assert_array_equal(anti, 2 * G.MINKOWSKI[a, b] * np.eye(2))
    assert gam.anticommutator_defect() == 0.0


def test_gamma_representation_and_adjoints():
    gam = G.GammaSet.standard()
    np.testing.assert_array_equal(gam.gamma0, np.diag([1, -1]))
    np.testing.assert_array_equal(gam.gamma1, np.array([[0, 1j], [1j, 0]]))
    np.testing.assert_array_equal(gam.gamma2, np.array([[0, 1], [-1, 0]]))
    assert gam.adjoint_signs() == (1, -1, -1)


def test_metric_entries():
    g = G.metric_at(2.0, 1.0, np.pi / 2)
    assert g.g00 == 4.0
    assert g.g11 == pytest.approx(-4 * np.sinh(1.0) ** 2)
    assert g.g22 == pytest.approx(g.g11)
    np.testing.assert_allclose(g.matrix @ g.inverse, np.eye(3), atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(ells, taus, thetas)
def test_vierbein_reproduces_inverse_metric(ell, tau, theta):
    vb = G.vierbein_at(ell, tau, theta)
    g = G.metric_at(ell, tau, theta)
    np.testing.assert_allclose(vb.inverse_metric(), g.inverse, rtol=1e-13, atol=1e-300)
    # coframe: g_mn = e^a_m e^b_n eta_ab
    cof = vb.coframe
    np.testing.assert_allclose(cof @ G.MINKOWSKI @ cof.T, g.matrix, rtol=1e-13)


def _metric_mp(ell, x):
    s = mp.sinh(x[0])
    return [ell**2, -(ell**2) * s**2, -(ell**2) * s**2 * mp.sin(x[1]) ** 2]


def _dg_oracle(ell, tau, theta):
    """Metric derivatives by mpmath numerical differentiation."""
    mp.mp.dps = 30
    dg = np.zeros((3, 3, 3))
    for mu in range(2):
        for a in range(3):
            f = lambda t, th, a=a: _metric_mp(ell, (t, th))[a]
            order = (1, 0) if mu == 0 else (0, 1)
            dg[mu, a, a] = float(mp.diff(f, (mp.mpf(tau), mp.mpf(theta)), order))
    return dg


@pytest.mark.parametrize("ell,tau,theta", [(1.0, 0.5, 1.0), (2.3, 1.7, 0.4), (0.7, 3.0, 2.9)])
def test_metric_derivatives_vs_mpmath(ell, tau, theta):
    np.testing.assert_allclose(G.metric_derivatives(ell, tau, theta), _dg_oracle(ell, tau, theta), rtol=1e-12, atol=1e-12)


def _christoffel_loops(ell, tau, theta):
    g = G.metric_at(ell, tau, theta)
    gi = np.diag(g.inverse)
    dg = _dg_oracle(ell, tau, theta)
    out = np.zeros((3, 3, 3))
    for r in range(3):
        for n in range(3):
            for m in range(3):
                out[r, n, m] = 0.5 * gi[r] * (dg[m, r, n] + dg[n, r, m] - dg[r, n, m])
    return out


@pytest.mark.parametrize("ell,tau,theta", [(1.0, 0.5, 1.0), (2.3, 1.7, 0.4)])
def test_christoffel_vs_loop_oracle(ell, tau, theta):
    np.testing.assert_allclose(G.christoffel_at(ell, tau, theta), _christoffel_loops(ell, tau, theta), atol=1e-11)


def test_christoffel_known_component():
    tau = 0.9
    G_ = G.christoffel_at(1.7, tau, 1.2)
    assert G_[0, 1, 1] == pytest.approx(np.sinh(tau) * np.cosh(tau), rel=1e-14)
    assert G_[1, 0, 1] == pytest.approx(1 / np.tanh(tau), rel=1e-14)
    # symmetric in the lower indices
    np.testing.assert_allclose(G_, np.transpose(G_, (0, 2, 1)), atol=1e-15)


def test_coframe_derivatives_vs_finite_difference():
    ell, tau, theta, h = 1.4, 0.8, 1.1, 1e-6
    de = G.coframe_derivatives(ell, tau, theta)
    fd0 = (G.vierbein_at(ell, tau + h, theta).coframe - G.vierbein_at(ell, tau - h, theta).coframe) / (2 * h)
    fd1 = (G.vierbein_at(ell, tau, theta + h).coframe - G.vierbein_at(ell, tau, theta - h).coframe) / (2 * h)
    np.testing.assert_allclose(de[0], fd0, atol=1e-8)
    np.testing.assert_allclose(de[1], fd1, atol=1e-8)
    np.testing.assert_array_equal(de[2], 0.0)


def _tetrad_postulate_connection(ell, tau, theta, h=1e-5):
    """Independent route: ``-1/8 omega_{mu ab} [g^a, g^b]`` with
    ``omega_mu^a_b = e^a_nu (d_mu e_b^nu + G^nu_{mu lam} e_b^lam)``."""
    gam = G.GammaSet.standard()
    vb = G.vierbein_at(ell, tau, theta)
    E, cof = vb.matrix, vb.coframe
    chris = _christoffel_loops(ell, tau, theta)
    dE = np.zeros((3, 3, 3))
    dE[0] = (G.vierbein_at(ell, tau + h, theta).matrix - G.vierbein_at(ell, tau - h, theta).matrix) / (2 * h)
    dE[1] = (G.vierbein_at(ell, tau, theta + h).matrix - G.vierbein_at(ell, tau, theta - h).matrix) / (2 * h)
    out = []
    for mu in range(3):
        om = np.einsum("na,bn->ab", cof, dE[mu]) + np.einsum("na,nl,bl->ab", cof, chris[:, mu, :], E)
        om_low = G.MINKOWSKI @ om
        M = sum(-0.125 * om_low[a, b] * (gam[a] @ gam[b] - gam[b] @ gam[a]) for a in range(3) for b in range(3))
        out.append(M)
    return out


@pytest.mark.parametrize("ell,tau,theta", [(1.0, 0.6, 1.0), (3.1, 2.2, 0.3), (0.5, 0.2, 2.6)])
def test_spin_connection_tetrad_oracle(ell, tau, theta):
    general = G.spin_connection_at(ell, tau, theta)
    oracle = _tetrad_postulate_connection(ell, tau, theta)
    for a, b in zip(general, oracle):
        np.testing.assert_allclose(a, b, atol=1e-8)


@settings(max_examples=100, deadline=None)
@given(ells, taus, thetas)
def test_spin_connection_matches_closed_form(ell, tau, theta):
    general = G.spin_connection_at(ell, tau, theta)
    closed = G.spin_connection_closed_form(ell, tau, theta)
    assert general.max_difference(closed) < 1e-10


def test_spin_connection_closed_form_values():
    c = G.spin_connection_closed_form(1.0, 1.0, np.pi / 2)
    gam = G.GammaSet.standard()
    np.testing.assert_array_equal(c.gamma_mu0, 0)
    np.testing.assert_allclose(c.gamma_mu1, -0.5 * np.cosh(1.0) * gam.gamma0 @ gam.gamma1)
    # cos(pi/2) kills the g1 g2 piece
    np.testing.assert_allclose(c.gamma_mu2, -0.5 * np.cosh(1.0) * gam.gamma0 @ gam.gamma2, atol=1e-16)


def test_spin_connection_independent_of_ell():
    a = G.spin_connection_at(0.5, 1.2, 0.7)
    b = G.spin_connection_at(4.0, 1.2, 0.7)
    assert a.max_difference(b) < 1e-13


@pytest.mark.parametrize("tau,theta", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, np.pi), (np.nan, 1.0)])
def test_domain_errors(tau, theta):
    with pytest.raises(DomainError):
        G.metric_at(1.0, tau, theta)
    with pytest.raises(DomainError):
        G.spin_connection_at(1.0, tau, theta)


def test_nonpositive_ell_rejected():
    with pytest.raises(DomainError):
        G.vierbein_at(0.0, 1.0, 1.0)
