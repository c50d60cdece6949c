import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desitter_dirac import separation as SEP
from desitter_dirac.exceptions import DomainError
from desitter_dirac.susy_angular import interior_grid, jacobi_eigenfunction

thetas = st.floats(0.01, np.pi - 0.01)


def test_gauge_field():
    g = SEP.GaugeChoice(2.0)
    assert g.A1(np.pi / 2) == pytest.approx(0.0, abs=1e-16)
    t = np.linspace(0.2, 2.9, 9)
    assert np.all(np.real(g.e * g.A1(t)) == 0.0)
    h = 1e-6
    np.testing.assert_allclose(g.dA1(t), (g.A1(t + h) - g.A1(t - h)) / (2 * h), rtol=1e-7)
    with pytest.raises(DomainError):
        SEP.GaugeChoice(0.0)


def test_potentials_reference_values():
    p = SEP.angular_potentials(1)
    assert p.V_plus(np.pi / 2) == pytest.approx(1.0)
    assert p.V_minus(np.pi / 2) == pytest.approx(1.0)
    mp.mp.dps = 30
    th = mp.pi / 3
    vp = float(-mp.cot(th) * mp.csc(th) + mp.csc(th) ** 2)
    vm = float(mp.cot(th) * mp.csc(th) + mp.csc(th) ** 2)
    assert vp == pytest.approx(2 / 3, abs=1e-15)
    assert p.V_plus(np.pi / 3) == pytest.approx(vp, abs=1e-14)
    assert p.V_minus(np.pi / 3) == pytest.approx(vm, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), thetas)
def test_mirror_symmetry(m, theta):
    p = SEP.angular_potentials(m)
    assert p.V_plus(np.pi - theta) == pytest.approx(p.V_minus(theta), rel=1e-9, abs=1e-9)


def test_poles_rejected():
    with pytest.raises(DomainError):
        SEP.angular_potentials(1).V_plus(0.0)
    with pytest.raises(DomainError):
        SEP.angular_potentials(1).V_minus(np.array([0.5, np.pi]))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 3.0), thetas, st.floats(0.3, 3.0))
def test_gauge_reduces_second_order_equations(m, theta, e):
    gauge = SEP.GaugeChoice(e)
    p = SEP.angular_potentials(m)
    for comp, V in ((1, p.V_plus), (2, p.V_minus)):
        c1, Vs = SEP.second_order_angular_coefficients(m, theta, gauge, comp)
        assert abs(c1) < 1e-12 * max(1.0, abs(1 / np.tan(theta)))
        assert abs(Vs - V(theta)) < 1e-12 * max(1.0, abs(V(theta)), 1 / np.sin(theta) ** 2)


def test_temporal_potential_values():
    U = SEP.temporal_potential(1.0, 4.0, 2)
    assert U(40.0) == pytest.approx(-0.75 + 1j, abs=1e-12)
    mp.mp.dps = 30
    t = mp.mpf(1)
    ref = mp.mpf(1) / 4 - 1 + 1j * mp.coth(t) - (4 + mp.mpf(1) / 4) * mp.csch(t) ** 2
    assert U(1.0) == pytest.approx(complex(ref), abs=1e-14)
    assert SEP.temporal_potential(1.0, 4.0, 1).eps == -1 and U.eps == 1


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 10.0), st.floats(0.0, 3.0), st.floats(0.0, 20.0))
def test_temporal_potentials_conjugate(tau, ellM, w2):
    U1 = SEP.temporal_potential(ellM, w2, 1)(tau)
    U2 = SEP.temporal_potential(ellM, w2, 2)(tau)
    assert U1 == np.conj(U2)


def test_temporal_potential_rejects_bad_input():
    with pytest.raises(DomainError):
        SEP.temporal_potential(1.0, 1.0, 3)
    with pytest.raises(DomainError):
        SEP.temporal_potential(1.0, 1.0, 1)(0.0)


def _angular_pair(m, n):
    """Exact first-order angular pair: Jacobi mode and its signed mirror."""
    mode = jacobi_eigenfunction(m, n)
    sign = (-1) ** (n + 1)
    return mode, (lambda t: sign * mode(np.pi - np.asarray(t))), m + n + 0.5


@pytest.fixture(scope="module")
def exact_solution():
    m, n, ellM = 1.0, 1, 0.8
    th1, th2, omega = _angular_pair(m, n)
    T1, T2 = SEP.integrate_temporal_pair(omega, ellM, (0.4, 3.2), initial=(1.0, 0.3j))
    tau = np.linspace(0.5, 3.0, 2000)
    theta = interior_grid(2000)[100:-100]
    return dict(T1=T1, T2=T2, Theta1=th1, Theta2=th2, m=m, omega=omega, ellM=ellM, tau_grid=tau, theta_grid=theta)


def test_exact_solution_residual(exact_solution):
    res = SEP.first_order_residuals(**exact_solution)
    assert set(res) == {"temporal_1", "temporal_2", "angular_1", "angular_2"}
    assert max(res.values()) < 1e-7
    assert SEP.first_order_residual(**exact_solution) == max(res.values())


def test_perturbed_solution_detected(exact_solution):
    bad = dict(exact_solution)
    bad["Theta1"] = lambda t: exact_solution["Theta1"](t) + 0.01 * np.sin(t)
    assert SEP.first_order_residual(**bad) > 1e-3


def test_wrong_separation_constant_detected(exact_solution):
    bad = dict(exact_solution, omega=exact_solution["omega"] + 0.05)
    assert SEP.first_order_residuals(**bad)["angular_1"] > 1e-3


def test_global_phase_invariance(exact_solution):
    ph = np.exp(0.7j)
    rot = dict(exact_solution)
    for k in ("T1", "T2"):
        rot[k] = (lambda f: lambda t: ph * f(t))(exact_solution[k])
    assert SEP.first_order_residual(**rot) == pytest.approx(SEP.first_order_residual(**exact_solution), rel=1e-6, abs=1e-12)


def test_zero_functions_residual():
    z = lambda x: np.zeros_like(x)
    r = SEP.first_order_residual(z, z, z, z, 1.0, 2.5, 1.0, np.linspace(0.5, 2, 50), np.linspace(0.3, 2.5, 50))
    assert r == 0.0


@pytest.mark.parametrize("m,n", [(0.5, 0), (1.0, 2), (2.0, 3)])
def test_angular_pair_exact_for_dirac_frequency(m, n):
    th1, th2, omega = _angular_pair(m, n)
    z = lambda x: np.zeros_like(x, dtype=complex)
    res = SEP.first_order_residuals(z, z, th1, th2, m, omega, 1.0, np.linspace(0.5, 2, 50), interior_grid(2000)[50:-50])
    assert max(res["angular_1"], res["angular_2"]) < 1e-7
    assert omega**2 == pytest.approx((m + 0.5 + n) ** 2)


def test_temporal_second_order_reduction():
    ellM, omega = 0.8, 2.5
    T1, T2 = SEP.integrate_temporal_pair(omega, ellM, (0.5, 3.0), initial=(1.0, 0.3j))
    t = np.linspace(0.6, 2.9, 2001)
    h = t[1] - t[0]
    for k, T in ((1, T1), (2, T2)):
        y = np.sinh(t) ** 1.5 * T(t)
        d2 = (-y[:-4] + 16 * y[1:-3] - 30 * y[2:-2] + 16 * y[3:-1] - y[4:]) / (12 * h * h)
        U = SEP.temporal_potential(ellM, omega**2, k)(t[2:-2])
        assert np.max(np.abs(-d2 + U * y[2:-2])) / np.max(np.abs(y)) < 1e-6


def test_residual_grid_validation():
    f = lambda x: np.ones_like(x)
    with pytest.raises(DomainError):
        SEP.first_order_residual(f, f, f, f, 1, 1, 1, np.linspace(0.5, 1, 4), np.linspace(0.5, 1, 10))
    with pytest.raises(DomainError):
        SEP.first_order_residual(f, f, f, f, 1, 1, 1, np.array([0.5, 0.6, 0.8, 0.9, 1.3]), np.linspace(0.5, 1, 10))
    with pytest.raises(DomainError):
        SEP.first_order_residual(f, f, f, f, 1, 1, 1, np.linspace(0.5, 1, 10), np.linspace(0, 1, 10))
    with pytest.raises(DomainError):
        SEP.first_order_residual(f, f, f, f, 1, 1, 1, np.linspace(-1, 1, 10), np.linspace(0.5, 1, 10))
    with pytest.raises(DomainError):
        SEP.integrate_temporal_pair(1.0, 1.0, (0.0, 1.0))


def test_central_diff4_exact_on_quartics():
    x = np.linspace(0, 1, 21)
    h = x[1] - x[0]
    np.testing.assert_allclose(SEP.central_diff4(x**4, h), 4 * x[2:-2] ** 3, atol=1e-12)


def test_assemble_spinor_phase_properties():
    T = lambda t: np.exp(-t) + 0j
    Th = lambda t: np.sin(t)
    psi = SEP.assemble_spinor(T, T, Th, Th, 1.0)
    a = psi(1.0, 0.7, 0.3)
    b = psi(1.0, 0.7, 2.1)
    assert abs(a[0]) == pytest.approx(abs(b[0]))
    c = psi(1.0, 0.7, 0.3 + 2 * np.pi)
    assert c[0] == pytest.approx(a[0])
    half = SEP.assemble_spinor(T, T, Th, Th, 0.5)
    assert half(1.0, 0.7, 0.3 + 2 * np.pi)[1] == pytest.approx(-half(1.0, 0.7, 0.3)[1])
