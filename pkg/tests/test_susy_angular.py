import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import eval_jacobi

from desitter_dirac import susy_angular as SA
from desitter_dirac.exceptions import DomainError
from desitter_dirac.separation import angular_potentials
from desitter_dirac.spectral_numeric import Grid1D, discretize, eigen_smallest

thetas = st.floats(0.01, np.pi - 0.01)


def jacobi_series(n, a, b, x):
    """Explicit sum over binomials, in extended precision."""
    mp.mp.dps = 40
    x = mp.mpf(x)
    tot = mp.mpf(0)
    for s in range(n + 1):
        tot += mp.binomial(n + a, n - s) * mp.binomial(n + b, s) * ((x - 1) / 2) ** s * ((x + 1) / 2) ** (n - s)
    return float(tot)


# -- Jacobi polynomials -----------------------------------------------------


def test_jacobi_low_degrees():
    x = np.linspace(-1, 1, 11)
    np.testing.assert_array_equal(SA.jacobi_poly(0, 0.3, 1.7, x), 1.0)
    a, b = 0.3, 1.7
    np.testing.assert_allclose(SA.jacobi_poly(1, a, b, x), (a + 1) + (a + b + 2) * (x - 1) / 2, atol=1e-15)


def test_jacobi_series_oracle_reference_point():
    assert SA.jacobi_poly(5, 1.0, 2.0, 0.3) == pytest.approx(jacobi_series(5, 1, 2, 0.3), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.floats(-0.9, 6.0), st.floats(-0.9, 6.0), st.floats(-1.0, 1.0))
def test_jacobi_matches_series_and_scipy(n, a, b, x):
    ours = float(SA.jacobi_poly(n, a, b, x))
    ref = jacobi_series(n, a, b, x)
    scale = max(1.0, abs(ref))
    assert abs(ours - ref) < 1e-11 * scale
    assert abs(ours - eval_jacobi(n, a, b, x)) < 1e-10 * scale


def test_jacobi_derivative_vs_finite_difference():
    x, h = np.linspace(-0.9, 0.9, 7), 1e-6
    for order in (1, 2):
        d = SA.jacobi_poly_derivative(4, 1.5, 0.5, x, order)
        if order == 1:
            fd = (SA.jacobi_poly(4, 1.5, 0.5, x + h) - SA.jacobi_poly(4, 1.5, 0.5, x - h)) / (2 * h)
            np.testing.assert_allclose(d, fd, rtol=1e-7)
        else:
            d1 = lambda y: SA.jacobi_poly_derivative(4, 1.5, 0.5, y, 1)
            np.testing.assert_allclose(d, (d1(x + h) - d1(x - h)) / (2 * h), rtol=1e-7)
    np.testing.assert_array_equal(SA.jacobi_poly_derivative(2, 1.0, 1.0, x, 3), 0.0)


@pytest.mark.parametrize("n,a,b", [(-1, 0, 0), (1.5, 0, 0), (2, -1.0, 0), (2, 0, -2.0)])
def test_jacobi_domain(n, a, b):
    with pytest.raises(DomainError):
        SA.jacobi_poly(n, a, b, 0.1)


# -- factorization ----------------------------------------------------------


def test_constants_and_superpotential_midpoint():
    fac = SA.susy_factorization(1)
    assert fac.A_const == 1.5 and fac.B_const == 0.5
    assert fac.W(np.pi / 2) == pytest.approx(0.5, abs=1e-15)
    assert fac.V_plus(np.pi / 2) == pytest.approx(-5 / 4, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 4.0), thetas)
def test_superpotential_identities(m, theta):
    fac = SA.susy_factorization(m)
    h = 1e-6
    fd = (fac.W(theta + h) - fac.W(theta - h)) / (2 * h)
    assert fac.dW(theta) == pytest.approx(fd, rel=1e-6, abs=1e-6)
    assert fac.V_plus(theta) == pytest.approx(fac.V_plus_scarf(theta), rel=1e-12, abs=1e-10)
    # the shifted potential sits -A^2 below the Dirac angular potential
    dirac = angular_potentials(m).V_plus(theta)
    assert fac.V_plus(theta) - dirac == pytest.approx(fac.offset, rel=1e-10, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3.0, 3.0), thetas)
def test_dirac_potential_pair_shape_invariance(m, theta):
    pair, flipped = angular_potentials(m), angular_potentials(-m)
    assert pair.V_minus(theta) == pytest.approx(flipped.V_plus(theta), rel=1e-12, abs=1e-12)
    # and the pair is mirror-symmetric about pi/2
    assert pair.V_minus(theta) == pytest.approx(pair.V_plus(np.pi - theta), rel=1e-10, abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 3.0), thetas)
def test_partner_potential_is_shifted_parameter(m, theta):
    fac, up = SA.susy_factorization(m), SA.susy_factorization(m + 1)
    const = (fac.A_const + 1) ** 2 - fac.A_const**2
    assert fac.V_minus(theta) == pytest.approx(up.V_plus(theta) + const, rel=1e-10, abs=1e-8)


def test_ladder_operators_apply_derivatives():
    fac = SA.susy_factorization(1)
    f, df = np.sin, np.cos
    t = np.array([0.4, 1.2, 2.0])
    np.testing.assert_allclose(fac.lower(f, df)(t), np.cos(t) + fac.W(t) * np.sin(t))
    np.testing.assert_allclose(fac.raise_(f, df)(t), -np.cos(t) + fac.W(t) * np.sin(t))


# -- spectrum ---------------------------------------------------------------


def test_spectrum_values():
    assert SA.analytic_spectrum(1, 0) == 0.0
    assert SA.analytic_spectrum(1, 1) == 4.0
    assert SA.analytic_spectrum(1, 1, "dirac") == 6.25
    with pytest.raises(DomainError):
        SA.analytic_spectrum(1, -1)
    with pytest.raises(DomainError):
        SA.analytic_spectrum(1, 1, "other")


@given(st.floats(-0.4, 5.0), st.integers(0, 50))
def test_gap_law(m, n):
    A = (1 + 2 * m) / 2
    gap = SA.analytic_spectrum(m, n + 1) - SA.analytic_spectrum(m, n)
    assert gap == pytest.approx(2 * A + 2 * n + 1, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("m", [1, 2])
def test_oracle_gaps(m):
    fac = SA.susy_factorization(m)
    ev = SA.oracle_spectrum(fac.V_plus, 6, 4000)
    gaps = np.diff(ev)
    np.testing.assert_allclose(gaps, [2 * fac.A_const + 2 * n + 1 for n in range(5)], atol=5e-4)
    assert abs(ev[0]) < 5e-4


def test_unshifted_convention_matches_dirac_levels():
    ev = SA.oracle_spectrum(angular_potentials(1).V_plus, 3, 4000)
    np.testing.assert_allclose(ev, [SA.analytic_spectrum(1, n, "dirac") for n in range(3)], atol=5e-4)


def test_partner_spectrum_degeneracy():
    fac = SA.susy_factorization(1)
    plus = SA.oracle_spectrum(fac.V_plus, 6, 4000)
    minus = SA.oracle_spectrum(fac.V_minus, 5, 4000)
    assert abs(plus[0]) < 1e-4
    np.testing.assert_allclose(minus, plus[1:], atol=1e-4)


# -- eigenfunctions ---------------------------------------------------------


def test_ground_mode_positive_and_vanishing_at_ends():
    mode = SA.jacobi_eigenfunction(1, 0)
    t = SA.interior_grid(500)
    assert np.all(mode(t) > 0)
    assert abs(mode(1e-8)) < 1e-6 and abs(mode(np.pi - 1e-8)) < 1e-6


@pytest.mark.parametrize("n", range(5))
def test_mode_properties(n):
    mode = SA.jacobi_eigenfunction(1, n)
    assert mode.alpha == pytest.approx(0.5) and mode.beta == pytest.approx(1.5)
    assert mode.interior_zeros() == n
    val, _ = integrate.quad(lambda t: mode(t) ** 2, 0, np.pi, epsabs=1e-13)
    assert val == pytest.approx(1.0, abs=1e-10)
    assert mode.omega2 == SA.analytic_spectrum(1, n)


def test_mode_derivatives_vs_finite_difference():
    mode = SA.jacobi_eigenfunction(2, 3)
    t, h = np.linspace(0.3, 2.8, 9), 1e-5
    np.testing.assert_allclose(mode.derivative(t), (mode(t + h) - mode(t - h)) / (2 * h), rtol=1e-7, atol=1e-8)
    d1 = lambda x: mode.derivative(x)
    np.testing.assert_allclose(mode.derivative(t, 2), (d1(t + h) - d1(t - h)) / (2 * h), rtol=1e-6, atol=1e-6)
    with pytest.raises(DomainError):
        mode.derivative(t, 3)


@pytest.mark.parametrize("m", [1, 2])
def test_eigen_residual_with_oracle_eigenvalues(m):
    fac = SA.susy_factorization(m)
    lam = SA.oracle_spectrum_extrapolated(fac.V_plus, 5, 4000)
    for n in range(5):
        assert SA.h_plus_residual(m, n, lam[n]) < 1e-6


def test_eigen_residual_sensitive_to_eigenvalue():
    assert SA.h_plus_residual(1, 2, SA.analytic_spectrum(1, 2) + 1e-3) > 1e-4


def test_printed_second_jacobi_parameter_fails_eigen_equation():
    """With beta raised by one the function is no longer an eigenfunction."""
    fac = SA.susy_factorization(1)
    good = SA.jacobi_eigenfunction(1, 2)
    bad = SA.JacobiMode(good.A, good.B, 2)
    t = SA.interior_grid(400)
    c = np.cos(t)
    u = (1 - c) ** ((bad.A - bad.B) / 2) * (1 + c) ** ((bad.A + bad.B) / 2)
    f = lambda x: ((1 - np.cos(x)) ** ((bad.A - bad.B) / 2) * (1 + np.cos(x)) ** ((bad.A + bad.B) / 2)
                   * SA.jacobi_poly(2, bad.alpha, bad.beta + 1, np.cos(x)))
    h = 1e-4
    d2 = (f(t + h) - 2 * f(t) + f(t - h)) / h**2
    r = -d2 + fac.V_plus(t) * f(t)
    ratio = r / f(t)
    # not an eigenfunction: the ratio is far from constant
    assert np.ptp(ratio[np.abs(f(t)) > 1e-3 * np.max(np.abs(u))]) > 1.0


def test_orthogonality():
    modes = [SA.jacobi_eigenfunction(1, n) for n in range(5)]
    for i in range(5):
        for j in range(i + 1, 5):
            val, _ = integrate.quad(lambda t: modes[i](t) * modes[j](t), 0, np.pi, epsabs=1e-13, limit=200)
            assert abs(val) < 1e-8


def test_normalization_closed_form_is_report_only():
    for n in range(4):
        v = SA.normalization_closed_form(1, n)
        assert np.isfinite(v) and v > 0


def test_mode_domain_errors():
    with pytest.raises(DomainError):
        SA.jacobi_eigenfunction(1, -1)
    with pytest.raises(DomainError):
        SA.jacobi_eigenfunction(-1.2, 0)
    with pytest.raises(DomainError):
        SA.jacobi_eigenfunction(1, 0)(0.0)


# -- zero mode and intertwining ----------------------------------------------


@pytest.mark.parametrize("m", [0.5, 1, 2, 3.5])
def test_zero_mode_annihilated(m):
    assert SA.zero_mode_residual(m) < 1e-8


def test_zero_mode_log_derivative():
    t = SA.interior_grid(300)
    mode = SA.jacobi_eigenfunction(1, 0)
    raw = SA.superpotential_zero_mode(1, t)
    ratio = mode(t) / raw
    assert np.ptp(ratio) / np.mean(ratio) < 1e-8
    # log-derivative of exp(-int W) is -W
    np.testing.assert_allclose(mode.derivative(t) / mode(t), -SA.susy_factorization(1).W(t), atol=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("derivative", ["analytic", "fd"])
def test_intertwining(n, derivative):
    res = SA.intertwine(1, n, N=2000, derivative=derivative)
    assert res.residual < 1e-6
    assert res.omega == pytest.approx(np.sqrt(SA.analytic_spectrum(1, n)))
    assert res.sign in (-1.0, 1.0)


def test_partner_mode_is_eigenfunction_of_partner_potential():
    fac = SA.susy_factorization(1)
    mode = SA.partner_eigenfunction(1, 1)
    t = SA.interior_grid(500)
    lam = SA.analytic_spectrum(1, 2)
    r = -mode.derivative(t, 2) + fac.V_minus(t) * mode(t) - lam * mode(t)
    assert np.max(np.abs(r)) / np.max(np.abs(mode(t))) < 1e-9


def test_mirror_mode_solves_mirror_potential():
    pair = angular_potentials(1)
    mode = SA.jacobi_eigenfunction(1, 2)
    mir = SA.mirror_eigenfunction(1, 2)
    t = SA.interior_grid(500)
    d2 = mode.derivative(np.pi - t, 2)
    r = -d2 + pair.V_minus(t) * mir(t) - SA.analytic_spectrum(1, 2, "dirac") * mir(t)
    assert np.max(np.abs(r)) < 1e-8


def test_intertwine_needs_excited_level():
    with pytest.raises(DomainError):
        SA.intertwine(1, 0)
    with pytest.raises(DomainError):
        SA.intertwine(1, 1, derivative="spline")


def test_oracle_eigenvectors_match_modes():
    fac = SA.susy_factorization(1)
    g = Grid1D(0.0, np.pi, 2000)
    res = eigen_smallest(discretize(fac.V_plus, g), 3, want_vectors=True)
    for n in range(3):
        mode = SA.jacobi_eigenfunction(1, n)(g.points)
        v = res.eigenvectors[:, n]
        s = np.sign(np.dot(v, mode))
        assert np.max(np.abs(s * v - mode)) < 1e-4
