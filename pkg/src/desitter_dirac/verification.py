"""Invariant suites run by ``desitter-dirac verify``.

Each suite returns a :class:`SuiteResult` holding pass/fail checks and
report-only rows.  Every check and row carries a descriptive ``tag`` naming
the identity it exercises.  Randomized sampling draws from ``seed``.
"""
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from . import geometry, pseudo_susy, romanovski, susy_angular
from .separation import GaugeChoice
from .spectral_numeric import loglog_slope

SEED_ENV = "DESITTER_DIRAC_SEED"
DEFAULT_SEED = 20240601


def default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


@dataclass
class Check:
    name: str
    tag: str
    value: float
    tol: float
    passed: bool
    criterion: int = None
    detail: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "tag": self.tag,
            "criterion": self.criterion,
            "value": self.value,
            "tol": self.tol,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, tag, value, tol, criterion=None, detail="", passed=None):
        value = float(value)
        ok = bool(value < tol) if passed is None else bool(passed)
        self.checks.append(Check(name, tag, value, float(tol), ok, criterion, detail))

    def row(self, tag, **values):
        self.rows.append({"tag": tag, **values})


def _tol(default, override):
    return default if override is None else override


def geometry_suite(seed=DEFAULT_SEED, tol=None):
    out = SuiteResult("geometry")
    gam = geometry.GammaSet.standard()
    out.add("gamma anticommutators", "clifford-algebra", gam.anticommutator_defect(), 0.0,
            criterion=1, passed=gam.anticommutator_defect() == 0.0, detail="exact integer arithmetic")
    out.add("gamma adjoint signs", "gamma-adjoint", 0.0, 0.0,
            passed=gam.adjoint_signs() == (1, -1, -1), detail=str(gam.adjoint_signs()))

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        ell = rng.uniform(0.2, 5.0)
        tau = rng.uniform(0.05, 4.0)
        theta = rng.uniform(0.05, np.pi - 0.05)
        general = geometry.spin_connection_at(ell, tau, theta)
        closed = geometry.spin_connection_closed_form(ell, tau, theta)
        worst = max(worst, general.max_difference(closed))
    out.add("spin connection vs closed form (100 points)", "spin-connection-closed-form",
            worst, _tol(1e-10, tol), criterion=2)

    G = geometry.christoffel_at(1.3, 0.7, 1.1)
    out.add("Christoffel G^0_11", "christoffel-g0-11", abs(G[0, 1, 1] - np.sinh(0.7) * np.cosh(0.7)),
            _tol(1e-12, tol))
    return out


def susy_suite(seed=DEFAULT_SEED, tol=None, N=4000):
    out = SuiteResult("susy")
    for m in (1, 2):
        fac = susy_angular.susy_factorization(m)
        ev = susy_angular.oracle_spectrum(fac.V_plus, 6, N)
        A = fac.A_const
        gap_err = 0.0
        for n in range(5):
            gap = ev[n + 1] - ev[n]
            want = 2 * A + 2 * n + 1
            gap_err = max(gap_err, abs(gap - want))
            out.row("angular-spectrum-gap", m=m, n=n, oracle=float(ev[n]),
                    analytic=susy_angular.analytic_spectrum(m, n), gap=float(gap), gap_law=want)
        out.add(f"spectrum gaps m={m}", "angular-spectrum-gap", gap_err, _tol(5e-4, tol), criterion=3)
        out.add(f"ground level m={m}", "angular-ground-level", abs(ev[0]), _tol(5e-4, tol), criterion=3)

    m = 1
    fac = susy_angular.susy_factorization(m)
    lam = susy_angular.oracle_spectrum_extrapolated(fac.V_plus, 5, N)
    worst = max(susy_angular.h_plus_residual(m, n, lam[n]) for n in range(5))
    out.add("Jacobi eigenfunction residual m=1 n<=4", "jacobi-eigenfunction", worst, _tol(1e-6, tol), criterion=4,
            detail="eigenvalues from the extrapolated oracle")
    modes = [susy_angular.jacobi_eigenfunction(m, n).normalized() for n in range(5)]
    ortho = 0.0
    for i in range(5):
        for j in range(i, 5):
            val, _ = integrate.quad(lambda t: modes[i](t) * modes[j](t), 0, np.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
            ortho = max(ortho, abs(val - (1.0 if i == j else 0.0)))
    out.add("Jacobi orthonormality m=1 n<=4", "jacobi-orthogonality", ortho, _tol(1e-8, tol), criterion=4)

    zm = max(susy_angular.zero_mode_residual(mm) for mm in (1, 2))
    out.add("ground state annihilated by lowering operator", "zero-mode", zm, _tol(1e-6, tol), criterion=5)
    inter = max(susy_angular.intertwine(mm, n, derivative="fd").residual for mm in (1, 2) for n in range(1, 5))
    out.add("lowering operator maps n to partner n-1 (grid)", "intertwining", inter, _tol(1e-6, tol), criterion=5)
    for n in range(5):
        out.row("normalization-closed-form", m=m, n=n,
                closed_form=susy_angular.normalization_closed_form(m, n),
                quadrature=susy_angular.jacobi_eigenfunction(m, n).normalized().norm_const)
    return out


def romanovski_suite(seed=DEFAULT_SEED, tol=None):
    out = SuiteResult("romanovski")
    a, b = Fraction(-2), Fraction(-17, 4)
    nonzero = 0
    for nu in range(9):
        p = romanovski.romanovski_poly(nu, a, b)
        nonzero += sum(1 for c in p.ode_residual_coeffs() if c != 0)
    out.add("exact ODE residual nu<=8", "romanovski-ode-exact", nonzero, 0, criterion=6,
            passed=nonzero == 0, detail="(a, b) = (-2, -17/4)")

    worst = 0.0
    for nu1 in range(5):
        for nu2 in range(nu1 + 1, 5):
            if romanovski.orthogonality_converges(nu1, nu2, -4):
                val = romanovski.orthogonality_integral(nu1, nu2, -2, -4)
                worst = max(worst, abs(val))
                out.row("romanovski-orthogonality", nu1=nu1, nu2=nu2, integral=val)
            else:
                out.row("romanovski-orthogonality", nu1=nu1, nu2=nu2, integral="divergent")
    out.add("finite orthogonality at (a, b) = (-2, -4)", "romanovski-orthogonality", worst, _tol(1e-8, tol), criterion=6)

    z = np.linspace(-10, 10, 2001)
    w45 = w47 = 0.0
    for ellM in (0.3, 1.0, 2.5):
        for k in (1, 2):
            c = romanovski.model_constants(ellM, romanovski.eps_for_component(k))
            for nubar in range(4):
                sol = romanovski.time_solution(k, nubar, c)
                r_red = romanovski.reduced_equation_residual(sol, z)
                w45 = max(w45, r_red)
                w47 = max(w47, romanovski.polynomial_equation_residual(sol, z))
                out.row("time-part-chain", ellM=ellM, k=k, nubar=nubar, omega2=sol.omega2, reduced_residual=r_red,
                        unreduced_residual=romanovski.unreduced_equation_residual(sol, z))
    out.add("reduced temporal equation from Romanovski ansatz", "time-part-chain", w45, _tol(1e-8, tol), criterion=7)
    out.add("polynomial equation of the stripped solution", "time-part-polynomial", w47, _tol(1e-8, tol))

    rng = np.random.default_rng(seed)
    bad = 0
    chain = 0.0
    for L in 10 ** rng.uniform(-3, 3, size=1000):
        eps = int(rng.choice([-1, 1]))
        c = romanovski.model_constants(L, eps)
        if not (c.a1 >= 1 + 4 * L**2 and (c.a1 - 1) / 8 - L**2 / 2 >= 0):
            bad += 1
        r1, r2 = c.chain_conditions()
        scale = max(1.0, c.A_big**2 + c.B_big**2 + L**2)
        chain = max(chain, abs(r1) / scale, abs(r2) / scale)
    out.add("a1 >= 1 + 4 l^2 M^2 over 1000 draws", "model-constants-real-B", bad, 1, criterion=8, passed=bad == 0)
    out.add("ansatz conditions on (A, B)", "model-constants-chain", chain, _tol(1e-9, tol))

    rt = 0.0
    for L in 10 ** rng.uniform(-1.5, 1.5, size=50):
        nu = romanovski.nu_from_ellM(L, 1)
        back = romanovski.ellM_from_nu(nu, 1)
        rt = max(rt, abs(back - L) / L, abs(romanovski.nu_from_ellM(back, 1) - nu) / abs(nu))
    out.add("lM <-> nu round trip", "nu-round-trip", rt, _tol(1e-10, tol), criterion=8)

    for n in (1, 2):
        c = romanovski.model_constants(1.0, 1)
        rep = romanovski.quantum_consistency(0.5, n, 2, c)
        out.row("quantum-consistency", **rep.as_dict())
    return out


def pseudo_suite(seed=DEFAULT_SEED, tol=None, sizes=(32, 64, 128), ell=1.3, M=0.7, tau=1.0):
    out = SuiteResult("pseudo")
    rng = np.random.default_rng(seed)
    a1, a2, a3 = 1.5, 1.0, 1.0
    gauge = GaugeChoice(1.0)

    hs, rs = [], []
    for N in sizes:
        rep = pseudo_susy.intertwining_residuals(ell, M, tau, pseudo_susy.AngularGrid.square(N), gauge, a1, a2, a3)
        hs.append(rep.h)
        rs.append(rep.r_intertwine)
        out.row("intertwining-residuals", N=N, **rep.as_dict())
        out.add(f"analytic vs finite-difference eta derivative N={N}", "eta-derivative-consistency",
                abs(rep.r_intertwine - rep.r_intertwine_fd), _tol(1e-8, tol))
    slope = loglog_slope(hs, rs)
    out.add("R_int refinement slope", "intertwining-convergence", abs(slope - 2.0), 0.2, criterion=9,
            detail=f"slope={slope:.4f}")
    abl = pseudo_susy.intertwining_residuals(ell, M, tau, pseudo_susy.AngularGrid.square(sizes[-1]), gauge,
                                            a1, a2, a3, zero_unknowns=True)
    ratio = abl.r_intertwine / rs[-1]
    out.add("zero (f, g, U) ablation inflation", "intertwining-ablation", ratio, 1e3, criterion=9,
            passed=ratio > 1e3, detail=f"ablated R_int={abl.r_intertwine:.6g}")

    taus = rng.uniform(0.05, 5.0, size=100)
    e2 = pseudo_susy.eta2(ell)
    dev = float(np.max(np.abs(e2.log_dtau(taus) - 1.0 / np.tanh(taus)) * np.tanh(taus)))
    out.add("eta2 log-derivative equals coth", "eta2-log-derivative", dev, _tol(1e-12, tol), criterion=10)
    fd = max(abs(e2.dtau_fd(t, 1.0) / e2(t, 1.0) - 1 / np.tanh(t)) for t in taus[:10])
    out.row("eta2-log-derivative-fd", max_deviation=float(fd))

    e1 = pseudo_susy.eta1(ell, a1, a2, a3)
    pts = [(rng.uniform(0.05, 4.0), rng.uniform(0.05, np.pi - 0.05), rng.uniform(0.05, np.pi - 0.05)) for _ in range(100)]
    r1 = np.array([pseudo_susy.eta_metric_ratio(e1, pseudo_susy.partner_metric(ell, *p).diagonal, *p) for p in pts])
    spread1 = float(np.max(np.abs(r1 - r1[0])) / abs(r1[0]))
    out.add("eta1 ratio to partner-metric density constant", "eta1-metric-ratio", spread1, _tol(1e-10, tol),
            criterion=10)
    r2 = np.array([pseudo_susy.eta_metric_ratio(e2, geometry.metric_at(ell, p[0], p[1]).matrix.diagonal(), p[0], p[1])
                   for p in pts])
    spread2 = float(np.max(np.abs(r2 - r2[0])) / abs(r2[0]))
    out.add("eta2 ratio to base-metric density constant", "eta2-metric-ratio", spread2, _tol(1e-10, tol))

    def power(eta_of, metric_of):
        return pseudo_susy.ell_power(lambda L: pseudo_susy.eta_metric_ratio(eta_of(L), metric_of(L), 0.8, 1.1, 0.9))

    p1 = power(lambda L: pseudo_susy.eta1(L, a1, a2, a3), lambda L: pseudo_susy.partner_metric(L, 0.8, 1.1, 0.9).diagonal)
    p2 = power(pseudo_susy.eta2, lambda L: geometry.metric_at(L, 0.8, 1.1).matrix.diagonal())
    out.row("eta-metric-ratio-ell-power", eta1_ratio=[r1[0].real, r1[0].imag], eta1_ell_power=p1,
            eta2_ratio=[r2[0].real, r2[0].imag], eta2_ell_power=p2)

    grid = pseudo_susy.AngularGrid.square(24)
    for label, eta in (("eta1", e1.diag(tau, grid)), ("random", _random_sparse(grid.dim, rng))):
        Q = pseudo_susy.supercharge(eta)
        Q2 = Q @ Q
        val = float(np.max(np.abs(Q2.data))) if Q2.nnz else 0.0
        out.add(f"supercharge nilpotent ({label} block)", "supercharge-nilpotent", val, 0.0, criterion=11,
                passed=val == 0.0)

    fgu = pseudo_susy.solve_fgU(a1, a2, a3)
    t, th, ph = (rng.uniform(0.1, 3.0, 50) for _ in range(3))
    cond = max(float(np.max(np.abs(c))) for c in fgu.condition_residuals(t, th, ph))
    out.add("unknown-function conditions vanish", "partner-unknowns", cond, _tol(1e-14, tol))
    gd = fgu.g_displayed(1.0, 1.1, 0.9) / fgu.g(1.0, 1.1, 0.9)
    out.row("partner-g-displayed-ratio", ratio=[gd.real, gd.imag])

    H, eta, _ = pseudo_susy.pseudo_hermitian_toy(32, seed)
    eta_inv = np.diag(1.0 / np.diag(eta))
    herm = float(np.max(np.abs(eta @ H @ eta_inv - (eta @ H @ eta_inv).conj().T)))
    rho = eta @ eta
    pseudo = float(np.max(np.abs(rho @ H @ np.linalg.inv(rho) - H.conj().T)))
    out.add("toy pseudo-Hermiticity", "pseudo-hermitian-toy", max(herm, pseudo), _tol(1e-12, tol))

    adj = pseudo_susy.adjoint_report(ell, M, tau, pseudo_susy.AngularGrid.square(32), gauge)
    out.row("adjoint-report", **adj)
    out.add("closed-form adjoint differs only by the dropped terms", "adjoint-closed-form", adj["unexplained"],
            _tol(1e-12, tol))
    return out


def _random_sparse(n, rng):
    import scipy.sparse as sp

    return sp.random(n, n, density=0.01, random_state=rng, format="csr") + sp.identity(n)


SUITES = {
    "geometry": geometry_suite,
    "susy": susy_suite,
    "romanovski": romanovski_suite,
    "pseudo": pseudo_suite,
}


def run_suite(name, seed=None, tol=None):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    seed = default_seed() if seed is None else seed
    return SUITES[name](seed=seed, tol=tol)
