"""Pseudo-supersymmetric partner of the discretized Dirac Hamiltonian.

Operators act on two-component spinors sampled on a tensor grid
``theta x phi`` with both angles on ``(0, pi)`` and Dirichlet ends.  Vector
index ordering is ``(theta, phi, spinor)`` with the spinor index fastest and
``phi`` faster than ``theta``.  First derivatives are antisymmetric central
differences; metric operators are diagonal (multiplication) operators, so
conjugation ``eta H eta^{-1}`` only touches the derivative blocks.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .exceptions import DomainError
from .geometry import GammaSet, POLE_TOL
from .separation import GaugeChoice
from .spectral_numeric import Grid1D

GAMMAS = GammaSet.standard()
I2 = np.eye(2, dtype=complex)
G0 = GAMMAS.gamma0
G01 = GAMMAS.gamma0 @ GAMMAS.gamma1
G02 = GAMMAS.gamma0 @ GAMMAS.gamma2
BLOCK_BASIS = {"I": I2, "g0": G0, "g0g1": G01, "g0g2": G02}

COT_AS_PRINTED = 1.0
COT_HALF = 0.5


@dataclass(frozen=True)
class AngularGrid:
    theta: Grid1D
    phi: Grid1D

    def __post_init__(self):
        for name, g in (("theta", self.theta), ("phi", self.phi)):
            if g.lo < 0 or g.hi > np.pi:
                raise DomainError(f"{name} grid must lie inside [0, pi]")
            if np.any(np.abs(np.sin(g.points)) < POLE_TOL):
                raise DomainError(f"{name} grid touches a pole")

    @classmethod
    def square(cls, N):
        return cls(Grid1D(0.0, np.pi, N), Grid1D(0.0, np.pi, N))

    @property
    def shape(self):
        return self.theta.N, self.phi.N

    @property
    def npoints(self):
        return self.theta.N * self.phi.N

    @property
    def dim(self):
        return 2 * self.npoints

    def mesh(self):
        """Flattened ``(theta, phi)`` arrays in vector order."""
        TH, PH = np.meshgrid(self.theta.points, self.phi.points, indexing="ij")
        return TH.ravel(), PH.ravel()

    def interior_mask(self, band):
        TH, PH = self.mesh()
        return (TH > band) & (TH < np.pi - band) & (PH > band) & (PH < np.pi - band)


def central_difference_matrix(grid):
    """Antisymmetric ``(u[i+1] - u[i-1]) / 2h`` with zero Dirichlet ends."""
    n = grid.N
    one = np.ones(n - 1)
    return sp.diags([-one, one], [-1, 1], format="csr") / (2 * grid.h)


def _mult(values, block):
    return sp.kron(sp.diags(np.asarray(values, dtype=complex)), block, format="csr")


@dataclass(frozen=True)
class DiscreteDiracOperator:
    tau: float
    grid: AngularGrid
    terms: dict = field(repr=False)
    label: str = ""

    @property
    def matrix(self):
        total = None
        for m in self.terms.values():
            total = m if total is None else total + m
        return total.tocsr()

    def __matmul__(self, v):
        return self.matrix @ v

    def multiplication_terms(self):
        return {k: v for k, v in self.terms.items() if not k.startswith("d_")}

    def derivative_terms(self):
        return {k: v for k, v in self.terms.items() if k.startswith("d_")}

    def block_projection_defect(self):
        """Norm of the part of each 2x2 block outside span{I, g0, g0g1, g0g2}."""
        basis = np.array([b.ravel() for b in BLOCK_BASIS.values()]).T  # 4x4
        M = self.matrix.tocoo()
        blocks = {}
        for r, c, v in zip(M.row, M.col, M.data):
            key = (r // 2, c // 2)
            blk = blocks.setdefault(key, np.zeros((2, 2), dtype=complex))
            blk[r % 2, c % 2] += v
        worst = 0.0
        for blk in blocks.values():
            coef, *_ = np.linalg.lstsq(basis, blk.ravel(), rcond=None)
            worst = max(worst, float(np.linalg.norm(basis @ coef - blk.ravel())))
        return worst


def _check_tau(tau):
    if not np.all(np.asarray(tau) > 0):
        raise DomainError(f"tau must be positive, got {tau!r}")


def _common_terms(ell, M, tau, grid, gauge):
    """Mass, two derivative terms and gauge term shared by H_- and H_+."""
    _check_tau(tau)
    TH, _ = grid.mesh()
    Nth, Nph = grid.shape
    csch = 1.0 / np.sinh(tau)
    Dth = sp.kron(central_difference_matrix(grid.theta), sp.identity(Nph), format="csr")
    Dph = sp.kron(sp.identity(Nth), central_difference_matrix(grid.phi), format="csr")
    n = grid.npoints
    terms = {
        "mass": _mult(np.full(n, 1j * M * ell), G0),
        "d_theta": sp.kron(Dth, -1j * csch * G01, format="csr"),
        "d_phi": sp.kron(sp.diags(-1j * csch / np.sin(TH)) @ Dph, G02, format="csr"),
        "gauge": _mult(-1j * gauge.e * ell * gauge.A1(TH), G01),
    }
    return terms


def build_H_minus(ell, M, tau, grid, gauge=None, cot_coeff=COT_AS_PRINTED):
    """``H_- = iMl g0 - i coth - i g0g1 csch d_theta - i c g0g1 cot(theta) csch
    - i g0g2 csch csc(theta) d_phi - i e l A_1 g0g1``.

    ``cot_coeff`` is the coefficient ``c`` of the ``cot(theta)`` term: 1 as
    written for the Hamiltonian, 1/2 as in the separated spinor equations.
    """
    gauge = GaugeChoice() if gauge is None else gauge
    terms = _common_terms(ell, M, tau, grid, gauge)
    TH, _ = grid.mesh()
    n = grid.npoints
    terms["coth"] = _mult(np.full(n, -1j / np.tanh(tau)), I2)
    terms["cot_theta"] = _mult(-1j * cot_coeff / (np.tan(TH) * np.sinh(tau)), G01)
    return DiscreteDiracOperator(tau, grid, terms, label=f"H_minus(cot_coeff={cot_coeff})")


def build_H_minus_dagger(ell, M, tau, grid, gauge=None):
    """Closed-form adjoint: ``H_-`` without the ``coth`` and ``cot(theta)`` terms."""
    gauge = GaugeChoice() if gauge is None else gauge
    return DiscreteDiracOperator(tau, grid, _common_terms(ell, M, tau, grid, gauge), label="H_minus_dagger")


def adjoint_report(ell, M, tau, grid, gauge=None, cot_coeff=COT_AS_PRINTED):
    """Compare the closed-form adjoint with ``H_-`` and with its literal
    conjugate transpose on the grid.  Everything is reported, nothing asserted.
    """
    Hm = build_H_minus(ell, M, tau, grid, gauge, cot_coeff)
    Hd = build_H_minus_dagger(ell, M, tau, grid, gauge)
    A, B = Hm.matrix, Hd.matrix
    diff = B - A
    coth_part = -Hm.terms["coth"]
    cot_part = -Hm.terms["cot_theta"]
    unexplained = diff - coth_part - cot_part
    literal = A.conj().T
    mass = Hm.terms["mass"]
    return {
        "closed_minus_H": _norm(diff),
        "coth_part": _norm(coth_part),
        "cot_theta_part": _norm(cot_part),
        "unexplained": _norm(unexplained),
        "literal_minus_closed": _norm(literal - B),
        "literal_mass_sign_flip": _norm(mass.conj().T + mass),
    }


def _norm(M):
    M = sp.csr_matrix(M)
    return float(np.max(np.abs(M.data))) if M.nnz else 0.0


@dataclass(frozen=True)
class EtaOperator:
    """``prefactor * sinh(tau)^p_tau * sqrt(sin theta)^p_theta * sqrt(sin phi)^p_phi``.

    The complex/``ell`` prefactor is tracked apart from the positive
    functional part; conjugation and log-derivatives ignore it.
    """

    prefactor: complex
    p_tau: float
    p_theta: float
    p_phi: float = 0.0

    def functional(self, tau, theta, phi=np.pi / 2):
        _check_tau(tau)
        st = np.sin(np.asarray(theta, dtype=float))
        sf = np.sin(np.asarray(phi, dtype=float))
        if np.any(st < POLE_TOL) or (self.p_phi != 0 and np.any(sf < POLE_TOL)):
            raise DomainError("eta is singular or non-positive at this point")
        return np.sinh(tau) ** self.p_tau * st ** (self.p_theta / 2) * sf ** (self.p_phi / 2)

    def __call__(self, tau, theta, phi=np.pi / 2):
        return self.prefactor * self.functional(tau, theta, phi)

    def log_dtau(self, tau):
        """``eta^{-1} d eta / d tau``, analytic."""
        _check_tau(tau)
        return self.p_tau / np.tanh(tau)

    def dtau(self, tau, theta, phi=np.pi / 2):
        return self(tau, theta, phi) * self.log_dtau(tau)

    def dtau_fd(self, tau, theta, phi=np.pi / 2, dtau=1e-4):
        return (self(tau + dtau, theta, phi) - self(tau - dtau, theta, phi)) / (2 * dtau)

    def on_grid(self, tau, grid, functional_only=False):
        TH, PH = grid.mesh()
        v = self.functional(tau, TH, PH) if functional_only else self(tau, TH, PH)
        if np.min(np.abs(v)) <= 1e-12:
            raise DomainError("eta is not invertible on this grid")
        return v

    def diag(self, tau, grid, functional_only=False):
        return _mult(self.on_grid(tau, grid, functional_only), I2)


def eta1(ell, a1=1.5, a2=1.0, a3=1.0):
    return EtaOperator(prefactor=ell**2, p_tau=a1, p_theta=a2, p_phi=a3)


def eta2(ell):
    return EtaOperator(prefactor=1j * ell**1.5, p_tau=1.0, p_theta=1.0, p_phi=0.0)


def metric_eta(diag_metric):
    """``(-g)^{1/4} (-g^{00})^{1/4}`` on the principal branch."""
    d = np.asarray(diag_metric, dtype=complex)
    det = np.prod(d)
    return (-det) ** 0.25 * (-1.0 / d[0]) ** 0.25


@dataclass(frozen=True)
class FGU:
    a1: float
    a2: float
    a3: float

    def f(self, tau, theta, phi=None):
        return -0.5j / np.tan(theta) / np.sinh(tau) * (1 + self.a2)

    def g(self, tau, theta, phi):
        return -0.5j * self.a3 / np.tan(phi) / np.sin(theta) / np.sinh(tau)

    def U(self, tau):
        return -1j * (self.a1 + 1) / np.tanh(tau)

    def g_displayed(self, tau, theta, phi):
        """The ``g0g2`` coefficient as displayed for (3/2, 1, 1)."""
        return -1j / np.tan(phi) / np.sin(theta) / np.sinh(tau)

    def condition_residuals(self, tau, theta, phi):
        """The three bracketed conditions; all vanish identically."""
        csch = 1.0 / np.sinh(tau)
        c80 = 0.5j / np.tan(theta) * csch * (1 + self.a2) + self.f(tau, theta, phi)
        c81 = 0.5j * self.a3 / np.tan(phi) / np.sin(theta) * csch + self.g(tau, theta, phi)
        c82 = self.U(tau) + 1j * (self.a1 + 1) / np.tanh(tau)
        return c80, c81, c82


def solve_fgU(a1, a2, a3):
    return FGU(float(a1), float(a2), float(a3))


def build_H_plus(ell, M, tau, grid, gauge=None, a1=1.5, a2=1.0, a3=1.0, zero_unknowns=False):
    """Generated partner ``H_+``: shared terms plus ``g0g1 f + g0g2 g + U``."""
    gauge = GaugeChoice() if gauge is None else gauge
    terms = _common_terms(ell, M, tau, grid, gauge)
    TH, PH = grid.mesh()
    if zero_unknowns:
        n = grid.npoints
        f, g, U = np.zeros(n), np.zeros(n), np.zeros(n)
    else:
        fgu = solve_fgU(a1, a2, a3)
        f, g = fgu.f(tau, TH, PH), fgu.g(tau, TH, PH)
        U = np.full(grid.npoints, fgu.U(tau))
    terms["f"] = _mult(f, G01)
    terms["g"] = _mult(g, G02)
    terms["U"] = _mult(U, I2)
    return DiscreteDiracOperator(tau, grid, terms, label="H_plus")


def default_test_spinor(grid):
    TH, PH = grid.mesh()
    s = np.sin(TH) ** 2 * np.sin(PH) ** 2 * np.exp(np.cos(TH))
    return np.kron(s, np.array([1.0, 0.3 - 0.2j]))


@dataclass(frozen=True)
class IntertwiningReport:
    h: float
    band: float
    r_intertwine: float
    r_intertwine_fd: float
    r_intertwine_by_cot: dict
    r_adjoint_by_cot: dict
    r_pseudo_hermitian: float

    def as_dict(self):
        return dict(self.__dict__)


def _apply_norm(op, psi, mask):
    r = (op @ psi).reshape(-1, 2)[mask]
    return float(np.max(np.abs(r)))


def intertwining_residuals(
    ell,
    M,
    tau,
    grid,
    gauge=None,
    a1=1.5,
    a2=1.0,
    a3=1.0,
    dtau=1e-4,
    cot_coeff=COT_HALF,
    band=np.pi / 8,
    psi=None,
    zero_unknowns=False,
):
    """Residuals of the time-dependent intertwining relations on a test spinor.

    ``R_int = H_- - eta1 H_+ eta1^{-1} - i eta1^{-1} d_tau eta1``
    ``R_adj = H_-^dagger - eta2 H_- eta2^{-1} - i eta2^{-1} d_tau eta2``
    ``R_ph = eta^dagger eta1 H_+ - H_+^dagger eta^dagger eta1
            - i (d_tau eta^dagger eta1 - d_tau eta1 eta^dagger)``, ``eta = eta2 eta1``

    Each is applied to ``psi`` (default: a smooth spinor vanishing at the
    edges) and measured in the max norm on points farther than ``band``
    from every edge.  ``R_adj`` uses the closed-form adjoint; ``R_ph`` uses the
    literal conjugate transpose of ``H_+``.
    """
    gauge = GaugeChoice() if gauge is None else gauge
    psi = default_test_spinor(grid) if psi is None else psi
    mask = grid.interior_mask(band)
    e1 = eta1(ell, a1, a2, a3)
    e2 = eta2(ell)
    Hp = build_H_plus(ell, M, tau, grid, gauge, a1, a2, a3, zero_unknowns=zero_unknowns).matrix
    E1 = e1.diag(tau, grid)
    E1i = _mult(1.0 / e1.on_grid(tau, grid), I2)
    conj1 = E1 @ Hp @ E1i
    eye = sp.identity(grid.dim, format="csr")

    TH, PH = grid.mesh()
    fd_log = _mult(e1.dtau_fd(tau, TH, PH, dtau) / e1(tau, TH, PH), I2)

    r_intertwine_by_cot, r_adjoint_by_cot = {}, {}
    r_intertwine = r_intertwine_fd = None
    E2 = e2.diag(tau, grid)
    E2i = _mult(1.0 / e2.on_grid(tau, grid), I2)
    Hd = build_H_minus_dagger(ell, M, tau, grid, gauge).matrix
    for label, c in (("cot/2", COT_HALF), ("cot", COT_AS_PRINTED)):
        Hm = build_H_minus(ell, M, tau, grid, gauge, c).matrix
        R = Hm - conj1 - 1j * e1.log_dtau(tau) * eye
        r_intertwine_by_cot[label] = _apply_norm(R, psi, mask)
        R_adj = Hd - E2 @ Hm @ E2i - 1j * e2.log_dtau(tau) * eye
        r_adjoint_by_cot[label] = _apply_norm(R_adj, psi, mask)
        if c == cot_coeff:
            r_intertwine = r_intertwine_by_cot[label]
            r_intertwine_fd = _apply_norm(Hm - conj1 - 1j * fd_log, psi, mask)
    if r_intertwine is None:
        Hm = build_H_minus(ell, M, tau, grid, gauge, cot_coeff).matrix
        r_intertwine = _apply_norm(Hm - conj1 - 1j * e1.log_dtau(tau) * eye, psi, mask)
        r_intertwine_fd = _apply_norm(Hm - conj1 - 1j * fd_log, psi, mask)

    eta_vals = e2.on_grid(tau, grid) * e1.on_grid(tau, grid)
    eta_dag = np.conj(eta_vals)
    d_eta_dag = np.conj(e2.dtau(tau, TH, PH) * e1(tau, TH, PH) + e2(tau, TH, PH) * e1.dtau(tau, TH, PH))
    e1v = e1.on_grid(tau, grid)
    S = _mult(eta_dag * e1v, I2)
    extra = _mult(d_eta_dag * e1v - e1.dtau(tau, TH, PH) * eta_dag, I2)
    R_ph = S @ Hp - Hp.conj().T @ S - 1j * extra
    r_pseudo_hermitian = _apply_norm(R_ph, psi, mask)

    return IntertwiningReport(
        h=float(grid.theta.h),
        band=float(band),
        r_intertwine=r_intertwine,
        r_intertwine_fd=r_intertwine_fd,
        r_intertwine_by_cot=r_intertwine_by_cot,
        r_adjoint_by_cot=r_adjoint_by_cot,
        r_pseudo_hermitian=r_pseudo_hermitian,
    )


def supercharge(eta):
    """``Q = [[0, 0], [eta, 0]]`` for a square (sparse or dense) ``eta``."""
    eta = sp.csr_matrix(eta)
    n = eta.shape[0]
    Z = sp.csr_matrix((n, n), dtype=eta.dtype)
    return sp.bmat([[Z, Z], [eta, Z]], format="csr")


def grading(n):
    """``diag(1, -1)`` in block form."""
    return sp.block_diag([sp.identity(n), -sp.identity(n)], format="csr")


def pseudo_hermitian_toy(N=64, seed=0):
    """``H = eta^{-1} S eta`` with ``S`` real symmetric tridiagonal and
    ``eta`` positive diagonal.  Returns ``(H, eta, S)`` as dense arrays."""
    rng = np.random.default_rng(seed)
    d = rng.normal(size=N)
    e = rng.normal(size=N - 1)
    S = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    eta = np.diag(rng.uniform(0.5, 2.0, size=N))
    eta_inv = np.diag(1.0 / np.diag(eta))
    return eta_inv @ S @ eta, eta, S


@dataclass(frozen=True)
class PartnerMetric4:
    ell: float
    g00: float
    g11: float
    g22: float
    g33: float

    @property
    def diagonal(self):
        return np.array([self.g00, self.g11, self.g22, self.g33])

    @property
    def signature(self):
        return tuple(int(np.sign(v)) for v in self.diagonal)

    @property
    def determinant(self):
        return float(np.prod(self.diagonal))

    def line_element(self):
        """Coefficients of ``dtau^2, dtheta^2, dphi^2, dchi^2``."""
        return {"dtau2": self.g00, "dtheta2": self.g11, "dphi2": self.g22, "dchi2": self.g33}


def partner_metric(ell, tau, theta, phi):
    _check_tau(tau)
    s2 = np.sinh(tau) ** 2
    return PartnerMetric4(
        ell=ell,
        g00=-(ell**2),
        g11=ell**2 * s2,
        g22=ell**2 * s2 * np.sin(theta) ** 2,
        g33=ell**2 * s2 * np.sin(phi) ** 2,
    )


def eta_metric_ratio(eta, metric_diag, tau, theta, phi=np.pi / 2):
    """``eta / ((-g)^{1/4} (-g^{00})^{1/4})`` at one point (complex)."""
    return complex(eta(tau, theta, phi) / metric_eta(metric_diag))


def ell_power(ratio_fn, ells=(1.0, 2.0)):
    """Fit ``ratio = C * ell^p`` from two radii; returns ``p``."""
    r0, r1 = (abs(ratio_fn(l)) for l in ells)
    return float(np.log(r1 / r0) / np.log(ells[1] / ells[0]))
