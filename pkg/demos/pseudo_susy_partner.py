"""
Pseudo-supersymmetric partner on an angular grid
================================================

Intertwining residual under refinement, the zero-function ablation, the
nilpotent supercharge and the partner metric.
"""
import numpy as np

from desitter_dirac import pseudo_susy
from desitter_dirac.separation import GaugeChoice
from desitter_dirac.spectral_numeric import loglog_slope

ell, M, tau = 1.3, 0.7, 1.0
reps = []
for N in (32, 64, 128):
    r = pseudo_susy.intertwining_residuals(ell, M, tau, pseudo_susy.AngularGrid.square(N), GaugeChoice(1.0))
    reps.append(r)
    print(f"N={N:4d} h={r.h:.4f}  R_int={r.r_intertwine:.3e}  full-cot variant {r.r_intertwine_by_cot['cot']:.3f}")
print("slope:", loglog_slope([r.h for r in reps], [r.r_intertwine for r in reps]))

abl = pseudo_susy.intertwining_residuals(ell, M, tau, pseudo_susy.AngularGrid.square(128), GaugeChoice(1.0),
                                        zero_unknowns=True)
print(f"with f = g = U = 0: R_int={abl.r_intertwine:.3e} ({abl.r_intertwine / reps[-1].r_intertwine:.0f}x larger)")

grid = pseudo_susy.AngularGrid.square(24)
Q = pseudo_susy.supercharge(pseudo_susy.eta1(ell).diag(tau, grid))
print("nonzeros in Q^2:", (Q @ Q).count_nonzero())

g = pseudo_susy.partner_metric(ell, tau, 1.1, 0.9)
print("partner metric signature", g.signature, "determinant", g.determinant)
ratio = pseudo_susy.eta_metric_ratio(pseudo_susy.eta1(ell), g.diagonal, tau, 1.1, 0.9)
print("eta1 / metric density:", ratio)
