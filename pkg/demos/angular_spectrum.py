"""
Angular spectrum from the superpotential
========================================

Finite-difference levels of the angular operator next to the closed-form
levels, then the Jacobi eigenfunctions checked against the grid operator.
"""
import numpy as np

from desitter_dirac import susy_angular

for m in (1, 2):
    fac = susy_angular.susy_factorization(m)
    ev = susy_angular.oracle_spectrum(fac.V_plus, 5, 4000)
    print(f"m={m}, A={fac.A_const}")
    for n in range(5):
        print(f"  n={n}  grid {ev[n]:10.6f}   closed form {susy_angular.analytic_spectrum(m, n):10.6f}")

# eigenfunctions: residual against extrapolated grid eigenvalues
lam = susy_angular.oracle_spectrum_extrapolated(susy_angular.susy_factorization(1).V_plus, 5, 4000)
for n in range(5):
    print(f"Jacobi mode n={n}: residual {susy_angular.h_plus_residual(1, n, lam[n]):.2e}")

# lowering operator kills the ground state
print("zero mode residual:", susy_angular.zero_mode_residual(1))
