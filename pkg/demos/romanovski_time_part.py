"""
Romanovski polynomials and the time part
========================================

Exact rational Romanovski polynomials, their finite orthogonality, and the
time-part solution built on top of them.
"""
from fractions import Fraction

import numpy as np

from desitter_dirac import romanovski

a, b = Fraction(-2), Fraction(-17, 4)
for nu in range(4):
    p = romanovski.romanovski_poly(nu, a, b)
    print(f"R_{nu}: coefficients {[str(c) for c in p.coeffs]}, ODE residual {p.ode_residual_coeffs()}")

# only low-degree pairs have a convergent weight integral
for i in range(4):
    for j in range(i + 1, 4):
        if romanovski.orthogonality_converges(i, j, -4):
            print(f"<R_{i}, R_{j}> = {romanovski.orthogonality_integral(i, j, -2, -4):.2e}")
        else:
            print(f"<R_{i}, R_{j}> diverges")

z = np.linspace(-10, 10, 2001)
c = romanovski.model_constants(1.0, romanovski.eps_for_component(2))
print(f"A={c.A_big:.6f} B={c.B_big:.6f} a={c.a:.6f} b={c.b:.6f}")
for nubar in range(3):
    sol = romanovski.time_solution(2, nubar, c)
    print(f"nubar={nubar}: omega^2={sol.omega2:.6f}, reduced equation residual {romanovski.reduced_equation_residual(sol, z):.2e}")
