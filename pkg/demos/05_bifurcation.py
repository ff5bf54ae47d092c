"""Solvability of sigma_m(u) = psi(z, u)^m below the eigenvalue.

With psi(z, s) = 1 - gamma s, the problem is solvable exactly for
gamma < lambda_1 and the solutions blow up as gamma approaches it; at
gamma >= lambda_1 the solver refuses up front.
"""
from cmhessian import (ScalarField, SpectralConditionError, affine_rhs,
                       check_uniqueness_bifurcation, inverse_iteration,
                       make_domain, solve_bifurcation)

domain, grid = make_domain("ball", (1.0,), 1, 1 / 32)
f = ScalarField.constant(grid, 1.0)
lam1 = inverse_iteration(domain, 1, f).lambda1
print(f"lambda1 = {lam1:.6f}\n")

print(" gamma/lambda1    sup |u|")
for frac in (0.0, 0.25, 0.5, 0.75, 0.9, 0.98):
    rhs = affine_rhs(1.0, frac * lam1)
    u, info = solve_bifurcation(domain, grid, 1, rhs, lam1)
    print(f"   {frac:5.2f}        {u.sup():10.3f}   ({info['method']})")

print("\nat gamma0 >= lambda1 the spectral condition fails:")
try:
    solve_bifurcation(domain, grid, 1, affine_rhs(1.0, 1.1 * lam1), lam1)
except SpectralConditionError as exc:
    print(f"  refused: {exc}")

rep = check_uniqueness_bifurcation(
    domain, grid, 1, affine_rhs(1.0, 0.5 * lam1), lam1, k=3)
print(f"\nuniqueness probe over 3 randomized schedules: "
      f"sup spread {rep['sup_spread']:.2e}")
