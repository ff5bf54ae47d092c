"""Dirichlet solves: exactness on quadratics and grid convergence.

sigma_m of |z|^2 - 1 is constant, so the discrete solver must reproduce
it to roundoff at every spacing; a quartic manufactured solution then
shows second-order convergence of the nonlinear solve.
"""
import numpy as np

from cmhessian import ScalarField, make_domain, solve_sigma_m

print("quadratic exactness, sigma_1(u) = 1 on the unit disc")
for h in (1 / 8, 1 / 16, 1 / 32):
    domain, grid = make_domain("ball", (1.0,), 1, h)
    rhs = ScalarField.constant(grid, 1.0, bc="zero")
    u = solve_sigma_m(domain, 1, rhs)
    exact = np.minimum((grid.interior_points ** 2).sum(axis=1) - 1.0, 0.0)
    print(f"  h = 1/{round(1/h):2d}:  sup error {np.abs(u.interior - exact).max():.2e}")

print("\nmanufactured quartic, sigma_1(|z|^4 - 1) = 4 |z|^2")
prev = None
for h in (1 / 8, 1 / 16, 1 / 32, 1 / 64):
    domain, grid = make_domain("ball", (1.0,), 1, h)
    rhs = ScalarField(grid, 4.0 * (grid.points ** 2).sum(axis=1), bc="zero")
    u = solve_sigma_m(domain, 1, rhs)
    exact = np.minimum((grid.interior_points ** 2).sum(axis=1) ** 2 - 1.0, 0.0)
    err = np.abs(u.interior - exact).max()
    ratio = "" if prev is None else f"   ratio {err / prev:.3f}"
    print(f"  h = 1/{round(1/h):2d}:  sup error {err:.3e}{ratio}")
    prev = err

print("\ncomplex Monge-Ampere on the ball in C^2, sigma_2(u) = 1")
domain, grid = make_domain("ball", (1.0,), 2, 1 / 6)
u = solve_sigma_m(domain, 2, ScalarField.constant(grid, 1.0, bc="zero"))
exact = np.minimum((grid.interior_points ** 2).sum(axis=1) - 1.0, 0.0)
print(f"  h = 1/6:   sup error {np.abs(u.interior - exact).max():.2e}")
