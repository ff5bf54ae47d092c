"""First eigenpair on the unit disc, two ways.

The eigenpair solves sigma_1(u) = -lambda u with u = 0 on the boundary
and min u = -1; for n = m = 1 the operator is a quarter Laplacian, so
lambda_1 = j_{0,1}^2 / 4 is known exactly and both solvers can be
checked against it.
"""
from scipy.special import jn_zeros

from cmhessian import (ScalarField, bounds_report, continuity_path,
                       inverse_iteration, make_domain, verify_eigenpair)

domain, grid = make_domain("ball", params=(1.0,), n=1, h=1 / 64)
f = ScalarField.constant(grid, 1.0)
exact = jn_zeros(0, 1)[0] ** 2 / 4

print(f"grid {grid.shape}, {grid.n_interior} interior nodes")

result = inverse_iteration(domain, 1, f)
print(f"\ninverse iteration:  lambda1 = {result.lambda1:.8f}"
      f"  ({result.iterations} sweeps)")
print(f"Bessel value:       lambda1 = {exact:.8f}"
      f"  (rel. error {abs(result.lambda1 - exact) / exact:.2e})")

path = continuity_path(domain, 1, f)
print(f"continuation path:  lambda1 = {path.lambda1:.8f}"
      f"  (+/- {path.lambda_error:.1e})")
print("\n  lambda      sup|u_lambda|")
for lam, sup in path.path:
    print(f"  {lam:8.5f}   {sup:12.3f}")

ver = verify_eigenpair(domain, 1, f, result.lambda1, result.u1)
print(f"\nequation residual   {ver.equation_residual:.2e}")
print(f"normalization       {ver.normalization_defect:.2e}")
print(f"Rayleigh defect     {ver.rayleigh_defect:.2e}")

rep = bounds_report(domain, f, 1, result, lambda1_m1=result.lambda1)
print(f"\nbounds: {rep.lower_alexandrov:.4f} (max principle), "
      f"{rep.lower_diam:.4f} (diameter)  <=  {result.lambda1:.4f}  <=  "
      f"{rep.upper_laplacian:.4f} (Laplacian), "
      f"{rep.upper_inscribed_ball:.4f} (inscribed ball)   "
      f"{'all pass' if rep.passed else 'FAIL'}")
