"""Experiment: how does lambda_1 scale with domain volume?

For balls the scaling law lambda_1 ~ R^{-2} = vol^{-1/n} is exact; for
ellipsoids of the same volume but increasing eccentricity the eigenvalue
drifts upward, probing the conjecture that lambda_1 scales like
vol^{-1/n} rather than with the diameter.  No threshold is asserted --
this is an exploration, not an acceptance test.
"""
from cmhessian import ScalarField, inverse_iteration, make_domain, volume

print("balls: exact scaling lambda_1 ~ vol^{-1}  (n = 1, m = 1)")
print("   R      vol      lambda1     lambda1 * vol")
for R in (0.6, 0.8, 1.0, 1.25):
    domain, grid = make_domain("ball", (R,), 1, R / 48)
    lam = inverse_iteration(domain, 1, ScalarField.constant(grid, 1.0)).lambda1
    v = volume(domain)
    print(f"  {R:4.2f}  {v:7.4f}   {lam:8.5f}     {lam * v:8.5f}")

print("\nellipsoids of unit area, increasing eccentricity")
print("   a      b      diam    lambda1    lambda1 * vol")
for a in (1.0, 1.25, 1.6, 2.0):
    b = 1.0 / a
    domain, grid = make_domain("ellipsoid", (a, b), 1, b / 24)
    lam = inverse_iteration(domain, 1, ScalarField.constant(grid, 1.0)).lambda1
    v = volume(domain)
    print(f"  {a:4.2f}  {b:5.3f}   {2 * a:5.2f}   {lam:8.5f}    {lam * v:8.5f}")

print("\nlambda1 * vol stays O(1) while the diameter doubles: the volume, "
      "not the diameter,\nsets the scale (conjectured; no threshold asserted).")
