"""Geometric bounds on lambda_1 across domains.

Lower bounds (maximum principle, diameter) and upper bounds (Laplacian
comparison, inscribed ball) sandwich every computed eigenvalue; the
inscribed-ball bound is tight exactly when the domain is a ball.
"""
from cmhessian import (ScalarField, bounds_report, inverse_iteration,
                       make_domain)

cases = [
    ("ball", (1.0,), "unit disc"),
    ("ball", (0.8,), "disc R = 0.8"),
    ("ellipsoid", (1.0, 0.5), "ellipse 1 x 0.5"),
    ("box", (1.0, 1.0), "square, half-width 1"),
]

print(f"{'domain':<22}{'lower(MP)':>10}{'lower(diam)':>12}"
      f"{'lambda1':>10}{'upper(Lap)':>12}{'upper(ball)':>12}  ok")
for kind, params, label in cases:
    domain, grid = make_domain(kind, params, 1, min(params) / 32)
    f = ScalarField.constant(grid, 1.0)
    r = inverse_iteration(domain, 1, f)
    rep = bounds_report(domain, f, 1, r, lambda1_m1=r.lambda1)
    note = "pass" if rep.passed else "FAIL"
    if domain.is_heuristic:
        note += " (box: heuristic rho)"
    print(f"{label:<22}{rep.lower_alexandrov:>10.4f}{rep.lower_diam:>12.4f}"
          f"{r.lambda1:>10.4f}{rep.upper_laplacian:>12.4f}"
          f"{rep.upper_inscribed_ball:>12.4f}  {note}")
