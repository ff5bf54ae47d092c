"""Dirichlet solvers: sigma_m(u) = h with u = 0 on the boundary.

The workhorse is a damped Newton iteration on the concave root form
sigma_m^{1/m}(u) = q(u), safeguarded by backtracking that keeps every
iterate strictly inside the cone Gamma_m.  Right-hand sides may depend
on u through ``q`` (used by the eigenvalue continuation and the
bifurcation path); plain solves pass a constant q = h^{1/m}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import hessian as hs
from ._linalg import factorize
from .errors import ConeEscapeError, MonotonicityError, NonConvergenceError
from .fields import ScalarField
from .geometry import Domain, Grid


@dataclass
class SolverConfig:
    """Tolerances and budgets shared by the nonlinear solvers."""

    max_newton_iters: int = 60
    residual_tol: float = 1e-10
    damping: float = 0.5
    cone_slack: float = 1e-12
    fixedpoint_tol: float = 1e-9
    max_fixedpoint_iters: int = 500
    eigen_tol: float = 1e-8
    max_eigen_iters: int = 400
    lin_tol: float = 1e-10
    lin_maxiter: int = 500
    blowup_threshold: float = 1e3

    def __post_init__(self):
        positives = (
            self.residual_tol, self.cone_slack, self.fixedpoint_tol,
            self.eigen_tol, self.lin_tol, self.blowup_threshold,
        )
        if any(t <= 0 for t in positives):
            raise ValueError("all tolerances must be positive")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")


def _entries_of(grid: Grid, v):
    ops = hs.entry_ops(grid, "dirichlet")
    out = {"H11": ops["S"][0] @ v}
    if grid.domain.n == 2:
        out["H22"] = ops["S"][1] @ v
        out["H12re"] = ops["A"] @ v
        out["H12im"] = ops["B"] @ v
    return out


def _cone_ok(grid: Grid, entries, m, q, slack):
    """Iterate admissibility: strictly inside Gamma_m, except that nodes
    with a (near-)zero target may sit on the cone boundary."""
    g = hs.gamma_slack_from_entries(entries, grid.domain.n, m)
    ok = g > slack
    degenerate = q <= 1e-14
    ok |= degenerate & (g > -1e-13)
    return bool(np.all(ok))


def newton_sigma_root(grid: Grid, m, q_of, dq_of=None, v0=None, cfg=None,
                      cache_key=None):
    """Solve sigma_m^{1/m}(u) = q(u) at interior nodes, zero outside.

    q_of(v) returns the (nonnegative) target in the root scale; dq_of(v),
    when given, returns its pointwise derivative with respect to u.
    Convergence is measured on the sigma_m-form residual
    sup |sigma_m(u) - q(u)^m| <= cfg.residual_tol.

    Returns (v, info) with v the interior solution vector.
    """
    cfg = cfg or SolverConfig()
    n = grid.domain.n
    v = np.zeros(grid.n_interior) if v0 is None else np.asarray(v0, dtype=float).copy()

    e = _entries_of(grid, v)
    q = q_of(v)
    if np.any(q < -1e-14):
        raise ValueError("negative right-hand side")
    G = hs.sigma_root_from_entries(e, n, m) - q
    res = float(np.abs(hs.sigma_from_entries(e, n, m) - q ** m).max())
    gnorm = float(np.abs(G).max())

    for it in range(cfg.max_newton_iters):
        # residual_tol is relative to the right-hand-side sup once that
        # exceeds unit scale (absolute below), so blow-up-scale solves
        # are not asked to beat the floating-point floor
        tol_eff = cfg.residual_tol * max(1.0, float((q ** m).max(initial=0.0)))
        if res <= tol_eff:
            return v, {"iterations": it, "residual": res}
        coeffs = hs.f_coefficients(e, n, m)
        J = hs.jacobian_matrix(grid, coeffs, m)
        if dq_of is not None:
            J = (J - sp.diags(dq_of(v))).tocsr()
        key = cache_key if (dq_of is None and m == 1) else None
        fac = factorize(J, cfg, grid=grid, cache_key=key)
        delta = fac.solve(-G)

        t = 1.0
        accepted = False
        cone_seen = False
        while t >= 1e-8:
            v_t = v + t * delta
            e_t = _entries_of(grid, v_t)
            q_t = q_of(v_t)
            if _cone_ok(grid, e_t, m, q_t, cfg.cone_slack):
                cone_seen = True
                G_t = hs.sigma_root_from_entries(e_t, n, m) - q_t
                g_t = float(np.abs(G_t).max())
                if g_t <= gnorm * (1.0 - 1e-4 * t) + 1e-15:
                    v, e, q, G, gnorm = v_t, e_t, q_t, G_t, g_t
                    res = float(np.abs(hs.sigma_from_entries(e, n, m) - q ** m).max())
                    accepted = True
                    break
            t *= cfg.damping
        if not accepted:
            if not cone_seen:
                raise ConeEscapeError(
                    "no Newton step length keeps the iterate inside Gamma_m"
                )
            raise NonConvergenceError(
                f"Newton backtracking stalled at residual {res:.3e}"
            )
    tol_eff = cfg.residual_tol * max(1.0, float((q ** m).max(initial=0.0)))
    if res <= tol_eff:
        return v, {"iterations": cfg.max_newton_iters, "residual": res}
    raise NonConvergenceError(
        f"Newton did not reach residual {cfg.residual_tol:.1e} in "
        f"{cfg.max_newton_iters} iterations (residual {res:.3e})"
    )


# ---------------------------------------------------------------------------
# public solves
# ---------------------------------------------------------------------------

def solve_laplace(domain: Domain, rhs: ScalarField) -> ScalarField:
    """Solve trace[u_{i jbar}] = rhs with u = 0 on the boundary.

    rhs must be nonnegative on interior nodes; the solution is <= 0.
    """
    grid = rhs.grid
    r = rhs.interior
    if np.any(r < -1e-12):
        raise ValueError("solve_laplace expects a nonnegative right-hand side")
    if np.abs(r).max() == 0.0:
        return ScalarField.from_interior(grid, np.zeros(grid.n_interior))
    ops = hs.entry_ops(grid, "dirichlet")
    L = ops["S"][0] if grid.domain.n == 1 else (ops["S"][0] + ops["S"][1]).tocsr()
    fac = factorize(L, grid=grid, cache_key="sigma1")
    w = fac.solve(r)
    if w.max() > 1e-9:
        raise NonConvergenceError("Laplace solve lost negativity; singular system?")
    return ScalarField.from_interior(grid, np.minimum(w, 0.0))


def build_subsolution(domain: Domain, m: int, h: ScalarField) -> ScalarField:
    """Scaled quadratic with sigma_m >= h everywhere: A * base.

    For a ball of radius R the base is |z|^2 - R^2 with spectrum 1, so
    A = (sup h / C(n, m))^{1/m}.
    """
    grid = h.grid
    base_spec = domain.subsolution_base_spectrum()
    em = hs.sigma_k(base_spec, m)
    sup_h = float(np.maximum(h.interior, 0.0).max())
    amp = (sup_h / em) ** (1.0 / m)
    base = domain.subsolution_base(grid.points)
    vals = np.where(grid.interior, amp * base, 0.0)
    return ScalarField(grid, np.minimum(vals, 0.0), bc="zero")


def solve_sigma_m(domain: Domain, m: int, h: ScalarField, cfg=None,
                  initial: ScalarField | None = None) -> ScalarField:
    """Solve sigma_m(u) = h with u = 0 on the boundary, u in Gamma_m.

    Newton on the root form, seeded by ``initial`` (when cone-valid) or
    by the quadratic subsolution.
    """
    cfg = cfg or SolverConfig()
    grid = h.grid
    n = grid.domain.n
    if not 1 <= m <= n:
        raise ValueError(f"require 1 <= m <= n, got m={m}, n={n}")
    hv = h.interior
    if np.any(hv < -1e-12):
        raise ValueError("sigma_m right-hand side must be nonnegative")
    hv = np.maximum(hv, 0.0)
    if hv.max() <= cfg.residual_tol:
        return ScalarField.from_interior(grid, np.zeros(grid.n_interior))

    v0 = None
    if initial is not None:
        e0 = _entries_of(grid, initial.interior)
        if _cone_set(grid, e0, m, 0.0):
            v0 = initial.interior
    if v0 is None:
        v0 = build_subsolution(domain, m, h).interior

    q = hv ** (1.0 / m)
    v, _ = newton_sigma_root(grid, m, lambda _v: q, None, v0, cfg,
                             cache_key="sigma1")
    return ScalarField.from_interior(grid, np.minimum(v, 0.0))


def _cone_set(grid, entries, m, slack):
    g = hs.gamma_slack_from_entries(entries, grid.domain.n, m)
    return bool(np.all(g > slack))


def fixed_point_decreasing(domain: Domain, grid: Grid, m: int, psi, cfg=None):
    """Monotone iteration for sigma_m(u) = psi(z, u)^m, psi nonincreasing in u.

    Starting from a quadratic subsolution, each sweep solves the frozen
    problem sigma_m(u_j) = psi(z, u_{j-1})^m; the iterates increase
    pointwise to the fixed point.  Returns (field, trace of sup-norm
    increments).
    """
    cfg = cfg or SolverConfig()
    pts = grid.interior_points

    def psi_at(v):
        vals = np.asarray(psi(pts, v), dtype=float)
        if vals.shape == ():
            vals = np.full(grid.n_interior, float(vals))
        return vals

    # spot-check monotonicity in s on a small sample
    rng = np.random.default_rng(0)
    take = rng.integers(0, grid.n_interior, size=min(200, grid.n_interior))
    s_probe = -rng.uniform(0.0, 2.0, size=take.size)
    p_hi = np.asarray(psi(pts[take], s_probe))
    p_lo = np.asarray(psi(pts[take], s_probe - 1e-4))
    if np.any(p_lo < p_hi - 1e-8):
        raise ValueError("psi must be nonincreasing in its second argument")
    if np.any(psi_at(np.zeros(grid.n_interior)) < -1e-14):
        raise ValueError("psi must be nonnegative")

    # scalar amplitude A with sigma_m(A * base) >= psi(z, A * base)^m
    base = grid.restrict(
        np.where(grid.interior, domain.subsolution_base(grid.points), 0.0))
    base = np.minimum(base, 0.0)
    em_root = hs.sigma_k(domain.subsolution_base_spectrum(), m) ** (1.0 / m)
    amp = float(np.max(psi_at(np.zeros(grid.n_interior)))) / em_root
    for _ in range(200):
        amp_next = float(np.max(psi_at(amp * base))) / em_root
        if amp_next <= amp * (1.0 + 1e-12):
            break
        amp = amp_next
        if amp > 1e8:
            raise NonConvergenceError(
                "no quadratic subsolution: psi grows too fast in -u"
            )

    u = ScalarField.from_interior(grid, amp * base)
    trace = []
    for _ in range(cfg.max_fixedpoint_iters):
        target = psi_at(u.interior)
        h_field = ScalarField.from_interior(grid, target ** m)
        u_next = solve_sigma_m(domain, m, h_field, cfg, initial=u)
        if np.any(u.interior > u_next.interior + 1e-9):
            raise MonotonicityError(
                "fixed-point sweep lost pointwise monotonicity; "
                "discretization too coarse for this right-hand side"
            )
        inc = float(np.abs(u_next.interior - u.interior).max())
        trace.append(inc)
        u = u_next
        if inc <= cfg.fixedpoint_tol:
            return u, trace
    raise NonConvergenceError(
        f"fixed point not reached in {cfg.max_fixedpoint_iters} sweeps "
        f"(last increment {trace[-1]:.3e})"
    )
