import numpy as np
import pytest

from cmhessian import (ScalarField, SolverConfig, build_subsolution,
                       fixed_point_decreasing, make_domain,
                       solve_continuity_problem, solve_laplace, solve_sigma_m)
from cmhessian.hessian import (gamma_slack_from_entries, hessian_entries,
                               sigma_from_entries)
from conftest import quad_ball_field


def exact_quad(grid):
    return np.minimum((grid.interior_points ** 2).sum(axis=1) - 1.0, 0.0)


# -- solve_laplace -------------------------------------------------------------

def test_laplace_quadratic_exact(disc32, ones32):
    d, g = disc32
    w = solve_laplace(d, ScalarField(g, ones32.values, bc="zero"))
    assert np.abs(w.interior - exact_quad(g)).max() < 1e-11


def test_laplace_zero_rhs(disc16):
    d, g = disc16
    w = solve_laplace(d, ScalarField.constant(g, 0.0, bc="zero"))
    assert np.all(w.values == 0.0)


def test_laplace_ball2(ball2_6):
    d, g = ball2_6
    w = solve_laplace(d, ScalarField.constant(g, 2.0, bc="zero"))
    assert np.abs(w.interior - exact_quad(g)).max() < 1e-10


def test_laplace_negative_rhs_rejected(disc16):
    d, g = disc16
    with pytest.raises(ValueError):
        solve_laplace(d, ScalarField.constant(g, -1.0, bc="zero"))


# -- build_subsolution ----------------------------------------------------------

def test_subsolution_unit_amplitude(disc16, ones16):
    d, g = disc16
    sub = build_subsolution(d, 1, ScalarField(g, ones16.values, bc="zero"))
    assert np.abs(sub.interior - exact_quad(g)).max() < 1e-14


def test_subsolution_sqrt_amplitude(ball2_6):
    d, g = ball2_6
    sub = build_subsolution(d, 2, ScalarField.constant(g, 4.0, bc="zero"))
    assert np.abs(sub.interior - 2.0 * exact_quad(g)).max() < 1e-13


def test_subsolution_zero_rhs(disc16):
    d, g = disc16
    sub = build_subsolution(d, 1, ScalarField.constant(g, 0.0, bc="zero"))
    assert np.all(sub.values == 0.0)


def test_subsolution_dominates_rhs(disc16):
    d, g = disc16
    h = ScalarField.from_function(
        g, lambda p: 1.0 + 0.5 * np.sin(3 * p[:, 0]) * np.cos(2 * p[:, 1]),
        bc="zero")
    sub = build_subsolution(d, 1, h)
    e = hessian_entries(sub)
    assert np.all(sigma_from_entries(e, 1, 1) >= h.interior - 1e-12)


# -- solve_sigma_m --------------------------------------------------------------

def test_sigma_m_quadratic_disc(disc32, ones32):
    d, g = disc32
    u = solve_sigma_m(d, 1, ScalarField(g, ones32.values, bc="zero"))
    assert np.abs(u.interior - exact_quad(g)).max() < 1e-11


def test_sigma_m_quadratic_ball2_m2(ball2_6):
    d, g = ball2_6
    u = solve_sigma_m(d, 2, ScalarField.constant(g, 1.0, bc="zero"))
    assert np.abs(u.interior - exact_quad(g)).max() < 1e-9


def test_sigma_m_manufactured_quartic_convergence():
    """sigma_1(|z|^4 - 1) = 4 |z|^2 on the disc; second-order sup error."""
    errs = []
    for h in (1 / 8, 1 / 16, 1 / 32):
        d, g = make_domain("ball", (1.0,), 1, h)
        rhs = ScalarField(g, 4.0 * (g.points ** 2).sum(axis=1), bc="zero")
        u = solve_sigma_m(d, 1, rhs)
        exact = np.minimum((g.interior_points ** 2).sum(axis=1) ** 2 - 1.0, 0)
        errs.append(np.abs(u.interior - exact).max())
    assert errs[1] <= 0.3 * errs[0]
    assert errs[2] <= 0.3 * errs[1]


def test_quadratic_residual_independent_of_h():
    """The exact quadratic solution has machine-level residual at any h."""
    from cmhessian.hessian import hessian_entries, sigma_from_entries

    for h in (1 / 8, 1 / 16, 1 / 32):
        d, g = make_domain("ball", (1.0,), 1, h)
        u = quad_ball_field(g)
        res = np.abs(hessian_entries(u)["H11"] - 1.0).max()
        assert res < 1e-10


def test_sigma_m_zero_rhs_returns_zero(disc16):
    d, g = disc16
    u = solve_sigma_m(d, 1, ScalarField.constant(g, 0.0, bc="zero"))
    assert np.all(u.values == 0.0)


def test_sigma_m_negative_rhs_rejected(disc16):
    d, g = disc16
    with pytest.raises(ValueError):
        solve_sigma_m(d, 1, ScalarField.constant(g, -0.5, bc="zero"))


def test_sigma_m_m_out_of_range(disc16):
    d, g = disc16
    with pytest.raises(ValueError):
        solve_sigma_m(d, 2, ScalarField.constant(g, 1.0, bc="zero"))


def test_comparison_principle(disc16):
    d, g = disc16
    h1 = ScalarField.from_function(
        g, lambda p: 1.0 + 0.3 * np.cos(2 * p[:, 0]), bc="zero")
    h2 = ScalarField(g, h1.values + np.where(g.interior, 0.5, 0.0), bc="zero")
    u1 = solve_sigma_m(d, 1, h1)
    u2 = solve_sigma_m(d, 1, h2)
    assert np.all(u1.interior >= u2.interior - 1e-8)


def test_solution_invariants(disc16):
    d, g = disc16
    h = ScalarField.from_function(
        g, lambda p: np.exp(0.4 * p[:, 0] - 0.2 * p[:, 1]), bc="zero")
    u = solve_sigma_m(d, 1, h)
    assert np.all(u.values <= 0.0)
    assert u.exterior_is_zero()
    e = hessian_entries(u)
    assert gamma_slack_from_entries(e, 1, 1).min() >= 0.0


def test_maclaurin_consistency_n2(ball2_6):
    d, g = ball2_6
    h = ScalarField.constant(g, 1.0, bc="zero")
    u = solve_sigma_m(d, 2, h)
    e = hessian_entries(u)
    tr = sigma_from_entries(e, 2, 1)
    s2 = np.maximum(sigma_from_entries(e, 2, 2), 0.0)
    assert np.all(tr >= 2.0 * np.sqrt(s2) - 1e-8)


def test_stability_shrinking_perturbations(disc16, ones16):
    d, g = disc16
    base = ScalarField(g, ones16.values, bc="zero")
    u0 = solve_sigma_m(d, 1, base)
    gaps = []
    for eps in (0.3, 0.1, 0.03):
        h = ScalarField(g, np.where(g.interior, 1.0 + eps, 0.0), bc="zero")
        u = solve_sigma_m(d, 1, h)
        gaps.append(np.abs(u.interior - u0.interior).max())
    assert gaps[0] > gaps[1] > gaps[2]


# -- fixed point ----------------------------------------------------------------

def test_fixed_point_constant_psi(disc16):
    d, g = disc16
    u, trace = fixed_point_decreasing(d, g, 1, lambda pts, s: np.ones(len(pts)))
    assert len(trace) == 1
    assert np.abs(u.interior - exact_quad(g)).max() < 1e-11


def test_fixed_point_zero_psi(disc16):
    d, g = disc16
    u, trace = fixed_point_decreasing(d, g, 1, lambda pts, s: np.zeros(len(pts)))
    assert np.all(u.values == 0.0)


def test_fixed_point_matches_continuity(disc32, ones32):
    d, g = disc32
    u_fp, trace = fixed_point_decreasing(
        d, g, 1, lambda pts, s: 1.0 - 0.5 * np.asarray(s))
    u_ct = solve_continuity_problem(d, 1, ones32, 0.5)
    assert np.abs(u_fp.interior - u_ct.interior).max() < 1e-7
    assert all(t >= 0 for t in trace)


def test_fixed_point_rejects_increasing_psi(disc16):
    d, g = disc16
    with pytest.raises(ValueError):
        fixed_point_decreasing(d, g, 1, lambda pts, s: 1.0 + np.asarray(s))


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(damping=1.5)
    with pytest.raises(ValueError):
        SolverConfig(residual_tol=-1e-10)
