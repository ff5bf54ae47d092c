"""Acceptance criteria, one test per criterion, each printing a PASS line.

Hard numbers come from the m = 1 Bessel reduction and the radial
shooting oracle; everything else is property-based at the stated
tolerances.  Heavy runs (disc at h = 1/64, the C^2 ball at h = 1/12)
are shared through module-scoped fixtures.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""
import json
import math
import time

import numpy as np
import pytest
from scipy.special import jn_zeros

from cmhessian import (ScalarField, affine_rhs, blocki_inequality,
                       check_uniqueness_bifurcation, continuity_path,
                       fixed_point_decreasing, inverse_iteration,
                       lower_bound_alexandrov, lower_bound_diameter,
                       make_domain, radial_eigen_shoot, rayleigh_quotient,
                       solve_bifurcation, solve_continuity_problem,
                       solve_sigma_m, SpectralConditionError,
                       uniqueness_probe, upper_bound_laplacian)
from cmhessian.cli import load_report, run as cli_run

LAM_DISC = jn_zeros(0, 1)[0] ** 2 / 4       # 1.445796...
LAM_BALL2_M1 = jn_zeros(1, 1)[0] ** 2 / 8   # 1.835246...


def report(criterion, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
    assert ok, detail


# -- shared heavy fixtures -----------------------------------------------------

@pytest.fixture(scope="module")
def disc_eigen(disc64, ones64):
    d, _ = disc64
    t0 = time.time()
    r = inverse_iteration(d, 1, ones64)
    return r, time.time() - t0


@pytest.fixture(scope="module")
def disc_path(disc64, ones64):
    d, _ = disc64
    return continuity_path(d, 1, ones64)


@pytest.fixture(scope="module")
def ball2_12():
    return make_domain("ball", (1.0,), 2, 1 / 12)


@pytest.fixture(scope="module")
def ball2_12_m1(ball2_12):
    d, g = ball2_12
    return inverse_iteration(d, 1, ScalarField.constant(g, 1.0))


@pytest.fixture(scope="module")
def ball2_12_m2(ball2_12):
    d, g = ball2_12
    return inverse_iteration(d, 2, ScalarField.constant(g, 1.0))


@pytest.fixture(scope="module")
def radial_m2():
    lam, prof = radial_eigen_shoot(2, 2, 1.0)
    return lam, prof


# -- criteria ------------------------------------------------------------------

def test_c01_disc_eigenvalue_oracle(disc_eigen):
    r, elapsed = disc_eigen
    rel = abs(r.lambda1 - LAM_DISC) / LAM_DISC
    report(1, rel <= 0.01 and elapsed <= 60.0,
           f"disc h=1/64 lambda1={r.lambda1:.6f} vs {LAM_DISC:.6f} "
           f"(rel {rel:.2e}), {elapsed:.1f}s")


def test_c02_method_agreement(disc_eigen, disc_path):
    r, _ = disc_eigen
    p = disc_path
    gap = abs(p.lambda1 - r.lambda1) / r.lambda1
    report(2, gap <= 5e-3,
           f"continuity {p.lambda1:.6f} vs inverse {r.lambda1:.6f} "
           f"(rel gap {gap:.2e})")


def test_c03_rayleigh_attainment(disc64, ones64, disc_eigen):
    d, g = disc64
    r, _ = disc_eigen
    q = rayleigh_quotient(r.u1, ones64, 1)
    ok = abs(q - r.lambda1) / r.lambda1 <= 0.02
    rng = np.random.default_rng(42)
    floor = r.lambda1 * (1 - 0.005)
    quotients = []
    for _ in range(10):
        a, b, cx, cy = rng.uniform(0.3, 1.5, size=4)
        h = ScalarField.from_function(
            g, lambda p: a + b * np.exp(
                -2.0 * ((p[:, 0] - 0.3 * cx) ** 2 + (p[:, 1] - 0.3 * cy) ** 2)),
            bc="zero")
        u = solve_sigma_m(d, 1, h)
        quotients.append(rayleigh_quotient(u, ones64, 1))
    ok = ok and all(q_i >= floor for q_i in quotients)
    report(3, ok,
           f"quotient(u1)={q:.6f} vs lambda1={r.lambda1:.6f}; "
           f"min random quotient {min(quotients):.4f} >= {floor:.4f}")


def test_c04_scaling_law():
    lam1_rad, _ = radial_eigen_shoot(1, 1, 1.0, tol=1e-12)
    grid_vals, rad_ok = {}, True
    for R in (0.5, 0.8):
        lam_r, _ = radial_eigen_shoot(1, 1, R, tol=1e-12)
        rad_ok &= abs(lam_r - lam1_rad / R ** 2) / (lam1_rad / R ** 2) <= 1e-9
        d, g = make_domain("ball", (R,), 1, 1 / 64)
        grid_vals[R] = inverse_iteration(
            d, 1, ScalarField.constant(g, 1.0)).lambda1
    d1, g1 = make_domain("ball", (1.0,), 1, 1 / 64)
    lam1_grid = inverse_iteration(d1, 1, ScalarField.constant(g1, 1.0)).lambda1
    grid_ok = all(
        abs(grid_vals[R] - lam1_grid / R ** 2) / (lam1_grid / R ** 2) <= 0.02
        for R in (0.5, 0.8))
    report(4, rad_ok and grid_ok,
           f"radial to 1e-9; grid lam(0.5)={grid_vals[0.5]:.4f}, "
           f"lam(0.8)={grid_vals[0.8]:.4f} vs lam(1)/R^2")


def test_c05_monotonicity(disc_eigen):
    r, _ = disc_eigen
    d08, g08 = make_domain("ball", (0.8,), 1, 1 / 64)
    lam08 = inverse_iteration(d08, 1, ScalarField.constant(g08, 1.0)).lambda1
    ratio = lam08 / r.lambda1
    ok = r.lambda1 < lam08 and abs(ratio - 1.5625) / 1.5625 <= 0.02
    report(5, ok, f"lambda1(B1)={r.lambda1:.5f} < lambda1(B0.8)={lam08:.5f}, "
                  f"ratio {ratio:.5f} vs 1.5625")


def test_c06_bounds_sandwich(disc64, ones64, disc_eigen, ball2_12,
                             ball2_12_m1, ball2_12_m2):
    runs = []
    d, _ = disc64
    r, _ = disc_eigen
    runs.append(("disc m=1", d, ones64, r.lambda1, r.lambda1))
    d2, g2 = ball2_12
    ones2 = ScalarField.constant(g2, 1.0)
    runs.append(("ball2 m=1", d2, ones2, ball2_12_m1.lambda1,
                 ball2_12_m1.lambda1))
    runs.append(("ball2 m=2", d2, ones2, ball2_12_m2.lambda1,
                 ball2_12_m1.lambda1))
    ok = True
    details = []
    for name, dom, f, lam, lam_m1 in runs:
        lo_a = lower_bound_alexandrov(dom, f)
        lo_d = lower_bound_diameter(dom)
        up_l = upper_bound_laplacian(dom, f, lam_m1)
        good = lo_a <= lam and lo_d <= lam and lam <= up_l * 1.02
        ok &= good
        details.append(f"{name}: {lo_a:.3f},{lo_d:.3f} <= {lam:.4f} "
                       f"<= {up_l:.4f}*1.02")
    # disc reference values from the closed forms
    d_lo = lower_bound_alexandrov(d, ones64)
    ok &= abs(d_lo - 0.25) < 0.01 and lower_bound_diameter(d) == 1.0
    report(6, ok, "; ".join(details))


def test_c07_blowup_signature(disc_path):
    p = disc_path
    lam_hat = p.lambda1
    ref = min(p.path, key=lambda q: abs(q[0] - 0.9 * lam_hat))
    terminus = p.path[-1]
    ok = (abs(ref[0] - 0.9 * lam_hat) <= 0.03 * lam_hat
          and terminus[1] >= 5.0 * ref[1])
    report(7, ok, f"sup at terminus {terminus[1]:.1f} >= 5 x "
                  f"{ref[1]:.2f} (at lambda={ref[0]:.4f} ~ 0.9 lambda1)")


def test_c08_fixed_point_monotone(disc64, ones64, disc_eigen):
    d, g = disc64
    r, _ = disc_eigen
    lam = r.lambda1
    # the sweep raises MonotonicityError if u_{j-1} <= u_j + 1e-9 ever fails
    u_fp, trace = fixed_point_decreasing(
        d, g, 1, lambda pts, s: 1.0 - 0.5 * lam * np.asarray(s))
    u_ct = solve_continuity_problem(d, 1, ones64, 0.5 * lam)
    gap = float(np.abs(u_fp.interior - u_ct.interior).max())
    report(8, gap <= 1e-5,
           f"{len(trace)} monotone sweeps; fixed point matches continuity "
           f"at 0.5*lambda1 to {gap:.2e}")


def test_c09_bifurcation_gate(disc32, disc32_eigen):
    d, g = disc32
    lam1 = disc32_eigen.lambda1
    u, info = solve_bifurcation(d, g, 1, affine_rhs(1.0, 0.5 * lam1), lam1)
    refused = False
    try:
        solve_bifurcation(d, g, 1, affine_rhs(1.0, 1.1 * lam1), lam1)
    except SpectralConditionError:
        refused = True
    spread = check_uniqueness_bifurcation(
        d, g, 1, affine_rhs(1.0, 0.5 * lam1), lam1, k=3, seed=0)
    ok = u.sup() > 0 and refused and spread["sup_spread"] <= 1e-6
    report(9, ok, f"gamma0=0.5*lambda1 solved (sup {u.sup():.3f}); "
                  f"gamma0=1.1*lambda1 refused; spread "
                  f"{spread['sup_spread']:.2e}")


def test_c10_ball2_coverage(ball2_12_m1, ball2_12_m2, radial_m2):
    rel1 = abs(ball2_12_m1.lambda1 - LAM_BALL2_M1) / LAM_BALL2_M1
    lam_rad, _ = radial_m2
    gap2 = abs(ball2_12_m2.lambda1 - lam_rad) / lam_rad
    ok = rel1 <= 0.03 and gap2 <= 0.05
    report(10, ok,
           f"m=1: {ball2_12_m1.lambda1:.5f} vs {LAM_BALL2_M1:.5f} "
           f"(rel {rel1:.2e}); m=2: grid {ball2_12_m2.lambda1:.5f} vs "
           f"radial {lam_rad:.5f} (gap {gap2:.2e}, radial optimality "
           f"unproven for m > 1)")


def test_c10b_radial_rayleigh_witness(ball2_12, ball2_12_m2, radial_m2):
    """The interpolated radial profile is an upper-bound witness: its
    Rayleigh quotient sits in [lambda1^m, 1.03 * lambda1^m]."""
    d, g = ball2_12
    lam_rad, prof = radial_m2
    vals = np.where(g.interior, prof.sample_on_points(g.points), 0.0)
    u = ScalarField(g, np.minimum(vals, 0.0), bc="zero")
    ones2 = ScalarField.constant(g, 1.0)
    # transferred profile: admit the O(h) cone defect of the transfer
    q = rayleigh_quotient(u, ones2, 2, cone_tol=1e-2)
    lam_m = ball2_12_m2.lambda1 ** 2
    ok = lam_m * (1 - 0.01) <= q <= lam_m * 1.03
    report("10b", ok,
           f"radial-profile quotient {q:.5f} within [1, 1.03] x "
           f"lambda1^2 = {lam_m:.5f}")


def test_c11_property_suites_headless(tmp_path, disc16, ones16):
    t0 = time.time()
    rng = np.random.default_rng(0)
    # cone membership / Maclaurin / concavity sampling
    from cmhessian import in_gamma_m, maclaurin_gap, sigma_k, spectrum
    for _ in range(200):
        s = np.sort(rng.uniform(-2, 4, size=2))[::-1]
        if in_gamma_m(s, 2):
            assert in_gamma_m(s, 1)
            assert maclaurin_gap(s, 2) >= -1e-12
    for _ in range(50):
        A1 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        B1 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        A = A1 @ A1.conj().T + 0.1 * np.eye(2)
        B = B1 @ B1.conj().T + 0.1 * np.eye(2)
        t = rng.uniform()
        g2 = lambda M: math.sqrt(sigma_k(spectrum(M), 2))
        assert g2(t * A + (1 - t) * B) >= t * g2(A) + (1 - t) * g2(B) - 1e-10

    # Blocki inequality on 20 random pairs
    d, g = disc16
    for _ in range(20):
        a, b = rng.uniform(0.3, 2.0, size=2)
        w = solve_sigma_m(d, 1, ScalarField.from_function(
            g, lambda p: a + np.sin(b * p[:, 0]) ** 2, bc="zero"))
        v = solve_sigma_m(d, 1, ScalarField.from_function(
            g, lambda p: b + np.cos(a * p[:, 1]) ** 2, bc="zero"))
        lhs, rhs, ok = blocki_inequality(w, v, 1)
        assert ok

    # comparison-principle monotonicity
    h1 = ScalarField(g, ones16.values, bc="zero")
    h2 = ScalarField(g, np.where(g.interior, 1.5, 0.0), bc="zero")
    u1 = solve_sigma_m(d, 1, h1)
    u2 = solve_sigma_m(d, 1, h2)
    assert np.all(u1.interior >= u2.interior - 1e-8)

    # determinism in exact mode through the CLI
    cfg = {
        "domain": {"kind": "ball", "params": [1.0], "n": 1, "h": 1 / 16},
        "problem": {"mode": "eigen", "m": 1,
                    "f": {"type": "constant", "value": 1.0}},
        "output": {"report": str(tmp_path / "p1.json")},
        "determinism": "exact",
    }
    p1 = tmp_path / "c1.json"
    p1.write_text(json.dumps(cfg))
    assert cli_run(str(p1)) == 0
    cfg["output"]["report"] = str(tmp_path / "p2.json")
    p2 = tmp_path / "c2.json"
    p2.write_text(json.dumps(cfg))
    assert cli_run(str(p2)) == 0
    a = load_report(str(tmp_path / "p1.json"))["results"]
    b = load_report(str(tmp_path / "p2.json"))["results"]
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert a == b

    elapsed = time.time() - t0
    report(11, elapsed < 600.0, f"property suites in {elapsed:.1f}s < 600s")


def test_uniqueness_probe_disc(disc32, ones32):
    """Uniqueness surrogate at acceptance scale: randomized starts collapse."""
    d, _ = disc32
    rep = uniqueness_probe(d, 1, ones32, k=5, seed=7)
    ok = rep.lambda_spread_rel <= 1e-4 and rep.eigenfunction_spread <= 1e-3
    report("5.2-surrogate", ok,
           f"lambda spread {rep.lambda_spread_rel:.2e}, "
           f"eigenfunction spread {rep.eigenfunction_spread:.2e}")
