"""Radial reduction of the ball eigenproblem to a 1-D shooting problem.

For u(z) = v(t) with t = |z|^2 the complex Hessian spectrum at t is
{v' + t v'' (once), v' (n-1 times)}, so

    sigma_m(v) = C(n-1, m) v'^m + C(n-1, m-1) v'^{m-1} (v' + t v''),

and the radial eigenproblem with f = 1 reads sigma_m(v) =
C(n, m) lambda^m (-v)^m, v(0) = -1, v(R^2) = 0.  The eigenvalue is
found by bisection on lambda of an adaptive high-order integration; the
removable singularity at t = 0 is started with a two-term series.

For m = 1 the value is a Bessel zero and serves as a hard oracle; for
1 < m radial optimality of the ball eigenfunction is unproven, so
callers treat the value as an upper-bound witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import jn_zeros

from .errors import BracketError, NonConvergenceError


def radial_sigma_m(vp, vpp, t, n: int, m: int):
    """sigma_m of the radial spectrum {v' (n-1 times), v' + t v''}."""
    vp = np.asarray(vp, dtype=float)
    vpp = np.asarray(vpp, dtype=float)
    t = np.asarray(t, dtype=float)
    s1 = math.comb(n - 1, m)
    s2 = math.comb(n - 1, m - 1)
    return s1 * vp ** m + s2 * vp ** (m - 1) * (vp + t * vpp)


@dataclass
class RadialProfile:
    t: np.ndarray
    v: np.ndarray
    vp: np.ndarray
    n: int
    m: int
    lam: float

    def v_of_t(self, t):
        """Profile value at arbitrary t in [0, R^2] (monotone interpolation)."""
        return np.interp(np.asarray(t, dtype=float), self.t, self.v)

    def sample_on_points(self, points):
        """Evaluate the radial eigenfunction at points of R^{2n}."""
        pts = np.asarray(points, dtype=float)
        return self.v_of_t((pts * pts).sum(axis=-1))


def _series_coeff(n, m, lam):
    s2 = math.comb(n - 1, m - 1)
    cnm = math.comb(n, m)
    return -m * cnm * lam ** 2 / (2.0 * (m * cnm + s2))


def _integrate(lam, n, m, R, rtol):
    """Integrate the radial ODE; returns (sol, crossed_zero_early)."""
    cnm = math.comb(n, m)
    s2 = math.comb(n - 1, m - 1)

    def rhs(t, y):
        v, p = y
        target = cnm * lam ** m * max(-v, 0.0) ** m
        return [p, (target - cnm * p ** m) / (s2 * p ** (m - 1) * t)]

    def hit_zero(t, y):
        return y[0]
    hit_zero.terminal = True
    hit_zero.direction = 1.0

    T = R * R
    t0 = 1e-8 * T
    c2 = _series_coeff(n, m, lam)
    y0 = [-1.0 + lam * t0 + c2 * t0 ** 2, lam + 2.0 * c2 * t0]
    sol = solve_ivp(rhs, (t0, T), y0, method="DOP853", rtol=rtol, atol=1e-14,
                    events=hit_zero, dense_output=True)
    if not sol.success:
        raise NonConvergenceError(f"radial integration failed: {sol.message}")
    crossed = len(sol.t_events[0]) > 0 and sol.t_events[0][0] < T * (1 - 1e-12)
    return sol, crossed


def _endpoint(lam, n, m, R, rtol):
    """Shooting functional: v(R^2) when it stays negative, else the
    (positive) overshoot margin R^2 - t_cross."""
    sol, crossed = _integrate(lam, n, m, R, rtol)
    if crossed:
        return R * R - sol.t_events[0][0], sol
    return sol.y[0, -1], sol


def default_bracket(n: int, m: int, R: float):
    """[diameter lower bound, Laplacian-comparison upper bound], padded."""
    lo = 4.0 / (2.0 * R) ** 2
    mu1 = jn_zeros(n - 1, 1)[0] ** 2 / (4.0 * R * R)
    hi = mu1 / n
    return lo * (1.0 - 1e-3), hi * (1.0 + 1e-3)


def radial_eigen_shoot(n: int, m: int, R: float = 1.0, tol: float = 1e-10,
                       rtol: float = 1e-12, bracket=None):
    """First radial eigenvalue and profile on the ball of radius R.

    Bisects lambda until the bracket has relative width <= tol and the
    endpoint defect |v(R^2)| <= tol.  Returns (lambda, RadialProfile)
    with v(0) = -1 and v' > 0 on (0, R^2].
    """
    if not 1 <= m <= n:
        raise ValueError(f"require 1 <= m <= n, got m={m}, n={n}")
    if R <= 0:
        raise ValueError("radius must be positive")
    widen = bracket is None
    lo, hi = bracket if bracket is not None else default_bracket(n, m, R)
    g_lo, _ = _endpoint(lo, n, m, R, rtol)
    g_hi, _ = _endpoint(hi, n, m, R, rtol)
    if widen:
        # the default endpoints are proven bounds; pad defensively against
        # integration tolerance at the m = 1 coincidence lambda1 = hi
        for _ in range(8):
            if g_lo < 0.0:
                break
            lo *= 0.7
            g_lo, _ = _endpoint(lo, n, m, R, rtol)
        for _ in range(8):
            if g_hi > 0.0:
                break
            hi *= 1.3
            g_hi, _ = _endpoint(hi, n, m, R, rtol)
    if not (g_lo < 0.0 < g_hi):
        raise BracketError(
            f"no sign change in [{lo:.6g}, {hi:.6g}] for n={n}, m={m}, R={R}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid, sol = _endpoint(mid, n, m, R, rtol)
        if g_mid > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * mid and abs(g_mid) <= tol:
            break
    lam = 0.5 * (lo + hi)
    _, sol = _endpoint(lam, n, m, R, rtol)
    T = R * R
    ts = np.linspace(sol.t[0], min(sol.t[-1], T), 2001)
    vv, pp = sol.sol(ts)
    # prepend the series segment down to t = 0
    c2 = _series_coeff(n, m, lam)
    t_head = np.linspace(0.0, sol.t[0], 8)[:-1]
    v_head = -1.0 + lam * t_head + c2 * t_head ** 2
    p_head = lam + 2.0 * c2 * t_head
    t_all = np.concatenate([t_head, ts])
    v_all = np.concatenate([v_head, np.minimum(vv, 0.0)])
    p_all = np.concatenate([p_head, pp])
    # renormalize the tiny endpoint defect so v(R^2) = 0, v(0) = -1
    v_all = v_all - v_all[-1] * (t_all / t_all[-1])
    v_all = v_all / -v_all[0]
    profile = RadialProfile(t=t_all, v=v_all, vp=p_all, n=n, m=m, lam=lam)
    return lam, profile
