"""Discrete complex Hessian, its spectrum, sigma_k and the cone Gamma_m.

The complex Hessian [u_{i jbar}] at an interior node is assembled from
second differences of the 2n real coordinates: diagonal entries are
(1/4)(d^2/dx_i^2 + d^2/dy_i^2) u, off-diagonal real and imaginary parts
come from the four mixed stencils of the corresponding coordinate pairs.

Two stencil families exist per grid:

* ``free`` -- plain centered stencils reading stored node values; exact
  for quadratic polynomials sampled at all nodes.
* ``dirichlet`` -- boundary-aware stencils for zero-extension fields.
  Axis arms whose neighbor is not interior are shortened to the actual
  rho = 0 crossing (value 0 there), so quadratics vanishing on the
  boundary are reproduced at machine precision; mixed stencils fall back
  to a one-sided interior quadrant near the boundary.

sigma_m is always the m-th elementary symmetric polynomial of the
spectrum; binomial normalization factors are carried explicitly by the
callers.
"""
from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from .fields import ScalarField
from .geometry import Grid

_THETA_MIN = 1e-3   # shortest admissible boundary arm, in units of h
_THETA_MAX = 1.45   # crossings past a band neighbor are still resolved


# ---------------------------------------------------------------------------
# stencil construction
# ---------------------------------------------------------------------------

def _boundary_crossing(grid: Grid, pts, axis, sign):
    """Fraction theta of h at which rho = 0 along pts + sign*t*e_axis.

    Bisection on [0, _THETA_MAX * h]; falls back to theta = 1 (pin the
    neighbor node itself to 0) when no sign change is bracketed, which
    happens for nearly tangential arms through the boundary band.
    """
    h = grid.h
    rho = grid.domain.rho
    m = pts.shape[0]
    if m == 0:
        return np.empty(0)
    step = np.zeros((m, grid.dim))
    step[:, axis] = sign * h
    hi = np.full(m, _THETA_MAX)
    ok = rho(pts + hi[:, None] * step) > 0
    lo = np.zeros(m)
    a, b = lo.copy(), hi.copy()
    for _ in range(60):
        mid = 0.5 * (a + b)
        pos = rho(pts + mid[:, None] * step) > 0
        b = np.where(pos, mid, b)
        a = np.where(pos, a, mid)
    theta = 0.5 * (a + b)
    theta = np.where(ok, theta, 1.0)
    return np.clip(theta, _THETA_MIN, _THETA_MAX)


def _axis_second_ops(grid: Grid, mode: str):
    """One sparse second-difference operator per real axis.

    free: (n_interior, size) centered, spacing h.
    dirichlet: (n_interior, n_interior) with Shortley-Weller boundary arms.
    """
    ni = grid.n_interior
    h = grid.h
    ops = []
    center_rows = np.arange(ni)
    for a in range(grid.dim):
        s = grid.strides[a]
        plus_ids = grid.ids + s
        minus_ids = grid.ids - s
        if mode == "free":
            rows = np.concatenate([center_rows] * 3)
            cols = np.concatenate([grid.ids, plus_ids, minus_ids])
            vals = np.concatenate([
                np.full(ni, -2.0 / h**2),
                np.full(ni, 1.0 / h**2),
                np.full(ni, 1.0 / h**2),
            ])
            ops.append(sp.csr_matrix((vals, (rows, cols)),
                                     shape=(ni, grid.size)))
            continue

        plus_int = grid.interior_index[plus_ids]
        minus_int = grid.interior_index[minus_ids]
        theta_p = np.ones(ni)
        theta_m = np.ones(ni)
        bnd_p = plus_int < 0
        bnd_m = minus_int < 0
        theta_p[bnd_p] = _boundary_crossing(grid, grid.interior_points[bnd_p], a, +1)
        theta_m[bnd_m] = _boundary_crossing(grid, grid.interior_points[bnd_m], a, -1)
        ap = theta_p * h
        am = theta_m * h
        cc = -2.0 / (ap * am)
        cp = 2.0 / (ap * (ap + am))
        cm = 2.0 / (am * (ap + am))
        rows = [center_rows]
        cols = [center_rows]
        vals = [cc]
        keep = ~bnd_p
        rows.append(center_rows[keep]); cols.append(plus_int[keep]); vals.append(cp[keep])
        keep = ~bnd_m
        rows.append(center_rows[keep]); cols.append(minus_int[keep]); vals.append(cm[keep])
        ops.append(sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(ni, ni)))
    return ops


def _mixed_op(grid: Grid, a: int, b: int, mode: str):
    """Mixed second difference d^2/dx_a dx_b as a sparse operator."""
    ni = grid.n_interior
    h2 = grid.h ** 2
    sa, sb = grid.strides[a], grid.strides[b]
    rows_out, cols_out, vals_out = [], [], []
    center = np.arange(ni)

    if mode == "free":
        for (da, db, w) in [(+1, +1, 1), (-1, -1, 1), (+1, -1, -1), (-1, +1, -1)]:
            rows_out.append(center)
            cols_out.append(grid.ids + da * sa + db * sb)
            vals_out.append(np.full(ni, w / (4.0 * h2)))
        return sp.csr_matrix(
            (np.concatenate(vals_out),
             (np.concatenate(rows_out), np.concatenate(cols_out))),
            shape=(ni, grid.size))

    ii = grid.interior_index
    corner = {(da, db): ii[grid.ids + da * sa + db * sb]
              for da in (-1, 1) for db in (-1, 1)}
    axis_a = {da: ii[grid.ids + da * sa] for da in (-1, 1)}
    axis_b = {db: ii[grid.ids + db * sb] for db in (-1, 1)}

    centered_ok = np.ones(ni, dtype=bool)
    for key in corner:
        centered_ok &= corner[key] >= 0

    # one-sided quadrants, inward-pointing first
    ctr = np.asarray(grid.domain.center)
    inward_a = np.where(grid.interior_points[:, a] <= ctr[a], 1, -1)
    inward_b = np.where(grid.interior_points[:, b] <= ctr[b], 1, -1)
    quads = [(inward_a, inward_b),
             (inward_a, -inward_b),
             (-inward_a, inward_b),
             (-inward_a, -inward_b)]

    chosen = np.full(ni, -1, dtype=int)  # 0 = centered, 1..4 = quadrant, -1 = fallback
    chosen[centered_ok] = 0
    qa = np.zeros(ni, dtype=int)
    qb = np.zeros(ni, dtype=int)
    for qi, (da, db) in enumerate(quads, start=1):
        arm_a = np.where(da > 0, axis_a[1], axis_a[-1])
        arm_b = np.where(db > 0, axis_b[1], axis_b[-1])
        diag = np.where(da > 0,
                        np.where(db > 0, corner[(1, 1)], corner[(1, -1)]),
                        np.where(db > 0, corner[(-1, 1)], corner[(-1, -1)]))
        ok = (arm_a >= 0) & (arm_b >= 0) & (diag >= 0)
        take = (chosen == -1) & ok
        chosen[take] = qi
        qa[take] = da[take]
        qb[take] = db[take]

    grid._cache.setdefault("mixed_fallback", 0)

    # centered rows
    csel = chosen == 0
    for (da, db, w) in [(+1, +1, 1), (-1, -1, 1), (+1, -1, -1), (-1, +1, -1)]:
        cidx = corner[(da, db)][csel]
        rows_out.append(center[csel])
        cols_out.append(cidx)
        vals_out.append(np.full(csel.sum(), w / (4.0 * h2)))

    # one-sided rows: s_a s_b [u(P+a+b) - u(P+a) - u(P+b) + u(P)] / h^2
    osel = chosen >= 1
    if osel.any():
        sgn = (qa[osel] * qb[osel]).astype(float)
        diag = np.where(qa[osel] > 0,
                        np.where(qb[osel] > 0, corner[(1, 1)][osel], corner[(1, -1)][osel]),
                        np.where(qb[osel] > 0, corner[(-1, 1)][osel], corner[(-1, -1)][osel]))
        arm_a = np.where(qa[osel] > 0, axis_a[1][osel], axis_a[-1][osel])
        arm_b = np.where(qb[osel] > 0, axis_b[1][osel], axis_b[-1][osel])
        c = center[osel]
        rows_out += [c, c, c, c]
        cols_out += [diag, arm_a, arm_b, c]
        vals_out += [sgn / h2, -sgn / h2, -sgn / h2, sgn / h2]

    # fallback: centered stencil reading pinned zeros (rare; counted)
    fsel = chosen == -1
    grid._cache["mixed_fallback"] += int(fsel.sum())
    if fsel.any():
        for (da, db, w) in [(+1, +1, 1), (-1, -1, 1), (+1, -1, -1), (-1, +1, -1)]:
            cidx = corner[(da, db)][fsel]
            keep = cidx >= 0
            rows_out.append(center[fsel][keep])
            cols_out.append(cidx[keep])
            vals_out.append(np.full(keep.sum(), w / (4.0 * h2)))

    return sp.csr_matrix(
        (np.concatenate(vals_out),
         (np.concatenate(rows_out), np.concatenate(cols_out))),
        shape=(ni, ni))


def entry_ops(grid: Grid, mode: str):
    """Sparse operators producing complex Hessian entries at interior nodes.

    Returns a dict with "S": list of n diagonal-entry operators and, for
    n = 2, "A" / "B" for the real / imaginary part of the off-diagonal
    entry.  Cached on the grid.
    """
    key = ("ops", mode)
    if key in grid._cache:
        return grid._cache[key]
    if mode not in ("free", "dirichlet"):
        raise ValueError("mode must be 'free' or 'dirichlet'")
    d2 = _axis_second_ops(grid, mode)
    n = grid.domain.n
    ops = {"S": [(0.25 * (d2[2 * i] + d2[2 * i + 1])).tocsr() for i in range(n)]}
    if n == 2:
        m02 = _mixed_op(grid, 0, 2, mode)
        m13 = _mixed_op(grid, 1, 3, mode)
        m03 = _mixed_op(grid, 0, 3, mode)
        m12 = _mixed_op(grid, 1, 2, mode)
        ops["A"] = (0.25 * (m02 + m13)).tocsr()
        ops["B"] = (0.25 * (m03 - m12)).tocsr()
    grid._cache[key] = ops
    return ops


# ---------------------------------------------------------------------------
# vectorized entries / spectrum / sigma over interior nodes
# ---------------------------------------------------------------------------

def field_mode(u: ScalarField, mode=None) -> str:
    if mode is not None:
        return mode
    return "dirichlet" if u.bc == "zero" else "free"


def hessian_entries(u: ScalarField, mode=None):
    """Complex Hessian entries of u at all interior nodes.

    Returns {"H11": ...} for n = 1 and {"H11", "H22", "H12re", "H12im"}
    for n = 2, each an array over interior nodes.
    """
    grid = u.grid
    mode = field_mode(u, mode)
    ops = entry_ops(grid, mode)
    vec = u.interior if mode == "dirichlet" else u.values
    out = {"H11": ops["S"][0] @ vec}
    if grid.domain.n == 2:
        out["H22"] = ops["S"][1] @ vec
        out["H12re"] = ops["A"] @ vec
        out["H12im"] = ops["B"] @ vec
    return out


def spectrum_from_entries(entries, n):
    """Eigenvalues (descending) of the entry arrays, shape (n_nodes, n)."""
    if n == 1:
        return entries["H11"][:, None].copy()
    h11, h22 = entries["H11"], entries["H22"]
    off2 = entries["H12re"] ** 2 + entries["H12im"] ** 2
    mid = 0.5 * (h11 + h22)
    rad = np.sqrt(0.25 * (h11 - h22) ** 2 + off2)
    return np.stack([mid + rad, mid - rad], axis=1)


def sigma_from_entries(entries, n, k):
    """sigma_k at all interior nodes, straight from the entries."""
    if k == 1:
        return entries["H11"] + (entries["H22"] if n == 2 else 0.0)
    if k == 2 and n == 2:
        return (entries["H11"] * entries["H22"]
                - entries["H12re"] ** 2 - entries["H12im"] ** 2)
    raise ValueError(f"sigma_{k} undefined for n={n}")


def gamma_slack_from_entries(entries, n, m):
    """min_{k<=m} sigma_k at each node: positive inside Gamma_m."""
    s = sigma_from_entries(entries, n, 1)
    if m == 2:
        s = np.minimum(s, sigma_from_entries(entries, n, 2))
    return s


def sigma_root_from_entries(entries, n, m):
    """sigma_m^{1/m}; negative sigma_m (outside the cone) maps to -|.|^{1/m}."""
    s = sigma_from_entries(entries, n, m)
    if m == 1:
        return s
    return np.sign(s) * np.sqrt(np.abs(s))


def f_coefficients(entries, n, m):
    """Per-node derivative of sigma_m^{1/m} with respect to each entry.

    Returns a dict of coefficient arrays keyed like the entries; the
    off-diagonal keys already carry the factor 2 of the Hermitian pairing
    (d sigma_m^{1/m} = c11 dH11 + c22 dH22 + c12re dH12re + c12im dH12im).
    """
    if m == 1:
        out = {"H11": np.ones_like(entries["H11"])}
        if n == 2:
            out["H22"] = np.ones_like(entries["H11"])
            out["H12re"] = np.zeros_like(entries["H11"])
            out["H12im"] = np.zeros_like(entries["H11"])
        return out
    s2 = sigma_from_entries(entries, n, 2)
    root = np.sqrt(np.maximum(s2, 1e-300))
    return {
        "H11": entries["H22"] / (2.0 * root),
        "H22": entries["H11"] / (2.0 * root),
        "H12re": -entries["H12re"] / root,
        "H12im": -entries["H12im"] / root,
    }


def trace_operator(grid: Grid):
    """sigma_1 (trace) operator in dirichlet mode, cached."""
    key = ("trace_op",)
    if key not in grid._cache:
        ops = entry_ops(grid, "dirichlet")
        L = ops["S"][0] if grid.domain.n == 1 else (ops["S"][0] + ops["S"][1])
        grid._cache[key] = L.tocsr()
    return grid._cache[key]


def jacobian_matrix(grid: Grid, coeffs, m):
    """Assemble sum_entries diag(coeff) @ op in dirichlet mode."""
    if m == 1:
        return trace_operator(grid)
    ops = entry_ops(grid, "dirichlet")
    J = sp.diags(coeffs["H11"]) @ ops["S"][0]
    if grid.domain.n == 2:
        J = J + sp.diags(coeffs["H22"]) @ ops["S"][1]
        J = J + sp.diags(coeffs["H12re"]) @ ops["A"]
        J = J + sp.diags(coeffs["H12im"]) @ ops["B"]
    return J.tocsr()


# ---------------------------------------------------------------------------
# single-matrix operations
# ---------------------------------------------------------------------------

def complex_hessian(u: ScalarField, node, mode=None):
    """Hermitian n x n complex Hessian of u at one interior node.

    ``node`` is a flat node id or a multi-index tuple.  Raises ValueError
    when the node is not interior.
    """
    grid = u.grid
    if isinstance(node, tuple):
        node = int(np.ravel_multi_index(node, grid.shape))
    row = grid.interior_index[node]
    if row < 0:
        raise ValueError(f"node {node} is not an interior node")
    e = hessian_entries(u, mode)
    n = grid.domain.n
    H = np.zeros((n, n), dtype=complex)
    H[0, 0] = e["H11"][row]
    if n == 2:
        H[1, 1] = e["H22"][row]
        H[0, 1] = e["H12re"][row] + 1j * e["H12im"][row]
        H[1, 0] = np.conj(H[0, 1])
    return H


def spectrum(H):
    """Sorted (descending) real eigenvalues of a Hermitian matrix.

    Uses the value itself for 1 x 1 and the closed form for 2 x 2; the
    input is symmetrized first to kill roundoff asymmetry.
    """
    H = np.asarray(H, dtype=complex)
    H = 0.5 * (H + H.conj().T)
    k = H.shape[0]
    if k == 1:
        return np.array([H[0, 0].real])
    if k == 2:
        a, b = H[0, 0].real, H[1, 1].real
        off2 = abs(H[0, 1]) ** 2
        mid = 0.5 * (a + b)
        rad = math.sqrt(0.25 * (a - b) ** 2 + off2)
        return np.array([mid + rad, mid - rad])
    return np.linalg.eigvalsh(H)[::-1]


def sigma_k(s, k: int):
    """k-th elementary symmetric polynomial of a spectrum."""
    s = np.asarray(s, dtype=float)
    if not 1 <= k <= s.size:
        raise ValueError(f"k={k} out of range for spectrum of length {s.size}")
    e = np.zeros(k + 1)
    e[0] = 1.0
    for lam in s:
        e[1:k + 1] = e[1:k + 1] + lam * e[0:k]
    return float(e[k])


def in_gamma_m(s, m: int, slack: float = 0.0) -> bool:
    """True iff sigma_k(s) > slack for every k = 1..m."""
    return all(sigma_k(s, k) > slack for k in range(1, m + 1))


def sigma_m_linearization(H, m: int):
    """Derivative matrix of sigma_m^{1/m} at a Hermitian H inside Gamma_m.

    Computed in the eigenframe (d sigma_m^{1/m} / d Lambda_i, which is
    well defined under repeated eigenvalues since the function is
    symmetric) and rotated back.  Raises ValueError outside the cone.
    """
    H = np.asarray(H, dtype=complex)
    H = 0.5 * (H + H.conj().T)
    lam, U = np.linalg.eigh(H)
    lam_desc = lam[::-1]
    if not in_gamma_m(lam_desc, m):
        raise ValueError("spectrum outside Gamma_m; linearization undefined")
    n = lam.size
    sm = sigma_k(lam_desc, m)
    g = np.empty(n)
    for i in range(n):
        rest = np.delete(lam, i)
        smi = sigma_k(rest, m - 1) if m >= 2 else 1.0
        g[i] = (sm ** (1.0 / m - 1.0)) * smi / m if m >= 2 else 1.0
    F = (U * g) @ U.conj().T
    return 0.5 * (F + F.conj().T)


def maclaurin_gap(s, m: int) -> float:
    """sigma_1/n - (sigma_m / C(n, m))^{1/m}; nonnegative on Gamma_m."""
    s = np.asarray(s, dtype=float)
    n = s.size
    if not in_gamma_m(s, m, slack=-1e-15):
        raise ValueError("spectrum outside Gamma_m")
    mean_arith = sigma_k(s, 1) / n
    mean_m = (max(sigma_k(s, m), 0.0) / math.comb(n, m)) ** (1.0 / m)
    return mean_arith - mean_m
