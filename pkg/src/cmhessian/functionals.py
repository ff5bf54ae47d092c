"""Discrete energy, weighted volume and the Rayleigh quotient.

All integrals are midpoint sums over interior cells with weight h^{2n};
the constant relating the metric volume form to Lebesgue measure is
dropped throughout since every exposed quantity is a ratio in which it
cancels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hessian as hs
from .fields import ScalarField
from .geometry import Grid

_CONE_TOL = 1e-8


@dataclass(frozen=True)
class QuadratureRule:
    """Cell weights of the interior-node midpoint rule."""
    weight: float      # volume of one cell
    total: float       # cell-counted volume of the domain

    @classmethod
    def for_grid(cls, grid: Grid) -> "QuadratureRule":
        return cls(weight=grid.cell_weight, total=grid.counted_volume())


def _sigma_m_checked(u: ScalarField, m: int, cone_tol=_CONE_TOL):
    grid = u.grid
    n = grid.domain.n
    e = hs.hessian_entries(u)
    slack = hs.gamma_slack_from_entries(e, n, m)
    if float(slack.min()) < -cone_tol:
        raise ValueError(
            f"field leaves Gamma_{m} (slack {float(slack.min()):.2e})"
        )
    return hs.sigma_from_entries(e, n, m)


def energy(u: ScalarField, m: int, cone_tol: float = _CONE_TOL) -> float:
    """E_m(u) = (m+1)^{-1} integral of (-u) sigma_m(u) / C(n, m).

    cone_tol is the admissible Gamma_m defect; raise it for fields
    transferred from another discretization (interpolation leaves O(h)
    cone defects near the boundary).
    """
    if float(u.interior.max()) > 1e-9:
        raise ValueError("energy expects a nonpositive field")
    grid = u.grid
    C = math.comb(grid.domain.n, m)
    sig = _sigma_m_checked(u, m, cone_tol)
    w = grid.cell_weight
    return float((-u.interior * sig).sum() * w / (C * (m + 1)))


def weighted_volume(u: ScalarField, f: ScalarField, m: int) -> float:
    """I_m(u) = (m+1)^{-1} integral of (-u)^{m+1} f^m."""
    if float(u.interior.max()) > 1e-9:
        raise ValueError("weighted_volume expects a nonpositive field")
    grid = u.grid
    w = grid.cell_weight
    return float(((-u.interior) ** (m + 1) * f.interior ** m).sum() * w / (m + 1))


def rayleigh_quotient(u: ScalarField, f: ScalarField, m: int,
                      cone_tol: float = _CONE_TOL) -> float:
    """E_m(u) / I_m(u); scale-invariant, minimized by the eigenfunction."""
    denom = weighted_volume(u, f, m)
    if denom == 0.0:
        raise ZeroDivisionError("Rayleigh quotient of the zero field")
    return energy(u, m, cone_tol) / denom


def blocki_inequality(w: ScalarField, v: ScalarField, m: int,
                      cone_tol: float = _CONE_TOL):
    """Energy inequality: integral (-w)^{m+1} sigma_m(v)/C(n,m)
    <= (m+1)! sup|v|^m E_m(w).  Returns (lhs, rhs, pass)."""
    grid = w.grid
    C = math.comb(grid.domain.n, m)
    sig_v = _sigma_m_checked(v, m, cone_tol)
    lhs = float(((-w.interior) ** (m + 1) * sig_v).sum()
                * grid.cell_weight / C)
    rhs = math.factorial(m + 1) * v.sup() ** m * energy(w, m, cone_tol)
    return lhs, rhs, lhs <= rhs * (1.0 + 1e-6)


def dirichlet_energy_flux_form(u: ScalarField) -> float:
    """E_1(u) recomputed as a graph Dirichlet energy.

    Expands the symmetric part of the trace operator into edge and node
    quadratic terms; equals energy(u, 1) to machine precision and guards
    the stencil assembly (sign or weight errors break the identity).
    """
    grid = u.grid
    n = grid.domain.n
    ops = hs.entry_ops(grid, "dirichlet")
    L = ops["S"][0] if n == 1 else (ops["S"][0] + ops["S"][1]).tocsr()
    A = (0.5 * (L + L.T)).tocoo()
    x = u.interior
    mask = A.row < A.col
    edge = float(np.sum(A.data[mask] * (x[A.row[mask]] - x[A.col[mask]]) ** 2))
    rowsum = np.asarray(A.sum(axis=1)).ravel()
    node = float(np.sum(-rowsum * x ** 2))
    return (edge + node) * grid.cell_weight / (2.0 * n)
