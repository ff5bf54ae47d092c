"""Sparse linear solves behind the Newton iterations.

n = 1 grids are small enough for a direct sparse LU.  n = 2 grids (4-D
lattices) use an algebraic-multigrid preconditioned LGMRES with a fixed
iteration cap; the AMG hierarchy is built on the negated matrix so the
diagonal is positive.  Everything is single-threaded and deterministic.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse.linalg as spla

from .errors import LinearSolveError

_DIRECT_LIMIT = 50_000  # unknown count up to which a direct LU is used


def _as_positive(J):
    """Flip sign so the diagonal is (mostly) positive; AMG expects that."""
    sign = 1.0 if J.diagonal().mean() >= 0 else -1.0
    return sign, (J if sign > 0 else -J).tocsr()


class Factorization:
    """Reusable solver for one sparse matrix."""

    def __init__(self, J, lin_tol=1e-10, lin_maxiter=500, prefer_direct=True):
        self.lin_tol = lin_tol
        self.lin_maxiter = lin_maxiter
        self.n = J.shape[0]
        # direct LU is unbeatable on 2-D lattices but fills in badly on
        # the 4-D ones, where AMG-preconditioned LGMRES takes over
        self.direct = self.n <= _DIRECT_LIMIT and (prefer_direct or self.n < 3000)
        if self.direct:
            self._lu = spla.splu(J.tocsc())
            return
        self._sign, A = _as_positive(J)
        self._A = A
        self._M = None
        try:
            import pyamg

            ml = pyamg.smoothed_aggregation_solver(A, max_coarse=500)
            self._M = ml.aspreconditioner(cycle="V")
        except Exception:
            ilu = spla.spilu(A.tocsc(), drop_tol=1e-4, fill_factor=10)
            self._M = spla.LinearOperator(A.shape, ilu.solve)

    def solve(self, b):
        if self.direct:
            x = self._lu.solve(b)
            if not np.all(np.isfinite(x)):
                raise LinearSolveError("direct sparse solve produced non-finite values")
            return x
        rhs = self._sign * b
        x, info = spla.lgmres(
            self._A, rhs, M=self._M, rtol=self.lin_tol, atol=0.0,
            maxiter=self.lin_maxiter,
        )
        if info != 0:
            raise LinearSolveError(
                f"preconditioned LGMRES did not converge (info={info})"
            )
        return x


def factorize(J, cfg=None, grid=None, cache_key=None):
    """Factorization for J, optionally cached on the grid under cache_key."""
    lin_tol = getattr(cfg, "lin_tol", 1e-10)
    lin_maxiter = getattr(cfg, "lin_maxiter", 500)
    prefer_direct = grid is None or grid.domain.n == 1
    if grid is not None and cache_key is not None:
        key = ("factorization", cache_key)
        if key not in grid._cache:
            grid._cache[key] = Factorization(J, lin_tol, lin_maxiter, prefer_direct)
        return grid._cache[key]
    return Factorization(J, lin_tol, lin_maxiter, prefer_direct)
