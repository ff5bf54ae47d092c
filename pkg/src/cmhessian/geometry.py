"""Domains in C^n, their defining functions, and uniform grids.

A domain is one of ``ball``, ``ellipsoid`` or ``box``, identified with a
region of R^{2n} via z_i = x_{2i} + sqrt(-1) x_{2i+1}.  The defining
function rho is negative inside, zero on the boundary and positive
outside.  Discretization is a uniform Cartesian grid over the bounding
box; a node is *interior* when rho < -delta_band * h, everything else is
pinned to the boundary value 0.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError

SUPPORTED_KINDS = ("ball", "ellipsoid", "box")


@dataclass(frozen=True)
class Domain:
    """A bounded region of C^n with closed-form geometry.

    Parameters
    ----------
    n : complex dimension (1 or 2).
    kind : "ball" | "ellipsoid" | "box".
    params : shape parameters.  Ball: (R,).  Ellipsoid / box: one real
        semi-axis / half-width per real coordinate (length 2n).
    center : center point in R^{2n}.
    """

    n: int
    kind: str
    params: tuple
    center: tuple

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"unsupported complex dimension n={self.n}; expected 1 or 2")
        if self.kind not in SUPPORTED_KINDS:
            raise ValueError(f"unsupported domain kind {self.kind!r}")
        if any(p <= 0 for p in self.params):
            raise ValueError("domain parameters must be positive")
        if self.kind == "ball":
            if len(self.params) != 1:
                raise ValueError("ball takes a single radius parameter")
        elif len(self.params) != 2 * self.n:
            raise ValueError(f"{self.kind} takes 2n = {2 * self.n} parameters")
        if len(self.center) != 2 * self.n:
            raise ValueError(f"center must have 2n = {2 * self.n} coordinates")

    # -- defining function -------------------------------------------------

    def rho(self, points):
        """Defining function, vectorized over points of shape (..., 2n).

        Ball: |z - c|^2 - R^2 (exact).  Ellipsoid: sum((x-c)^2/w^2) - 1.
        Box: max((x-c)^2/w^2) - 1 (piecewise smooth only; box domains are
        heuristic, see `is_heuristic`).
        """
        pts = np.asarray(points, dtype=float)
        d = pts - np.asarray(self.center)
        if self.kind == "ball":
            return (d * d).sum(axis=-1) - self.params[0] ** 2
        w = np.asarray(self.params)
        q = (d / w) ** 2
        if self.kind == "ellipsoid":
            return q.sum(axis=-1) - 1.0
        return q.max(axis=-1) - 1.0

    @property
    def is_heuristic(self) -> bool:
        """True when rho is only piecewise smooth (box domains)."""
        return self.kind == "box"

    # -- closed-form geometry ----------------------------------------------

    @property
    def halfwidths(self):
        """Half-widths of the bounding box, one per real coordinate."""
        if self.kind == "ball":
            return (self.params[0],) * (2 * self.n)
        return tuple(self.params)

    def diameter(self) -> float:
        if self.kind == "ball":
            return 2.0 * self.params[0]
        if self.kind == "ellipsoid":
            return 2.0 * max(self.params)
        return 2.0 * math.sqrt(sum(w * w for w in self.params))

    def inradius(self) -> float:
        if self.kind == "ball":
            return self.params[0]
        return min(self.params)

    def volume(self) -> float:
        """Lebesgue volume of the domain (closed form)."""
        d = 2 * self.n
        unit_ball = math.pi ** self.n / math.factorial(self.n)
        if self.kind == "ball":
            return unit_ball * self.params[0] ** d
        if self.kind == "ellipsoid":
            return unit_ball * math.prod(self.params)
        return math.prod(2.0 * w for w in self.params)

    # -- quadratic subsolution seed ----------------------------------------

    def subsolution_base(self, points):
        """Quadratic base g with g <= 0 on the closure, g = rho-like inside.

        For ball and ellipsoid this is rho itself.  For a box, rho is not
        m-subharmonic, so the circumscribed-ball quadratic is used instead.
        """
        pts = np.asarray(points, dtype=float)
        d = pts - np.asarray(self.center)
        if self.kind == "ball":
            return (d * d).sum(axis=-1) - self.params[0] ** 2
        if self.kind == "ellipsoid":
            w = np.asarray(self.params)
            return ((d / w) ** 2).sum(axis=-1) - 1.0
        r2 = sum(w * w for w in self.params)
        return ((d * d).sum(axis=-1) - r2) / r2

    def subsolution_base_spectrum(self):
        """Complex-Hessian eigenvalues of the subsolution base (constant)."""
        if self.kind == "ball":
            return np.ones(self.n)
        if self.kind == "ellipsoid":
            w = self.params
            return np.array(
                [0.5 * (w[2 * i] ** -2 + w[2 * i + 1] ** -2) for i in range(self.n)]
            )
        r2 = sum(w * w for w in self.params)
        return np.full(self.n, 1.0 / r2)


class Grid:
    """Uniform Cartesian grid over the bounding box of a domain.

    Nodes are classified as interior (rho < -delta_band * h), boundary-band
    (-delta_band * h <= rho <= 0) or exterior (rho > 0).  Band and exterior
    nodes carry the clamped value 0 in every solver field.  Stencil
    operators built on top of the grid live in `cmhessian.hessian`.
    """

    def __init__(self, domain: Domain, h: float, delta_band: float = 0.1):
        if h <= 0:
            raise ValueError("grid spacing h must be positive")
        self.domain = domain
        self.h = float(h)
        self.delta_band = float(delta_band)
        self.dim = 2 * domain.n

        ks = [int(math.ceil(w / h - 1e-12)) for w in domain.halfwidths]
        self.axes = [
            domain.center[a] + np.arange(-ks[a], ks[a] + 1) * self.h
            for a in range(self.dim)
        ]
        self.shape = tuple(len(ax) for ax in self.axes)
        self.size = int(np.prod(self.shape))
        mesh = np.meshgrid(*self.axes, indexing="ij")
        self.points = np.stack([m.ravel() for m in mesh], axis=1)
        del mesh

        rho = domain.rho(self.points)
        self.rho_values = rho
        self.interior = rho < -self.delta_band * self.h
        self.band = (~self.interior) & (rho <= 0.0)
        self.n_interior = int(self.interior.sum())
        if self.n_interior == 0:
            raise ResolutionError(
                f"no interior nodes for {domain.kind} at h={h}; refine the grid"
            )
        self.ids = np.nonzero(self.interior)[0]
        self.interior_index = -np.ones(self.size, dtype=np.int64)
        self.interior_index[self.ids] = np.arange(self.n_interior)
        self.interior_points = self.points[self.ids]
        # row-major strides in flat index units
        self.strides = np.array(
            [int(np.prod(self.shape[a + 1:])) for a in range(self.dim)], dtype=np.int64
        )
        self._cache = {}

        per_axis = self._interior_per_axis()
        if min(per_axis) < 10:
            warnings.warn(
                f"coarse grid: only {min(per_axis)} interior nodes along an axis "
                "through the center (fewer than the recommended 10)",
                stacklevel=3,
            )

    def _interior_per_axis(self):
        counts = []
        center_idx = [int(np.argmin(np.abs(ax - c))) for ax, c in
                      zip(self.axes, self.domain.center)]
        mask = self.interior.reshape(self.shape)
        for a in range(self.dim):
            sl = tuple(slice(None) if b == a else center_idx[b] for b in range(self.dim))
            counts.append(int(mask[sl].sum()))
        return counts

    # -- value plumbing -----------------------------------------------------

    def restrict(self, full_values):
        """Full-grid vector -> interior vector."""
        return np.asarray(full_values)[self.ids]

    def extend(self, interior_values):
        """Interior vector -> full-grid vector, zero elsewhere."""
        full = np.zeros(self.size)
        full[self.ids] = interior_values
        return full

    @property
    def cell_weight(self) -> float:
        """Quadrature weight of one interior node (Lebesgue cell volume)."""
        return self.h ** self.dim

    def counted_volume(self) -> float:
        """Cell-counting volume estimate, accurate to O(h)."""
        return self.n_interior * self.cell_weight


def make_domain(kind, params, n, h, center=None, delta_band=0.1):
    """Build a domain and its classified grid.

    Returns (Domain, Grid).  Raises ResolutionError when the grid has no
    interior nodes and ValueError for unsupported kind / n / parameters.
    """
    if center is None:
        center = (0.0,) * (2 * n)
    domain = Domain(n=n, kind=kind, params=tuple(params), center=tuple(center))
    grid = Grid(domain, h, delta_band=delta_band)
    return domain, grid


def diameter(domain: Domain) -> float:
    return domain.diameter()


def inradius(domain: Domain) -> float:
    return domain.inradius()


def volume(domain: Domain) -> float:
    return domain.volume()
