"""Real scalar fields on grid nodes.

Fields come in two boundary conventions:

* ``bc="zero"`` -- the zero-extension convention used by every solver
  product: values vanish at band and exterior nodes, and boundary-aware
  stencils treat the field as exactly 0 on the domain boundary.
* ``bc="none"`` -- a free sample of some function at all grid nodes
  (used for probe fields and stencil exactness checks); plain centered
  stencils read whatever value a neighbor node carries.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Grid


@dataclass
class ScalarField:
    grid: Grid
    values: np.ndarray  # full-grid flat vector, length grid.size
    bc: str = "zero"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.size,):
            raise ValueError(
                f"values must be a flat vector of length {self.grid.size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        if self.bc not in ("zero", "none"):
            raise ValueError("bc must be 'zero' or 'none'")

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_function(cls, grid: Grid, fn, bc: str = "none") -> "ScalarField":
        """Sample fn(points) -> values at every grid node."""
        vals = np.asarray(fn(grid.points), dtype=float)
        if vals.shape == ():
            vals = np.full(grid.size, float(vals))
        f = cls(grid, vals, bc=bc)
        if bc == "zero":
            f.values = grid.extend(grid.restrict(f.values))
        return f

    @classmethod
    def constant(cls, grid: Grid, value: float, bc: str = "none") -> "ScalarField":
        return cls(grid, np.full(grid.size, float(value)), bc=bc)

    @classmethod
    def from_interior(cls, grid: Grid, interior_values) -> "ScalarField":
        """Zero-extended field from an interior-node vector."""
        return cls(grid, grid.extend(np.asarray(interior_values, dtype=float)))

    # -- access ---------------------------------------------------------------

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.grid.ids]

    def sup(self) -> float:
        """Sup norm over interior nodes."""
        return float(np.abs(self.interior).max())

    def min_interior(self) -> float:
        return float(self.interior.min())

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy(), bc=self.bc)

    def scaled(self, c: float) -> "ScalarField":
        return ScalarField(self.grid, c * self.values, bc=self.bc)

    def exterior_is_zero(self, tol: float = 0.0) -> bool:
        mask = ~self.grid.interior
        return bool(np.all(np.abs(self.values[mask]) <= tol))
