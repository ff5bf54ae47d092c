"""Exception hierarchy for solver and validation failures."""


class CmHessianError(Exception):
    """Base class for all package errors."""


class ResolutionError(CmHessianError):
    """Grid too coarse: no interior nodes for the requested domain."""


class ConeEscapeError(CmHessianError):
    """No Newton step length keeps the iterate inside the admissible cone."""


class NonConvergenceError(CmHessianError):
    """Iteration budget exhausted before reaching the requested tolerance."""


class LinearSolveError(CmHessianError):
    """The inner sparse linear solve did not reach its tolerance."""


class PathStagnationError(CmHessianError):
    """Continuation step collapsed without reaching a blow-up signature."""


class BracketError(CmHessianError):
    """Shooting bisection could not bracket a sign change."""


class SpectralConditionError(CmHessianError):
    """Right-hand-side slope bound gamma0 is not below the first eigenvalue."""


class MonotonicityError(CmHessianError):
    """A provably monotone iteration violated monotonicity beyond tolerance."""
