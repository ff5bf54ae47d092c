"""Geometric bounds on the first eigenvalue and their validation.

Lower bounds: an Aleksandrov-maximum-principle bound in terms of the
diameter and the L^{2n} norm of f, and (for f = 1) the sharper
4 / diam^2.  Upper bounds: the Laplacian comparison mu_1 / (n inf f)
with mu_1 the first Dirichlet eigenvalue of the complex Laplacian, and
domain monotonicity against the inscribed ball, evaluated by the radial
oracle.  For m > 1 the inscribed-ball value rests on radial symmetry of
the ball eigenfunction, which is unproven; it is labeled a witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import EigenResult, inverse_iteration
from .fields import ScalarField
from .geometry import Domain
from .radial import radial_eigen_shoot


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in C^n = R^{2n}: pi^n / n!."""
    return math.pi ** n / math.factorial(n)


def _closure_values(f: ScalarField):
    closure = f.grid.interior | f.grid.band
    return f.values[closure]


def lower_bound_alexandrov(domain: Domain, f: ScalarField) -> float:
    """lambda1 >= (1/2) w_{2n}^{1/2n} diam^{-1} ||f||_{L^{2n}}^{-1}."""
    n = domain.n
    w2n = unit_ball_volume(n)
    norm = float(((f.interior ** (2 * n)).sum() * f.grid.cell_weight)
                 ** (1.0 / (2 * n)))
    return 0.5 * w2n ** (1.0 / (2 * n)) / (domain.diameter() * norm)


def lower_bound_diameter(domain: Domain) -> float:
    """lambda1 >= 4 / diam^2; valid for f = 1 only (caller gates)."""
    return 4.0 / domain.diameter() ** 2


def upper_bound_laplacian(domain: Domain, f: ScalarField,
                          lambda1_m1: float) -> float:
    """lambda1(m) <= mu_1 / (n inf f) with mu_1 = n * lambda1(m=1, f=1).

    lambda1_m1 is the m = 1 eigenvalue with f = 1 computed by the same
    machinery; the complex-Laplacian eigenvalue is mu_1 = n * lambda1_m1.
    """
    inf_f = float(_closure_values(f).min())
    if inf_f <= 0:
        raise ValueError("inf f must be positive")
    mu1 = domain.n * lambda1_m1
    return mu1 / (domain.n * inf_f)


def upper_bound_inscribed_ball(domain: Domain, f: ScalarField, m: int,
                               radial_lambda: float | None = None):
    """Domain monotonicity against the inscribed ball: lambda1(domain)
    <= lambda1(B_inradius) / inf f.

    Returns (value, witness) where witness is True when m > 1, meaning
    the radial value is a Rayleigh witness rather than a proven ball
    eigenvalue (radial symmetry open for m > 1).
    """
    if radial_lambda is None:
        radial_lambda, _ = radial_eigen_shoot(domain.n, m, domain.inradius())
    inf_f = float(_closure_values(f).min())
    if inf_f <= 0:
        raise ValueError("inf f must be positive")
    return radial_lambda / inf_f, m > 1


@dataclass
class BoundsReport:
    lambda1_computed: float
    lower_alexandrov: float
    lower_diam: float | None        # None unless f = 1
    upper_laplacian: float
    upper_inscribed_ball: float
    inscribed_ball_is_witness: bool
    flags: dict = field(default_factory=dict)
    passed: bool = True


def bounds_report(domain: Domain, f: ScalarField, m: int,
                  eigen: EigenResult, lambda1_m1: float | None = None,
                  radial_lambda: float | None = None, cfg=None,
                  slack: float = 0.03, f_is_one: bool | None = None) -> BoundsReport:
    """Evaluate every applicable bound against a computed eigenvalue.

    Lower bounds must hold with zero tolerance on the direction; upper
    bounds get the given relative slack.  When lambda1_m1 is omitted it
    is computed here (m = 1, f = 1, same grid).
    """
    lam = eigen.lambda1
    if f_is_one is None:
        f_is_one = bool(np.allclose(_closure_values(f), 1.0, rtol=0, atol=1e-14))
    if lambda1_m1 is None:
        if m == 1 and f_is_one:
            lambda1_m1 = lam
        else:
            ones = ScalarField.constant(f.grid, 1.0)
            lambda1_m1 = inverse_iteration(domain, 1, ones, cfg).lambda1

    lower_a = lower_bound_alexandrov(domain, f)
    lower_d = lower_bound_diameter(domain) if f_is_one else None
    upper_l = upper_bound_laplacian(domain, f, lambda1_m1)
    upper_b, witness = upper_bound_inscribed_ball(domain, f, m, radial_lambda)

    flags = {"lower_alexandrov": lower_a <= lam}
    if lower_d is not None:
        flags["lower_diam"] = lower_d <= lam
    flags["upper_laplacian"] = lam <= upper_l * (1.0 + slack)
    flags["upper_inscribed_ball"] = lam <= upper_b * (1.0 + slack)
    return BoundsReport(
        lambda1_computed=lam,
        lower_alexandrov=lower_a,
        lower_diam=lower_d,
        upper_laplacian=upper_l,
        upper_inscribed_ball=upper_b,
        inscribed_ball_is_witness=witness,
        flags=flags,
        passed=all(flags.values()),
    )
