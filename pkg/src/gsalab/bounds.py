"""Closed-form bounds and oracles for Gaussian surface area.

Reference curves for the supremum of GSA over convex bodies in dimension n,
the exact sphere value used as an oracle throughout the test suite, and the
influence-derived upper bounds for individual sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .specfun import LOG_2PI, log_gamma

E_M54 = math.exp(-1.25)


def ball_upper(n: int) -> float:
    """Uniform upper bound 4 n^(1/4) on the surface-area supremum."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return 4.0 * n**0.25


def raic_upper(n: int) -> float:
    """Sharper upper bound sqrt(2/pi) + 0.59 (n^(1/4) - 1)."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return math.sqrt(2.0 / math.pi) + 0.59 * (n**0.25 - 1.0)


def nazarov_lower(n: int) -> float:
    """Asymptotic reference curve e^(-5/4) n^(1/4).

    This is the limiting coefficient of the random-polytope construction,
    not a certified finite-n lower bound, and is labeled accordingly in all
    reports.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return E_M54 * n**0.25


@dataclass(frozen=True)
class BoundsRow:
    """Per-dimension bound curves, all in absolute GSA units."""

    n: int
    ball_upper: float
    raic_upper: float
    nazarov_lower: float


def bounds_row(n: int) -> BoundsRow:
    return BoundsRow(n=n, ball_upper=ball_upper(n), raic_upper=raic_upper(n),
                     nazarov_lower=nazarov_lower(n))


def gsa_ball_exact(n: int, R: float) -> float:
    """Exact Gaussian surface area of the radius-R sphere in R^n.

    Surface area 2 pi^(n/2) R^(n-1) / Gamma(n/2) times the density value
    (2 pi)^(-n/2) e^(-R^2/2); assembled in log space.  At n = 1 this is the
    two boundary points, 2 phi(R).
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if not R > 0.0:
        raise ValueError(f"radius must be > 0, got {R}")
    log_val = (math.log(2.0) + 0.5 * n * math.log(math.pi) - log_gamma(n / 2.0)
               + (n - 1) * math.log(R) - 0.5 * n * LOG_2PI - 0.5 * R * R)
    return math.exp(log_val)


def final_var_upper(n: int, vol: float, inradius: float) -> float:
    """Variance-based surface bound sqrt(2n) sqrt(vol (1 - vol)) / inradius.

    Follows from influence >= inradius * GSA together with the coefficient
    bound on influence; vol(1 - vol) is the exact indicator variance.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if not 0.0 <= vol <= 1.0:
        raise ValueError(f"vol must be a probability, got {vol}")
    if not inradius > 0.0:
        raise ValueError(f"inradius must be > 0, got {inradius}")
    return math.sqrt(2.0 * n) * math.sqrt(vol * (1.0 - vol)) / inradius


def final_deg2_upper(n: int, hermite_2ei, inradius: float) -> float:
    """Degree-2 surface bound (2n sum_i c_i^2)^(1/2) / inradius.

    Tighter than the variance form: the diagonal degree-2 coefficients are a
    sub-sum of the full coefficient variance.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if not inradius > 0.0:
        raise ValueError(f"inradius must be > 0, got {inradius}")
    ssq = sum(float(c) ** 2 for c in hermite_2ei)
    return math.sqrt(2.0 * n * ssq) / inradius
