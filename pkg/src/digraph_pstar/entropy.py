"""Limiting entropy density psi(e, s), its gradient and the LDP rate function.

Inside D = {e^p < s < e} the optimizing out-degree profile is bipodal: a
fraction ``lam`` of nodes has out-degree rate x1 and the rest x2, where
(x1, x2) are the equal maxima of ell at a point of the transition curve whose
chord through (x1, x1^p), (x2, x2^p) contains (e, s).  Chords of distinct
curve points never cross, so the curve point is unique.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ._backend import kernels
from .curve import CRIT_GUARD, CURVE_XTOL, _check_p, critical_point
from .errors import ConvergenceError, DomainError
from .scalar import LOG2, entropy_I, entropy_I_prime

REGION_TOL = 1e-9
BRACKET_SPAN = 50.0
DEGENERATE_CHORD = 1e-5


class RegionES(str, enum.Enum):
    OUTSIDE = "outside"
    INTERIOR = "interior"
    LOWER_BOUNDARY = "lower_boundary"
    UPPER_BOUNDARY = "upper_boundary"
    CORNER = "corner"


@dataclass(frozen=True)
class BipodalProfile:
    """Two-level optimizer: fraction ``lam`` at rate x1, ``1 - lam`` at rate x2.

    ``beta1``, ``beta2`` are the Lagrange multipliers (the curve point).
    """

    x1: float
    x2: float
    lam: float
    beta1: float
    beta2: float
    degenerate: bool = False

    def moments(self, p: int) -> tuple[float, float]:
        lam = self.lam
        return (lam * self.x1 + (1 - lam) * self.x2,
                lam * self.x1**p + (1 - lam) * self.x2**p)


def classify_es(p: int, e: float, s: float, tol: float = REGION_TOL) -> RegionES:
    p = _check_p(p)
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    if not (-tol <= e <= 1.0 + tol) or math.isnan(s):
        return RegionES.OUTSIDE
    ep = min(max(e, 0.0), 1.0) ** p
    lower = abs(s - ep) <= tol
    upper = abs(s - e) <= tol
    if lower and upper:
        return RegionES.CORNER
    if lower:
        return RegionES.LOWER_BOUNDARY
    if upper:
        return RegionES.UPPER_BOUNDARY
    if 0.0 < e < 1.0 and ep + tol < s < e - tol:
        return RegionES.INTERIOR
    return RegionES.OUTSIDE


def _p2_profile(e: float, s: float) -> BipodalProfile:
    r = math.sqrt(1.0 - 4.0 * (e - s))
    x1, x2 = 0.5 * (1.0 - r), 0.5 * (1.0 + r)
    # on the p = 2 curve beta1 = -beta2 and I'(x2) = beta2 (2 x2 - 1)
    beta2 = entropy_I_prime(x2) / r
    return BipodalProfile(x1=x1, x2=x2, lam=(x2 - e) / (x2 - x1), beta1=-beta2, beta2=beta2)


def solve_bipodal(p: int, e: float, s: float, closed_form: bool = True,
                  crit_guard: float = CRIT_GUARD, tol: float = REGION_TOL,
                  xtol: float = CURVE_XTOL) -> BipodalProfile:
    """The bipodal optimizer for (e, s) strictly inside D.

    ``closed_form=False`` forces the general chord solver for p = 2 as well.
    Points whose chord lies in the near-critical band get a degenerate
    profile ``x1 = x2 = e`` carrying the critical multipliers.
    """
    p = _check_p(p)
    region = classify_es(p, e, s, tol)
    if region is not RegionES.INTERIOR:
        raise DomainError(f"(e, s)=({e}, {s}) is not interior to D (region {region.value})")
    if p == 2 and closed_form:
        return _p2_profile(e, s)
    beta1, beta2, x1, x2, status = kernels.bipodal_solve(
        p, float(e), float(s), crit_guard, BRACKET_SPAN, xtol)
    if status == 2:
        raise ConvergenceError(f"no chord bracket for (e, s)=({e}, {s})")
    if status == 1 or x2 - x1 < DEGENERATE_CHORD:
        cp = critical_point(p)
        return BipodalProfile(x1=e, x2=e, lam=1.0, beta1=cp.beta1_c, beta2=cp.beta2_c,
                              degenerate=True)
    return BipodalProfile(x1=x1, x2=x2, lam=(x2 - e) / (x2 - x1), beta1=beta1, beta2=beta2)


def entropy(p: int, e: float, s: float, closed_form: bool = True,
            tol: float = REGION_TOL, xtol: float = CURVE_XTOL) -> float:
    """psi(e, s); ``-inf`` outside the closure of D."""
    region = classify_es(p, e, s, tol)
    if region is RegionES.OUTSIDE:
        return -math.inf
    if region is RegionES.UPPER_BOUNDARY:
        return -LOG2
    # "+ 0.0" turns -0.0 into 0.0 at the zero-rate point
    if region is not RegionES.INTERIOR:
        return -entropy_I(min(max(e, 0.0), 1.0)) + 0.0
    prof = solve_bipodal(p, e, s, closed_form=closed_form, tol=tol, xtol=xtol)
    if prof.degenerate:
        return -entropy_I(e) + 0.0
    return -prof.lam * entropy_I(prof.x1) - (1.0 - prof.lam) * entropy_I(prof.x2) + 0.0


def entropy_p2_closed(e: float, s: float) -> float:
    """Closed form for p = 2: psi(e, s) = -I(1/2 + sqrt(s - e + 1/4)) on the closure of D."""
    disc = s - e + 0.25
    if disc < 0.0 or classify_es(2, e, s) is RegionES.OUTSIDE:
        raise DomainError(f"(e, s)=({e}, {s}) is outside the closure of D for p=2")
    return -entropy_I(min(0.5 + math.sqrt(disc), 1.0))


def entropy_gradient(p: int, e: float, s: float, closed_form: bool = True,
                     tol: float = REGION_TOL, xtol: float = CURVE_XTOL) -> tuple[float, float]:
    """(dpsi/de, dpsi/ds) = (-beta1, -beta2) at an interior point."""
    prof = solve_bipodal(p, e, s, closed_form=closed_form, tol=tol, xtol=xtol)
    return -prof.beta1, -prof.beta2


def rate_function(p: int, e: float, s: float, closed_form: bool = True,
                  tol: float = REGION_TOL, xtol: float = CURVE_XTOL) -> float:
    """J(e, s) = -psi(e, s) >= 0, ``+inf`` outside the closure of D."""
    return -entropy(p, e, s, closed_form=closed_form, tol=tol, xtol=xtol) + 0.0
