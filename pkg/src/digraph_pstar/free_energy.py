"""Free energy densities psi(e, beta2), psi(beta1, s) and the ERGM psi(beta1, beta2).

With one density constrained and the other tilted, the optimizer is uniform
except inside a U-shaped region where it splits into the two equal maxima of
ell at the corresponding curve point:

* U_e = {x1(beta2) < e < x2(beta2), beta2 > beta2_c}
* U_s = {x1(beta1)^p < s < x2(beta1)^p, beta1 < beta1_c}

Inside these regions psi is affine in the constrained density.  Parameters
within ``crit_guard`` of the critical value are treated as uniform; the
region there is narrower than ~sqrt(crit_guard) and the two formulas differ
by O(width^4).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from ._backend import kernels
from ._kernels_py import X_HI, X_LO
from .curve import (CRIT_GUARD, CURVE_XTOL, CurvePoint, _check_p, critical_point, curve_point,
                    curve_point_at_beta2)
from .errors import DomainError
from .scalar import LOG2, TIE_TOL, entropy_I, entropy_I_prime

REGION_TOL = 1e-9


class RegionU(str, enum.Enum):
    UNIFORM = "uniform"
    BIPODAL = "bipodal"
    BOUNDARY = "boundary"
    CRITICAL = "critical"


def _check_unit(name: str, v: float) -> float:
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
    return float(v)


def _tag(v: float, lo: float, hi: float, tol: float) -> RegionU:
    if lo + tol < v < hi - tol:
        return RegionU.BIPODAL
    if abs(v - lo) <= tol or abs(v - hi) <= tol:
        return RegionU.BOUNDARY
    return RegionU.UNIFORM


def _split_e_beta2(p, e, beta2, tol, crit_guard,
                   xtol=CURVE_XTOL) -> tuple[RegionU, CurvePoint | None]:
    cp = critical_point(p)
    if abs(e - cp.e_c) <= tol and abs(beta2 - cp.beta2_c) <= tol:
        return RegionU.CRITICAL, None
    if beta2 - cp.beta2_c < crit_guard:
        return RegionU.UNIFORM, None
    pt = curve_point_at_beta2(p, beta2, crit_guard, xtol)
    return _tag(e, pt.x1, pt.x2, tol), pt


def _split_beta1_s(p, beta1, s, tol, crit_guard,
                   xtol=CURVE_XTOL) -> tuple[RegionU, CurvePoint | None]:
    cp = critical_point(p)
    if abs(beta1 - cp.beta1_c) <= tol and abs(s - cp.s_c) <= tol:
        return RegionU.CRITICAL, None
    if cp.beta1_c - beta1 < crit_guard:
        return RegionU.UNIFORM, None
    pt = curve_point(p, beta1, crit_guard, xtol)
    return _tag(s, pt.x1**p, pt.x2**p, tol), pt


def classify_e_beta2(p: int, e: float, beta2: float, tol: float = REGION_TOL,
                     crit_guard: float = CRIT_GUARD, xtol: float = CURVE_XTOL) -> RegionU:
    p = _check_p(p)
    return _split_e_beta2(p, _check_unit("e", e), float(beta2), tol, crit_guard, xtol)[0]


def classify_beta1_s(p: int, beta1: float, s: float, tol: float = REGION_TOL,
                     crit_guard: float = CRIT_GUARD, xtol: float = CURVE_XTOL) -> RegionU:
    p = _check_p(p)
    return _split_beta1_s(p, float(beta1), _check_unit("s", s), tol, crit_guard, xtol)[0]


def _lam_e(pt: CurvePoint, e: float) -> float:
    return (pt.x2 - e) / (pt.x2 - pt.x1)


def _mu_s(pt: CurvePoint, p: int, s: float) -> float:
    return (pt.x2**p - s) / (pt.x2**p - pt.x1**p)


def free_energy_e(p: int, e: float, beta2: float, tol: float = REGION_TOL,
                  crit_guard: float = CRIT_GUARD, xtol: float = CURVE_XTOL) -> float:
    """psi(e, beta2)."""
    p = _check_p(p)
    e = _check_unit("e", e)
    region, pt = _split_e_beta2(p, e, float(beta2), tol, crit_guard, xtol)
    if region is RegionU.BIPODAL:
        lam = _lam_e(pt, e)
        return (beta2 * (lam * pt.x1**p + (1 - lam) * pt.x2**p)
                - (lam * entropy_I(pt.x1) + (1 - lam) * entropy_I(pt.x2)))
    return beta2 * e**p - entropy_I(e)


def star_density(p: int, e: float, beta2: float, tol: float = REGION_TOL,
                 crit_guard: float = CRIT_GUARD, xtol: float = CURVE_XTOL) -> float:
    """d psi(e, beta2) / d beta2."""
    p = _check_p(p)
    e = _check_unit("e", e)
    region, pt = _split_e_beta2(p, e, float(beta2), tol, crit_guard, xtol)
    if region is RegionU.BIPODAL:
        lam = _lam_e(pt, e)
        return lam * pt.x1**p + (1 - lam) * pt.x2**p
    return e**p


def free_energy_e_slope(p: int, e: float, beta2: float, tol: float = REGION_TOL,
                        crit_guard: float = CRIT_GUARD, xtol: float = CURVE_XTOL) -> float:
    """d psi(e, beta2) / de; equals -q^{-1}(beta2) throughout U_e."""
    p = _check_p(p)
    e = _check_unit("e", e)
    region, pt = _split_e_beta2(p, e, float(beta2), tol, crit_guard, xtol)
    if region is RegionU.BIPODAL:
        return -pt.beta1
    return p * beta2 * e ** (p - 1) - entropy_I_prime(e)


def free_energy_s(p: int, beta1: float, s: float, tol: float = REGION_TOL,
                  crit_guard: float = CRIT_GUARD, xtol: float = CURVE_XTOL) -> float:
    """psi(beta1, s)."""
    p = _check_p(p)
    s = _check_unit("s", s)
    region, pt = _split_beta1_s(p, float(beta1), s, tol, crit_guard, xtol)
    if region is RegionU.BIPODAL:
        mu = _mu_s(pt, p, s)
        return (beta1 * (mu * pt.x1 + (1 - mu) * pt.x2)
                - (mu * entropy_I(pt.x1) + (1 - mu) * entropy_I(pt.x2)))
    t = s ** (1.0 / p)
    return beta1 * t - entropy_I(t)


def edge_density(p: int, beta1: float, s: float, tol: float = REGION_TOL,
                 crit_guard: float = CRIT_GUARD, xtol: float = CURVE_XTOL) -> float:
    """d psi(beta1, s) / d beta1."""
    p = _check_p(p)
    s = _check_unit("s", s)
    region, pt = _split_beta1_s(p, float(beta1), s, tol, crit_guard, xtol)
    if region is RegionU.BIPODAL:
        mu = _mu_s(pt, p, s)
        return mu * pt.x1 + (1 - mu) * pt.x2
    return s ** (1.0 / p)


def free_energy_s_slope(p: int, beta1: float, s: float, tol: float = REGION_TOL,
                        crit_guard: float = CRIT_GUARD, xtol: float = CURVE_XTOL) -> float:
    """d psi(beta1, s) / ds; equals -q(beta1) throughout U_s."""
    p = _check_p(p)
    s = _check_unit("s", s)
    region, pt = _split_beta1_s(p, float(beta1), s, tol, crit_guard, xtol)
    if region is RegionU.BIPODAL:
        return -pt.beta2
    if s == 0.0:
        return math.inf
    t = s ** (1.0 / p)
    return (beta1 - entropy_I_prime(t)) * t ** (1 - p) / p


@dataclass(frozen=True)
class ErgmResult:
    value: float
    argmax: tuple[float, ...]


def ergm_free_energy(p: int, beta1: float, beta2: float,
                     tie_tol: float = TIE_TOL) -> ErgmResult:
    """sup over x in [0, 1] of beta1 x + beta2 x^p - I(x), with its argmax set."""
    p = _check_p(p)
    beta1, beta2 = float(beta1), float(beta2)
    if beta2 > critical_point(p).beta2_c:
        # ell is concave on [0, u1] and [u2, 1] and convex in between, so the
        # two branch maxima are the only candidates
        _, y1, y2 = kernels.equal_max_gap(p, beta1, beta2)
        candidates = [y1, y2]
    else:
        lo, hi = X_LO, X_HI
        if kernels.ell_prime(p, beta1, beta2, lo) <= 0.0:
            candidates = [lo]
        elif kernels.ell_prime(p, beta1, beta2, hi) >= 0.0:
            candidates = [hi]
        else:
            candidates = [brentq(lambda x: kernels.ell_prime(p, beta1, beta2, x), lo, hi,
                                 xtol=1e-16, maxiter=200)]
    values = [kernels.ell(p, beta1, beta2, x) for x in candidates]
    best = max(values)
    argmax = tuple(sorted({x for x, v in zip(candidates, values) if best - v <= tie_tol}))
    return ErgmResult(value=best - LOG2, argmax=argmax)
