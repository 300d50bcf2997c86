"""The phase-transition curve beta2 = q(beta1) of ell and its critical endpoint.

On the curve ell has two equal global maxima x1 < (p-1)/p < x2.  The curve
ends at the critical point where both maximizers merge at (p-1)/p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import kernels
from .errors import ConvergenceError, DomainError, NearCriticalError
from .scalar import ModelParams, ell_eval

CRIT_GUARD = 1e-6
CURVE_XTOL = 1e-13


def _check_p(p: int) -> int:
    if isinstance(p, bool) or int(p) != p or p < 2:
        raise DomainError(f"star order p must be an integer >= 2, got {p!r}")
    return int(p)


@dataclass(frozen=True)
class CriticalPoint:
    beta1_c: float
    beta2_c: float
    e_c: float
    s_c: float


@dataclass(frozen=True)
class CurvePoint:
    """A solved point of the transition curve with the branch sensitivities dx_i/dbeta_j.

    ``degenerate`` marks points reported at the critical limit because the
    requested beta1 fell inside the guard band.
    """

    beta1: float
    beta2: float
    x1: float
    x2: float
    qprime: float
    dx1_dbeta1: float
    dx2_dbeta1: float
    dx1_dbeta2: float
    dx2_dbeta2: float
    degenerate: bool = False


def critical_point(p: int) -> CriticalPoint:
    p = _check_p(p)
    e_c = (p - 1) / p
    return CriticalPoint(
        beta1_c=math.log(p - 1) - p / (p - 1),
        beta2_c=p ** (p - 1) / (p - 1) ** p,
        e_c=e_c,
        s_c=e_c**p,
    )


def _degenerate_point(p: int, cp: CriticalPoint) -> CurvePoint:
    # q'(beta1) -> -1 / (p e_c^(p-1)); the sensitivities blow up (x_i' -> +-inf)
    qprime = -1.0 / (p * cp.e_c ** (p - 1))
    return CurvePoint(
        beta1=cp.beta1_c, beta2=cp.beta2_c, x1=cp.e_c, x2=cp.e_c, qprime=qprime,
        dx1_dbeta1=math.inf, dx2_dbeta1=-math.inf,
        dx1_dbeta2=-math.inf, dx2_dbeta2=math.inf, degenerate=True,
    )


def _assemble(p: int, beta1: float, beta2: float, x1: float, x2: float) -> CurvePoint:
    qprime = -(x2 - x1) / (x2**p - x1**p)
    params = ModelParams(p, beta1, beta2)
    sens = []
    for x in (x1, x2):
        sens.append((1.0 + p * qprime * x ** (p - 1)) / -ell_eval(params, x, 2))
    return CurvePoint(
        beta1=beta1, beta2=beta2, x1=x1, x2=x2, qprime=qprime,
        dx1_dbeta1=sens[0], dx2_dbeta1=sens[1],
        dx1_dbeta2=sens[0] / qprime, dx2_dbeta2=sens[1] / qprime,
    )


def curve_point(p: int, beta1: float, crit_guard: float = CRIT_GUARD,
                xtol: float = CURVE_XTOL) -> CurvePoint:
    """Solve the curve at ``beta1``.

    Inside the band ``beta1_c - crit_guard <= beta1 <= beta1_c`` the critical
    limit is returned with ``degenerate=True``; beyond ``beta1_c`` there is no
    curve and :class:`NearCriticalError` is raised.
    """
    p = _check_p(p)
    cp = critical_point(p)
    if not math.isfinite(beta1):
        raise DomainError("beta1 must be finite")
    if beta1 > cp.beta1_c:
        raise NearCriticalError(f"beta1={beta1} lies beyond the critical point {cp.beta1_c}")
    if cp.beta1_c - beta1 < crit_guard:
        return _degenerate_point(p, cp)
    beta2, x1, x2, status = kernels.curve_solve(p, float(beta1), xtol)
    if status:
        raise ConvergenceError(f"could not bracket the equal-maxima condition at beta1={beta1}")
    return _assemble(p, float(beta1), beta2, x1, x2)


def q(p: int, beta1: float, crit_guard: float = CRIT_GUARD) -> float:
    return curve_point(p, beta1, crit_guard).beta2


def q_inverse(p: int, beta2: float, crit_guard: float = CRIT_GUARD,
              xtol: float = CURVE_XTOL) -> float:
    """beta1 such that q(beta1) = beta2, for beta2 above the critical value."""
    return curve_point_at_beta2(p, beta2, crit_guard, xtol).beta1


def curve_point_at_beta2(p: int, beta2: float, crit_guard: float = CRIT_GUARD,
                         xtol: float = CURVE_XTOL) -> CurvePoint:
    """The curve point with star parameter ``beta2`` (solved directly in beta1)."""
    p = _check_p(p)
    cp = critical_point(p)
    if not math.isfinite(beta2):
        raise DomainError("beta2 must be finite")
    if beta2 - cp.beta2_c < crit_guard:
        raise NearCriticalError(
            f"beta2={beta2} is within {crit_guard} of (or below) the critical value {cp.beta2_c}")
    beta1, x1, x2, status = kernels.q_inverse_solve(p, float(beta2), xtol)
    if status:
        raise ConvergenceError(f"could not bracket q^-1 at beta2={beta2}")
    return _assemble(p, beta1, float(beta2), x1, x2)
