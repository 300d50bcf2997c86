"""Bernoulli entropy I(x) and the mean-field function ell(x).

    ell(x) = beta1 x + beta2 x^p - x log x - (1 - x) log(1 - x)
    I(x)   = x log x + (1 - x) log(1 - x) + log 2

so that ``ell(x) = beta1 x + beta2 x^p - I(x) + log 2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from ._kernels_py import X_HI, X_LO
from .errors import ConvergenceError, DomainError

LOG2 = math.log(2.0)

ENDPOINT_EPS = 1e-12
SCAN_POINTS = 256
ROOT_XTOL = 1e-13
DEGENERATE_TOL = 1e-8
TIE_TOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """Star order ``p`` and the edge/star parameters ``beta1``, ``beta2``."""

    p: int
    beta1: float
    beta2: float

    def __post_init__(self):
        if isinstance(self.p, bool) or int(self.p) != self.p or self.p < 2:
            raise DomainError(f"star order p must be an integer >= 2, got {self.p!r}")
        if not (math.isfinite(self.beta1) and math.isfinite(self.beta2)):
            raise DomainError("beta1 and beta2 must be finite")
        object.__setattr__(self, "p", int(self.p))


class Kind(str, enum.Enum):
    LOCAL_MAX = "local_max"
    LOCAL_MIN = "local_min"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class StationaryPoint:
    x: float
    value: float
    kind: Kind
    second_derivative: float


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0.0 else 0.0


def entropy_I(x: float) -> float:
    """Relative entropy of Bernoulli(x) w.r.t. Bernoulli(1/2); I(0) = I(1) = log 2."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"I(x) requires 0 <= x <= 1, got {x!r}")
    value = _xlogx(x) + _xlogx(1.0 - x) + LOG2
    return min(max(value, 0.0), LOG2)


def entropy_I_prime(x: float) -> float:
    """I'(x) = log(x / (1 - x)); infinite at the endpoints."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"I'(x) requires 0 <= x <= 1, got {x!r}")
    if x == 0.0:
        return -math.inf
    if x == 1.0:
        return math.inf
    return math.log(x) - math.log1p(-x)


def _power_derivative(p: int, order: int, x: float) -> float:
    if order > p:
        return 0.0
    return math.perm(p, order) * x ** (p - order)


def _entropy_term_derivative(order: int, x: float) -> float:
    # derivatives of -x log x - (1 - x) log(1 - x)
    y = 1.0 - x
    if order == 0:
        return -_xlogx(x) - _xlogx(y)
    if order == 1:
        return -(math.log(x) - math.log1p(-x))
    if order == 2:
        return -(1.0 / x + 1.0 / y)
    if order == 3:
        return 1.0 / x**2 - 1.0 / y**2
    return -2.0 / x**3 - 2.0 / y**3


def ell_eval(params: ModelParams, x: float, order: int = 0) -> float:
    """Value (order 0) or derivative of order 1..4 of ell at x."""
    if order not in (0, 1, 2, 3, 4):
        raise DomainError(f"order must be in 0..4, got {order!r}")
    if order == 0:
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"ell(x) requires 0 <= x <= 1, got {x!r}")
    elif not 0.0 < x < 1.0:
        raise DomainError(f"derivatives of ell diverge at the endpoints; got x={x!r}")
    linear = params.beta1 * x if order == 0 else (params.beta1 if order == 1 else 0.0)
    return (linear + params.beta2 * _power_derivative(params.p, order, x)
            + _entropy_term_derivative(order, x))


def _ell_second_sign(params: ModelParams, x):
    """A function with the sign (and roots) of ell'' but bounded on [0, 1]."""
    p = params.p
    return p * (p - 1) * params.beta2 * x ** (p - 1) * (1.0 - x) - 1.0


def _inflection_points(params: ModelParams) -> list[float]:
    ec = (params.p - 1) / params.p
    grid = np.union1d(np.linspace(ENDPOINT_EPS, 1.0 - ENDPOINT_EPS, SCAN_POINTS), [ec])
    vals = _ell_second_sign(params, grid)
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0.0:
            roots.append(bisect(lambda t: _ell_second_sign(params, t), a, b,
                                xtol=ROOT_XTOL, maxiter=200))
    return roots


def _classify(params: ModelParams, x: float) -> StationaryPoint:
    d2 = ell_eval(params, x, 2)
    if abs(d2) <= DEGENERATE_TOL:
        kind = Kind.DEGENERATE
    elif d2 < 0.0:
        kind = Kind.LOCAL_MAX
    else:
        kind = Kind.LOCAL_MIN
    return StationaryPoint(x=x, value=ell_eval(params, x, 0), kind=kind, second_derivative=d2)


def analyze_stationary(params: ModelParams) -> list[StationaryPoint]:
    """All roots of ell' in (0, 1), classified and ordered by x.

    ell' is monotone between consecutive inflection points, so bracketing on
    the nodes ``eps < u1 < u2 < 1 - eps`` cannot miss a root.
    """
    nodes = [ENDPOINT_EPS, *_inflection_points(params), 1.0 - ENDPOINT_EPS]
    d1 = [ell_eval(params, x, 1) for x in nodes]
    # large |beta| pushes a maximizer inside the eps guard; retry at the last doubles
    if d1[0] <= 0.0:
        nodes[0] = X_LO
        d1[0] = ell_eval(params, X_LO, 1)
    if d1[-1] >= 0.0:
        nodes[-1] = X_HI
        d1[-1] = ell_eval(params, X_HI, 1)
    if d1[0] <= 0.0 or d1[-1] >= 0.0:
        raise ConvergenceError("ell' has no sign change inside (0, 1); beta out of range")

    def fprime(t):
        return ell_eval(params, t, 1)

    roots: list[float] = []
    for i in range(len(nodes) - 1):
        a, b, fa, fb = nodes[i], nodes[i + 1], d1[i], d1[i + 1]
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0.0:
            x, info = bisect(fprime, a, b, xtol=ROOT_XTOL, maxiter=200, full_output=True,
                             disp=False)
            if not info.converged:
                raise ConvergenceError(f"stationary point bisection failed on [{a}, {b}]")
            roots.append(x)
    return [_classify(params, x) for x in roots]


def _is_local_max(params: ModelParams, pt: StationaryPoint) -> bool:
    if pt.kind is Kind.LOCAL_MAX:
        return True
    if pt.kind is Kind.LOCAL_MIN:
        return False
    h = 1e-6
    lo, hi = max(pt.x - h, ENDPOINT_EPS), min(pt.x + h, 1.0 - ENDPOINT_EPS)
    return ell_eval(params, lo, 1) > 0.0 > ell_eval(params, hi, 1)


def global_maximizers(params: ModelParams, tie_tol: float = TIE_TOL) -> list[StationaryPoint]:
    """Global maximizers of ell on [0, 1]; two entries only on the transition curve."""
    if tie_tol <= 0.0:
        raise DomainError("tie_tol must be positive")
    maxima = [pt for pt in analyze_stationary(params) if _is_local_max(params, pt)]
    best = max(pt.value for pt in maxima)
    return [pt for pt in maxima if best - pt.value <= tie_tol]
