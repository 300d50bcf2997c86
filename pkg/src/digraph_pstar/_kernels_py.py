"""Pure-Python implementation of the hot root-finding kernels.

Mirrors ``_kernels.pyx`` call for call; ``_backend`` picks one of the two at
import time.  All functions take plain floats/ints and return tuples so the
two implementations are interchangeable.

The equal-maxima gap is extended continuously past the spinodal: the left
branch value is the maximum of ell on ``[0, u1]`` and the right branch value
the maximum on ``[u2, 1]``, where ``u1 < (p-1)/p < u2`` are the inflection
points.  When a local maximum has vanished the maximum sits at the
inflection point, so the gap keeps the correct sign and stays continuous.
"""

import math

from scipy.optimize import brentq

X_LO = 1e-300
X_HI = 1.0 - 2.0 ** -53
XTOL_X = 1e-16
MAXITER = 200


def beta1_critical(p):
    return math.log(p - 1.0) - p / (p - 1.0)


def beta2_critical(p):
    return p ** (p - 1.0) / (p - 1.0) ** p


def ell(p, b1, b2, x):
    if x <= 0.0 or x >= 1.0:
        return b1 * x + b2 * x ** p if 0.0 <= x <= 1.0 else math.nan
    return b1 * x + b2 * x ** p - x * math.log(x) - (1.0 - x) * math.log1p(-x)


def ell_prime(p, b1, b2, x):
    return b1 + p * b2 * x ** (p - 1) - (math.log(x) - math.log1p(-x))


def inflections(p, b2):
    """Roots u1 < u2 of ell'' for b2 above the critical value."""
    c = 1.0 / (p * (p - 1.0) * b2)
    if p == 2:
        r = math.sqrt(max(1.0 - 4.0 * c, 0.0))
        return 0.5 * (1.0 - r), 0.5 * (1.0 + r)
    ec = (p - 1.0) / p

    def h(x):
        return x ** (p - 1) * (1.0 - x) - c

    if h(ec) <= 0.0:
        return ec, ec
    u1 = brentq(h, 0.0, ec, xtol=XTOL_X, maxiter=MAXITER)
    u2 = brentq(h, ec, 1.0, xtol=XTOL_X, maxiter=MAXITER)
    return u1, u2


def equal_max_gap(p, b1, b2):
    """Return (right value - left value, y1, y2) for the two branch maxima."""
    u1, u2 = inflections(p, b2)
    if ell_prime(p, b1, b2, u1) >= 0.0:
        y1 = u1
    elif ell_prime(p, b1, b2, X_LO) <= 0.0:
        y1 = X_LO
    else:
        y1 = brentq(lambda x: ell_prime(p, b1, b2, x), X_LO, u1,
                    xtol=XTOL_X, maxiter=MAXITER)
    if ell_prime(p, b1, b2, u2) <= 0.0:
        y2 = u2
    elif ell_prime(p, b1, b2, X_HI) >= 0.0:
        y2 = X_HI
    else:
        y2 = brentq(lambda x: ell_prime(p, b1, b2, x), u2, X_HI,
                    xtol=XTOL_X, maxiter=MAXITER)
    return ell(p, b1, b2, y2) - ell(p, b1, b2, y1), y1, y2


def curve_solve(p, b1, xtol):
    """Solve q(b1) for b1 strictly below the critical value.

    Returns (b2, x1, x2, status); status 0 on success, 2 if no bracket.
    """
    b1c = beta1_critical(p)
    b2c = beta2_critical(p)
    ec = (p - 1.0) / p
    # convexity of q: q(b1) >= b2c + |q'(b1c)| (b1c - b1)
    lo = b2c + 0.5 * (b1c - b1) / (p * ec ** (p - 1))

    def g(b2):
        return equal_max_gap(p, b1, b2)[0]

    if g(lo) >= 0.0:
        return math.nan, math.nan, math.nan, 2
    cap = abs(b1) + 4.0
    step = 1.0
    hi = lo + step
    while g(hi) <= 0.0:
        if hi >= cap:
            return math.nan, math.nan, math.nan, 2
        step *= 2.0
        hi = min(lo + step, cap)
    b2 = brentq(g, lo, hi, xtol=xtol, maxiter=MAXITER)
    _, x1, x2 = equal_max_gap(p, b1, b2)
    return b2, x1, x2, 0


def q_inverse_solve(p, b2, xtol):
    """Solve q^{-1}(b2) for b2 strictly above the critical value.

    Returns (b1, x1, x2, status).
    """
    b1c = beta1_critical(p)

    def g(b1):
        return equal_max_gap(p, b1, b2)[0]

    hi = b1c
    if g(hi) <= 0.0:
        return math.nan, math.nan, math.nan, 2
    cap = b1c - abs(b2) - 4.0
    step = 1.0
    lo = hi - step
    while g(lo) >= 0.0:
        if lo <= cap:
            return math.nan, math.nan, math.nan, 2
        step *= 2.0
        lo = max(hi - step, cap)
    b1 = brentq(g, lo, hi, xtol=xtol, maxiter=MAXITER)
    _, x1, x2 = equal_max_gap(p, b1, b2)
    return b1, x1, x2, 0


def chord_residual(p, e, s, b1, xtol):
    """F(b1) = e - x2 + q'(b1) (s - x2^p) together with the curve point."""
    b2, x1, x2, status = curve_solve(p, b1, xtol)
    if status:
        return math.nan, b2, x1, x2
    qp = -(x2 - x1) / (x2 ** p - x1 ** p)
    return e - x2 + qp * (s - x2 ** p), b2, x1, x2


def bipodal_solve(p, e, s, guard, span, xtol):
    """Locate the curve point whose chord passes through (e, s).

    Returns (b1, b2, x1, x2, status); status 1 flags a point inside the
    near-critical band (no sign change before b1c - guard), 2 a failed bracket.
    """
    b1c = beta1_critical(p)
    hi = b1c - guard
    f_hi = chord_residual(p, e, s, hi, xtol)
    if math.isnan(f_hi[0]):
        return math.nan, math.nan, math.nan, math.nan, 2
    if f_hi[0] > 0.0:
        return hi, f_hi[1], f_hi[2], f_hi[3], 1
    if f_hi[0] == 0.0:
        return hi, f_hi[1], f_hi[2], f_hi[3], 0
    k = 0
    while True:
        lo = max(b1c - 2.0 ** k, b1c - span)
        f_lo = chord_residual(p, e, s, lo, xtol)[0]
        if f_lo > 0.0:
            break
        if lo <= b1c - span or math.isnan(f_lo):
            return math.nan, math.nan, math.nan, math.nan, 2
        hi = lo
        k += 1
    b1 = brentq(lambda b: chord_residual(p, e, s, b, xtol)[0], lo, hi,
                xtol=xtol, maxiter=MAXITER)
    _, b2, x1, x2 = chord_residual(p, e, s, b1, xtol)
    return b1, b2, x1, x2, 0
