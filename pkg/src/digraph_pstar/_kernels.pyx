# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled root-finding kernels; see ``_kernels_py`` for the reference version."""

from libc.math cimport log, log1p, sqrt, pow, fabs, NAN, isnan
from scipy.optimize.cython_optimize cimport brentq

cdef double X_LO = 1e-300
cdef double X_HI = 1.0 - 2.0 ** -53
cdef double XTOL_X = 1e-16
cdef double RTOL = 4.0 * 2.220446049250313e-16
cdef int MAXITER = 200


ctypedef struct ell_args:
    int p
    double b1
    double b2

ctypedef struct infl_args:
    int p
    double c

ctypedef struct chord_args:
    int p
    double e
    double s
    double xtol


cdef inline double ipow(double x, int k) noexcept nogil:
    cdef double r = 1.0
    cdef int i
    for i in range(k):
        r *= x
    return r


cdef inline double _ell(int p, double b1, double b2, double x) noexcept nogil:
    if x <= 0.0 or x >= 1.0:
        return b1 * x + b2 * ipow(x, p)
    return b1 * x + b2 * ipow(x, p) - x * log(x) - (1.0 - x) * log1p(-x)


cdef inline double _ell_prime(int p, double b1, double b2, double x) noexcept nogil:
    return b1 + p * b2 * ipow(x, p - 1) - (log(x) - log1p(-x))


cdef double _ell_prime_cb(double x, void *args) noexcept nogil:
    cdef ell_args *a = <ell_args *> args
    return _ell_prime(a.p, a.b1, a.b2, x)


cdef double _infl_cb(double x, void *args) noexcept nogil:
    cdef infl_args *a = <infl_args *> args
    return ipow(x, a.p - 1) * (1.0 - x) - a.c


cdef void _inflections(int p, double b2, double *u1, double *u2) noexcept nogil:
    cdef double c = 1.0 / (p * (p - 1.0) * b2)
    cdef double r, ec
    cdef infl_args a
    if p == 2:
        r = 1.0 - 4.0 * c
        r = sqrt(r) if r > 0.0 else 0.0
        u1[0] = 0.5 * (1.0 - r)
        u2[0] = 0.5 * (1.0 + r)
        return
    ec = (p - 1.0) / p
    a.p = p
    a.c = c
    if _infl_cb(ec, &a) <= 0.0:
        u1[0] = ec
        u2[0] = ec
        return
    u1[0] = brentq(_infl_cb, 0.0, ec, &a, XTOL_X, RTOL, MAXITER, NULL)
    u2[0] = brentq(_infl_cb, ec, 1.0, &a, XTOL_X, RTOL, MAXITER, NULL)


cdef double _gap(int p, double b1, double b2, double *y1, double *y2) noexcept nogil:
    cdef double u1, u2
    cdef ell_args a
    a.p = p
    a.b1 = b1
    a.b2 = b2
    _inflections(p, b2, &u1, &u2)
    if _ell_prime(p, b1, b2, u1) >= 0.0:
        y1[0] = u1
    elif _ell_prime(p, b1, b2, X_LO) <= 0.0:
        y1[0] = X_LO
    else:
        y1[0] = brentq(_ell_prime_cb, X_LO, u1, &a, XTOL_X, RTOL, MAXITER, NULL)
    if _ell_prime(p, b1, b2, u2) <= 0.0:
        y2[0] = u2
    elif _ell_prime(p, b1, b2, X_HI) >= 0.0:
        y2[0] = X_HI
    else:
        y2[0] = brentq(_ell_prime_cb, u2, X_HI, &a, XTOL_X, RTOL, MAXITER, NULL)
    return _ell(p, b1, b2, y2[0]) - _ell(p, b1, b2, y1[0])


cdef double _gap_b2_cb(double b2, void *args) noexcept nogil:
    cdef ell_args *a = <ell_args *> args
    cdef double y1, y2
    return _gap(a.p, a.b1, b2, &y1, &y2)


cdef double _gap_b1_cb(double b1, void *args) noexcept nogil:
    cdef ell_args *a = <ell_args *> args
    cdef double y1, y2
    return _gap(a.p, b1, a.b2, &y1, &y2)


cdef inline double _b1c(int p) noexcept nogil:
    return log(p - 1.0) - p / (p - 1.0)


cdef inline double _b2c(int p) noexcept nogil:
    return pow(p, p - 1.0) / pow(p - 1.0, p)


cdef int _curve(int p, double b1, double xtol,
                double *b2, double *x1, double *x2) noexcept nogil:
    cdef double ec = (p - 1.0) / p
    cdef double lo = _b2c(p) + 0.5 * (_b1c(p) - b1) / (p * ipow(ec, p - 1))
    cdef double cap = fabs(b1) + 4.0
    cdef double step = 1.0
    cdef double hi
    cdef ell_args a
    a.p = p
    a.b1 = b1
    a.b2 = 0.0
    if _gap_b2_cb(lo, &a) >= 0.0:
        return 2
    hi = lo + step
    while _gap_b2_cb(hi, &a) <= 0.0:
        if hi >= cap:
            return 2
        step *= 2.0
        hi = lo + step
        if hi > cap:
            hi = cap
    b2[0] = brentq(_gap_b2_cb, lo, hi, &a, xtol, RTOL, MAXITER, NULL)
    _gap(p, b1, b2[0], x1, x2)
    return 0


cdef double _chord(int p, double e, double s, double b1, double xtol,
                   double *b2, double *x1, double *x2) noexcept nogil:
    cdef double qp
    if _curve(p, b1, xtol, b2, x1, x2):
        return NAN
    qp = -(x2[0] - x1[0]) / (ipow(x2[0], p) - ipow(x1[0], p))
    return e - x2[0] + qp * (s - ipow(x2[0], p))


cdef double _chord_cb(double b1, void *args) noexcept nogil:
    cdef chord_args *a = <chord_args *> args
    cdef double b2, x1, x2
    return _chord(a.p, a.e, a.s, b1, a.xtol, &b2, &x1, &x2)


def beta1_critical(int p):
    return _b1c(p)


def beta2_critical(int p):
    return _b2c(p)


def ell(int p, double b1, double b2, double x):
    if x < 0.0 or x > 1.0:
        return NAN
    return _ell(p, b1, b2, x)


def ell_prime(int p, double b1, double b2, double x):
    return _ell_prime(p, b1, b2, x)


def inflections(int p, double b2):
    cdef double u1, u2
    _inflections(p, b2, &u1, &u2)
    return u1, u2


def equal_max_gap(int p, double b1, double b2):
    cdef double y1, y2, g
    g = _gap(p, b1, b2, &y1, &y2)
    return g, y1, y2


def curve_solve(int p, double b1, double xtol):
    cdef double b2, x1, x2
    cdef int status
    with nogil:
        status = _curve(p, b1, xtol, &b2, &x1, &x2)
    if status:
        return NAN, NAN, NAN, status
    return b2, x1, x2, 0


cdef int _q_inverse(int p, double b2, double xtol,
                    double *b1, double *x1, double *x2) noexcept nogil:
    cdef double hi = _b1c(p)
    cdef double cap = hi - fabs(b2) - 4.0
    cdef double step = 1.0
    cdef double lo
    cdef ell_args a
    a.p = p
    a.b1 = 0.0
    a.b2 = b2
    if _gap_b1_cb(hi, &a) <= 0.0:
        return 2
    lo = hi - step
    while _gap_b1_cb(lo, &a) >= 0.0:
        if lo <= cap:
            return 2
        step *= 2.0
        lo = hi - step
        if lo < cap:
            lo = cap
    b1[0] = brentq(_gap_b1_cb, lo, hi, &a, xtol, RTOL, MAXITER, NULL)
    _gap(p, b1[0], b2, x1, x2)
    return 0


cdef int _bipodal(int p, double e, double s, double guard, double span, double xtol,
                  double *b1, double *b2, double *x1, double *x2) noexcept nogil:
    cdef double b1c = _b1c(p)
    cdef double hi = b1c - guard
    cdef double lo, f_hi, f_lo
    cdef int k = 0
    cdef chord_args a
    a.p = p
    a.e = e
    a.s = s
    a.xtol = xtol
    f_hi = _chord(p, e, s, hi, xtol, b2, x1, x2)
    b1[0] = hi
    if isnan(f_hi):
        return 2
    if f_hi > 0.0:
        return 1
    if f_hi == 0.0:
        return 0
    while True:
        lo = b1c - pow(2.0, k)
        if lo < b1c - span:
            lo = b1c - span
        f_lo = _chord(p, e, s, lo, xtol, b2, x1, x2)
        if f_lo > 0.0:
            break
        if lo <= b1c - span or isnan(f_lo):
            return 2
        hi = lo
        k += 1
    b1[0] = brentq(_chord_cb, lo, hi, &a, xtol, RTOL, MAXITER, NULL)
    _chord(p, e, s, b1[0], xtol, b2, x1, x2)
    return 0


def q_inverse_solve(int p, double b2, double xtol):
    cdef double b1, x1, x2
    cdef int status
    with nogil:
        status = _q_inverse(p, b2, xtol, &b1, &x1, &x2)
    if status:
        return NAN, NAN, NAN, status
    return b1, x1, x2, 0


def chord_residual(int p, double e, double s, double b1, double xtol):
    cdef double b2, x1, x2, f
    f = _chord(p, e, s, b1, xtol, &b2, &x1, &x2)
    return f, b2, x1, x2


def bipodal_solve(int p, double e, double s, double guard, double span, double xtol):
    cdef double b1, b2, x1, x2
    cdef int status
    with nogil:
        status = _bipodal(p, e, s, guard, span, xtol, &b1, &b2, &x1, &x2)
    if status == 2:
        return NAN, NAN, NAN, NAN, 2
    return b1, b2, x1, x2, status
