# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels.

Function-for-function mirror of `_pure.py`; see that module for the
semantics.  Keep the two in lockstep.
"""

from libc.math cimport atanh, exp, fabs, log1p, sqrt

import numpy as np

from ..errors import NonConvergence

F_INTEGRAND = 0
XF_INTEGRAND = 1
ARC_INTEGRAND = 2
LAMZ_INTEGRAND = 3

cdef double[8] XGK
cdef double[8] WGK
cdef double[4] WG

XGK[0] = 0.9914553711208126
XGK[1] = 0.9491079123427585
XGK[2] = 0.8648644233597691
XGK[3] = 0.7415311855993945
XGK[4] = 0.5860872354676911
XGK[5] = 0.4058451513773972
XGK[6] = 0.2077849550078985
XGK[7] = 0.0

WGK[0] = 0.0229353220105292
WGK[1] = 0.0630920926299786
WGK[2] = 0.1047900103222502
WGK[3] = 0.1406532597155259
WGK[4] = 0.1690047266392679
WGK[5] = 0.1903505780647854
WGK[6] = 0.2044329400752989
WGK[7] = 0.2094821410847278

WG[0] = 0.1294849661688697
WG[1] = 0.2797053914892767
WG[2] = 0.3818300505051189
WG[3] = 0.4179591836734694


cdef class Tables:
    """Precomputed node state for one density slope."""

    cdef double[::1] ts, vs, hs, ds, cs, phis, logs
    cdef int n


def prepare(ts, vs):
    cdef Tables tb = Tables()
    ts_a = np.ascontiguousarray(ts, dtype=np.float64)
    vs_a = np.ascontiguousarray(vs, dtype=np.float64)
    cdef int n = ts_a.shape[0]
    phis_a = 2.0 * np.arctanh(ts_a)
    logs_a = np.log1p(-ts_a * ts_a)
    ds_a = np.zeros(max(n - 1, 1), dtype=np.float64)
    cs_a = np.zeros(max(n - 1, 1), dtype=np.float64)
    hs_a = np.zeros(n, dtype=np.float64)
    hs_a[0] = vs_a[0] * phis_a[0]
    cdef int i
    for i in range(n - 1):
        ds_a[i] = (vs_a[i + 1] - vs_a[i]) / (ts_a[i + 1] - ts_a[i])
        cs_a[i] = vs_a[i] - ds_a[i] * ts_a[i]
        hs_a[i + 1] = hs_a[i] + cs_a[i] * (phis_a[i + 1] - phis_a[i]) \
            - ds_a[i] * (logs_a[i + 1] - logs_a[i])
    tb.ts = ts_a
    tb.vs = vs_a
    tb.hs = hs_a
    tb.ds = ds_a
    tb.cs = cs_a
    tb.phis = phis_a
    tb.logs = logs_a
    tb.n = n
    return tb


cdef inline int _locate(Tables tb, double t) nogil:
    cdef int lo = 0
    cdef int hi = tb.n - 1
    cdef int mid
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if tb.ts[mid] <= t:
            lo = mid
        else:
            hi = mid
    return lo


cdef inline double _lam(Tables tb, double t) nogil:
    cdef int i
    if t <= tb.ts[0]:
        return tb.vs[0]
    if t >= tb.ts[tb.n - 1]:
        return tb.vs[tb.n - 1]
    i = _locate(tb, t)
    return tb.cs[i] + tb.ds[i] * t


cdef inline double _h(Tables tb, double t) nogil:
    cdef int i
    if t <= tb.ts[0]:
        return tb.vs[0] * 2.0 * atanh(t)
    if t >= tb.ts[tb.n - 1]:
        return tb.hs[tb.n - 1] + tb.vs[tb.n - 1] * (2.0 * atanh(t) - tb.phis[tb.n - 1])
    i = _locate(tb, t)
    return tb.hs[i] + tb.cs[i] * (2.0 * atanh(t) - tb.phis[i]) \
        - tb.ds[i] * (log1p(-t * t) - tb.logs[i])


cdef inline double _psi(Tables tb, double t) nogil:
    return exp(_h(tb, t))


cdef inline double _f(Tables tb, double t) nogil:
    cdef double z = 2.0 / (1.0 - t * t)
    return t * z * z * _psi(tb, t)


cdef inline double _g(Tables tb, double t) nogil:
    cdef double z = 2.0 / (1.0 - t * t)
    return t * z * _psi(tb, t)


cdef inline double _eval_code(Tables tb, int code, double param, double x) nogil:
    cdef double z
    if code == 0:
        return _f(tb, x)
    elif code == 1:
        return x * _f(tb, x)
    elif code == 2:
        z = 2.0 / (1.0 - x * x)
        return z * _psi(tb, x) * sqrt(1.0 + (x * param) * (x * param))
    else:
        return _lam(tb, x) * 2.0 / (1.0 - x * x)


def lam_value(Tables tb, double t):
    return _lam(tb, t)


def h_value(Tables tb, double t):
    return _h(tb, t)


def psi_value(Tables tb, double t):
    return _psi(tb, t)


def f_value(Tables tb, double t):
    return _f(tb, t)


def g_value(Tables tb, double t):
    return _g(tb, t)


cdef void _panel_c(Tables tb, int code, double param, double a, double b,
                   double* out_val, double* out_err) nogil:
    cdef double half = 0.5 * (b - a)
    cdef double mid = 0.5 * (a + b)
    cdef double fc = _eval_code(tb, code, param, mid)
    cdef double kron = WGK[7] * fc
    cdef double gauss = WG[3] * fc
    cdef double dx, fsum
    cdef int j
    for j in range(7):
        dx = half * XGK[j]
        fsum = _eval_code(tb, code, param, mid - dx) + _eval_code(tb, code, param, mid + dx)
        kron += WGK[j] * fsum
        if j % 2 == 1:
            gauss += WG[j >> 1] * fsum
    out_val[0] = half * kron
    out_err[0] = fabs(half * (kron - gauss))


def panel(Tables tb, int code, double a, double b, double param=0.0):
    """Single Gauss-Kronrod panel of the coded integrand on [a, b]."""
    cdef double val, err
    if a == b:
        return 0.0, 0.0
    _panel_c(tb, code, param, a, b, &val, &err)
    return val, err


def adaptive(Tables tb, int code, double a, double b, double param=0.0,
             double tol=1e-12, int budget=65536):
    """Adaptive integral of the coded integrand, split at density nodes."""
    cdef double[512] st_a
    cdef double[512] st_b
    cdef double[512] st_tol
    cdef int top = 0
    cdef int intervals = 0
    cdef int evals = 0
    cdef double total = 0.0
    cdef double total_err = 0.0
    cdef double lo, hi, tshare, val, err, mid
    cdef int i

    if a == b:
        return 0.0, 0.0, 0

    # Seed the stack with segments split at the density nodes so every
    # panel sees a smooth integrand.
    cdef double prev = a
    cdef double width = b - a
    for i in range(tb.n):
        if a < tb.ts[i] < b:
            if top + 2 > 512:
                raise NonConvergence("quadrature subdivision stack overflow")
            st_a[top] = prev
            st_b[top] = tb.ts[i]
            st_tol[top] = tol * (tb.ts[i] - prev) / width
            prev = tb.ts[i]
            top += 1
    st_a[top] = prev
    st_b[top] = b
    st_tol[top] = tol * (b - prev) / width
    top += 1
    intervals = top

    while top > 0:
        top -= 1
        lo = st_a[top]
        hi = st_b[top]
        tshare = st_tol[top]
        _panel_c(tb, code, param, lo, hi, &val, &err)
        evals += 15
        if err <= tshare:
            total += val
            total_err += err
            continue
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            raise NonConvergence(
                "interval too narrow to subdivide further "
                "(error estimate %.3e, tolerance %.3e)" % (err, tshare))
        if intervals >= budget:
            raise NonConvergence(
                "quadrature budget of %d intervals exhausted "
                "(error estimate %.3e, tolerance %.3e)" % (budget, err, tshare))
        if top + 2 > 512:
            raise NonConvergence("quadrature subdivision stack overflow")
        st_a[top] = lo
        st_b[top] = mid
        st_tol[top] = 0.5 * tshare
        top += 1
        st_a[top] = mid
        st_b[top] = hi
        st_tol[top] = 0.5 * tshare
        top += 1
        intervals += 1
    return total, total_err, evals


def eval_many(Tables tb, xs, which):
    codes = {"lam": 0, "h": 1, "psi": 2, "f": 3, "g": 4}
    cdef int code = codes[which]
    arr = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    out = np.empty(arr.shape[0], dtype=np.float64)
    cdef double[::1] xv = arr
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double x
    for i in range(xv.shape[0]):
        x = xv[i]
        if code == 0:
            ov[i] = _lam(tb, x)
        elif code == 1:
            ov[i] = _h(tb, x)
        elif code == 2:
            ov[i] = _psi(tb, x)
        elif code == 3:
            ov[i] = _f(tb, x)
        else:
            ov[i] = _g(tb, x)
    return out.reshape(np.asarray(xs, dtype=np.float64).shape)
