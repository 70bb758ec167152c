"""Reference implementation of the evaluation kernels in plain Python.

The compiled extension in `_core.pyx` mirrors this module function for
function; whichever is importable gets re-exported by the package.  Keep the
two in lockstep when changing anything here.

A "handle" is the precomputed node state for one piecewise linear density
slope: node radii, node values, the exact antiderivative of lam * zeta
accumulated at the nodes, and per-segment slope/intercept data.  Handles are
built once per density and threaded through every evaluation.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from typing import NamedTuple

import numpy as np

from ..numerics import _adaptive, _panel

F_INTEGRAND = 0
XF_INTEGRAND = 1
ARC_INTEGRAND = 2
LAMZ_INTEGRAND = 3


class Handle(NamedTuple):
    ts: tuple[float, ...]
    vs: tuple[float, ...]
    hs: tuple[float, ...]
    slopes: tuple[float, ...]
    intercepts: tuple[float, ...]
    phis: tuple[float, ...]
    logs: tuple[float, ...]


def _phi(t: float) -> float:
    return 2.0 * math.atanh(t)


def prepare(ts, vs) -> Handle:
    """Build the node state for kernel evaluation.

    The running values hs[i] accumulate the integral of lam * zeta from 0 to
    ts[i] using the closed-form antiderivative of each linear segment, so no
    quadrature error enters the weight itself.
    """
    ts = tuple(float(t) for t in ts)
    vs = tuple(float(v) for v in vs)
    n = len(ts)
    phis = tuple(_phi(t) for t in ts)
    logs = tuple(math.log1p(-t * t) for t in ts)
    slopes = []
    intercepts = []
    for i in range(n - 1):
        d = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])
        slopes.append(d)
        intercepts.append(vs[i] - d * ts[i])
    hs = [vs[0] * phis[0]]
    for i in range(n - 1):
        seg = intercepts[i] * (phis[i + 1] - phis[i]) - slopes[i] * (logs[i + 1] - logs[i])
        hs.append(hs[i] + seg)
    return Handle(ts, vs, tuple(hs), tuple(slopes), tuple(intercepts), phis, logs)


def lam_value(h: Handle, t: float) -> float:
    ts = h.ts
    if t <= ts[0]:
        return h.vs[0]
    if t >= ts[-1]:
        return h.vs[-1]
    i = bisect_right(ts, t) - 1
    return h.intercepts[i] + h.slopes[i] * t


def h_value(h: Handle, t: float) -> float:
    ts = h.ts
    if t <= ts[0]:
        return h.vs[0] * _phi(t)
    if t >= ts[-1]:
        return h.hs[-1] + h.vs[-1] * (_phi(t) - h.phis[-1])
    i = bisect_right(ts, t) - 1
    return (
        h.hs[i]
        + h.intercepts[i] * (_phi(t) - h.phis[i])
        - h.slopes[i] * (math.log1p(-t * t) - h.logs[i])
    )


def psi_value(h: Handle, t: float) -> float:
    return math.exp(h_value(h, t))


def f_value(h: Handle, t: float) -> float:
    z = 2.0 / (1.0 - t * t)
    return t * z * z * psi_value(h, t)


def g_value(h: Handle, t: float) -> float:
    z = 2.0 / (1.0 - t * t)
    return t * z * psi_value(h, t)


def _integrand(h: Handle, code: int, param: float):
    if code == F_INTEGRAND:
        return lambda x: f_value(h, x)
    if code == XF_INTEGRAND:
        return lambda x: x * f_value(h, x)
    if code == ARC_INTEGRAND:
        def arc(x: float) -> float:
            z = 2.0 / (1.0 - x * x)
            return z * psi_value(h, x) * math.sqrt(1.0 + (x * param) ** 2)

        return arc
    if code == LAMZ_INTEGRAND:
        return lambda x: lam_value(h, x) * 2.0 / (1.0 - x * x)
    raise ValueError(f"unknown integrand code {code}")


def panel(h: Handle, code: int, a: float, b: float, param: float = 0.0):
    """Single Gauss-Kronrod panel of the coded integrand on [a, b]."""
    if a == b:
        return 0.0, 0.0
    return _panel(_integrand(h, code, param), a, b)


def adaptive(
    h: Handle,
    code: int,
    a: float,
    b: float,
    param: float = 0.0,
    tol: float = 1e-12,
    budget: int = 2**16,
):
    """Adaptive integral of the coded integrand, split at density nodes."""
    if a == b:
        return 0.0, 0.0, 0
    edges = [a]
    for t in h.ts:
        if a < t < b:
            edges.append(t)
    edges.append(b)
    segments = list(zip(edges[:-1], edges[1:]))
    res = _adaptive(_integrand(h, code, param), segments, tol, budget)
    return res.value, res.error_estimate, res.evaluations


_EVAL = {
    "lam": lam_value,
    "h": h_value,
    "psi": psi_value,
    "f": f_value,
    "g": g_value,
}


def eval_many(h: Handle, xs, which: str) -> np.ndarray:
    fn = _EVAL[which]
    arr = np.asarray(xs, dtype=np.float64)
    out = np.empty(arr.shape, dtype=np.float64)
    flat = arr.ravel()
    oflat = out.ravel()
    for i in range(flat.size):
        oflat[i] = fn(h, float(flat[i]))
    return out


__all__ = [
    "F_INTEGRAND",
    "XF_INTEGRAND",
    "ARC_INTEGRAND",
    "LAMZ_INTEGRAND",
    "Handle",
    "prepare",
    "lam_value",
    "h_value",
    "psi_value",
    "f_value",
    "g_value",
    "panel",
    "adaptive",
    "eval_many",
]
