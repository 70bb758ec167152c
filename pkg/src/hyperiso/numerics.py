"""Adaptive quadrature and monotone root finding.

Both routines are deliberately small: a 15-point Gauss-Kronrod panel drives
an error-guided bisection queue, and root finding wraps Brent's method with
an explicit straddle check and a residual verification on exit.  Integrable
endpoint singularities are handled by substitution or pre-grading selected
through `SingularityHint`, never by sampling the endpoint itself.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from scipy.optimize import brentq

from .errors import BracketError, DomainError, NonConvergence

__all__ = [
    "QuadratureResult",
    "SingularityHint",
    "NO_HINT",
    "integrate",
    "solve_monotone",
]

_LOCATIONS = ("left", "right", "none")
_KINDS = ("inverse-square-root", "density-blowup-at-1", "none")

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
_XGK = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993945,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
)
_WGK = (
    0.0229353220105292,
    0.0630920926299786,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
)
_WG = (
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
)


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral together with the accumulated error estimate."""

    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class SingularityHint:
    """Advance notice of an integrable endpoint singularity.

    `location` names the endpoint carrying the singular behaviour and `kind`
    its type: `inverse-square-root` for integrands growing like
    1/sqrt(x - endpoint), `density-blowup-at-1` for the steep but analytic
    growth of radial weights toward the rim of the disc.  The neutral pair
    ("none", "none") asks for plain adaptive behaviour.
    """

    location: str = "none"
    kind: str = "none"

    def __post_init__(self) -> None:
        if self.location not in _LOCATIONS:
            raise DomainError(f"unknown singularity location {self.location!r}")
        if self.kind not in _KINDS:
            raise DomainError(f"unknown singularity kind {self.kind!r}")
        if (self.kind == "none") != (self.location == "none"):
            raise DomainError(
                "singularity kind and location must both be 'none' or neither"
            )


NO_HINT = SingularityHint()


def _panel(fn: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod panel on [a, b]: (value, |kronrod - gauss|)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fc = fn(mid)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    for j in range(7):
        dx = half * _XGK[j]
        fsum = fn(mid - dx) + fn(mid + dx)
        kron += _WGK[j] * fsum
        if j % 2 == 1:
            gauss += _WG[j // 2] * fsum
    return half * kron, abs(half * (kron - gauss))


def _adaptive(
    fn: Callable[[float], float],
    segments: list[tuple[float, float]],
    tol: float,
    budget: int,
) -> QuadratureResult:
    heap: list[tuple[float, int, float, float, float, float]] = []
    count = 0
    total = 0.0
    total_err = 0.0
    evals = 0
    for lo, hi in segments:
        val, err = _panel(fn, lo, hi)
        evals += 15
        total += val
        total_err += err
        heapq.heappush(heap, (-err, count, lo, hi, val, err))
        count += 1
    intervals = len(segments)
    while total_err > tol:
        neg_err, _, lo, hi, val, err = heapq.heappop(heap)
        if intervals >= budget:
            raise NonConvergence(
                f"quadrature budget of {budget} intervals exhausted "
                f"(error estimate {total_err:.3e}, tolerance {tol:.3e})"
            )
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            raise NonConvergence(
                "interval too narrow to subdivide further "
                f"(error estimate {total_err:.3e}, tolerance {tol:.3e})"
            )
        v1, e1 = _panel(fn, lo, mid)
        v2, e2 = _panel(fn, mid, hi)
        evals += 30
        total += v1 + v2 - val
        total_err += e1 + e2 - err
        heapq.heappush(heap, (-e1, count, lo, mid, v1, e1))
        count += 1
        heapq.heappush(heap, (-e2, count, mid, hi, v2, e2))
        count += 1
        intervals += 1
    return QuadratureResult(value=total, error_estimate=total_err, evaluations=evals)


def integrate(
    fn: Callable[[float], float],
    a: float,
    b: float,
    hint: SingularityHint = NO_HINT,
    tol: float = 1e-10,
    budget: int = 2**16,
) -> QuadratureResult:
    """Integrate `fn` over [a, b] to absolute tolerance `tol`.

    The integrand must be finite on the open interval; the endpoints are
    never sampled, so hinted inverse-square-root behaviour at one end is
    admissible.  That hint triggers the substitution x = endpoint -+ s**2,
    which renders the transformed integrand smooth.  A density-blowup hint
    keeps the integrand as given but seeds the subdivision queue with a
    geometric sequence of panels crowding toward the hinted endpoint, which
    saves most of the bisection work for rapidly growing analytic weights.

    Raises NonConvergence if the interval budget is exhausted before the
    accumulated error estimate drops below `tol`; the partial result is
    never returned silently.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integration endpoints must be finite")
    if a >= b:
        raise DomainError(f"empty or reversed interval [{a}, {b}]")
    if tol <= 0.0:
        raise DomainError("tolerance must be positive")

    if hint.kind == "inverse-square-root":
        width = math.sqrt(b - a)
        if hint.location == "left":
            g = lambda s: 2.0 * s * fn(a + s * s)  # noqa: E731
        else:
            g = lambda s: 2.0 * s * fn(b - s * s)  # noqa: E731
        return _adaptive(g, [(0.0, width)], tol, budget)

    if hint.kind == "density-blowup-at-1":
        edges = [0.0, 0.5]
        frac = 0.5
        for _ in range(11):
            frac = 0.5 * (1.0 + frac)
            edges.append(frac)
        edges.append(1.0)
        if hint.location == "left":
            points = [b - (b - a) * e for e in edges]
            points.reverse()
        else:
            points = [a + (b - a) * e for e in edges]
        segments = list(zip(points[:-1], points[1:]))
        return _adaptive(fn, segments, tol, budget)

    return _adaptive(fn, [(a, b)], tol, budget)


def solve_monotone(
    fn: Callable[[float], float],
    target: float,
    bracket: tuple[float, float],
    tol: float = 1e-12,
) -> float:
    """Solve fn(x) = target for monotone `fn` on the closed bracket.

    The bracket endpoints must straddle the target; otherwise BracketError
    is raised before any iteration.  On success the residual |fn(x) - target|
    is verified against tol * max(1, |target|), and NonConvergence is raised
    if the located root fails that check, which only happens for targets
    whose scale defeats double precision or for callables that are not in
    fact monotone.
    """
    lo, hi = bracket
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise DomainError(f"invalid bracket ({lo}, {hi})")
    if tol <= 0.0:
        raise DomainError("tolerance must be positive")
    flo = fn(lo) - target
    if flo == 0.0:
        return lo
    fhi = fn(hi) - target
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(
            f"target {target} not straddled on [{lo}, {hi}]: "
            f"endpoint residuals {flo:.3e}, {fhi:.3e}"
        )
    root = brentq(lambda x: fn(x) - target, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    residual = abs(fn(root) - target)
    if residual > tol * max(1.0, abs(target)):
        raise NonConvergence(
            f"root residual {residual:.3e} exceeds tolerance at x = {root}"
        )
    return float(root)
