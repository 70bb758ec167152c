"""Distribution functions under dx/x and the inequality suite built on them.

The level-set measure of a solution is computed piece by piece: the solution
is cut into monotone pieces at the sign changes of its analytic derivative,
and each level is located by bracketed root finding inside a piece.  That
gives the ~1e-12 accuracy the strict-inequality checks lean on, which raw
grid sampling would not.  Integral functionals with inverse-square-root
endpoint behaviour are integrated in a substituted variable with the
solution expanded to first order about the tangency endpoint, the same
treatment the curve reconstruction uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .curvature_ode import (
    BvpSolution,
    RiccatiSolution,
    m_functional,
    m_hat_functional,
    m_hat_zero,
    m_zero,
)
from .density import DensitySpec, rho, rho_hat, rho_tilde, zeta
from .errors import DomainError, HypothesisViolated
from .numerics import integrate, solve_monotone
from .report import CheckResult

__all__ = [
    "DistributionFunction",
    "distribution_mu",
    "distribution_function",
    "level_crossings",
    "closed_form_mu_u0",
    "closed_form_w0",
    "closed_form_mu_w0",
    "integral_phi_of_u",
    "winding_integral_w",
    "check_reverse_hh",
    "check_m_upper_bound",
    "check_mu_comparison_linear",
    "check_riccati_comparison",
]

# Threshold factor turning an inequality tolerance into an equality
# classification band, and the margin that counts as a strict inequality.
EQUALITY_FACTOR = 10.0
SEPARATION_MARGIN = 1e-4

_DIFF_STEP = 1e-4
_U_CLAMP = 1.0 - 2.0 ** -52


@dataclass(frozen=True, eq=False)
class DistributionFunction:
    """Level-set measures mu({fn > t}) sampled on an increasing level grid."""

    levels: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        levels = np.asarray(self.levels, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "values", values)
        if levels.ndim != 1 or levels.shape != values.shape:
            raise DomainError("levels and values must be 1-d and equal length")
        if levels.size >= 2 and np.min(np.diff(levels)) <= 0.0:
            raise DomainError("levels must be strictly increasing")
        if np.min(values) < -1e-12:
            raise DomainError("a level-set measure turned out negative")
        if values.size >= 2 and np.max(np.diff(values)) > 1e-10:
            raise DomainError("level-set measures must be non-increasing")


@lru_cache(maxsize=64)
def _monotone_pieces(sol) -> tuple[tuple[float, float, float, float], ...]:
    """Split the solution domain at the roots of its derivative.

    Returns (lo, hi, value(lo), value(hi)) per piece, in order.
    """
    grid = sol.grid
    deriv = [sol.derivative(float(x)) for x in grid]
    cuts = [float(grid[0])]
    for i in range(len(grid) - 1):
        lo, hi = float(grid[i]), float(grid[i + 1])
        if deriv[i] == 0.0 and i > 0:
            cuts.append(lo)
        elif deriv[i] * deriv[i + 1] < 0.0:
            cuts.append(float(brentq(sol.derivative, lo, hi, xtol=1e-15)))
    cuts.append(float(grid[-1]))
    width = cuts[-1] - cuts[0]
    pieces = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo <= 1e-12 * width:
            continue
        pieces.append((lo, hi, float(sol._value(lo)), float(sol._value(hi))))
    return tuple(pieces)


def distribution_mu(sol, level: float) -> float:
    """Measure of {sol > level} under dx/x on the solution's interval."""
    total = 0.0
    for lo, hi, flo, fhi in _monotone_pieces(sol):
        small, large = (flo, fhi) if flo <= fhi else (fhi, flo)
        if level < small:
            total += math.log(hi / lo)
        elif level < large:
            x = solve_monotone(sol._value, level, (lo, hi))
            total += math.log(hi / x) if fhi > flo else math.log(x / lo)
    return total


def distribution_function(sol, levels: Iterable[float]) -> DistributionFunction:
    arr = np.asarray(list(levels), dtype=float)
    vals = np.array([distribution_mu(sol, float(t)) for t in arr])
    return DistributionFunction(levels=arr, values=vals)


def level_crossings(sol, level: float) -> list[float]:
    """Radii where the solution passes through the level, one per piece."""
    out = []
    for lo, hi, flo, fhi in _monotone_pieces(sol):
        small, large = (flo, fhi) if flo <= fhi else (fhi, flo)
        if small < level < large:
            out.append(solve_monotone(sol._value, level, (lo, hi)))
    return out


def _check_reference_interval(a: float, b: float) -> None:
    if not (math.isfinite(a) and math.isfinite(b) and 0.0 < a < b < 1.0):
        raise DomainError(f"interval ({a}, {b}) must satisfy 0 < a < b < 1")


def closed_form_mu_u0(a: float, b: float, t: float) -> float:
    """Distribution function of the unweighted opposite-signs solution."""
    _check_reference_interval(a, b)
    if not -1.0 <= t <= 1.0:
        raise DomainError(f"level {t} outside [-1, 1]")
    gap = b - a
    return math.log((-gap * t + math.sqrt(gap * gap * t * t + 4.0 * a * b)) / (2.0 * a))


def closed_form_w0(a: float, b: float, tau: float) -> float:
    """Unweighted Riccati solution (a + b) tau / (ab + tau**2)."""
    _check_reference_interval(a, b)
    if not a <= tau <= b:
        raise DomainError(f"radius {tau} outside [{a}, {b}]")
    return (a + b) * tau / (a * b + tau * tau)


def closed_form_mu_w0(a: float, b: float, t: float) -> float:
    """Distribution function of the unweighted Riccati solution."""
    _check_reference_interval(a, b)
    peak = 0.5 * (a + b) / math.sqrt(a * b)
    if not 1.0 <= t <= peak:
        raise DomainError(f"level {t} outside [1, {peak}]")
    return 2.0 * math.log((peak + math.sqrt(max(peak * peak - t * t, 0.0))) / t)


def _tangency_piece(
    sol,
    end: float,
    other: float,
    orient: float,
    transform: Callable[[float, float], float],
    tol: float,
) -> float:
    """Integrate transform(value, x)/x from a tangency endpoint to a split.

    Substitutes x = end + orient * s**2 so the inverse-square-root endpoint
    behaviour of the transform cancels against the Jacobian; within a sliver
    of the endpoint the solution value is replaced by its first-order
    expansion, whose offset from the endpoint never cancels to noise.
    """
    du = sol.derivative(end)
    eta_val = float(sol._value(end))
    cut = 1e-6 * (sol.b - sol.a)

    def g(s: float) -> float:
        delta = s * s
        if delta < cut:
            v = eta_val + orient * du * delta
        else:
            v = float(sol._value(end + orient * delta))
        return 2.0 * s * transform(v, end + orient * delta)

    return integrate(g, 0.0, math.sqrt(abs(other - end)), tol=tol).value


def integral_phi_of_u(
    sol: BvpSolution, phi: Callable[[float], float], tol: float = 1e-9
) -> float:
    """Integral of phi(u) under dx/x for an opposite-signs solution.

    phi may blow up like an inverse square root at +-1 (the contact slope
    hits those values at the endpoints); the integral is split at a sign
    change of u and each half is integrated in the substituted variable.
    """
    if not isinstance(sol, BvpSolution) or sol.eta != (1, -1):
        raise DomainError("integral needs the (1, -1) boundary-value solution")
    vals = sol.values
    if np.min(vals[:-1]) <= -1.0:
        raise HypothesisViolated(
            "contact slope reaches -1 before the right endpoint"
        )
    if np.max(vals[1:-1]) >= 1.0:
        raise HypothesisViolated(
            "contact slope leaves [-1, 1] strictly inside the interval"
        )

    split_idx = int(np.argmax(vals <= 0.0))
    split = float(sol.grid[split_idx])

    def capped(v: float, x: float) -> float:
        v = max(-_U_CLAMP, min(_U_CLAMP, v))
        return phi(v) / x

    left = _tangency_piece(sol, sol.a, split, 1.0, capped, tol)
    right = _tangency_piece(sol, sol.b, split, -1.0, capped, tol)
    return left + right


def winding_integral_w(sol: RiccatiSolution, tol: float = 1e-9) -> float:
    """Integral of 1/sqrt(w**2 - 1) under dx/x across the whole interval."""
    if not isinstance(sol, RiccatiSolution):
        raise DomainError("winding integral needs the Riccati solution")
    vals = sol.values
    if np.min(vals[1:-1]) <= 1.0:
        raise HypothesisViolated(
            "Riccati solution does not stay above 1 inside the interval"
        )
    split = float(sol.grid[int(np.argmax(vals))])

    def transform(v: float, x: float) -> float:
        q = (v - 1.0) * (v + 1.0)
        if q <= 0.0:
            q = 5e-324
        return 1.0 / (x * math.sqrt(q))

    # Inside the expansion sliver the transform sees v = 1 + w'(e) * delta,
    # so v - 1.0 recovers the offset exactly rather than by cancellation.
    left = _tangency_piece(sol, sol.a, split, 1.0, transform, tol)
    right = _tangency_piece(sol, sol.b, split, -1.0, transform, tol)
    return left + right


def _lambda_left_limit(spec: DensitySpec, b: float) -> float:
    return rho(spec, b, "-") / zeta(b)


def _verdict(slack: float, tol: float) -> str:
    return "pass" if slack >= -tol else "fail"


def _equality_entry(
    name: str, lhs: float, rhs: float, tol: float, expected: bool
) -> CheckResult:
    near = abs(lhs - rhs) <= EQUALITY_FACTOR * tol
    return CheckResult(
        name=name,
        lhs=1.0 if near else 0.0,
        rhs=1.0 if expected else 0.0,
        slack=0.0 if near == expected else -1.0,
        tolerance=EQUALITY_FACTOR * tol,
        verdict="pass" if near == expected else "fail",
    )


def check_reverse_hh(
    spec: DensitySpec, a: float, b: float, tol: float = 1e-8
) -> list[CheckResult]:
    """Upper bound for the opposite-signs multiplier times the radial gap."""
    mhat = m_hat_functional(spec, a, b)
    lhs = (rho_hat(b) - rho_hat(a)) * mhat
    rhs = 2.0 + (a * rho_tilde(spec, a, "+") if a > 0.0 else 0.0) + b * rho_tilde(
        spec, b, "-"
    )
    tag = f"reverse-hh({a:g},{b:g})"
    rows = [
        CheckResult(
            name=tag,
            lhs=lhs,
            rhs=rhs,
            slack=rhs - lhs,
            tolerance=tol,
            verdict=_verdict(rhs - lhs, tol),
        ),
        _equality_entry(
            f"{tag}/equality", lhs, rhs, tol, _lambda_left_limit(spec, b) == 0.0
        ),
        CheckResult(
            name=f"mhat-lower({a:g},{b:g})",
            lhs=m_hat_zero(a, b) if a > 0.0 else 1.0 / b,
            rhs=mhat,
            slack=mhat - (m_hat_zero(a, b) if a > 0.0 else 1.0 / b),
            tolerance=tol,
            verdict="report-only",
        ),
    ]
    return rows


def check_m_upper_bound(
    spec: DensitySpec, a: float, b: float, tol: float = 1e-8
) -> list[CheckResult]:
    """The equal-signs multiplier against its density-free bound."""
    m = m_functional(spec, a, b)
    m0 = m_zero(a, b) if a > 0.0 else 1.0 / b
    rhs = _lambda_left_limit(spec, b) + m0
    tag = f"m-bound({a:g},{b:g})"
    return [
        CheckResult(
            name=tag,
            lhs=m,
            rhs=rhs,
            slack=rhs - m,
            tolerance=tol,
            verdict=_verdict(rhs - m, tol),
        ),
        _equality_entry(
            f"{tag}/equality", m, rhs, tol, _lambda_left_limit(spec, b) == 0.0
        ),
        CheckResult(
            name=f"m-lower({a:g},{b:g})",
            lhs=m0,
            rhs=m,
            slack=m - m0,
            tolerance=tol,
            verdict="report-only",
        ),
    ]


def _hypothesis_row(tag: str, worst: float, bound: float) -> CheckResult:
    return CheckResult(
        name=f"{tag}/hypothesis",
        lhs=worst,
        rhs=bound,
        slack=worst - bound,
        tolerance=0.0,
        verdict="hypothesis-violated",
    )


def _separation_entry(
    tag: str, separation: float, expected_strict: bool
) -> CheckResult:
    strict = separation >= SEPARATION_MARGIN
    return CheckResult(
        name=f"{tag}/separation",
        lhs=separation,
        rhs=SEPARATION_MARGIN,
        slack=0.0 if strict == expected_strict else -1.0,
        tolerance=SEPARATION_MARGIN,
        verdict="pass" if strict == expected_strict else "fail",
    )


def check_mu_comparison_linear(
    sol: BvpSolution,
    levels: Sequence[float] | None = None,
    tol: float = 2e-6,
) -> list[CheckResult]:
    """Distribution of u against the distribution of -u, level by level."""
    if not isinstance(sol, BvpSolution) or sol.eta != (1, -1):
        raise DomainError("comparison needs the (1, -1) boundary-value solution")
    a, b = sol.a, sol.b
    tag = f"mu-linear({a:g},{b:g})"
    floor = float(np.min(sol.values[:-1]))
    if floor <= -1.0:
        return [_hypothesis_row(tag, floor, -1.0)]
    if levels is None:
        levels = np.linspace(0.05, 0.95, 19)
    total = math.log(b / a)
    rows = []
    widest = -math.inf
    for t in levels:
        t = float(t)
        mu_u = distribution_mu(sol, t)
        mu_v = total - distribution_mu(sol, -t)
        slack = mu_v - mu_u
        widest = max(widest, slack)
        rows.append(
            CheckResult(
                name=f"{tag}[t={t:g}]",
                lhs=mu_u,
                rhs=mu_v,
                slack=slack,
                tolerance=tol,
                verdict=_verdict(slack, tol),
            )
        )
    expected_strict = _lambda_left_limit(sol.spec, b) > 0.0
    rows.append(
        _separation_entry(tag, widest if rows else 0.0, expected_strict)
    )
    return rows


def check_riccati_comparison(
    sol: RiccatiSolution,
    levels: Sequence[float] | None = None,
    tol: float = 2e-6,
    norm_tol: float = 1e-8,
    diff_tol: float = 1e-4,
) -> list[CheckResult]:
    """Riccati distribution against the unweighted closed form, plus the
    supremum bound and the coth differential inequality."""
    if not isinstance(sol, RiccatiSolution):
        raise DomainError("comparison needs the Riccati solution")
    a, b = sol.a, sol.b
    tag = f"riccati({a:g},{b:g})"
    interior = sol.values[1:-1]
    floor = float(np.min(interior))
    if floor <= 1.0:
        return [_hypothesis_row(tag, floor, 1.0)]

    peak = 0.5 * (a + b) / math.sqrt(a * b)
    wmax = _refined_max(sol)
    rows = [
        CheckResult(
            name=f"{tag}/norm",
            lhs=wmax,
            rhs=peak,
            slack=peak - wmax,
            tolerance=norm_tol,
            verdict=_verdict(peak - wmax, norm_tol),
        )
    ]
    if levels is None:
        levels = 1.0 + (peak - 1.0) * np.arange(20) / 20.0
    separation = -math.inf
    low_band = 1.0 + 0.5 * (peak - 1.0)
    for t in levels:
        t = float(t)
        mu_w = distribution_mu(sol, t)
        mu_ref = closed_form_mu_w0(a, b, min(t, peak))
        slack = mu_ref - mu_w
        if 1.0 < t <= low_band:
            separation = max(separation, slack)
        rows.append(
            CheckResult(
                name=f"{tag}[t={t:g}]",
                lhs=mu_w,
                rhs=mu_ref,
                slack=slack,
                tolerance=tol,
                verdict=_verdict(slack, tol),
            )
        )
    expected_strict = _lambda_left_limit(sol.spec, b) > 0.0
    rows.append(
        _separation_entry(tag, separation if separation > -math.inf else 0.0,
                          expected_strict)
    )

    h = _DIFF_STEP
    margin = max(0.2 * (wmax - 1.0), 2.0 * h)
    for t in levels:
        t = float(t)
        if t - h <= 1.0 or t >= wmax - margin:
            continue
        mu_t = distribution_mu(sol, t)
        dmu = (distribution_mu(sol, t + h) - distribution_mu(sol, t - h)) / (2.0 * h)
        bound = (2.0 / t) / math.tanh(0.5 * mu_t)
        slack = -dmu - bound
        rows.append(
            CheckResult(
                name=f"{tag}/dmu[t={t:g}]",
                lhs=bound,
                rhs=-dmu,
                slack=slack,
                tolerance=diff_tol,
                verdict=_verdict(slack, diff_tol),
            )
        )
    return rows


def _refined_max(sol) -> float:
    """Grid maximum of the solution, sharpened by a derivative root."""
    vals = sol.values
    j = int(np.argmax(vals))
    best = float(vals[j])
    if 0 < j < len(vals) - 1:
        lo, hi = float(sol.grid[j - 1]), float(sol.grid[j + 1])
        dlo, dhi = sol.derivative(lo), sol.derivative(hi)
        if dlo > 0.0 > dhi:
            x = float(brentq(sol.derivative, lo, hi, xtol=1e-15))
            best = max(best, float(sol._value(x)))
    return best
