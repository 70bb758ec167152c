"""Boundary-value solutions of the radial curvature equation.

A curve meeting every centred circle at angle arcsin(u) has constant
generalized curvature exactly when

    u' + (1/x + rho_tilde(x)) u + multiplier * zeta(x) = 0

on the radial interval [a, b], with u = +-1 at both ends (the curve is
tangent to the bounding circles).  The equation integrates in closed form:
every solution is a ratio (coef * If(a, x) + const) / g(x) where If is the
cumulative volume kernel integral from a and g the perimeter kernel, so the
solver only assembles coefficients matching the requested boundary signs.
The two functionals

    m    = (g(b) - g(a)) / If(a, b)      for matching boundary signs
    m_hat = (g(b) + g(a)) / If(a, b)     for opposite boundary signs

carry the multiplier (up to sign).  The reciprocal w = 1/u of the both-ends
+1 solution solves the Riccati form of the same equation and is the natural
object for the comparison bounds.

Reconstruction: the angle theta(x) of the contact point advances by
theta' = -u / (x * sqrt(1 - u**2)), which is integrable across the
tangency endpoints; the accumulated turn over [a, b] is the winding
measure of the solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from . import _kernels
from .density import DensitySpec, rho_tilde, zeta
from .errors import DomainError, SingularInterior
from .numerics import integrate
from .profile import _CumulativeTable

__all__ = [
    "BvpSolution",
    "RiccatiSolution",
    "CurveReconstruction",
    "m_functional",
    "m_hat_functional",
    "m_zero",
    "m_hat_zero",
    "solve_linear_bvp",
    "solve_riccati",
    "solve_bvp_a_zero",
    "generalized_curvature",
    "reconstruct_curve",
    "dump_solution_csv",
]

_ETAS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def _check_interval(a: float, b: float, allow_zero: bool) -> None:
    lo_ok = a >= 0.0 if allow_zero else a > 0.0
    if not (math.isfinite(a) and math.isfinite(b) and lo_ok and a < b < 1.0):
        kind = "0 <= a < b < 1" if allow_zero else "0 < a < b < 1"
        raise DomainError(f"interval ({a}, {b}) must satisfy {kind}")


def _int_f(spec: DensitySpec, a: float, b: float) -> float:
    rough, _ = _kernels.panel(spec.handle, _kernels.F_INTEGRAND, a, b)
    tol = max(1e-14, 1e-13 * abs(rough))
    val, _, _ = _kernels.adaptive(spec.handle, _kernels.F_INTEGRAND, a, b, 0.0, tol)
    return val


def m_functional(spec: DensitySpec, a: float, b: float) -> float:
    """Multiplier scale for boundary data of equal signs."""
    _check_interval(a, b, allow_zero=True)
    h = spec.handle
    return (_kernels.g_value(h, b) - _kernels.g_value(h, a)) / _int_f(spec, a, b)


def m_hat_functional(spec: DensitySpec, a: float, b: float) -> float:
    """Multiplier scale for boundary data of opposite signs."""
    _check_interval(a, b, allow_zero=True)
    h = spec.handle
    return (_kernels.g_value(h, b) + _kernels.g_value(h, a)) / _int_f(spec, a, b)


def m_zero(a: float, b: float) -> float:
    """Closed form of the equal-signs functional for the unweighted disc."""
    _check_interval(a, b, allow_zero=True)
    return (1.0 + a * b) / (a + b)


def m_hat_zero(a: float, b: float) -> float:
    """Closed form of the opposite-signs functional for the unweighted disc."""
    _check_interval(a, b, allow_zero=True)
    return (1.0 - a * b) / (b - a)


def _solution_grid(spec: DensitySpec, a: float, b: float) -> np.ndarray:
    width = b - a
    pts = list(np.linspace(a, b, 512))
    pts.extend(t for t, _ in spec.lambda_nodes if a < t < b)
    for k in range(2, 9):
        pts.append(a + 10.0 ** (-k) * width)
        pts.append(b - 10.0 ** (-k) * width)
    pts.sort()
    out = [pts[0]]
    for x in pts[1:]:
        if x - out[-1] > 1e-14 * width:
            out.append(x)
    out[-1] = b
    return np.array(out)


@dataclass(frozen=True)
class _RadialSolution:
    """Closed-form solution data on [a, b].

    The value at x is (coef * If(a, x) + const) / g(x), or its reciprocal
    for the Riccati variant.  `evaluate` is continuous in x and exact up to
    table accuracy; `derivative` uses the differential equation itself,
    which the evaluator satisfies to quadrature precision.
    """

    spec: DensitySpec = field(repr=False)
    a: float
    b: float
    eta: tuple[int, int]
    multiplier: float
    coef: float = field(repr=False)
    const: float = field(repr=False)
    grid: np.ndarray = field(repr=False, compare=False)
    values: np.ndarray = field(repr=False, compare=False)
    _table: _CumulativeTable = field(repr=False, compare=False)

    def _ratio(self, x: float) -> float:
        if x == 0.0:
            return 0.0
        num = self.coef * self._table.value(x) + self.const
        return num / _kernels.g_value(self.spec.handle, x)

    def evaluate(self, x):
        if np.ndim(x) > 0:
            return np.array([self._value(float(t)) for t in np.asarray(x).ravel()])
        return self._value(float(x))

    def _value(self, x: float) -> float:
        if not self.a <= x <= self.b:
            raise DomainError(f"{x} outside the solution interval [{self.a}, {self.b}]")
        return self._ratio(x)


class BvpSolution(_RadialSolution):
    def derivative(self, x: float) -> float:
        u = self._value(x)
        if x == 0.0:
            # u vanishes at the origin, so u'(0) = -u'(0) - multiplier * zeta(0)
            # in the limit of the equation below.
            return -self.multiplier
        return -(1.0 / x + rho_tilde(self.spec, x)) * u - self.multiplier * zeta(x)


class RiccatiSolution(_RadialSolution):
    def _value(self, x: float) -> float:
        if not self.a <= x <= self.b:
            raise DomainError(f"{x} outside the solution interval [{self.a}, {self.b}]")
        return 1.0 / self._ratio(x)

    def derivative(self, x: float) -> float:
        w = self._value(x)
        drift = 1.0 / x + rho_tilde(self.spec, x)
        return drift * w - self.multiplier * zeta(x) * w * w


def _assemble(cls, spec, a, b, eta, multiplier, coef, const):
    tab = _CumulativeTable(
        spec.handle,
        _kernels.F_INTEGRAND,
        a,
        b,
        [t for t, _ in spec.lambda_nodes],
    )
    grid = _solution_grid(spec, a, b)
    sol = cls(
        spec=spec,
        a=a,
        b=b,
        eta=eta,
        multiplier=multiplier,
        coef=coef,
        const=const,
        grid=grid,
        values=np.empty_like(grid),
        _table=tab,
    )
    vals = np.array([sol._value(float(x)) for x in grid])
    sol.values[:] = vals
    return sol


def solve_linear_bvp(
    spec: DensitySpec, a: float, b: float, eta: Sequence[int]
) -> BvpSolution:
    """Solve the curvature equation with boundary signs eta on [a, b], a > 0."""
    _check_interval(a, b, allow_zero=False)
    eta = tuple(int(e) for e in eta)
    if eta not in _ETAS:
        raise DomainError(f"boundary signs {eta} must be a pair of +-1")
    h = spec.handle
    ga = _kernels.g_value(h, a)
    if eta[0] == eta[1]:
        m = m_functional(spec, a, b)
        coef, const, mult = m, ga, -m
    else:
        mh = m_hat_functional(spec, a, b)
        coef, const, mult = -mh, ga, mh
    if eta[0] == -1:
        coef, const, mult = -coef, -const, -mult
    return _assemble(BvpSolution, spec, a, b, eta, mult, coef, const)


def solve_riccati(spec: DensitySpec, a: float, b: float) -> RiccatiSolution:
    """Reciprocal of the both-ends +1 solution; multiplier is m itself."""
    _check_interval(a, b, allow_zero=False)
    m = m_functional(spec, a, b)
    ga = _kernels.g_value(spec.handle, a)
    return _assemble(RiccatiSolution, spec, a, b, (1, 1), m, m, ga)


def solve_bvp_a_zero(spec: DensitySpec, b: float) -> BvpSolution:
    """Solution on [0, b] vanishing at the origin with u(b) = 1."""
    _check_interval(0.0, b, allow_zero=True)
    tab = _CumulativeTable(
        spec.handle, _kernels.F_INTEGRAND, 0.0, b,
        [t for t, _ in spec.lambda_nodes],
    )
    gb = _kernels.g_value(spec.handle, b)
    coef = gb / tab.total
    grid = _solution_grid(spec, 0.0, b)
    sol = BvpSolution(
        spec=spec,
        a=0.0,
        b=b,
        eta=(0, 1),
        multiplier=-coef,
        coef=coef,
        const=0.0,
        grid=grid,
        values=np.empty_like(grid),
        _table=tab,
    )
    vals = np.array([sol._value(float(x)) for x in grid])
    sol.values[:] = vals
    return sol


def generalized_curvature(
    spec: DensitySpec, tau: float, u: float, multiplier: float
) -> float:
    """Curvature of the level curve through (tau, arcsin u) for the multiplier."""
    if not 0.0 < tau < 1.0:
        raise DomainError(f"radius {tau} outside (0, 1)")
    if abs(u) > 1.0 + 1e-12:
        raise DomainError(f"contact slope {u} outside [-1, 1]")
    return -rho_tilde(spec, tau) * u - multiplier * zeta(tau)


@dataclass(frozen=True)
class CurveReconstruction:
    """Contact angle along the reconstructed curve."""

    grid: np.ndarray
    theta: np.ndarray
    delta_theta: float


def reconstruct_curve(
    spec: DensitySpec, sol: BvpSolution, theta_start: float = math.pi / 2.0
) -> CurveReconstruction:
    """Integrate the contact angle of the curve realised by a solution.

    The angular speed -u / (x * sqrt(1 - u**2)) has inverse-square-root
    growth at a tangency endpoint (|u| = 1), handled by hinted quadrature;
    |u| = 1 strictly inside the interval would make the curve stop being a
    graph over the radius and raises SingularInterior.
    """
    if isinstance(sol, RiccatiSolution):
        raise DomainError("curve reconstruction needs the linear solution")
    grid = sol.grid
    vals = sol.values
    for i in range(1, len(grid) - 1):
        if abs(vals[i]) >= 1.0:
            raise SingularInterior(
                f"contact slope reaches {vals[i]} at interior radius {grid[i]}"
            )

    left_singular = abs(abs(vals[0]) - 1.0) <= 1e-9
    right_singular = abs(abs(vals[-1]) - 1.0) <= 1e-9

    def speed(x: float) -> float:
        u = sol._value(x)
        s = (1.0 - u) * (1.0 + u)
        if s <= 0.0:
            s = 5e-324
        return -u / (x * math.sqrt(s))

    def tangency_integral(end: float, width: float, orient: float) -> float:
        # Integral of the angular speed over the segment touching a tangency
        # endpoint (orient +1: [end, end + width], -1: [end - width, end]).
        # Substituting x = end + orient * s**2 and expanding u to first order
        # about the endpoint factors the square root as s * sqrt(q), so the
        # blow-up cancels exactly instead of being computed as 1 - u**2,
        # which rounds to noise (or to zero) that close to |u| = 1.
        eta = 1.0 if (vals[0] if orient > 0.0 else vals[-1]) > 0.0 else -1.0
        du = sol.derivative(end)
        if -2.0 * eta * orient * du <= 0.0:
            raise SingularInterior(
                f"contact slope leaves [-1, 1] immediately inside {end}"
            )

        def transformed(s: float) -> float:
            q = -2.0 * eta * orient * du - (du * s) ** 2
            u = eta + orient * du * s * s
            return -2.0 * u / ((end + orient * s * s) * math.sqrt(q))

        return integrate(transformed, 0.0, math.sqrt(width), tol=1e-11).value

    theta = np.empty_like(grid)
    theta[0] = theta_start
    total = theta_start
    for i in range(len(grid) - 1):
        lo, hi = float(grid[i]), float(grid[i + 1])
        if i == 0 and left_singular:
            piece = tangency_integral(lo, hi - lo, 1.0)
        elif i == len(grid) - 2 and right_singular:
            piece = tangency_integral(hi, hi - lo, -1.0)
        else:
            # Per-segment absolute tolerance.  Close to a tangency endpoint
            # the ratio form of u carries roundoff jitter that puts a floor
            # near 1e-11 under the error estimate, so asking for less than
            # 1e-9 risks exhausting the budget against pure noise.
            piece = integrate(speed, lo, hi, tol=1e-9).value
        total += piece
        theta[i + 1] = total
    return CurveReconstruction(
        grid=grid, theta=theta, delta_theta=float(theta[-1] - theta[0])
    )


def _format_eta(sol: _RadialSolution) -> str:
    if isinstance(sol, RiccatiSolution):
        return "riccati"
    return f"({sol.eta[0]},{sol.eta[1]})"


def dump_solution_csv(
    fh: IO[str], sol: _RadialSolution, samples: int | None = None
) -> None:
    """Write the sampled solution with its defining data in the header.

    By default the rows are the solution's own grid; pass `samples` to
    resample on that many equally spaced radii instead.
    """
    col = "w" if isinstance(sol, RiccatiSolution) else "u"
    fh.write(
        f"# a={sol.a:.17g}, b={sol.b:.17g}, eta={_format_eta(sol)}, "
        f"lambda={sol.multiplier:.17g}\n"
    )
    fh.write(f"tau,{col}\n")
    if samples is None:
        pairs = zip(sol.grid, sol.values)
    else:
        if samples < 2:
            raise DomainError(f"need at least 2 samples, got {samples}")
        xs = np.linspace(sol.a, sol.b, samples)
        pairs = ((float(x), sol._value(float(x))) for x in xs)
    for x, v in pairs:
        fh.write(f"{x:.17g},{v:.17g}\n")
