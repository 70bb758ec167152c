"""Weighted volumes, perimeters, and the isoperimetric profile of balls.

Everything here reduces to two radial kernels: the volume kernel
f(t) = t * zeta(t)**2 * psi(t) and the perimeter kernel
g(t) = t * zeta(t) * psi(t).  The weighted volume of the centred ball of
disc radius t is 2*pi*F(t) with F the cumulative integral of f, its
weighted perimeter is 2*pi*g(t), and the profile of centred balls is

    I(v) = 2*pi * g(F^{-1}(v / (2*pi))).

Evaluations run off a cached panel table per density so that inversions
and competitor sweeps stay cheap.  The radial domain is capped at
`T_MAX` = 0.999; the weight grows so quickly toward the rim that volumes
beyond the cap overflow any realistic use, and requests past it raise
RangeError rather than degrade quietly.

Competitor sets for minimality experiments come in two shapes: finite
unions of centred annuli, and cap-symmetric sets described by a radial
angular-width profile alpha.  Both get exact volume and perimeter
formulas in terms of f and g.

All operations accept a `weight_scale` factor which multiplies the weight
uniformly.  It exists so that scaling covariance of the profile can be
exercised through the public interface; the normalisation h(0) = 0 makes
a scaled weight inexpressible as a density of the same family.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import IO, Sequence, Union
from weakref import WeakKeyDictionary

from . import _kernels
from .density import DensitySpec, first_positive_radius
from .errors import (
    DomainError,
    NonConvergence,
    RangeError,
    VolumeMismatch,
)
from .numerics import solve_monotone
from .report import VerificationReport

T_MAX = 0.999
TWO_PI = 2.0 * math.pi

__all__ = [
    "T_MAX",
    "AnnulusUnion",
    "CapSymmetricProfile",
    "volume_F",
    "F_inverse",
    "f_kernel",
    "g_kernel",
    "ball_radius",
    "ball_volume",
    "ball_perimeter",
    "profile_J",
    "profile_I",
    "annuli_volume",
    "annuli_perimeter",
    "cap_volume",
    "cap_perimeter",
    "match_annuli_volume",
    "match_cap_volume",
    "verify_ball_minimality",
    "uniqueness_thresholds",
    "dump_profile_csv",
]


# ---------------------------------------------------------------------------
# cached cumulative tables


class _CumulativeTable:
    """Cumulative integral of one kernel integrand on [lo, hi].

    Panels are refined until the summed error estimate is negligible
    relative to the total; partial panels are evaluated fresh on lookup, so
    `value` is continuous and as accurate as the table itself.
    """

    def __init__(self, handle, code: int, lo: float, hi: float,
                 seeds: Sequence[float], param: float = 0.0) -> None:
        self.handle = handle
        self.code = code
        self.param = param
        edges0 = [lo]
        for s in sorted(seeds):
            if lo < s < hi and s - edges0[-1] > 1e-12:
                edges0.append(s)
        edges0.append(hi)

        panels: list[tuple[float, float, float, float]] = []

        # A panel is accepted once its error estimate is negligible both
        # absolutely and relative to its own value; a budget on width keeps
        # the splitting honest when an estimate sits on its rounding floor.
        def visit(a: float, b: float, depth: int) -> None:
            val, err = _kernels.panel(handle, code, a, b, param)
            if err <= max(1e-11, 1e-13 * abs(val)) or b - a < 1e-14:
                panels.append((a, b, val, err))
                return
            if depth >= 48 or len(panels) > 8192:
                raise NonConvergence(
                    f"cumulative table refinement stalled on [{a}, {b}]"
                )
            mid = 0.5 * (a + b)
            visit(a, mid, depth + 1)
            visit(mid, b, depth + 1)

        for a, b in zip(edges0[:-1], edges0[1:]):
            visit(a, b, 0)

        self.edges = [p[0] for p in panels] + [hi]
        cums = [0.0]
        for _, _, val, _ in panels:
            cums.append(cums[-1] + val)
        self.cums = cums
        self.error_estimate = sum(p[3] for p in panels)

    @property
    def total(self) -> float:
        return self.cums[-1]

    def value(self, x: float) -> float:
        edges = self.edges
        i = bisect_right(edges, x) - 1
        if i < 0:
            i = 0
        elif i >= len(edges) - 1:
            i = len(edges) - 2
        if x == edges[i]:
            return self.cums[i]
        val, _ = _kernels.panel(self.handle, self.code, edges[i], x, self.param)
        return self.cums[i] + val


_RIM_SEEDS = tuple(1.0 - 2.0 ** (-k) for k in range(1, 10))

_TABLES: "WeakKeyDictionary[DensitySpec, dict[int, _CumulativeTable]]" = (
    WeakKeyDictionary()
)


def _table(spec: DensitySpec, code: int) -> _CumulativeTable:
    per_spec = _TABLES.setdefault(spec, {})
    tab = per_spec.get(code)
    if tab is None:
        seeds = [t for t, _ in spec.lambda_nodes] + list(_RIM_SEEDS)
        tab = _CumulativeTable(spec.handle, code, 0.0, T_MAX, seeds)
        per_spec[code] = tab
    return tab


def _check_scale(weight_scale: float) -> None:
    if not (math.isfinite(weight_scale) and weight_scale > 0.0):
        raise DomainError(f"weight scale {weight_scale} must be finite and > 0")


def _check_radius(t: float) -> None:
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"disc radius {t} must be finite and >= 0")
    if t > T_MAX:
        raise RangeError(f"disc radius {t} beyond the radial cap {T_MAX}")


# ---------------------------------------------------------------------------
# the profile of centred balls


def f_kernel(spec: DensitySpec, t: float, weight_scale: float = 1.0) -> float:
    """Volume kernel t * zeta**2 * psi at radius t."""
    _check_scale(weight_scale)
    _check_radius(t)
    return weight_scale * _kernels.f_value(spec.handle, t)


def g_kernel(spec: DensitySpec, t: float, weight_scale: float = 1.0) -> float:
    """Perimeter kernel t * zeta * psi at radius t."""
    _check_scale(weight_scale)
    _check_radius(t)
    return weight_scale * _kernels.g_value(spec.handle, t)


def volume_F(spec: DensitySpec, t: float, weight_scale: float = 1.0) -> float:
    """Cumulative volume kernel integral from 0 to t."""
    _check_scale(weight_scale)
    _check_radius(t)
    return weight_scale * _table(spec, _kernels.F_INTEGRAND).value(t)


def F_inverse(spec: DensitySpec, s: float, weight_scale: float = 1.0) -> float:
    """Radius at which the cumulative volume integral reaches s."""
    _check_scale(weight_scale)
    if not math.isfinite(s) or s < 0.0:
        raise DomainError(f"cumulative volume {s} must be finite and >= 0")
    if s == 0.0:
        return 0.0
    tab = _table(spec, _kernels.F_INTEGRAND)
    top = weight_scale * tab.total
    if s > top:
        raise RangeError(
            f"cumulative volume {s} exceeds {top:.6g}, the value at the "
            f"radial cap {T_MAX}"
        )
    return solve_monotone(
        lambda t: weight_scale * tab.value(t), s, (0.0, T_MAX), tol=1e-12
    )


def ball_radius(spec: DensitySpec, v: float, weight_scale: float = 1.0) -> float:
    """Disc radius of the centred ball with weighted volume v."""
    if not math.isfinite(v) or v < 0.0:
        raise DomainError(f"volume {v} must be finite and >= 0")
    return F_inverse(spec, v / TWO_PI, weight_scale)


def ball_volume(spec: DensitySpec, t: float, weight_scale: float = 1.0) -> float:
    """Weighted volume of the centred ball of disc radius t."""
    return TWO_PI * volume_F(spec, t, weight_scale)


def ball_perimeter(spec: DensitySpec, t: float, weight_scale: float = 1.0) -> float:
    """Weighted perimeter of the centred ball of disc radius t."""
    return TWO_PI * g_kernel(spec, t, weight_scale)


def profile_J(spec: DensitySpec, s: float, weight_scale: float = 1.0) -> float:
    """Perimeter kernel evaluated at the radius holding cumulative volume s."""
    if s == 0.0:
        return 0.0
    r = F_inverse(spec, s, weight_scale)
    return g_kernel(spec, r, weight_scale)


def profile_I(spec: DensitySpec, v: float, weight_scale: float = 1.0) -> float:
    """Isoperimetric profile of centred balls at weighted volume v."""
    if not math.isfinite(v) or v < 0.0:
        raise DomainError(f"volume {v} must be finite and >= 0")
    return TWO_PI * profile_J(spec, v / TWO_PI, weight_scale)


def uniqueness_thresholds(spec: DensitySpec) -> tuple[float, float]:
    """Radius where the slope profile turns positive and the ball volume there.

    Below the returned volume the weight is hyperbolic-area on balls, so
    the profile coincides with the unweighted one.  For the identically
    zero profile the sentinel radius 1.0 is passed through and the volume
    is infinite.
    """
    R = first_positive_radius(spec)
    if R == 1.0:
        return R, math.inf
    if R > T_MAX:
        raise RangeError(
            f"slope support radius {R} beyond the radial cap {T_MAX}"
        )
    return R, ball_volume(spec, R)


def dump_profile_csv(
    fh: IO[str],
    spec: DensitySpec,
    volumes: Sequence[float],
    weight_scale: float = 1.0,
) -> None:
    """Write rows v, r, I_v with 12 significant digits."""
    fh.write("v,r,I_v\n")
    for v in volumes:
        r = ball_radius(spec, v, weight_scale)
        iv = TWO_PI * g_kernel(spec, r, weight_scale)
        fh.write(f"{v:.12g},{r:.12g},{iv:.12g}\n")


# ---------------------------------------------------------------------------
# competitor sets


@dataclass(frozen=True)
class AnnulusUnion:
    """Finite union of centred annuli given by strictly decreasing radii.

    Consecutive pairs (radii[2h], radii[2h+1]) bound the annuli from
    outside and inside; a trailing inner radius of 0 closes the innermost
    annulus into a ball.
    """

    radii: tuple[float, ...]

    def __post_init__(self) -> None:
        r = tuple(float(x) for x in self.radii)
        object.__setattr__(self, "radii", r)
        if len(r) < 2 or len(r) % 2 != 0:
            raise DomainError("annulus union needs an even number of radii")
        for x in r:
            if not (math.isfinite(x) and 0.0 <= x < 1.0):
                raise DomainError(f"annulus radius {x} outside [0, 1)")
        for a, b in zip(r[:-1], r[1:]):
            if b >= a:
                raise DomainError("annulus radii must decrease strictly")


@dataclass(frozen=True)
class CapSymmetricProfile:
    """Radial profile of angular half-widths describing a cap-symmetric set.

    Samples are (radius, alpha) pairs with alpha in [0, pi]; between
    samples alpha interpolates linearly, outside the sampled range the set
    is empty.  At each radius the set covers the two arcs within angle
    alpha of the vertical axis poles, so alpha = pi means the full circle.
    """

    samples: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        s = tuple((float(t), float(a)) for t, a in self.samples)
        object.__setattr__(self, "samples", s)
        if len(s) < 2:
            raise DomainError("cap profile needs at least two samples")
        for t, a in s:
            if not (math.isfinite(t) and 0.0 <= t < 1.0):
                raise DomainError(f"cap sample radius {t} outside [0, 1)")
            if not (math.isfinite(a) and 0.0 <= a <= math.pi):
                raise DomainError(f"cap angle {a} outside [0, pi]")
        for (t0, _), (t1, _) in zip(s[:-1], s[1:]):
            if t1 <= t0:
                raise DomainError("cap sample radii must increase strictly")


Competitor = Union[AnnulusUnion, CapSymmetricProfile]


def annuli_volume(
    spec: DensitySpec, annuli: AnnulusUnion, weight_scale: float = 1.0
) -> float:
    """Weighted volume of the union."""
    _check_scale(weight_scale)
    tab = _table(spec, _kernels.F_INTEGRAND)
    r = annuli.radii
    _check_radius(r[0])
    total = 0.0
    for h in range(0, len(r), 2):
        total += tab.value(r[h]) - tab.value(r[h + 1])
    return TWO_PI * weight_scale * total


def annuli_perimeter(
    spec: DensitySpec, annuli: AnnulusUnion, weight_scale: float = 1.0
) -> float:
    """Weighted perimeter of the union: one circle per positive radius."""
    _check_scale(weight_scale)
    _check_radius(annuli.radii[0])
    total = 0.0
    for x in annuli.radii:
        total += _kernels.g_value(spec.handle, x)
    return TWO_PI * weight_scale * total


def _segment_data(cap: CapSymmetricProfile):
    """Per-segment slope and intercept of the angular profile."""
    out = []
    s = cap.samples
    for (t0, a0), (t1, a1) in zip(s[:-1], s[1:]):
        d = (a1 - a0) / (t1 - t0)
        out.append((t0, t1, a0 - d * t0, d))
    return out


def cap_volume(
    spec: DensitySpec, cap: CapSymmetricProfile, weight_scale: float = 1.0
) -> float:
    """Weighted volume of the cap-symmetric set."""
    _check_scale(weight_scale)
    _check_radius(cap.samples[-1][0])
    ftab = _table(spec, _kernels.F_INTEGRAND)
    xtab = _table(spec, _kernels.XF_INTEGRAND)
    total = 0.0
    for t0, t1, c, d in _segment_data(cap):
        total += c * (ftab.value(t1) - ftab.value(t0))
        total += d * (xtab.value(t1) - xtab.value(t0))
    return 2.0 * weight_scale * total


def _adaptive_rel(handle, code, a, b, param=0.0, rel=1e-13):
    rough, _ = _kernels.panel(handle, code, a, b, param)
    tol = max(1e-14, rel * abs(rough))
    val, _, _ = _kernels.adaptive(handle, code, a, b, param, tol)
    return val


def cap_perimeter(
    spec: DensitySpec, cap: CapSymmetricProfile, weight_scale: float = 1.0
) -> float:
    """Weighted perimeter of the cap-symmetric set.

    Lateral boundary runs along the profile graph wherever alpha is
    strictly between 0 and pi; the abrupt starts at the first and last
    sample contribute arcs of the bounding circles there.  A profile that
    jumps the full pi at one radius reproduces the circle perimeter of the
    matching annulus exactly.
    """
    _check_scale(weight_scale)
    _check_radius(cap.samples[-1][0])
    handle = spec.handle
    total = 0.0
    for t0, t1, _, d in _segment_data(cap):
        a0 = _alpha_at(cap, t0)
        if d == 0.0 and (a0 == 0.0 or a0 == math.pi):
            continue
        # two lateral curves, one on each side of the symmetry axis
        total += 2.0 * _adaptive_rel(handle, _kernels.ARC_INTEGRAND, t0, t1, d)
    t_first, a_first = cap.samples[0]
    t_last, a_last = cap.samples[-1]
    if a_first > 0.0 and t_first > 0.0:
        total += 2.0 * _kernels.g_value(handle, t_first) * a_first
    if a_last > 0.0:
        total += 2.0 * _kernels.g_value(handle, t_last) * a_last
    return weight_scale * total


def _alpha_at(cap: CapSymmetricProfile, t: float) -> float:
    s = cap.samples
    if t <= s[0][0]:
        return s[0][1]
    if t >= s[-1][0]:
        return s[-1][1]
    for (t0, a0), (t1, a1) in zip(s[:-1], s[1:]):
        if t0 <= t <= t1:
            w = (t - t0) / (t1 - t0)
            return a0 + w * (a1 - a0)
    return 0.0


# ---------------------------------------------------------------------------
# volume matching and the minimality experiment


def match_annuli_volume(
    spec: DensitySpec,
    radii: Sequence[float],
    v: float,
    weight_scale: float = 1.0,
) -> AnnulusUnion:
    """Rescale the outermost radius so the union hits weighted volume v."""
    _check_scale(weight_scale)
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"target volume {v} must be finite and > 0")
    base = AnnulusUnion(tuple(radii))
    tab = _table(spec, _kernels.F_INTEGRAND)
    r = base.radii
    inner = 0.0
    for h in range(2, len(r), 2):
        inner += tab.value(r[h]) - tab.value(r[h + 1])
    target_F = v / (TWO_PI * weight_scale) - inner + tab.value(r[1])
    lo = r[1] + 1e-12
    outer = solve_monotone(tab.value, target_F, (lo, T_MAX), tol=1e-12)
    return AnnulusUnion((outer,) + r[1:])


def match_cap_volume(
    spec: DensitySpec,
    samples: Sequence[Sequence[float]],
    v: float,
    weight_scale: float = 1.0,
) -> CapSymmetricProfile:
    """Scale all sample radii by a common factor to hit weighted volume v."""
    _check_scale(weight_scale)
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"target volume {v} must be finite and > 0")
    base = CapSymmetricProfile(tuple((t, a) for t, a in samples))
    if all(a == 0.0 for _, a in base.samples):
        raise DomainError("cap profile is empty, cannot match a positive volume")
    ftab = _table(spec, _kernels.F_INTEGRAND)
    xtab = _table(spec, _kernels.XF_INTEGRAND)
    segs = _segment_data(base)

    def volume_at_scale(s: float) -> float:
        total = 0.0
        for t0, t1, c, d in segs:
            total += c * (ftab.value(s * t1) - ftab.value(s * t0))
            total += (d / s) * (xtab.value(s * t1) - xtab.value(s * t0))
        return 2.0 * weight_scale * total

    t_last = base.samples[-1][0]
    hi = (T_MAX - 1e-9) / t_last
    scale = solve_monotone(volume_at_scale, v, (1e-8, hi), tol=1e-12)
    return CapSymmetricProfile(tuple((scale * t, a) for t, a in base.samples))


def verify_ball_minimality(
    spec: DensitySpec,
    v: float,
    competitors: Sequence[Competitor],
    tol: float = 1e-8,
    weight_scale: float = 1.0,
) -> VerificationReport:
    """Compare every competitor's perimeter against the ball profile at v.

    Each competitor must already hold weighted volume v to within
    tol * (1 + v); a miss raises VolumeMismatch since the comparison would
    be meaningless.  The report carries one row per competitor with slack
    perimeter - I(v), which passing requires to be >= -tol.
    """
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"volume {v} must be finite and > 0")
    iv = profile_I(spec, v, weight_scale)
    rep = VerificationReport()
    for i, comp in enumerate(competitors):
        if isinstance(comp, AnnulusUnion):
            kind = "annuli"
            vol = annuli_volume(spec, comp, weight_scale)
            per = annuli_perimeter(spec, comp, weight_scale)
        elif isinstance(comp, CapSymmetricProfile):
            kind = "cap"
            vol = cap_volume(spec, comp, weight_scale)
            per = cap_perimeter(spec, comp, weight_scale)
        else:
            raise DomainError(f"competitor {i} has unsupported type {type(comp)!r}")
        if abs(vol - v) > tol * (1.0 + abs(v)):
            raise VolumeMismatch(
                f"competitor {i} holds volume {vol!r}, wanted {v!r}"
            )
        slack = per - iv
        rep.add(
            name=f"competitor[{i}]:{kind}",
            lhs=iv,
            rhs=per,
            slack=slack,
            tolerance=tol,
            verdict="pass" if slack >= -tol else "fail",
        )
    return rep
