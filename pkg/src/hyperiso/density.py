"""Radial weights on the hyperbolic disc.

The disc is modelled in the Poincare ball coordinates, radius t in [0, 1),
with metric scale zeta(t) = 2 / (1 - t**2) and geodesic distance from the
origin phi(t) = 2 * artanh(t).  A weight is specified through the slope of
its logarithm with respect to geodesic distance, expressed in the t
variable as a continuous piecewise linear function `lam` that must be
non-negative and non-decreasing.  The weight itself is

    psi(t) = exp(h(t)),   h(t) = integral of lam * zeta from 0 to t,

normalised by h(0) = 0.  Since each linear segment of lam integrates in
closed form against zeta, h carries no quadrature error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import _kernels
from .errors import DomainError, MonotonicityError

__all__ = [
    "DensitySpec",
    "make_density",
    "density_from_json",
    "load_density",
    "zeta",
    "phi",
    "phi_inv",
    "rho_hat",
    "h_value",
    "psi",
    "rho",
    "rho_tilde",
    "first_positive_radius",
]


def zeta(t: float) -> float:
    """Metric scale factor at disc radius t."""
    if not 0.0 <= t < 1.0:
        raise DomainError(f"disc radius {t} outside [0, 1)")
    return 2.0 / (1.0 - t * t)


def phi(t: float) -> float:
    """Geodesic distance from the origin to disc radius t."""
    if not 0.0 <= t < 1.0:
        raise DomainError(f"disc radius {t} outside [0, 1)")
    return 2.0 * math.atanh(t)


def phi_inv(s: float) -> float:
    """Disc radius at geodesic distance s from the origin."""
    if s < 0.0 or not math.isfinite(s):
        raise DomainError(f"geodesic distance {s} must be finite and >= 0")
    return math.tanh(0.5 * s)


def rho_hat(t: float) -> float:
    """Logarithmic derivative of zeta with respect to geodesic distance."""
    return t * zeta(t)


@dataclass(frozen=True)
class DensitySpec:
    """Immutable description of one radial weight.

    `lambda_nodes` holds (radius, value) pairs of the slope profile; between
    nodes the profile is linear, outside the sampled range it continues with
    the nearest value.  Instances are hashable and compare by node data, so
    they can key caches of derived tables.  Use `make_density` to construct
    one with validation.
    """

    lambda_nodes: tuple[tuple[float, float], ...]

    @cached_property
    def handle(self):
        """Kernel-level node state; built lazily, once."""
        ts = [n[0] for n in self.lambda_nodes]
        vs = [n[1] for n in self.lambda_nodes]
        return _kernels.prepare(ts, vs)


def make_density(nodes: Sequence[Sequence[float]]) -> DensitySpec:
    """Validate node data and build a DensitySpec.

    Nodes are scanned in order and the first violation is reported: radii
    must lie in [0, 1) and increase strictly, values must be non-negative
    and non-decreasing (MonotonicityError on decrease, since that is what
    breaks log-convexity of the weight).
    """
    cleaned: list[tuple[float, float]] = []
    if len(nodes) == 0:
        raise DomainError("density needs at least one slope node")
    for idx, node in enumerate(nodes):
        try:
            t, v = float(node[0]), float(node[1])
        except (TypeError, ValueError, IndexError) as exc:
            raise DomainError(f"node {idx} is not a (radius, value) pair") from exc
        if not math.isfinite(t) or not 0.0 <= t < 1.0:
            raise DomainError(f"node {idx}: radius {t} outside [0, 1)")
        if cleaned and t <= cleaned[-1][0]:
            raise DomainError(
                f"node {idx}: radius {t} does not increase past {cleaned[-1][0]}"
            )
        if not math.isfinite(v) or v < 0.0:
            raise DomainError(f"node {idx}: slope value {v} must be >= 0")
        if cleaned and v < cleaned[-1][1]:
            raise MonotonicityError(
                f"node {idx}: slope value {v} decreases below {cleaned[-1][1]}"
            )
        cleaned.append((t, v))
    return DensitySpec(lambda_nodes=tuple(cleaned))


def density_from_json(text: str) -> DensitySpec:
    """Parse a density from its JSON form {"lambda_nodes": [[t, value], ...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid density JSON: {exc}") from exc
    if not isinstance(doc, dict) or "lambda_nodes" not in doc:
        raise DomainError('density JSON must be an object with "lambda_nodes"')
    nodes = doc["lambda_nodes"]
    if not isinstance(nodes, list):
        raise DomainError('"lambda_nodes" must be a list of [radius, value] pairs')
    return make_density(nodes)


def load_density(path: str) -> DensitySpec:
    """Read a density JSON file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return density_from_json(fh.read())


def _check_radius(t: float) -> None:
    if not 0.0 <= t < 1.0:
        raise DomainError(f"disc radius {t} outside [0, 1)")


def h_value(spec: DensitySpec, t: float) -> float:
    """Log-weight at radius t (exact per-segment antiderivative)."""
    _check_radius(t)
    return _kernels.h_value(spec.handle, t)


def psi(spec: DensitySpec, t: float) -> float:
    """Weight value at radius t."""
    _check_radius(t)
    return _kernels.psi_value(spec.handle, t)


def _one_sided(spec: DensitySpec, t: float, side: str) -> float:
    _check_radius(t)
    if side not in ("+", "-"):
        raise DomainError(f"side must be '+' or '-', got {side!r}")
    if side == "-" and t <= 0.0:
        raise DomainError("left limit undefined at the origin")
    # The slope profile is continuous, so both one-sided limits agree.
    return _kernels.lam_value(spec.handle, t)


def rho(spec: DensitySpec, t: float, side: str = "+") -> float:
    """One-sided slope of log psi with respect to geodesic distance."""
    return _one_sided(spec, t, side) * zeta(t)


def rho_tilde(spec: DensitySpec, t: float, side: str = "+") -> float:
    """Combined radial drift: metric term plus weight term."""
    return rho_hat(t) + rho(spec, t, side)


def first_positive_radius(spec: DensitySpec) -> float:
    """Infimum of radii where the slope profile is positive.

    Returns the sentinel 1.0 when the profile vanishes identically, which
    is the unweighted disc.
    """
    ts = [n[0] for n in spec.lambda_nodes]
    vs = [n[1] for n in spec.lambda_nodes]
    if vs[0] > 0.0:
        return 0.0
    last_zero = 0
    for i, v in enumerate(vs):
        if v == 0.0:
            last_zero = i
    if last_zero == len(vs) - 1:
        return 1.0
    return ts[last_zero]
