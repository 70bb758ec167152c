"""Command-line front end.

Four subcommands cover the library surface: `profile` tabulates the
centred-ball isoperimetric profile, `verify` runs the inequality suites
and emits a JSON report, `ode` dumps boundary-value or Riccati solutions
as CSV, and `compete` pits seeded random competitors against the ball.

Exit codes: 0 success, 1 a verification check failed, 2 input error.
All output is deterministic for a fixed command line (and seed).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from .comparison import (
    check_m_upper_bound,
    check_mu_comparison_linear,
    check_reverse_hh,
    check_riccati_comparison,
    winding_integral_w,
)
from .curvature_ode import (
    dump_solution_csv,
    reconstruct_curve,
    solve_bvp_a_zero,
    solve_linear_bvp,
    solve_riccati,
)
from .density import load_density, zeta
from .errors import BracketError, HyperisoError, HypothesisViolated
from .profile import (
    dump_profile_csv,
    match_annuli_volume,
    match_cap_volume,
    profile_I,
    profile_J,
    uniqueness_thresholds,
    verify_ball_minimality,
)
from .report import VerificationReport

SUITES = ("all", "hh", "ode", "mu", "profile")

# Default interval lattice for `verify`: (0.1 i, 0.1 j) with 0 < i < j < 9.5.
_LATTICE = tuple(
    (round(0.1 * i, 1), round(0.1 * j, 1))
    for i in range(1, 9)
    for j in range(i + 1, 10)
)

_WINDING_TOL = 1e-6
_ALTERNATING_TOL = 1e-10
_IDENTITY_TOL = 1e-8


class _InputError(Exception):
    """Bad command-line input that argparse could not catch by itself."""


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# profile


def cmd_profile(args: argparse.Namespace) -> int:
    spec = load_density(args.density)
    if args.steps < 1:
        raise _InputError(f"empty profile grid: steps = {args.steps}")
    if not (math.isfinite(args.vmin) and math.isfinite(args.vmax)):
        raise _InputError("volume range must be finite")
    if args.vmin > args.vmax:
        raise _InputError(f"vmin {args.vmin} exceeds vmax {args.vmax}")
    if args.vmin == args.vmax:
        volumes = [args.vmin]
    elif args.steps < 2:
        raise _InputError("a non-degenerate volume range needs steps >= 2")
    else:
        volumes = [float(v) for v in np.linspace(args.vmin, args.vmax, args.steps)]
    buf = io.StringIO()
    dump_profile_csv(buf, spec, volumes)
    _write_output(buf.getvalue(), args.out)
    return 0


# ---------------------------------------------------------------------------
# verify


def _winding_rows(spec, a: float, b: float, rep: VerificationReport) -> None:
    tag = f"winding({a:g},{b:g})"
    try:
        value = winding_integral_w(solve_riccati(spec, a, b))
    except HypothesisViolated:
        rep.add(
            name=f"{tag}/hypothesis",
            lhs=0.0,
            rhs=1.0,
            slack=-1.0,
            tolerance=0.0,
            verdict="hypothesis-violated",
        )
        return
    slack = value - math.pi
    rep.add(
        name=tag,
        lhs=math.pi,
        rhs=value,
        slack=slack,
        tolerance=_WINDING_TOL,
        verdict="pass" if slack >= -_WINDING_TOL else "fail",
    )


def _interval_rows(spec, a: float, b: float, suite: str, rep: VerificationReport):
    if suite in ("all", "hh"):
        rep.checks.extend(check_reverse_hh(spec, a, b))
        rep.checks.extend(check_m_upper_bound(spec, a, b))
    if suite in ("all", "ode"):
        _winding_rows(spec, a, b, rep)
    if suite in ("all", "mu"):
        rep.checks.extend(
            check_mu_comparison_linear(solve_linear_bvp(spec, a, b, (1, -1)))
        )
        rep.checks.extend(check_riccati_comparison(solve_riccati(spec, a, b)))


def _identity_row(
    rep: VerificationReport, name: str, lhs: float, rhs: float, tol: float
) -> None:
    dev = abs(lhs - rhs) / max(1.0, abs(rhs))
    rep.add(
        name=name,
        lhs=lhs,
        rhs=rhs,
        slack=-dev,
        tolerance=tol,
        verdict="pass" if dev <= tol else "fail",
    )


def _alternating_sum_row(spec, rep: VerificationReport) -> None:
    rng = np.random.default_rng(271828)
    worst = math.inf
    worst_pair = (0.0, 0.0)
    for _ in range(120):
        k = int(rng.integers(2, 6))
        ts = np.sort(rng.uniform(0.05, 30.0, size=k))[::-1]
        total = sum(profile_J(spec, float(t)) for t in ts)
        alt = float(sum((-1.0) ** h * t for h, t in enumerate(ts)))
        slack = total - profile_J(spec, alt)
        if slack < worst:
            worst = slack
            worst_pair = (profile_J(spec, alt), total)
    rep.add(
        name="alternating-sum",
        lhs=worst_pair[0],
        rhs=worst_pair[1],
        slack=worst,
        tolerance=_ALTERNATING_TOL,
        verdict="pass" if worst >= -_ALTERNATING_TOL else "fail",
    )


def _scaling_rows(spec, rep: VerificationReport) -> None:
    for c in (0.5, 2.0, 3.7):
        dev = 0.0
        pair = (0.0, 0.0)
        for v in (0.5, 4.2, 17.3):
            scaled = profile_I(spec, c * v, weight_scale=c)
            plain = c * profile_I(spec, v)
            d = abs(scaled - plain) / max(1.0, abs(plain))
            if d >= dev:
                dev = d
                pair = (scaled, plain)
        _identity_row(rep, f"scaling[c={c:g}]", pair[0], pair[1], _IDENTITY_TOL)


def _low_volume_rows(spec, rep: VerificationReport) -> None:
    radius, v0 = uniqueness_thresholds(spec)
    if math.isinf(v0):
        volumes = np.geomspace(0.01, 50.0, 10)
    elif v0 > 0.0:
        _identity_row(
            rep,
            "uniqueness-threshold",
            v0,
            2.0 * math.pi * (zeta(radius) - 2.0),
            1e-9,
        )
        volumes = np.linspace(v0 / 10.0, v0, 10)
    else:
        return
    for v in volumes:
        v = float(v)
        iv = profile_I(spec, v)
        _identity_row(
            rep,
            f"low-volume[v={v:.6g}]",
            iv * iv,
            v * v + 4.0 * math.pi * v,
            _IDENTITY_TOL,
        )


def cmd_verify(args: argparse.Namespace) -> int:
    spec = load_density(args.density)
    if (args.a is None) != (args.b is None):
        raise _InputError("provide both --a and --b or neither")
    intervals = _LATTICE if args.a is None else ((args.a, args.b),)
    rep = VerificationReport()
    if args.suite in ("all", "hh", "ode", "mu"):
        for a, b in intervals:
            _interval_rows(spec, a, b, args.suite, rep)
    if args.suite in ("all", "profile"):
        _alternating_sum_row(spec, rep)
        _scaling_rows(spec, rep)
        _low_volume_rows(spec, rep)
    _write_output(rep.to_json() + "\n", args.out)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# ode


def _parse_eta(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise _InputError(f"eta must be two comma-separated signs, got {text!r}")
    try:
        eta = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise _InputError(f"eta must be integers, got {text!r}") from exc
    if eta[0] not in (-1, 1) or eta[1] not in (-1, 1):
        raise _InputError(f"eta components must be +-1, got {text!r}")
    return eta


def cmd_ode(args: argparse.Namespace) -> int:
    spec = load_density(args.density)
    if args.from_zero:
        if args.a not in (None, 0.0):
            raise _InputError("--from-zero fixes the left endpoint at 0")
        sol = solve_bvp_a_zero(spec, args.b)
    elif args.riccati:
        if args.a is None:
            raise _InputError("--riccati needs --a")
        sol = solve_riccati(spec, args.a, args.b)
    else:
        if args.a is None:
            raise _InputError("--eta needs --a")
        if args.a == 0.0:
            raise _InputError(
                "only the (0, 1) boundary pair is defined at a = 0; "
                "use --from-zero"
            )
        sol = solve_linear_bvp(spec, args.a, args.b, _parse_eta(args.eta))

    buf = io.StringIO()
    dump_solution_csv(buf, sol, samples=args.samples)
    if args.winding:
        if args.riccati:
            value = winding_integral_w(sol)
            buf.write(f"# winding={value:.17g}\n")
        else:
            rec = reconstruct_curve(spec, sol)
            buf.write(f"# delta_theta={rec.delta_theta:.17g}\n")
    _write_output(buf.getvalue(), args.out)
    return 0


# ---------------------------------------------------------------------------
# compete


def _draw_annuli(spec, rng, v: float, max_annuli: int):
    for _ in range(64):
        k = int(rng.integers(1, max_annuli + 1))
        radii = np.sort(rng.uniform(0.0, 0.95, size=2 * k))[::-1]
        if radii[-1] <= 0.0 or np.any(np.diff(radii) >= 0.0):
            continue
        try:
            return match_annuli_volume(spec, tuple(radii), v)
        except (BracketError, HyperisoError):
            continue
    raise _InputError(
        f"could not match an annulus union to volume {v}; volume out of reach"
    )


def _draw_cap(spec, rng, v: float):
    for _ in range(64):
        n = int(rng.integers(2, 7))
        radii = np.sort(rng.uniform(0.05, 0.9, size=n))
        if np.any(np.diff(radii) <= 0.0):
            continue
        alphas = np.sort(rng.uniform(0.05, math.pi, size=n))
        samples = tuple((float(t), float(a)) for t, a in zip(radii, alphas))
        try:
            return match_cap_volume(spec, samples, v)
        except (BracketError, HyperisoError):
            continue
    raise _InputError(
        f"could not match a cap profile to volume {v}; volume out of reach"
    )


def cmd_compete(args: argparse.Namespace) -> int:
    spec = load_density(args.density)
    if args.trials < 1:
        raise _InputError(f"need at least one trial, got {args.trials}")
    if args.max_annuli < 1:
        raise _InputError(f"need max-annuli >= 1, got {args.max_annuli}")
    if not (math.isfinite(args.volume) and args.volume > 0.0):
        raise _InputError(f"volume {args.volume} must be finite and > 0")
    rng = np.random.default_rng(args.seed)
    competitors = [match_annuli_volume(spec, (0.9, 0.0), args.volume)]
    for i in range(args.trials):
        if i % 2 == 0:
            competitors.append(_draw_annuli(spec, rng, args.volume, args.max_annuli))
        else:
            competitors.append(_draw_cap(spec, rng, args.volume))
    rep = verify_ball_minimality(spec, args.volume, competitors, tol=args.tol)
    control = rep.checks[0].slack
    min_slack = min(c.slack for c in rep.checks[1:])
    rep.add(
        name="ball-control",
        lhs=0.0,
        rhs=abs(control),
        slack=-abs(control),
        tolerance=args.tol,
        verdict="pass" if abs(control) <= args.tol else "fail",
    )
    rep.add(
        name="min-slack",
        lhs=-args.tol,
        rhs=min_slack,
        slack=min_slack,
        tolerance=args.tol,
        verdict="report-only",
    )
    doc = {
        "seed": args.seed,
        "volume": args.volume,
        "trials": args.trials,
        "max_annuli": args.max_annuli,
    }
    doc.update(json.loads(rep.to_json()))
    _write_output(json.dumps(doc, indent=2) + "\n", args.out)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperiso",
        description="Weighted isoperimetric profiles on the Poincare disc.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="tabulate the centred-ball profile")
    p.add_argument("--density", required=True)
    p.add_argument("--vmin", type=float, required=True)
    p.add_argument("--vmax", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("verify", help="run the inequality suites")
    p.add_argument("--density", required=True)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ode", help="dump a boundary-value or Riccati solution")
    p.add_argument("--density", required=True)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--eta", default=None)
    group.add_argument("--riccati", action="store_true")
    group.add_argument("--from-zero", action="store_true")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--winding", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ode)

    p = sub.add_parser("compete", help="race random competitors against the ball")
    p.add_argument("--density", required=True)
    p.add_argument("--volume", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--max-annuli", type=int, required=True)
    p.add_argument("--seed", type=lambda s: int(s) % 2**64, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compete)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_InputError, HyperisoError, OSError) as exc:
        print(f"hyperiso: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
