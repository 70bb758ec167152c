"""Benchmark the compiled kernel extension against the pure fallback.

Runs the hot paths behind profile and quadrature work: scalar kernel
evaluation, vectorized grid evaluation, and adaptive integration of the
volume kernel.  Usage:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from hyperiso._kernels import _pure

try:
    from hyperiso._kernels import _core
except ImportError:
    _core = None

NODES_T = (0.0, 0.3, 0.9)
NODES_V = (0.0, 0.0, 2.0)
GRID = np.linspace(0.0, 0.995, 10_000)


def workloads(mod):
    handle = mod.prepare(NODES_T, NODES_V)
    return {
        "scalar f (1k evals)": lambda: [
            mod.f_value(handle, 0.0001 + 0.0009 * i) for i in range(1000)
        ],
        "eval_many f (10k grid)": lambda: mod.eval_many(handle, GRID, "f"),
        "adaptive F on (0, 0.9)": lambda: mod.adaptive(
            handle, mod.F_INTEGRAND, 0.0, 0.9, tol=1e-11
        ),
        "adaptive arc, alpha'=2": lambda: mod.adaptive(
            handle, mod.ARC_INTEGRAND, 0.1, 0.9, param=2.0, tol=1e-11
        ),
    }


def best_time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=7,
                        help="timing repetitions per workload (default 7)")
    args = parser.parse_args()

    pure = workloads(_pure)
    compiled = workloads(_core) if _core is not None else None

    width = max(len(k) for k in pure)
    header = f"{'workload':<{width}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fn in pure.items():
        t_pure = best_time(fn, args.repeat)
        if compiled is None:
            print(f"{name:<{width}}  {t_pure * 1e3:>8.3f}ms  {'n/a':>10}  {'n/a':>8}")
            continue
        t_comp = best_time(compiled[name], args.repeat)
        print(
            f"{name:<{width}}  {t_pure * 1e3:>8.3f}ms  {t_comp * 1e3:>8.3f}ms"
            f"  {t_pure / t_comp:>7.1f}x"
        )
    if compiled is None:
        print("\ncompiled extension unavailable; only the fallback was timed")


if __name__ == "__main__":
    main()
